// SPDX-License-Identifier: Apache-2.0
//
// gabormc - pulse-shaped multicarrier interference bounds and simulation

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "gabormc/bounds.hpp"
#include "gabormc/channel.hpp"
#include "gabormc/distortion.hpp"
#include "gabormc/gabor.hpp"
#include "gabormc/signal.hpp"

namespace gabormc {

enum class Tracking { None, Mean, PerSlot };

/// Full-chain simulation setup. The channel is the fixed realization if set,
/// else drawn per trial from the pdp if set, else the identity. Noise of
/// power sigma2 per slot is injected after the receiver filterbank.
struct SimConfig {
    OfdmPulses pulses;
    LatticeRect lattice;
    std::optional<PowerDelayProfile> pdp;
    std::optional<ChannelRealization> fixed_channel;
    DistortionSpec distortion;
    double sigma2 = 0.0;
    int trials = 1;
    int paths_per_trial = 1;  // inner distortion draws per channel draw
    std::uint64_t seed = 0;
    Tracking tracking = Tracking::Mean;
    int k_obs = 0;
    int l_obs = 0;

    static SimConfig make(OfdmPulses p, LatticeRect lat);  // observed slot = lattice center
    void validate() const;  // slot needs >= 2 guard slots to every side
};

/// f = H* S* g_kl, the receive pulse pulled back through the adjoint chain.
/// Every row quantity derives from it: H_{kl,mn} = <f, gamma_mn>.
ComplexSignal distorted_receive_pulse(const OfdmPulses& p, const ChannelRealization& h,
                                      const DistortionRealization& s, int k, int l);

/// One row of the effective channel matrix, H_{kl,mn} over the lattice
/// (flat ordering).
std::vector<cplx> effective_matrix_row(const OfdmPulses& p, const LatticeRect& lat,
                                       const ChannelRealization& h,
                                       const DistortionRealization& s, int k, int l);

/// Per-trial (per channel draw) aggregates over the inner path draws.
struct TrialRecord {
    ChannelRealization channel = ChannelRealization::identity();
    cplx mean_H;               // path average of H_kl,kl
    double second_H;           // path average of |H_kl,kl|^2
    double delta_var;          // unbiased path variance of H_kl,kl
    double mean_sq_unbiased;   // unbiased estimate of |E_S H|^2
    double ici;                // path average of sum_{(mn)!=(kl)} |H_kl,mn|^2
    double row_sum;            // path average of the full-lattice row sum
    double adj_energy;         // path average of ||H* S* g_kl||^2
    cplx hk;                   // hhat(k F) for the trial's channel
    double mse;                // conditional symbol MSE (ZF + tracking); NaN if slot excluded
    bool excluded;             // ZF singularity |hhat(kF)| < 1e-12
};

/// Deterministic: trial i is seeded by trial_seed(cfg.seed, i) regardless of
/// worker count (GABORMC_WORKERS).
std::vector<TrialRecord> run_trials(const SimConfig& cfg);

struct SimResult {
    cplx mean_H;
    double second_moment_H;
    double delta_var;
    double ici_power;
    double sinr_hat;   // mean |E_S H|^2 (bias-corrected) over (sigma2 + ICI + deltaVar)
    double sinr_se;    // batch-means standard error
    double SINR_hat;   // mean <|H|^2> over (sigma2 + ICI)
    double SINR_se;
    double mse;
    double mse_se;
    int excluded_trials;
    std::uint64_t seed;
    int trials;
    int paths_per_trial;
};

SimResult estimate_moments(const SimConfig& cfg);
SimResult estimate_moments(const SimConfig& cfg, const std::vector<TrialRecord>& records);

struct SerResult {
    double ser;
    double ser_se;       // frame-batch standard error
    long n_symbols;
    long n_errors;
    double mse;
    double mse_se;
    int excluded_slots;
    std::uint64_t seed;
};

/// Transmit random BPSK on the full lattice, run S H chain plus per-slot
/// noise, ZF-equalize by the distortion-free chain gain sqrt(eps) hhat(kF),
/// apply the tracking mode, slice, and count errors over interior slots
/// (2 guard slots per side). cfg.trials is the frame count. Wiener phase
/// noise is re-synchronized every symbol with lag l_sync (slot l corrected by
/// the path phase at (l - l_sync) T).
SerResult run_ser(const SimConfig& cfg);

/// Gaussian tail Q(x), abs error well below 1e-10 on [0,8].
double q_function(double x);

namespace detail {
/// index-deterministic parallel loop; worker count from GABORMC_WORKERS
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);
}

}  // namespace gabormc
