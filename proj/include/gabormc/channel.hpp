// SPDX-License-Identifier: Apache-2.0
//
// gabormc - pulse-shaped multicarrier interference bounds and simulation

#pragma once

#include <vector>

#include "gabormc/rng.hpp"
#include "gabormc/signal.hpp"

namespace gabormc {

/// Power delay profile of a time-invariant tapped-delay-line channel.
/// ||p||_1 = sum of tap powers is the overall channel power.
struct PowerDelayProfile {
    struct Tap {
        double delay_s;
        double power;
    };
    std::vector<Tap> taps;
    double tau_d_s;  // maximum delay spread

    PowerDelayProfile(std::vector<Tap> t, double tau_d);
    double p1norm() const;
    /// two taps at {0, tcp/2} with powers {0.8, 0.2}; delay spread inside the CP
    static PowerDelayProfile default_two_tap(double tcp_s);
};

/// One channel draw: complex tap gains at fixed delays.
struct ChannelRealization {
    struct Tap {
        double delay_s;
        cplx gain;
    };
    std::vector<Tap> taps;
    double tau_d_s;

    ChannelRealization(std::vector<Tap> t, double tau_d);
    double gain_energy() const;  // sum |h_j|^2
    static ChannelRealization identity();
};

/// Rayleigh draw: each gain ~ CN(0, p_j), taps independent.
ChannelRealization draw_channel(const PowerDelayProfile& pdp, Rng& rng);

/// (H s)(t) = sum_j h_j s(t - tau_j). Tap delays must be on the sample grid.
ComplexSignal apply_channel(const ChannelRealization& h, const ComplexSignal& s);

/// Adjoint (H* f)(t) = sum_j conj(h_j) f(t + tau_j).
ComplexSignal apply_channel_adjoint(const ChannelRealization& h, const ComplexSignal& f);

/// Transfer function hhat(f) = sum_j h_j e^{-i 2 pi f tau_j}.
cplx freq_response(const ChannelRealization& h, double f_hz);

struct BetaBound {
    double value;
    bool from_grid_max;  // true when the sup of |hhat|^2 was a (refined) grid max
};

/// Channel bound independent of the distortion:
/// min(||hhat||_inf^2, N_taps * sum |h_j|^2). The sup is a dense-grid maximum
/// with parabolic refinement, so it can under-estimate slightly (flagged).
BetaBound beta_bound_general(const ChannelRealization& h);

/// Frequency-offset channel bound
/// ||H* g_kl||^2 + 4 pi tau_d |nu| ||hhat||_inf^2 (1 + tau_d |nu| pi).
double beta_bound_freq_offset(const ChannelRealization& h, const ComplexSignal& g_kl, double nu_hz);

namespace detail {
double hhat_sup_sq(const ChannelRealization& h);  // grid max of |hhat|^2
}

}  // namespace gabormc
