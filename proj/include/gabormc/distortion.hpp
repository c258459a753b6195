// SPDX-License-Identifier: Apache-2.0
//
// gabormc - pulse-shaped multicarrier interference bounds and simulation

#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "gabormc/rng.hpp"
#include "gabormc/signal.hpp"

namespace gabormc {

/// Deterministic time-frequency offset S_{d,nu}.
struct Offset {
    double d_s = 0.0;
    double nu_hz = 0.0;
};

/// Stationary Gaussian phase noise, phi(t) ~ N(0, S_phi). The bounds depend
/// only on the marginal variance; sample paths additionally need a spectrum
/// shape, which is a labeled simulation-only parameter.
struct GaussianPn {
    double s_phi = 0.0;  // phase variance, rad^2
    enum class Shape { White, Lowpass } sim_shape = Shape::White;
};

/// Wiener phase noise with constant frequency-noise spectrum S_phidot and
/// phase resynchronization at t_sync = l_sync * T.
struct WienerPn {
    double s_phidot = 0.0;  // rad^2/s
    int l_sync = 0;
    double t_sync_s = 0.0;

    WienerPn() = default;
    WienerPn(double s, int l, double symbol_period_s)
        : s_phidot(s), l_sync(l), t_sync_s(l * symbol_period_s) {}
};

using DistortionSpec = std::variant<Offset, GaussianPn, WienerPn>;

/// Sampled phase trajectory phi(t_i) on a signal grid.
struct PhasePath {
    std::vector<double> phases;
    double dt_s;
    double t0_s;
    double origin_s;  // t_sync for Wiener paths; phi(origin) = 0

    double phase_at(double t_s) const;
};

/// One realization of the random distortion: offsets are deterministic,
/// phase-noise variants carry a drawn path.
struct DistortionRealization {
    DistortionSpec spec;
    std::optional<PhasePath> path;  // engaged for phase-noise variants
};

/// Draw a sample path covering [t_start, t_start + n*dt). Wiener paths use
/// exact-in-distribution Gaussian increments (two-sided from t_sync);
/// Gaussian pn paths are white or AR(1) low-pass with the marginal variance
/// pinned to s_phi.
DistortionRealization draw_distortion(const DistortionSpec& spec, double t_start_s, std::size_t n,
                                      double dt_s, Rng& rng);

/// S f for a drawn realization: offset -> tf_shift, phase noise -> pointwise
/// e^{i phi(t)} f(t). Energy-preserving.
ComplexSignal apply_distortion(const DistortionRealization& r, const ComplexSignal& f);

/// Convenience: draw a fresh path and apply. rng may be null for offsets.
ComplexSignal apply_distortion(const DistortionSpec& spec, const ComplexSignal& f, Rng* rng);

/// Adjoint S*: offset -> e^{-i 2 pi d nu} S_{-d,-nu}, phase noise ->
/// multiplication by conj(theta).
ComplexSignal apply_distortion_adjoint(const DistortionRealization& r, const ComplexSignal& f);

/// First moment of the multiplicative process at time t. Offsets return 1
/// (handled through the ambiguity function instead). Wiener requires
/// t >= t_sync.
cplx mean_theta(const DistortionSpec& spec, double t_s);

/// C_theta(tau) = e^{-(S_phidot/2)|tau|} (constant frequency-noise spectrum).
double wiener_autocorr(double s_phidot, double tau_s);

/// Lorentzian PDS S_theta(omega) = 4 S_phidot / (S_phidot^2 + 4 (2 pi omega)^2).
double lorentzian_pds(double s_phidot, double omega_hz);

}  // namespace gabormc
