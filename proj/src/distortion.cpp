// SPDX-License-Identifier: Apache-2.0
//
// gabormc - pulse-shaped multicarrier interference bounds and simulation

#include "gabormc/distortion.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gabormc {

double PhasePath::phase_at(double t_s) const {
    const double steps = (t_s - t0_s) / dt_s;
    const auto i = static_cast<std::ptrdiff_t>(std::llround(steps));
    if (std::abs(steps - static_cast<double>(i)) > 1e-6 || i < 0 ||
        i >= static_cast<std::ptrdiff_t>(phases.size()))
        throw std::invalid_argument("PhasePath: time off the sampled grid");
    return phases[static_cast<std::size_t>(i)];
}

namespace {

PhasePath draw_wiener_path(const WienerPn& w, double t_start, std::size_t n, double dt, Rng& rng) {
    PhasePath p;
    p.dt_s = dt;
    p.t0_s = t_start;
    p.origin_s = w.t_sync_s;
    p.phases.assign(n, 0.0);
    const double sd = std::sqrt(w.s_phidot * dt);
    // grid index closest to t_sync (clamped; phi(t_sync)=0 there)
    const double so = (w.t_sync_s - t_start) / dt;
    const std::ptrdiff_t i_sync =
        std::min<std::ptrdiff_t>(std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(std::llround(so))),
                                 static_cast<std::ptrdiff_t>(n) - 1);
    // forward increments from the sync point, independent backward increments
    // before it (two-sided Brownian motion)
    double acc = 0.0;
    for (std::ptrdiff_t i = i_sync + 1; i < static_cast<std::ptrdiff_t>(n); ++i) {
        acc += sd * rng.normal();
        p.phases[static_cast<std::size_t>(i)] = acc;
    }
    acc = 0.0;
    for (std::ptrdiff_t i = i_sync - 1; i >= 0; --i) {
        acc += sd * rng.normal();
        p.phases[static_cast<std::size_t>(i)] = acc;
    }
    return p;
}

PhasePath draw_gaussian_path(const GaussianPn& g, double t_start, std::size_t n, double dt,
                             Rng& rng) {
    PhasePath p;
    p.dt_s = dt;
    p.t0_s = t_start;
    p.origin_s = t_start;
    p.phases.assign(n, 0.0);
    const double sd = std::sqrt(g.s_phi);
    if (g.sim_shape == GaussianPn::Shape::White) {
        for (double& v : p.phases) v = sd * rng.normal();
    } else {
        // AR(1) with correlation time dt/(1-a); stationary marginal variance s_phi
        const double a = std::exp(-8.0 * dt);  // correlation time 1/8 of a unit-time symbol scale
        const double b = sd * std::sqrt(1.0 - a * a);
        double v = sd * rng.normal();
        for (std::size_t i = 0; i < n; ++i) {
            p.phases[i] = v;
            v = a * v + b * rng.normal();
        }
    }
    return p;
}

}  // namespace

DistortionRealization draw_distortion(const DistortionSpec& spec, double t_start_s, std::size_t n,
                                      double dt_s, Rng& rng) {
    DistortionRealization r{spec, std::nullopt};
    if (const auto* g = std::get_if<GaussianPn>(&spec))
        r.path = draw_gaussian_path(*g, t_start_s, n, dt_s, rng);
    else if (const auto* w = std::get_if<WienerPn>(&spec))
        r.path = draw_wiener_path(*w, t_start_s, n, dt_s, rng);
    return r;
}

namespace {
ComplexSignal multiply_phase(const ComplexSignal& f, const PhasePath& p, double sign) {
    ComplexSignal out = f;
    for (std::size_t i = 0; i < out.size(); ++i)
        out.samples[i] *= std::polar(1.0, sign * p.phase_at(out.time(i)));
    return out;
}
}  // namespace

ComplexSignal apply_distortion(const DistortionRealization& r, const ComplexSignal& f) {
    if (const auto* o = std::get_if<Offset>(&r.spec)) return tf_shift(f, TFShift{o->d_s, o->nu_hz});
    if (!r.path) throw std::invalid_argument("apply_distortion: phase-noise realization has no path");
    return multiply_phase(f, *r.path, +1.0);
}

ComplexSignal apply_distortion(const DistortionSpec& spec, const ComplexSignal& f, Rng* rng) {
    if (std::holds_alternative<Offset>(spec))
        return apply_distortion(DistortionRealization{spec, std::nullopt}, f);
    if (rng == nullptr)
        throw std::invalid_argument("apply_distortion: stochastic distortion needs an rng");
    return apply_distortion(draw_distortion(spec, f.t0_s, f.size(), f.dt_s, *rng), f);
}

ComplexSignal apply_distortion_adjoint(const DistortionRealization& r, const ComplexSignal& f) {
    if (const auto* o = std::get_if<Offset>(&r.spec)) {
        ComplexSignal out = tf_shift(f, TFShift{-o->d_s, -o->nu_hz});
        const cplx ph = std::polar(1.0, -2.0 * M_PI * o->d_s * o->nu_hz);
        for (cplx& v : out.samples) v *= ph;
        return out;
    }
    if (!r.path) throw std::invalid_argument("apply_distortion_adjoint: realization has no path");
    return multiply_phase(f, *r.path, -1.0);
}

cplx mean_theta(const DistortionSpec& spec, double t_s) {
    if (std::holds_alternative<Offset>(spec)) return cplx(1.0, 0.0);
    if (const auto* g = std::get_if<GaussianPn>(&spec)) return cplx(std::exp(-g->s_phi / 2.0), 0.0);
    const auto& w = std::get<WienerPn>(spec);
    if (t_s < w.t_sync_s - 1e-12)
        throw std::invalid_argument("mean_theta: Wiener mean is defined for t >= t_sync");
    return cplx(std::exp(-w.s_phidot / 2.0 * (t_s - w.t_sync_s)), 0.0);
}

double wiener_autocorr(double s_phidot, double tau_s) {
    return std::exp(-s_phidot / 2.0 * std::abs(tau_s));
}

double lorentzian_pds(double s_phidot, double omega_hz) {
    if (s_phidot == 0.0)
        return omega_hz == 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    const double w = 2.0 * M_PI * omega_hz;
    return 4.0 * s_phidot / (s_phidot * s_phidot + 4.0 * w * w);
}

}  // namespace gabormc
