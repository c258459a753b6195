// SPDX-License-Identifier: Apache-2.0
//
// gabormc - pulse-shaped multicarrier interference bounds and simulation

#include "gabormc/channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gabormc {

PowerDelayProfile::PowerDelayProfile(std::vector<Tap> t, double tau_d)
    : taps(std::move(t)), tau_d_s(tau_d) {
    if (taps.empty()) throw std::invalid_argument("PowerDelayProfile: no taps");
    double sum = 0.0;
    for (const Tap& tp : taps) {
        if (tp.delay_s < 0.0 || tp.delay_s > tau_d_s)
            throw std::invalid_argument("PowerDelayProfile: delay outside [0, tau_d]");
        if (tp.power < 0.0) throw std::invalid_argument("PowerDelayProfile: negative power");
        sum += tp.power;
    }
    if (sum <= 0.0) throw std::invalid_argument("PowerDelayProfile: total power must be > 0");
}

double PowerDelayProfile::p1norm() const {
    double s = 0.0;
    for (const Tap& t : taps) s += t.power;
    return s;
}

PowerDelayProfile PowerDelayProfile::default_two_tap(double tcp_s) {
    return PowerDelayProfile({{0.0, 0.8}, {tcp_s / 2.0, 0.2}}, tcp_s / 2.0);
}

ChannelRealization::ChannelRealization(std::vector<Tap> t, double tau_d)
    : taps(std::move(t)), tau_d_s(tau_d) {
    if (taps.empty()) throw std::invalid_argument("ChannelRealization: no taps");
    for (const Tap& tp : taps)
        if (tp.delay_s < 0.0 || tp.delay_s > tau_d_s)
            throw std::invalid_argument("ChannelRealization: delay outside [0, tau_d]");
}

double ChannelRealization::gain_energy() const {
    double s = 0.0;
    for (const Tap& t : taps) s += std::norm(t.gain);
    return s;
}

ChannelRealization ChannelRealization::identity() {
    return ChannelRealization({{0.0, cplx(1.0, 0.0)}}, 0.0);
}

ChannelRealization draw_channel(const PowerDelayProfile& pdp, Rng& rng) {
    std::vector<ChannelRealization::Tap> taps;
    taps.reserve(pdp.taps.size());
    for (const PowerDelayProfile::Tap& t : pdp.taps)
        taps.push_back({t.delay_s, rng.cnormal(t.power)});
    return ChannelRealization(std::move(taps), pdp.tau_d_s);
}

namespace {
std::vector<std::ptrdiff_t> tap_steps(const ChannelRealization& h, double dt) {
    std::vector<std::ptrdiff_t> k(h.taps.size());
    for (std::size_t j = 0; j < h.taps.size(); ++j) {
        const double steps = h.taps[j].delay_s / dt;
        if (std::abs(steps - std::round(steps)) > 1e-9)
            throw std::invalid_argument("channel tap delay is off the sample grid");
        k[j] = static_cast<std::ptrdiff_t>(std::llround(steps));
    }
    return k;
}
}  // namespace

ComplexSignal apply_channel(const ChannelRealization& h, const ComplexSignal& s) {
    const auto k = tap_steps(h, s.dt_s);
    const std::ptrdiff_t kmax = *std::max_element(k.begin(), k.end());
    ComplexSignal out(std::vector<cplx>(s.size() + static_cast<std::size_t>(kmax), cplx(0, 0)),
                      s.dt_s, s.t0_s);
    for (std::size_t j = 0; j < h.taps.size(); ++j) {
        const cplx g = h.taps[j].gain;
        for (std::size_t i = 0; i < s.size(); ++i)
            out.samples[i + static_cast<std::size_t>(k[j])] += g * s.samples[i];
    }
    return out;
}

ComplexSignal apply_channel_adjoint(const ChannelRealization& h, const ComplexSignal& f) {
    const auto k = tap_steps(h, f.dt_s);
    const std::ptrdiff_t kmax = *std::max_element(k.begin(), k.end());
    // support shifts back by the largest delay
    ComplexSignal out(std::vector<cplx>(f.size() + static_cast<std::size_t>(kmax), cplx(0, 0)),
                      f.dt_s, f.t0_s - static_cast<double>(kmax) * f.dt_s);
    for (std::size_t j = 0; j < h.taps.size(); ++j) {
        const cplx g = std::conj(h.taps[j].gain);
        const std::size_t base = static_cast<std::size_t>(kmax - k[j]);
        for (std::size_t i = 0; i < f.size(); ++i) out.samples[base + i] += g * f.samples[i];
    }
    return out;
}

cplx freq_response(const ChannelRealization& h, double f_hz) {
    cplx acc(0, 0);
    for (const ChannelRealization::Tap& t : h.taps)
        acc += t.gain * std::polar(1.0, -2.0 * M_PI * f_hz * t.delay_s);
    return acc;
}

namespace detail {

double hhat_sup_sq(const ChannelRealization& h) {
    double tmin = 0.0;
    for (const auto& t : h.taps)
        if (t.delay_s > 0.0 && (tmin == 0.0 || t.delay_s < tmin)) tmin = t.delay_s;
    if (tmin == 0.0) {
        // all taps at zero delay: flat response
        cplx s(0, 0);
        for (const auto& t : h.taps) s += t.gain;
        return std::norm(s);
    }
    // |hhat|^2 is an almost-periodic trig polynomial; one period of the
    // fastest tone is 1/tau_d, scan well past it relative to the slowest
    const double span = 8.0 / tmin;
    const int n = std::max(4096, static_cast<int>(32.0 * span * h.tau_d_s));
    const double df = span / n;
    double best = 0.0;
    int best_i = 0;
    for (int i = 0; i < n; ++i) {
        const double v = std::norm(freq_response(h, i * df));
        if (v > best) {
            best = v;
            best_i = i;
        }
    }
    // parabolic refinement around the grid argmax
    const double fm = (best_i - 1) * df, f0 = best_i * df, fp = (best_i + 1) * df;
    const double ym = std::norm(freq_response(h, fm));
    const double y0 = best;
    const double yp = std::norm(freq_response(h, fp));
    const double denom = ym - 2.0 * y0 + yp;
    if (denom < 0.0) {
        const double fstar = f0 + 0.5 * df * (ym - yp) / denom;
        best = std::max(best, std::norm(freq_response(h, fstar)));
    }
    return best;
}

}  // namespace detail

BetaBound beta_bound_general(const ChannelRealization& h) {
    const double hinf2 = detail::hhat_sup_sq(h);
    const double cs = static_cast<double>(h.taps.size()) * h.gain_energy();
    return hinf2 <= cs ? BetaBound{hinf2, true} : BetaBound{cs, false};
}

double beta_bound_freq_offset(const ChannelRealization& h, const ComplexSignal& g_kl,
                              double nu_hz) {
    const double base = apply_channel_adjoint(h, g_kl).energy();
    const double hinf2 = detail::hhat_sup_sq(h);
    const double a = h.tau_d_s * std::abs(nu_hz);
    return base + 4.0 * M_PI * a * hinf2 * (1.0 + a * M_PI);
}

}  // namespace gabormc
