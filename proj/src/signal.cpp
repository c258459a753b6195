// SPDX-License-Identifier: Apache-2.0
//
// gabormc - pulse-shaped multicarrier interference bounds and simulation

#include "gabormc/signal.hpp"

#include <cmath>
#include <stdexcept>

namespace gabormc {

ComplexSignal::ComplexSignal(std::vector<cplx> s, double dt, double t0)
    : samples(std::move(s)), dt_s(dt), t0_s(t0) {
    if (dt_s <= 0.0) throw std::invalid_argument("ComplexSignal: dt must be > 0");
    if (samples.empty()) throw std::invalid_argument("ComplexSignal: need at least one sample");
}

double ComplexSignal::energy() const {
    double e = 0.0;
    for (const cplx& v : samples) e += std::norm(v);
    return e * dt_s;
}

double ComplexSignal::norm() const { return std::sqrt(energy()); }

OfdmPulses::OfdmPulses(double tu, double tcp, int ns_, double t0)
    : tu_s(tu), tcp_s(tcp), ns(ns_), t0_s(t0) {
    if (tu_s <= 0.0) throw std::invalid_argument("OfdmPulses: Tu must be > 0");
    if (tcp_s < 0.0) throw std::invalid_argument("OfdmPulses: Tcp must be >= 0");
    if (ns < 8) throw std::invalid_argument("OfdmPulses: ns must be >= 8");
    const double steps = tcp_s / dt_s();
    if (std::abs(steps - std::round(steps)) > 1e-9)
        throw std::invalid_argument("OfdmPulses: Tcp must be an integer number of samples");
}

OfdmPulses OfdmPulses::from_eps(double tu, double eps, int ns_, double t0) {
    if (eps <= 0.0 || eps > 1.0) throw std::invalid_argument("OfdmPulses: eps must be in (0,1]");
    return OfdmPulses(tu, tu * (1.0 - eps) / eps, ns_, t0);
}

int OfdmPulses::ncp() const { return static_cast<int>(std::llround(tcp_s / dt_s())); }

namespace {
ComplexSignal rect_pulse(double lo, double hi, double amp, double dt, double t0_shift) {
    // samples on [lo - t0_shift, hi - t0_shift), half-open
    const int n = static_cast<int>(std::llround((hi - lo) / dt));
    ComplexSignal out(std::vector<cplx>(static_cast<std::size_t>(n), cplx(amp, 0.0)), dt,
                      lo - t0_shift);
    const double e = out.energy();
    if (e > 0.0) {
        const double s = 1.0 / std::sqrt(e);
        for (cplx& v : out.samples) v *= s;
    }
    return out;
}
}  // namespace

ComplexSignal ofdm_gamma(const OfdmPulses& p) {
    return rect_pulse(-p.tcp_s, p.tu_s, 1.0 / std::sqrt(p.symbol_period_s()), p.dt_s(), p.t0_s);
}

ComplexSignal ofdm_g(const OfdmPulses& p) {
    return rect_pulse(0.0, p.tu_s, 1.0 / std::sqrt(p.tu_s), p.dt_s(), p.t0_s);
}

namespace detail {

std::ptrdiff_t grid_offset(const ComplexSignal& f, const ComplexSignal& g) {
    if (std::abs(f.dt_s - g.dt_s) > 1e-12 * f.dt_s)
        throw std::invalid_argument("signals have mismatched sample intervals");
    const double steps = (g.t0_s - f.t0_s) / f.dt_s;
    const double r = std::round(steps);
    if (std::abs(steps - r) > 1e-6)
        throw std::invalid_argument("signals are not grid-aligned");
    return static_cast<std::ptrdiff_t>(r);
}

void fft_pow2(std::vector<cplx>& a, int sign) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("fft_pow2: size must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * M_PI / static_cast<double>(len);
        const cplx wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cplx u = a[i + k];
                const cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

}  // namespace detail

namespace {

// fractional delay by FFT phase ramp; zero-padded to suppress wrap-around
ComplexSignal fractional_delay(const ComplexSignal& f, double tau_s) {
    const double dt = f.dt_s;
    const double steps = tau_s / dt;
    const double ipart = std::floor(steps);
    const double frac = steps - ipart;  // in [0,1)
    std::size_t n = 1;
    while (n < 2 * (f.size() + 2)) n <<= 1;
    std::vector<cplx> buf(n, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < f.size(); ++i) buf[i + 1] = f.samples[i];
    detail::fft_pow2(buf, -1);
    for (std::size_t k = 0; k < n; ++k) {
        // signed frequency bin
        const double fk = (k <= n / 2 ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(n)) /
                          (static_cast<double>(n) * dt);
        buf[k] *= std::polar(1.0, -2.0 * M_PI * fk * frac * dt);
    }
    detail::fft_pow2(buf, +1);
    const double inv = 1.0 / static_cast<double>(n);
    std::vector<cplx> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = buf[i + 1] * inv;
    return ComplexSignal(std::move(out), dt, f.t0_s + ipart * dt);
}

}  // namespace

ComplexSignal tf_shift(const ComplexSignal& f, const TFShift& s, bool interpolate) {
    const double dt = f.dt_s;
    const double steps = s.tau_s / dt;
    ComplexSignal shifted = f;
    if (std::abs(steps - std::round(steps)) <= 1e-9) {
        shifted.t0_s = f.t0_s + std::round(steps) * dt;
    } else if (interpolate) {
        shifted = fractional_delay(f, s.tau_s);
    } else {
        throw std::invalid_argument("tf_shift: off-grid time shift (pass interpolate=true to allow)");
    }
    if (s.nu_hz != 0.0) {
        // modulate at absolute time, sample-exact
        for (std::size_t i = 0; i < shifted.size(); ++i)
            shifted.samples[i] *= std::polar(1.0, 2.0 * M_PI * s.nu_hz * shifted.time(i));
    }
    return shifted;
}

cplx inner(const ComplexSignal& f, const ComplexSignal& g) {
    const std::ptrdiff_t off = detail::grid_offset(f, g);
    const std::ptrdiff_t i0 = std::max<std::ptrdiff_t>(0, off);
    const std::ptrdiff_t i1 = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(f.size()),
                                                       off + static_cast<std::ptrdiff_t>(g.size()));
    cplx acc(0.0, 0.0);
    for (std::ptrdiff_t i = i0; i < i1; ++i)
        acc += std::conj(f.samples[static_cast<std::size_t>(i)]) *
               g.samples[static_cast<std::size_t>(i - off)];
    return acc * f.dt_s;
}

cplx cross_ambiguity(const ComplexSignal& g, const ComplexSignal& gamma,
                     double tau_s, double nu_hz, bool interpolate) {
    return inner(g, tf_shift(gamma, TFShift{tau_s, nu_hz}, interpolate));
}

}  // namespace gabormc
