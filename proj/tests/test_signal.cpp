// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gabormc/bounds.hpp"
#include "gabormc/rng.hpp"
#include "gabormc/signal.hpp"

using namespace gabormc;

namespace {

ComplexSignal random_signal(std::size_t n, double dt, double t0, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<cplx> s(n);
    for (cplx& v : s) v = rng.cnormal();
    return ComplexSignal(std::move(s), dt, t0);
}

double max_abs_diff(const ComplexSignal& a, const ComplexSignal& b) {
    REQUIRE(a.size() == b.size());
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.samples[i] - b.samples[i]));
    return m;
}

}  // namespace

TEST_CASE("construction invariants") {
    CHECK_THROWS_AS(ComplexSignal({}, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ComplexSignal({cplx(1, 0)}, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(OfdmPulses(1.0, -0.1, 64), std::invalid_argument);
    CHECK_THROWS_AS(OfdmPulses(1.0, 0.25, 4), std::invalid_argument);
    // Tcp off the sample grid
    CHECK_THROWS_AS(OfdmPulses(1.0, 0.3, 16), std::invalid_argument);
}

TEST_CASE("ofdm pulses: normalization and support") {
    const OfdmPulses p = OfdmPulses::from_eps(1.0, 0.8, 1024);
    const ComplexSignal gam = ofdm_gamma(p);
    const ComplexSignal g = ofdm_g(p);
    CHECK(std::abs(gam.energy() - 1.0) < 1e-10);
    CHECK(std::abs(g.energy() - 1.0) < 1e-10);
    // support length 1.25 Tu for gamma
    CHECK(gam.size() == 1280);
    CHECK(gam.t0_s == doctest::Approx(-0.25).epsilon(1e-12));

    // eps = 1: gamma and g identical
    const OfdmPulses p1 = OfdmPulses::from_eps(1.0, 1.0, 256);
    CHECK(max_abs_diff(ofdm_gamma(p1), ofdm_g(p1)) < 1e-12);
}

TEST_CASE("inner: basic identities") {
    const OfdmPulses p = OfdmPulses::from_eps(1.0, 0.8, 1024);
    const ComplexSignal gam = ofdm_gamma(p);
    const ComplexSignal g = ofdm_g(p);

    const cplx self = inner(g, g);
    CHECK(self.imag() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(self.real() == doctest::Approx(1.0).epsilon(1e-12));

    // <g, gamma> = sqrt(eps) = 0.894427...
    CHECK(inner(g, gam).real() == doctest::Approx(std::sqrt(0.8)).epsilon(1e-12));
    CHECK(std::abs(inner(g, gam).imag()) < 1e-14);

    // subcarrier orthogonality null
    CHECK(std::abs(inner(g, tf_shift(gam, TFShift{0.0, 1.0 / p.tu_s}))) < 1e-10);

    // mismatched dt rejected
    const ComplexSignal other({cplx(1, 0), cplx(1, 0)}, 0.5, 0.0);
    CHECK_THROWS_AS(inner(g, other), std::invalid_argument);
}

TEST_CASE("tf_shift: identity, unitarity, off-grid rejection") {
    const ComplexSignal f = random_signal(300, 1.0 / 256, 0.0, 7);

    const ComplexSignal same = tf_shift(f, TFShift{0.0, 0.0});
    CHECK(max_abs_diff(f, same) == 0.0);
    CHECK(same.t0_s == f.t0_s);

    const ComplexSignal moved = tf_shift(f, TFShift{5.0 / 256, 0.37 * 256});
    CHECK(moved.energy() == doctest::Approx(f.energy()).epsilon(1e-12));

    CHECK_THROWS_AS(tf_shift(f, TFShift{0.4 / 256, 0.0}), std::invalid_argument);
    CHECK_NOTHROW(tf_shift(f, TFShift{0.4 / 256, 0.0}, true));
}

TEST_CASE("Weyl-Heisenberg algebra on the grid") {
    const double dt = 1.0 / 512;
    const double Tu = 1.0;
    const ComplexSignal f = random_signal(600, dt, 0.0, 21);
    const double a = 3 * dt, b = 0.7 / Tu, c = 5 * dt, d = 0.3 / Tu;

    // composition S_{a,b} S_{c,d} = e^{-i 2 pi a d} S_{a+c, b+d}
    const ComplexSignal lhs = tf_shift(tf_shift(f, TFShift{c, d}), TFShift{a, b});
    ComplexSignal rhs = tf_shift(f, TFShift{a + c, b + d});
    const cplx ph = std::polar(1.0, -2.0 * M_PI * a * d);
    for (cplx& v : rhs.samples) v *= ph;
    CHECK(max_abs_diff(lhs, rhs) < 1e-10);

    // adjoint S*_{a,b} = e^{-i 2 pi a b} S_{-a,-b}: check <S_{a,b} x, y> = <x, S* y>
    const ComplexSignal y = random_signal(600, dt, 0.0, 22);
    const cplx left = inner(tf_shift(f, TFShift{a, b}), y);
    ComplexSignal sy = tf_shift(y, TFShift{-a, -b});
    const cplx ph2 = std::polar(1.0, -2.0 * M_PI * a * b);
    for (cplx& v : sy.samples) v *= ph2;
    const cplx right = inner(f, sy);
    CHECK(std::abs(left - right) < 1e-10);

    // commutation S_{a,b} S_{c,d} = e^{-i 2 pi (a d - b c)} S_{c,d} S_{a,b}
    const ComplexSignal lhs2 = tf_shift(tf_shift(f, TFShift{c, d}), TFShift{a, b});
    ComplexSignal rhs2 = tf_shift(tf_shift(f, TFShift{a, b}), TFShift{c, d});
    const cplx ph3 = std::polar(1.0, -2.0 * M_PI * (a * d - b * c));
    for (cplx& v : rhs2.samples) v *= ph3;
    CHECK(max_abs_diff(lhs2, rhs2) < 1e-10);
}

TEST_CASE("cross ambiguity: definition, CP plateau, subcarrier null") {
    const OfdmPulses p = OfdmPulses::from_eps(1.0, 0.8, 1024);
    const ComplexSignal gam = ofdm_gamma(p);
    const ComplexSignal g = ofdm_g(p);

    CHECK(std::abs(cross_ambiguity(g, gam, 0.0, 0.0) - inner(g, gam)) < 1e-14);

    // |A(tau,0)| = sqrt(eps) on the CP plateau (delays covered by the prefix)
    for (double tau : {0.0, p.tcp_s / 4, p.tcp_s / 2, p.tcp_s}) {
        CHECK(std::abs(cross_ambiguity(g, gam, tau, 0.0)) ==
              doctest::Approx(std::sqrt(0.8)).epsilon(1e-12));
    }
    CHECK(std::abs(cross_ambiguity(g, gam, 0.0, 1.0 / p.tu_s)) < 1e-8);
}

TEST_CASE("cross ambiguity matches the closed form over the acceptance-style grid") {
    const int ns = 1024;
    const OfdmPulses p = OfdmPulses::from_eps(1.0, 0.8, ns);
    const ComplexSignal gam = ofdm_gamma(p);
    const ComplexSignal g = ofdm_g(p);
    const double span_t = p.tu_s + p.tcp_s;
    double worst = 0.0;
    for (int it = 0; it <= 20; ++it)
        for (int iv = 0; iv <= 20; ++iv) {
            double tau = -span_t + it * (2 * span_t / 20);
            tau = std::round(tau / p.dt_s()) * p.dt_s();
            const double nu = -2.0 / p.tu_s + iv * (4.0 / p.tu_s / 20);
            worst = std::max(worst,
                             std::abs(cross_ambiguity(g, gam, tau, nu) - ofdm_ambiguity(p, tau, nu)));
        }
    CHECK(worst <= 2.0 / ns);
}

TEST_CASE("band-limited fractional shift composes to a grid shift") {
    // band-limited input: modulated Gaussian, negligible truncation tails
    const std::size_t n = 256;
    const double dt = 1.0 / 256;
    std::vector<cplx> s(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) * dt;
        const double env = std::exp(-std::pow((t - 0.5) / 0.12, 2.0));
        s[i] = env * std::polar(1.0, 2 * M_PI * 12 * t);
    }
    const ComplexSignal f(std::move(s), dt, 0.0);
    const ComplexSignal half2 =
        tf_shift(tf_shift(f, TFShift{dt / 2, 0.0}, true), TFShift{dt / 2, 0.0}, true);
    // two half-sample delays == one-sample delay: half2 at time i dt is f((i-1) dt)
    double worst = 0.0;
    for (std::size_t i = 8; i + 8 < n; ++i)
        worst = std::max(worst, std::abs(half2.samples[i] - f.samples[i - 1]));
    CHECK(worst < 1e-3);
}
