// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gabormc/channel.hpp"
#include "gabormc/distortion.hpp"
#include "gabormc/rng.hpp"
#include "gabormc/signal.hpp"

using namespace gabormc;

namespace {
ComplexSignal random_signal(std::size_t n, double dt, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<cplx> s(n);
    for (cplx& v : s) v = rng.cnormal();
    return ComplexSignal(std::move(s), dt, 0.0);
}
}  // namespace

TEST_CASE("pdp invariants and defaults") {
    CHECK_THROWS_AS(PowerDelayProfile({{0.0, 0.0}}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(PowerDelayProfile({{0.5, 1.0}}, 0.1), std::invalid_argument);
    const PowerDelayProfile pdp = PowerDelayProfile::default_two_tap(0.25);
    CHECK(pdp.p1norm() == doctest::Approx(1.0));
    CHECK(pdp.tau_d_s == doctest::Approx(0.125));
}

TEST_CASE("draw_channel statistics") {
    const int n = 10000;
    Rng rng(99);

    SUBCASE("single tap, unit power") {
        const PowerDelayProfile pdp({{0.0, 1.0}}, 0.0);
        double e2 = 0.0;
        cplx mean(0, 0);
        for (int i = 0; i < n; ++i) {
            const ChannelRealization h = draw_channel(pdp, rng);
            e2 += std::norm(h.taps[0].gain);
            mean += h.taps[0].gain;
        }
        e2 /= n;
        mean /= static_cast<double>(n);
        // E|h|^2 = 1 within 3 standard errors (|h|^2 is Exp(1), sd 1)
        CHECK(std::abs(e2 - 1.0) < 3.0 / std::sqrt(static_cast<double>(n)));
        // E[h] = 0 within 3 standard errors per component
        CHECK(std::abs(mean.real()) < 3.0 * std::sqrt(0.5 / n));
        CHECK(std::abs(mean.imag()) < 3.0 * std::sqrt(0.5 / n));
    }

    SUBCASE("two-tap default: total power 1") {
        const PowerDelayProfile pdp = PowerDelayProfile::default_two_tap(0.25);
        double e2 = 0.0;
        for (int i = 0; i < n; ++i) e2 += draw_channel(pdp, rng).gain_energy();
        e2 /= n;
        CHECK(std::abs(e2 - 1.0) < 3.0 / std::sqrt(static_cast<double>(n)));
    }
}

TEST_CASE("apply_channel: identity, delay, linearity") {
    const double dt = 1.0 / 128;
    const ComplexSignal s = random_signal(200, dt, 3);

    const ComplexSignal same = apply_channel(ChannelRealization::identity(), s);
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(same.samples[i] == s.samples[i]);

    const ChannelRealization delay({{8 * dt, cplx(1, 0)}}, 8 * dt);
    const ComplexSignal d = apply_channel(delay, s);
    CHECK(d.size() == s.size() + 8);
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(d.samples[i + 8] == s.samples[i]);

    // linearity in the input signal
    const ComplexSignal s2 = random_signal(200, dt, 4);
    ChannelRealization h({{0.0, cplx(0.3, 0.1)}, {5 * dt, cplx(-0.2, 0.7)}}, 5 * dt);
    ComplexSignal sum = s;
    for (std::size_t i = 0; i < sum.size(); ++i) sum.samples[i] += s2.samples[i];
    const ComplexSignal hs = apply_channel(h, s), hs2 = apply_channel(h, s2),
                        hsum = apply_channel(h, sum);
    for (std::size_t i = 0; i < hsum.size(); ++i)
        CHECK(std::abs(hsum.samples[i] - hs.samples[i] - hs2.samples[i]) < 1e-12);

    // off-grid delay rejected
    const ChannelRealization bad({{0.4 * dt, cplx(1, 0)}}, dt);
    CHECK_THROWS_AS(apply_channel(bad, s), std::invalid_argument);
}

TEST_CASE("adjoint is the true adjoint on the grid") {
    const double dt = 1.0 / 64;
    const ComplexSignal x = random_signal(150, dt, 11);
    const ComplexSignal y = random_signal(170, dt, 12);
    ChannelRealization h({{0.0, cplx(0.5, -0.2)}, {3 * dt, cplx(0.1, 0.9)}}, 3 * dt);
    const cplx lhs = inner(apply_channel(h, x), y);
    const cplx rhs = inner(x, apply_channel_adjoint(h, y));
    CHECK(std::abs(lhs - rhs) < 1e-12);
}

TEST_CASE("freq_response") {
    const ChannelRealization unit = ChannelRealization::identity();
    for (double f : {0.0, 0.3, 11.0}) CHECK(std::abs(freq_response(unit, f) - cplx(1, 0)) < 1e-15);

    const ChannelRealization one_delay({{0.125, cplx(1, 0)}}, 0.125);
    for (double f : {0.1, 1.7, 9.0}) CHECK(std::abs(freq_response(one_delay, f)) == doctest::Approx(1.0));

    // two equal taps spaced dtau null at f = 1/(2 dtau)
    const double dtau = 0.2;
    const ChannelRealization two({{0.0, cplx(1, 0)}, {dtau, cplx(1, 0)}}, dtau);
    CHECK(std::abs(freq_response(two, 1.0 / (2 * dtau))) < 1e-12);
}

TEST_CASE("beta_bound_general") {
    CHECK(beta_bound_general(ChannelRealization::identity()).value == doctest::Approx(1.0));

    // co-phased amplitudes 0.8 and 0.6 peak at (0.8+0.6)^2 = 1.96
    const ChannelRealization two({{0.0, cplx(0.8, 0)}, {0.1, cplx(0.6, 0)}}, 0.1);
    const BetaBound b = beta_bound_general(two);
    CHECK(b.value == doctest::Approx(1.96).epsilon(1e-6));
    CHECK(b.from_grid_max);

    // ||hhat||_inf^2 <= N sum|h|^2 ordering, and the bound dominates ||H* g||^2
    const OfdmPulses p = OfdmPulses::from_eps(1.0, 0.8, 256);
    const ComplexSignal g = ofdm_g(p);
    const PowerDelayProfile pdp = PowerDelayProfile::default_two_tap(p.tcp_s);
    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
        const ChannelRealization h = draw_channel(pdp, rng);
        const double hinf2 = detail::hhat_sup_sq(h);
        CHECK(hinf2 <= static_cast<double>(h.taps.size()) * h.gain_energy() + 1e-12);
        CHECK(beta_bound_general(h).value >= apply_channel_adjoint(h, g).energy() - 1e-9);
    }
}

TEST_CASE("beta_bound_freq_offset") {
    const OfdmPulses p = OfdmPulses::from_eps(1.0, 0.8, 256);
    const ComplexSignal g = ofdm_g(p);
    const PowerDelayProfile pdp = PowerDelayProfile::default_two_tap(p.tcp_s);
    Rng rng(17);

    // nu = 0 reduces to ||H* g||^2 exactly
    const ChannelRealization h0 = draw_channel(pdp, rng);
    CHECK(beta_bound_freq_offset(h0, g, 0.0) ==
          doctest::Approx(apply_channel_adjoint(h0, g).energy()));

    // dominates the exact ||H* S*_{0,nu} g||^2 and is monotone in |nu|
    for (int i = 0; i < 100; ++i) {
        const ChannelRealization h = draw_channel(pdp, rng);
        const double nu = rng.uniform(-0.5, 0.5) / p.tu_s;
        const DistortionRealization off{Offset{0.0, nu}, std::nullopt};
        const double exact = apply_channel_adjoint(h, apply_distortion_adjoint(off, g)).energy();
        CHECK(beta_bound_freq_offset(h, g, nu) >= exact - 1e-9);
    }
    const ChannelRealization h = draw_channel(pdp, rng);
    double prev = 0.0;
    for (double nu : {0.0, 0.1, 0.2, 0.4}) {
        const double b = beta_bound_freq_offset(h, g, nu);
        CHECK(b >= prev - 1e-12);
        prev = b;
    }
}

TEST_CASE("channel-average unitarity identity") {
    // E ||H* S* g||^2 = ||p||_1 for unitary distortions, over many draws
    const OfdmPulses p = OfdmPulses::from_eps(1.0, 0.8, 128);
    const ComplexSignal g = ofdm_g(p);
    const PowerDelayProfile pdp = PowerDelayProfile::default_two_tap(p.tcp_s);
    Rng rng(23);
    const int n = 10000;
    double acc = 0.0, acc2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const ChannelRealization h = draw_channel(pdp, rng);
        const DistortionRealization off{Offset{0.0, rng.uniform(-0.5, 0.5) / p.tu_s}, std::nullopt};
        const double e = apply_channel_adjoint(h, apply_distortion_adjoint(off, g)).energy();
        acc += e;
        acc2 += e * e;
    }
    const double mean = acc / n;
    const double se = std::sqrt((acc2 / n - mean * mean) / n);
    CHECK(std::abs(mean - pdp.p1norm()) < 3.0 * se);
}
