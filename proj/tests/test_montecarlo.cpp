// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "gabormc/montecarlo.hpp"
#include "oracles.hpp"

using namespace gabormc;

namespace {

SimConfig small_config(std::uint64_t seed) {
    const OfdmPulses p = OfdmPulses::from_eps(1.0, 0.8, 256);
    SimConfig cfg = SimConfig::make(p, LatticeRect::centered(9, 5));
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("config validation") {
    SimConfig cfg = small_config(1);
    cfg.trials = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.trials = 1;
    cfg.k_obs = cfg.lattice.m_max;  // no guard slots
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("effective matrix row: biorthogonality and known distortions") {
    SimConfig cfg = small_config(2);
    const LatticeRect& lat = cfg.lattice;
    const std::size_t diag = lat.index(cfg.k_obs, cfg.l_obs);
    const ChannelRealization id = ChannelRealization::identity();

    SUBCASE("no distortion, identity channel: diagonal sqrt(eps)") {
        const DistortionRealization none{Offset{0, 0}, std::nullopt};
        const auto row = effective_matrix_row(cfg.pulses, lat, id, none, cfg.k_obs, cfg.l_obs);
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i == diag)
                CHECK(std::abs(row[i] - cplx(std::sqrt(0.8), 0)) < 1e-10);
            else
                CHECK(std::abs(row[i]) < 1e-8);
        }
    }

    SUBCASE("pure delay inside the CP: phase rotation only, no ICI") {
        const double tau = cfg.pulses.tcp_s / 2;
        const ChannelRealization delay({{tau, cplx(1, 0)}}, tau);
        const DistortionRealization none{Offset{0, 0}, std::nullopt};
        const auto row = effective_matrix_row(cfg.pulses, lat, delay, none, cfg.k_obs, cfg.l_obs);
        CHECK(std::abs(row[diag]) == doctest::Approx(std::sqrt(0.8)).epsilon(1e-10));
        for (std::size_t i = 0; i < row.size(); ++i)
            if (i != diag) CHECK(std::abs(row[i]) < 1e-8);
    }

    SUBCASE("frequency offset: diagonal matches the ambiguity value") {
        const double nu = 0.2 / cfg.pulses.tu_s;
        const DistortionRealization off{Offset{0.0, nu}, std::nullopt};
        const auto row = effective_matrix_row(cfg.pulses, lat, id, off, cfg.k_obs, cfg.l_obs);
        CHECK(std::norm(row[diag]) ==
              doctest::Approx(std::norm(ofdm_ambiguity(cfg.pulses, 0.0, nu))).epsilon(1e-2));
        double rs = 0.0;
        for (const cplx& v : row) rs += std::norm(v);
        // no channel: the B_ofdm energy bound applies with beta = ||S* g||^2 = 1
        CHECK(rs <= 0.8 * 1.0 * (1.0 + 1e-3));
    }

    SUBCASE("row equals direct chain inner products") {
        Rng rng(5);
        const ChannelRealization h =
            draw_channel(PowerDelayProfile::default_two_tap(cfg.pulses.tcp_s), rng);
        const ComplexSignal g_kl =
            tf_shift(ofdm_g(cfg.pulses),
                     TFShift{cfg.l_obs * cfg.pulses.symbol_period_s(),
                             cfg.k_obs * cfg.pulses.subcarrier_spacing_hz()});
        const DistortionSpec w(WienerPn(0.2, cfg.l_obs, cfg.pulses.symbol_period_s()));
        // path drawn over a span covering the whole frame so both routes see it
        const GaborSystem tx(ofdm_gamma(cfg.pulses), cfg.pulses.symbol_period_s(),
                             cfg.pulses.subcarrier_spacing_hz(), lat);
        const ComplexSignal frame = synthesize(tx, std::vector<cplx>(lat.size(), cplx(1, 0)));
        const DistortionRealization real =
            draw_distortion(w, frame.t0_s, frame.size() + 64, frame.dt_s, rng);
        const auto row = effective_matrix_row(cfg.pulses, lat, h, real, cfg.k_obs, cfg.l_obs);
        for (int m : {-1, 0, 2})
            for (int n : {1, 2, 3}) {
                const ComplexSignal chain =
                    apply_distortion(real, apply_channel(h, tx.pulse(m, n)));
                const cplx direct = inner(g_kl, chain);
                CHECK(std::abs(row[lat.index(m, n)] - direct) < 1e-10);
            }
    }
}

TEST_CASE("per-realization energy conservation with the transmit Bessel bound") {
    // sum_row |H|^2 <= B_gamma ||H* S* g||^2 (1 + slack), B_gamma = 2 eps
    SimConfig cfg = small_config(3);
    cfg.pdp = PowerDelayProfile::default_two_tap(cfg.pulses.tcp_s);
    Rng rng(9);
    const GaborSystem tx(ofdm_gamma(cfg.pulses), cfg.pulses.symbol_period_s(),
                         cfg.pulses.subcarrier_spacing_hz(), cfg.lattice);
    const ComplexSignal g_kl =
        tf_shift(ofdm_g(cfg.pulses), TFShift{cfg.l_obs * cfg.pulses.symbol_period_s(),
                                             cfg.k_obs * cfg.pulses.subcarrier_spacing_hz()});
    for (int i = 0; i < 100; ++i) {
        const ChannelRealization h = draw_channel(*cfg.pdp, rng);
        DistortionSpec spec;
        if (i % 2 == 0)
            spec = Offset{std::round(rng.uniform(0, cfg.pulses.tcp_s / 4) / cfg.pulses.dt_s()) *
                              cfg.pulses.dt_s(),
                          rng.uniform(-0.3, 0.3) / cfg.pulses.tu_s};
        else
            spec = WienerPn(0.1 / cfg.pulses.tu_s, cfg.l_obs, cfg.pulses.symbol_period_s());
        const DistortionRealization real =
            draw_distortion(spec, g_kl.t0_s, g_kl.size(), g_kl.dt_s, rng);
        const ComplexSignal f = apply_channel_adjoint(h, apply_distortion_adjoint(real, g_kl));
        std::vector<cplx> row = analyze(tx, f);
        double rs = 0.0;
        for (const cplx& v : row) rs += std::norm(v);
        CHECK(rs <= 2.0 * 0.8 * f.energy() * (1.0 + 1e-3));
    }
}

TEST_CASE("lattice truncation slack: doubling the lattice adds < 1e-3 relative") {
    const OfdmPulses p = OfdmPulses::from_eps(1.0, 0.8, 256);
    const LatticeRect small = LatticeRect::centered(33, 17);
    const LatticeRect big(-32, 32, -8, 24);  // doubled span, same center slot
    const int k_obs = 0, l_obs = 8;
    const GaborSystem tx_s(ofdm_gamma(p), p.symbol_period_s(), p.subcarrier_spacing_hz(), small);
    const GaborSystem tx_b(ofdm_gamma(p), p.symbol_period_s(), p.subcarrier_spacing_hz(), big);
    const ComplexSignal g_kl = tf_shift(
        ofdm_g(p), TFShift{l_obs * p.symbol_period_s(), k_obs * p.subcarrier_spacing_hz()});
    const PowerDelayProfile pdp = PowerDelayProfile::default_two_tap(p.tcp_s);
    Rng rng(77);
    for (int i = 0; i < 10; ++i) {
        const ChannelRealization h = draw_channel(pdp, rng);
        const DistortionRealization off{Offset{0.0, rng.uniform(-0.4, 0.4) / p.tu_s}, std::nullopt};
        const ComplexSignal f = apply_channel_adjoint(h, apply_distortion_adjoint(off, g_kl));
        auto sum_rows = [&](const GaborSystem& tx) {
            double rs = 0.0;
            for (const cplx& v : analyze(tx, f)) rs += std::norm(v);
            return rs;
        };
        const double s_small = sum_rows(tx_s), s_big = sum_rows(tx_b);
        CHECK(s_big >= s_small - 1e-12);
        CHECK((s_big - s_small) / s_small < 1e-3);
    }
}

TEST_CASE("estimate_moments") {
    SUBCASE("deterministic offset: zero distortion variance, exact sinr") {
        SimConfig cfg = small_config(4);
        cfg.distortion = Offset{0.0, 0.1 / cfg.pulses.tu_s};
        cfg.sigma2 = 0.05;
        cfg.trials = 32;
        const SimResult r = estimate_moments(cfg);
        CHECK(r.delta_var == doctest::Approx(0.0));
        CHECK(r.sinr_hat == doctest::Approx(r.SINR_hat).epsilon(1e-12));
        // no channel: sinr >= the closed-form bound (deterministic here)
        const SinrBound b = offset_sinr_nochannel(cfg.pulses, 0.0, 0.1 / cfg.pulses.tu_s,
                                                  cfg.sigma2, 0.8);
        CHECK(r.sinr_hat >= b.value - 1e-9);
    }

    SUBCASE("distortion-free: empirical SINR equals eps/sigma2") {
        SimConfig cfg = small_config(5);
        cfg.distortion = Offset{0.0, 0.0};
        cfg.sigma2 = 0.08;
        cfg.trials = 32;
        const SimResult r = estimate_moments(cfg);
        CHECK(r.SINR_hat == doctest::Approx(0.8 / 0.08).epsilon(1e-6));
        CHECK(r.mse == doctest::Approx(cfg.sigma2 / 0.8).epsilon(1e-9));
    }

    SUBCASE("wiener: empirical sinr respects the closed-form bound") {
        SimConfig cfg = small_config(6);
        cfg.distortion = WienerPn(0.1 / cfg.pulses.tu_s, cfg.l_obs, cfg.pulses.symbol_period_s());
        cfg.sigma2 = 0.08;
        cfg.trials = 60;
        cfg.paths_per_trial = 8;
        const SimResult r = estimate_moments(cfg);
        const SinrBound b = wiener_pn_sinr_ofdm(0.8, 0.1, 0, cfg.sigma2);
        CHECK(r.sinr_hat + 3.0 * r.sinr_se >= b.value);
        CHECK(r.delta_var > 0.0);
        CHECK(r.second_moment_H >= std::norm(r.mean_H));
    }
}

TEST_CASE("determinism: identical config gives identical results") {
    SimConfig cfg = small_config(77);
    cfg.distortion = WienerPn(0.2 / cfg.pulses.tu_s, cfg.l_obs, cfg.pulses.symbol_period_s());
    cfg.pdp = PowerDelayProfile::default_two_tap(cfg.pulses.tcp_s);
    cfg.sigma2 = 0.1;
    cfg.trials = 40;
    cfg.paths_per_trial = 3;
    const SimResult a = estimate_moments(cfg);
    const SimResult b = estimate_moments(cfg);
    CHECK(a.mean_H == b.mean_H);
    CHECK(a.second_moment_H == b.second_moment_H);
    CHECK(a.ici_power == b.ici_power);
    CHECK(a.sinr_hat == b.sinr_hat);
    CHECK(a.SINR_hat == b.SINR_hat);
    CHECK(a.mse == b.mse);

    const SerResult sa = run_ser(cfg);
    const SerResult sb = run_ser(cfg);
    CHECK(sa.n_errors == sb.n_errors);
    CHECK(sa.mse == sb.mse);
}

TEST_CASE("run_ser") {
    SUBCASE("noise-free, distortion-free: zero errors, mse at rounding level") {
        SimConfig cfg = small_config(8);
        cfg.sigma2 = 0.0;
        cfg.trials = 4;
        const SerResult r = run_ser(cfg);
        CHECK(r.n_errors == 0);
        CHECK(r.mse <= 1e-12);
    }

    SUBCASE("awgn slot snr: ser matches Q(sqrt(2 snr))") {
        SimConfig cfg = small_config(9);
        const double snr = std::pow(10.0, 0.4);  // 4 dB
        cfg.sigma2 = 0.8 / snr;
        cfg.trials = 400;  // frames; 5 interior carriers x 1 interior symbol each
        const SerResult r = run_ser(cfg);
        const double want = q_function(std::sqrt(2.0 * snr));
        const double se = std::sqrt(want * (1.0 - want) / static_cast<double>(r.n_symbols));
        CHECK(std::abs(r.ser - want) < 4.0 * se + 1e-12);
    }

    SUBCASE("row-based conditional mse agrees with the transmitted-data mse") {
        SimConfig cfg = small_config(10);
        cfg.distortion = Offset{0.0, 0.1 / cfg.pulses.tu_s};
        cfg.sigma2 = 0.05;
        cfg.trials = 200;
        const SimResult mo = estimate_moments(cfg);
        const SerResult se = run_ser(cfg);
        CHECK(se.mse == doctest::Approx(mo.mse).epsilon(0.08));
    }
}

TEST_CASE("q_function") {
    CHECK(q_function(0.0) == doctest::Approx(0.5));
    CHECK(q_function(40.0) == doctest::Approx(0.0));
    CHECK(q_function(1.2815515) == doctest::Approx(0.1).epsilon(1e-6));
    for (double x : {0.3, 1.0, 2.5, 5.0, 7.5})
        CHECK(q_function(x) == doctest::Approx(oracles::q_by_quadrature(x)).epsilon(1e-9));
}
