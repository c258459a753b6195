// SPDX-License-Identifier: Apache-2.0
//
// gabormc - pulse-shaped multicarrier interference bounds and simulation

#include "gabormc/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <thread>

namespace gabormc {

SimConfig SimConfig::make(OfdmPulses p, LatticeRect lat) {
    SimConfig cfg{std::move(p), lat, std::nullopt, std::nullopt, Offset{0.0, 0.0}};
    cfg.k_obs = (lat.m_min + lat.m_max) / 2;
    cfg.l_obs = (lat.n_min + lat.n_max) / 2;
    return cfg;
}

void SimConfig::validate() const {
    if (trials < 1) throw std::invalid_argument("SimConfig: trials must be >= 1");
    if (paths_per_trial < 1) throw std::invalid_argument("SimConfig: paths_per_trial must be >= 1");
    if (sigma2 < 0.0) throw std::invalid_argument("SimConfig: sigma2 must be >= 0");
    if (pdp && fixed_channel)
        throw std::invalid_argument("SimConfig: give either a pdp or a fixed channel, not both");
    if (k_obs - lattice.m_min < 2 || lattice.m_max - k_obs < 2 || l_obs - lattice.n_min < 2 ||
        lattice.n_max - l_obs < 2)
        throw std::invalid_argument("SimConfig: observed slot needs 2 guard slots to every side");
}

namespace detail {

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    unsigned workers = std::thread::hardware_concurrency();
    if (const char* env = std::getenv("GABORMC_WORKERS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) workers = static_cast<unsigned>(v);
    }
    if (workers > 16) workers = 16;
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();
}

}  // namespace detail

ComplexSignal distorted_receive_pulse(const OfdmPulses& p, const ChannelRealization& h,
                                      const DistortionRealization& s, int k, int l) {
    const ComplexSignal g_kl = tf_shift(
        ofdm_g(p), TFShift{l * p.symbol_period_s(), k * p.subcarrier_spacing_hz()});
    return apply_channel_adjoint(h, apply_distortion_adjoint(s, g_kl));
}

std::vector<cplx> effective_matrix_row(const OfdmPulses& p, const LatticeRect& lat,
                                       const ChannelRealization& h,
                                       const DistortionRealization& s, int k, int l) {
    const ComplexSignal f = distorted_receive_pulse(p, h, s, k, l);
    const GaborSystem tx(ofdm_gamma(p), p.symbol_period_s(), p.subcarrier_spacing_hz(), lat);
    std::vector<cplx> row = analyze(tx, f);  // <gamma_mn, f>
    for (cplx& v : row) v = std::conj(v);    // H_{kl,mn} = <f, gamma_mn>
    return row;
}

namespace {

// residual mean gain after ZF, used for the mean-tracking phase reference
cplx residual_mean(const SimConfig& cfg, const ChannelRealization& h, const cplx& hk) {
    const cplx md = mean_diagonal(cfg.distortion, cfg.pulses, h, cfg.k_obs, cfg.l_obs);
    return md / (std::sqrt(cfg.pulses.eps()) * hk);
}

TrialRecord run_one_trial(const SimConfig& cfg, std::uint64_t trial_index) {
    Rng rng(trial_seed(cfg.seed, trial_index));
    const ChannelRealization h = cfg.fixed_channel ? *cfg.fixed_channel
                                 : cfg.pdp         ? draw_channel(*cfg.pdp, rng)
                                                   : ChannelRealization::identity();
    const GaborSystem tx(ofdm_gamma(cfg.pulses), cfg.pulses.symbol_period_s(),
                         cfg.pulses.subcarrier_spacing_hz(), cfg.lattice);
    const ComplexSignal g_kl =
        tf_shift(ofdm_g(cfg.pulses), TFShift{cfg.l_obs * cfg.pulses.symbol_period_s(),
                                             cfg.k_obs * cfg.pulses.subcarrier_spacing_hz()});
    const std::size_t diag = cfg.lattice.index(cfg.k_obs, cfg.l_obs);
    const bool stochastic = !std::holds_alternative<Offset>(cfg.distortion);
    const int paths = stochastic ? cfg.paths_per_trial : 1;

    TrialRecord rec{};
    rec.channel = h;
    rec.hk = freq_response(h, cfg.k_obs * cfg.pulses.subcarrier_spacing_hz());
    rec.excluded = std::abs(rec.hk) < 1e-12;

    const cplx zf = rec.excluded ? cplx(0, 0) : 1.0 / (std::sqrt(cfg.pulses.eps()) * rec.hk);
    cplx track_rot(1.0, 0.0);
    if (cfg.tracking == Tracking::Mean && !rec.excluded) {
        const cplx u = residual_mean(cfg, h, rec.hk);
        if (std::abs(u) > 0.0) track_rot = std::conj(u) / std::abs(u);
    }

    std::vector<cplx> Hs(static_cast<std::size_t>(paths));
    double ici = 0.0, row_sum = 0.0, adj_energy = 0.0, mse = 0.0;
    for (int pth = 0; pth < paths; ++pth) {
        const DistortionRealization real =
            draw_distortion(cfg.distortion, g_kl.t0_s, g_kl.size(), g_kl.dt_s, rng);
        const ComplexSignal f = apply_channel_adjoint(h, apply_distortion_adjoint(real, g_kl));
        adj_energy += f.energy();
        std::vector<cplx> row = analyze(tx, f);
        for (cplx& v : row) v = std::conj(v);
        const cplx Hkk = row[diag];
        Hs[static_cast<std::size_t>(pth)] = Hkk;
        double rs = 0.0;
        for (const cplx& v : row) rs += std::norm(v);
        row_sum += rs;
        const double ici_p = rs - std::norm(Hkk);
        ici += ici_p;
        if (!rec.excluded) {
            cplx c = zf * track_rot;
            if (cfg.tracking == Tracking::PerSlot && std::abs(Hkk) > 0.0)
                c = zf * std::conj(zf * Hkk) / std::abs(zf * Hkk);
            mse += std::norm(c * Hkk - 1.0) + std::norm(c) * (ici_p + cfg.sigma2);
        }
    }
    const double inv = 1.0 / static_cast<double>(paths);
    rec.ici = ici * inv;
    rec.row_sum = row_sum * inv;
    rec.adj_energy = adj_energy * inv;
    rec.mse = rec.excluded ? std::numeric_limits<double>::quiet_NaN() : mse * inv;

    cplx mh(0, 0);
    double second = 0.0;
    for (const cplx& v : Hs) {
        mh += v;
        second += std::norm(v);
    }
    mh *= inv;
    second *= inv;
    rec.mean_H = mh;
    rec.second_H = second;
    if (paths > 1) {
        double s2 = 0.0;
        for (const cplx& v : Hs) s2 += std::norm(v - mh);
        rec.delta_var = s2 / static_cast<double>(paths - 1);
        rec.mean_sq_unbiased = std::norm(mh) - rec.delta_var * inv;
    } else {
        rec.delta_var = 0.0;
        rec.mean_sq_unbiased = std::norm(mh);
    }
    return rec;
}

}  // namespace

std::vector<TrialRecord> run_trials(const SimConfig& cfg) {
    cfg.validate();
    std::vector<TrialRecord> out(static_cast<std::size_t>(cfg.trials));
    detail::parallel_for(out.size(), [&](std::size_t i) {
        out[i] = run_one_trial(cfg, static_cast<std::uint64_t>(i));
    });
    return out;
}

namespace {

// batch-means standard error of a ratio statistic over trial records
template <typename NumF, typename DenF>
double batch_se_ratio(const std::vector<TrialRecord>& recs, NumF num, DenF den, double base) {
    const std::size_t n = recs.size();
    const std::size_t nb = std::min<std::size_t>(20, n);
    if (nb < 2 || n < 30) return std::numeric_limits<double>::quiet_NaN();
    std::vector<double> vals;
    vals.reserve(nb);
    for (std::size_t b = 0; b < nb; ++b) {
        const std::size_t i0 = b * n / nb, i1 = (b + 1) * n / nb;
        double ns = 0.0, ds = 0.0;
        for (std::size_t i = i0; i < i1; ++i) {
            ns += num(recs[i]);
            ds += den(recs[i]);
        }
        const double cnt = static_cast<double>(i1 - i0);
        vals.push_back(ns / cnt / (base + ds / cnt));
    }
    double m = 0.0;
    for (double v : vals) m += v;
    m /= static_cast<double>(vals.size());
    double s = 0.0;
    for (double v : vals) s += (v - m) * (v - m);
    s /= static_cast<double>(vals.size() - 1);
    return std::sqrt(s / static_cast<double>(vals.size()));
}

}  // namespace

SimResult estimate_moments(const SimConfig& cfg) { return estimate_moments(cfg, run_trials(cfg)); }

SimResult estimate_moments(const SimConfig& cfg, const std::vector<TrialRecord>& recs) {
    SimResult r{};
    r.seed = cfg.seed;
    r.trials = cfg.trials;
    r.paths_per_trial = cfg.paths_per_trial;
    const double n = static_cast<double>(recs.size());
    cplx mh(0, 0);
    double second = 0.0, dvar = 0.0, ici = 0.0, num = 0.0, mse = 0.0;
    long mse_n = 0;
    for (const TrialRecord& t : recs) {
        mh += t.mean_H;
        second += t.second_H;
        dvar += t.delta_var;
        ici += t.ici;
        num += t.mean_sq_unbiased;
        if (!t.excluded) {
            mse += t.mse;
            ++mse_n;
        } else {
            ++r.excluded_trials;
        }
    }
    r.mean_H = mh / n;
    r.second_moment_H = second / n;
    r.delta_var = dvar / n;
    r.ici_power = ici / n;
    r.sinr_hat = (num / n) / (cfg.sigma2 + r.ici_power + r.delta_var);
    r.SINR_hat = r.second_moment_H / (cfg.sigma2 + r.ici_power);
    r.mse = mse_n > 0 ? mse / static_cast<double>(mse_n) : std::numeric_limits<double>::quiet_NaN();

    r.sinr_se = batch_se_ratio(
        recs, [](const TrialRecord& t) { return t.mean_sq_unbiased; },
        [](const TrialRecord& t) { return t.ici + t.delta_var; }, cfg.sigma2);
    r.SINR_se = batch_se_ratio(
        recs, [](const TrialRecord& t) { return t.second_H; },
        [](const TrialRecord& t) { return t.ici; }, cfg.sigma2);
    // plain batch means for the mse
    const std::size_t nb = std::min<std::size_t>(20, recs.size());
    if (nb >= 2 && recs.size() >= 30) {
        std::vector<double> vals;
        for (std::size_t b = 0; b < nb; ++b) {
            const std::size_t i0 = b * recs.size() / nb, i1 = (b + 1) * recs.size() / nb;
            double s = 0.0;
            long c = 0;
            for (std::size_t i = i0; i < i1; ++i)
                if (!recs[i].excluded) {
                    s += recs[i].mse;
                    ++c;
                }
            if (c > 0) vals.push_back(s / static_cast<double>(c));
        }
        if (vals.size() >= 2) {
            double m = 0.0;
            for (double v : vals) m += v;
            m /= static_cast<double>(vals.size());
            double s = 0.0;
            for (double v : vals) s += (v - m) * (v - m);
            r.mse_se = std::sqrt(s / static_cast<double>(vals.size() - 1) /
                                 static_cast<double>(vals.size()));
        } else {
            r.mse_se = std::numeric_limits<double>::quiet_NaN();
        }
    } else {
        r.mse_se = std::numeric_limits<double>::quiet_NaN();
    }
    return r;
}

namespace {

struct FrameStats {
    long errors = 0;
    long symbols = 0;
    double mse_sum = 0.0;
    long mse_n = 0;
    int excluded = 0;
};

FrameStats run_one_frame(const SimConfig& cfg, std::uint64_t frame_index) {
    Rng rng(trial_seed(cfg.seed, frame_index));
    const ChannelRealization h = cfg.fixed_channel ? *cfg.fixed_channel
                                 : cfg.pdp         ? draw_channel(*cfg.pdp, rng)
                                                   : ChannelRealization::identity();
    const LatticeRect& lat = cfg.lattice;
    const GaborSystem tx(ofdm_gamma(cfg.pulses), cfg.pulses.symbol_period_s(),
                         cfg.pulses.subcarrier_spacing_hz(), lat);
    const GaborSystem rx(ofdm_g(cfg.pulses), cfg.pulses.symbol_period_s(),
                         cfg.pulses.subcarrier_spacing_hz(), lat);
    const double T = cfg.pulses.symbol_period_s();
    const double F = cfg.pulses.subcarrier_spacing_hz();
    const double se = std::sqrt(cfg.pulses.eps());

    // random BPSK frame
    std::vector<cplx> x(lat.size());
    for (cplx& v : x) v = (rng.next_u64() & 1ULL) ? cplx(1, 0) : cplx(-1, 0);

    ComplexSignal s = synthesize(tx, x);
    s = apply_channel(h, s);
    const DistortionRealization real =
        draw_distortion(cfg.distortion, s.t0_s, s.size(), s.dt_s, rng);
    s = apply_distortion(real, s);
    std::vector<cplx> y = analyze(rx, s);

    const auto* w = std::get_if<WienerPn>(&cfg.distortion);
    FrameStats st;
    for (int l = lat.n_min + 2; l <= lat.n_max - 2; ++l) {
        // per-symbol resynchronization: slot l is corrected by the path phase
        // at its sync instant (l - l_sync) T
        cplx sync(1.0, 0.0);
        if (w && real.path) {
            const int l_ref = std::max(lat.n_min, l - w->l_sync);
            sync = std::polar(1.0, -real.path->phase_at(l_ref * T));
        }
        for (int k = lat.m_min + 2; k <= lat.m_max - 2; ++k) {
            const cplx hk = freq_response(h, k * F);
            if (std::abs(hk) < 1e-12) {
                ++st.excluded;
                continue;
            }
            cplx v = y[lat.index(k, l)] * sync + rng.cnormal(cfg.sigma2);
            cplx c = 1.0 / (se * hk);
            if (cfg.tracking == Tracking::Mean) {
                const cplx md = mean_diagonal(cfg.distortion, cfg.pulses, h, k, l);
                const cplx u = md / (se * hk);
                if (std::abs(u) > 0.0) c *= std::conj(u) / std::abs(u);
            }
            const cplx xeq = c * v;
            const cplx sym = x[lat.index(k, l)];
            const cplx dec = xeq.real() >= 0.0 ? cplx(1, 0) : cplx(-1, 0);
            if (dec != sym) ++st.errors;
            ++st.symbols;
            st.mse_sum += std::norm(xeq - sym);
            ++st.mse_n;
        }
    }
    return st;
}

}  // namespace

SerResult run_ser(const SimConfig& cfg) {
    cfg.validate();
    std::vector<FrameStats> stats(static_cast<std::size_t>(cfg.trials));
    detail::parallel_for(stats.size(), [&](std::size_t i) {
        stats[i] = run_one_frame(cfg, static_cast<std::uint64_t>(i));
    });
    SerResult r{};
    r.seed = cfg.seed;
    double mse = 0.0;
    long mse_n = 0;
    for (const FrameStats& st : stats) {
        r.n_errors += st.errors;
        r.n_symbols += st.symbols;
        mse += st.mse_sum;
        mse_n += st.mse_n;
        r.excluded_slots += st.excluded;
    }
    r.ser = r.n_symbols > 0 ? static_cast<double>(r.n_errors) / static_cast<double>(r.n_symbols)
                            : std::numeric_limits<double>::quiet_NaN();
    r.mse = mse_n > 0 ? mse / static_cast<double>(mse_n) : std::numeric_limits<double>::quiet_NaN();
    // frame-batch standard errors (cluster-robust: errors within a frame share
    // one distortion path)
    const std::size_t nb = std::min<std::size_t>(20, stats.size());
    if (nb >= 2) {
        std::vector<double> pv, mv;
        for (std::size_t b = 0; b < nb; ++b) {
            const std::size_t i0 = b * stats.size() / nb, i1 = (b + 1) * stats.size() / nb;
            long e = 0, s = 0, mn = 0;
            double ms = 0.0;
            for (std::size_t i = i0; i < i1; ++i) {
                e += stats[i].errors;
                s += stats[i].symbols;
                ms += stats[i].mse_sum;
                mn += stats[i].mse_n;
            }
            if (s > 0) pv.push_back(static_cast<double>(e) / static_cast<double>(s));
            if (mn > 0) mv.push_back(ms / static_cast<double>(mn));
        }
        auto se_of = [](const std::vector<double>& v) {
            if (v.size() < 2) return std::numeric_limits<double>::quiet_NaN();
            double m = 0.0;
            for (double x : v) m += x;
            m /= static_cast<double>(v.size());
            double s = 0.0;
            for (double x : v) s += (x - m) * (x - m);
            return std::sqrt(s / static_cast<double>(v.size() - 1) /
                             static_cast<double>(v.size()));
        };
        r.ser_se = se_of(pv);
        r.mse_se = se_of(mv);
    } else {
        r.ser_se = r.mse_se = std::numeric_limits<double>::quiet_NaN();
    }
    return r;
}

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

}  // namespace gabormc
