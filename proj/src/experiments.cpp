// SPDX-License-Identifier: Apache-2.0
//
// gabormc - pulse-shaped multicarrier interference bounds and simulation

#include "gabormc/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>

#include "gabormc/bounds.hpp"
#include "gabormc/montecarlo.hpp"

namespace gabormc::experiments {

using nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;
constexpr const char* kBuildId = "gabormc-0.1.0";
constexpr double kZ95 = 1.6448536269514722;  // one-sided 95% normal quantile

// ---- config helpers ----

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& ctx) {
    if (!obj.is_object()) throw ConfigError(ctx + ": expected an object");
    std::string unknown;
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key())) unknown += (unknown.empty() ? "" : ", ") + it.key();
    if (!unknown.empty()) throw ConfigError(ctx + ": unknown keys: " + unknown);
}

double need_num(const json& obj, const std::string& key, const std::string& ctx) {
    if (!obj.contains(key)) throw ConfigError(ctx + ": missing key '" + key + "'");
    if (!obj[key].is_number()) throw ConfigError(ctx + ": '" + key + "' must be a number");
    const double v = obj[key].get<double>();
    if (!std::isfinite(v)) throw ConfigError(ctx + ": '" + key + "' must be finite");
    return v;
}

double opt_num(const json& obj, const std::string& key, double dflt) {
    return obj.contains(key) ? obj[key].get<double>() : dflt;
}

long need_int(const json& obj, const std::string& key, const std::string& ctx) {
    if (!obj.contains(key)) throw ConfigError(ctx + ": missing key '" + key + "'");
    if (!obj[key].is_number_integer()) throw ConfigError(ctx + ": '" + key + "' must be an integer");
    return obj[key].get<long>();
}

// linear grid: {"start","stop","step"} or {"start","stop","points"} or a
// plain array of values; rejects empty/partial/non-finite grids
std::vector<double> parse_grid(const json& g, const std::string& ctx) {
    std::vector<double> out;
    if (g.is_array()) {
        for (const auto& v : g) {
            if (!v.is_number() || !std::isfinite(v.get<double>()))
                throw ConfigError(ctx + ": grid values must be finite numbers");
            out.push_back(v.get<double>());
        }
    } else if (g.is_object()) {
        check_keys(g, {"start", "stop", "step", "points", "log10_start", "log10_stop"}, ctx);
        if (g.contains("log10_start") || g.contains("log10_stop")) {
            const double a = need_num(g, "log10_start", ctx);
            const double b = need_num(g, "log10_stop", ctx);
            const long n = need_int(g, "points", ctx);
            if (n < 1) throw ConfigError(ctx + ": grid needs at least one point");
            for (long i = 0; i < n; ++i)
                out.push_back(std::pow(10.0, n == 1 ? a : a + (b - a) * static_cast<double>(i) /
                                                                 static_cast<double>(n - 1)));
        } else {
            const double a = need_num(g, "start", ctx);
            const double b = need_num(g, "stop", ctx);
            if (g.contains("step") == g.contains("points"))
                throw ConfigError(ctx + ": grid needs exactly one of 'step' or 'points'");
            if (g.contains("step")) {
                const double s = need_num(g, "step", ctx);
                if (s <= 0.0 || b < a) throw ConfigError(ctx + ": bad grid range");
                const long n = static_cast<long>(std::floor((b - a) / s + 1e-9));
                for (long i = 0; i <= n; ++i) out.push_back(a + s * static_cast<double>(i));
            } else {
                const long n = need_int(g, "points", ctx);
                if (n < 1) throw ConfigError(ctx + ": grid needs at least one point");
                for (long i = 0; i < n; ++i)
                    out.push_back(n == 1 ? a : a + (b - a) * static_cast<double>(i) /
                                                   static_cast<double>(n - 1));
            }
        }
    } else {
        throw ConfigError(ctx + ": grid must be an object or array");
    }
    if (out.empty()) throw ConfigError(ctx + ": empty grid");
    return out;
}

OfdmPulses parse_pulses(const json& cfg) {
    if (!cfg.contains("pulses")) throw ConfigError("config: missing 'pulses'");
    const json& p = cfg["pulses"];
    check_keys(p, {"tu_s", "tcp_s", "eps", "ns", "t0_s"}, "pulses");
    const double tu = need_num(p, "tu_s", "pulses");
    const int ns = static_cast<int>(need_int(p, "ns", "pulses"));
    const double t0 = opt_num(p, "t0_s", 0.0);
    if (p.contains("eps") == p.contains("tcp_s"))
        throw ConfigError("pulses: give exactly one of 'eps' or 'tcp_s'");
    if (p.contains("eps")) return OfdmPulses::from_eps(tu, need_num(p, "eps", "pulses"), ns, t0);
    return OfdmPulses(tu, need_num(p, "tcp_s", "pulses"), ns, t0);
}

PowerDelayProfile parse_pdp(const json& arr, const std::string& ctx) {
    if (!arr.is_array() || arr.empty()) throw ConfigError(ctx + ": pdp must be a non-empty array");
    std::vector<PowerDelayProfile::Tap> taps;
    double tau_d = 0.0;
    for (const auto& t : arr) {
        check_keys(t, {"delay_s", "power"}, ctx + ".pdp");
        taps.push_back({need_num(t, "delay_s", ctx), need_num(t, "power", ctx)});
        tau_d = std::max(tau_d, taps.back().delay_s);
    }
    return PowerDelayProfile(std::move(taps), tau_d);
}

ChannelRealization parse_channel_taps(const json& arr, const std::string& ctx) {
    if (!arr.is_array() || arr.empty())
        throw ConfigError(ctx + ": channel_taps must be a non-empty array");
    std::vector<ChannelRealization::Tap> taps;
    double tau_d = 0.0;
    for (const auto& t : arr) {
        check_keys(t, {"delay_s", "gain_re", "gain_im"}, ctx + ".channel_taps");
        taps.push_back({need_num(t, "delay_s", ctx),
                        cplx(need_num(t, "gain_re", ctx), opt_num(t, "gain_im", 0.0))});
        tau_d = std::max(tau_d, taps.back().delay_s);
    }
    return ChannelRealization(std::move(taps), tau_d);
}

DistortionSpec parse_distortion(const json& d, const OfdmPulses& p) {
    check_keys(d, {"type", "d_s", "nu_hz", "s_phi", "s_phidot", "l_sync"}, "distortion");
    const std::string type = d.contains("type") ? d["type"].get<std::string>() : "";
    if (type == "offset")
        return Offset{opt_num(d, "d_s", 0.0), opt_num(d, "nu_hz", 0.0)};
    if (type == "gaussian_pn") return GaussianPn{need_num(d, "s_phi", "distortion")};
    if (type == "wiener_pn")
        return WienerPn(need_num(d, "s_phidot", "distortion"),
                        static_cast<int>(d.contains("l_sync") ? need_int(d, "l_sync", "distortion") : 0),
                        p.symbol_period_s());
    throw ConfigError("distortion: type must be offset | gaussian_pn | wiener_pn");
}

// ---- CSV / manifest ----

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& cols)
        : f_(std::fopen(path.string().c_str(), "wb")) {
        if (f_ == nullptr) throw ConfigError("cannot open output file " + path.string());
        for (std::size_t i = 0; i < cols.size(); ++i)
            std::fprintf(f_, "%s%s", cols[i].c_str(), i + 1 < cols.size() ? "," : "\n");
    }
    ~CsvWriter() {
        if (f_ != nullptr) std::fclose(f_);
    }
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    // full double precision; empty cells for disengaged values
    void row(const std::vector<std::optional<double>>& vals) {
        for (std::size_t i = 0; i < vals.size(); ++i) {
            if (vals[i]) std::fprintf(f_, "%.17g", *vals[i]);
            std::fputc(i + 1 < vals.size() ? ',' : '\n', f_);
        }
    }

private:
    std::FILE* f_;
};

void write_manifest(const std::filesystem::path& dir, const json& config,
                    const std::vector<std::string>& files) {
    json m;
    m["schema_version"] = kSchemaVersion;
    m["build_id"] = kBuildId;
    m["experiment"] = config.value("experiment", "");
    m["seed"] = config.value("seed", 0);
    m["config"] = config;
    m["files"] = files;
    const auto now = std::chrono::system_clock::now();
    m["created_unix_s"] =
        std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
    std::ofstream out(dir / "manifest.json");
    out << m.dump(2) << "\n";
}

double to_db(double x) { return 10.0 * std::log10(x); }

std::string fmt_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

// ---- experiment runners ----

struct RunOutput {
    std::vector<std::string> files;
    bool violation = false;
};

RunOutput run_offset_bounds(const json& cfg, const OfdmPulses& p,
                            const std::filesystem::path& dir) {
    const json& par = cfg["parameters"];
    check_keys(par, {"nu_hat_grid", "snr_db", "p1norm"}, "parameters");
    const std::vector<double> grid = parse_grid(par["nu_hat_grid"], "nu_hat_grid");
    if (!par.contains("snr_db")) throw ConfigError("parameters: missing 'snr_db'");
    const std::vector<double> snrs = parse_grid(par["snr_db"], "snr_db");
    const double p1 = opt_num(par, "p1norm", 1.0);
    const PowerDelayProfile pdp({{0.0, p1}}, 0.0);

    RunOutput out;
    for (double snr_db : snrs) {
        const double snr = std::pow(10.0, snr_db / 10.0);  // ||p||_1 / sigma2
        const double sigma2 = p1 / snr;
        const std::string name = "offset_bounds_snr" + fmt_num(snr_db) + "db.csv";
        CsvWriter csv(dir / name,
                      {"nu_hat", "sinr_bound", "sinr_bound_db", "moose_bound", "moose_bound_db",
                       "vacuous"});
        for (double nu_hat : grid) {
            const SinrBound b = offset_sinr_channel_avg(p, pdp, 0.0, nu_hat / p.tu_s, sigma2);
            std::optional<double> moose, moose_db;
            if (nu_hat <= 0.5 + 1e-12) {
                const double m = moose_bound(nu_hat, snr);
                moose = m;
                moose_db = to_db(m);
            }
            csv.row({nu_hat, b.vacuous ? std::nullopt : std::optional<double>(b.value),
                     b.vacuous ? std::nullopt : std::optional<double>(to_db(b.value)), moose,
                     moose_db, b.vacuous ? 1.0 : 0.0});
        }
        out.files.push_back(name);
    }
    return out;
}

RunOutput run_pn_bounds(const json& cfg, const OfdmPulses& p, const std::filesystem::path& dir) {
    const json& par = cfg["parameters"];
    check_keys(par, {"rho_grid", "l_values", "sigma2_over_eps", "include_asymptotic"},
               "parameters");
    const std::vector<double> rhos = parse_grid(par["rho_grid"], "rho_grid");
    std::vector<long> ls;
    if (!par.contains("l_values")) throw ConfigError("parameters: missing 'l_values'");
    for (const auto& v : par["l_values"]) ls.push_back(v.get<long>());
    const double s2e = need_num(par, "sigma2_over_eps", "parameters");
    const double eps = p.eps();
    const double sigma2 = s2e * eps;

    RunOutput out;
    for (long l : ls) {
        const std::string name = "pn_bounds_l" + std::to_string(l) + ".csv";
        CsvWriter csv(dir / name, {"rho", "sinr_bound", "sinr_bound_db", "vacuous"});
        for (double rho : rhos) {
            const SinrBound b = wiener_pn_sinr_ofdm(eps, rho, static_cast<int>(l), sigma2);
            csv.row({rho, b.vacuous ? std::nullopt : std::optional<double>(b.value),
                     b.vacuous ? std::nullopt : std::optional<double>(to_db(b.value)),
                     b.vacuous ? 1.0 : 0.0});
        }
        out.files.push_back(name);
    }
    if (par.value("include_asymptotic", true)) {
        const std::string name = "pn_bounds_asymptotic.csv";
        CsvWriter csv(dir / name, {"rho", "SINR_bound", "SINR_bound_db", "vacuous"});
        for (double rho : rhos) {
            const SinrBound b = wiener_tracking_asymptotic(rho, sigma2, eps);
            csv.row({rho, b.vacuous ? std::nullopt : std::optional<double>(b.value),
                     b.vacuous ? std::nullopt : std::optional<double>(to_db(b.value)),
                     b.vacuous ? 1.0 : 0.0});
        }
        out.files.push_back(name);
    }
    return out;
}

RunOutput run_bessel(const json& cfg, const OfdmPulses& p, const std::filesystem::path& dir) {
    const json& par = cfg["parameters"];
    check_keys(par, {"eps_values", "lattice_m", "lattice_n", "symbol_points"}, "parameters");
    std::vector<double> epss;
    if (par.contains("eps_values"))
        for (const auto& v : par["eps_values"]) epss.push_back(v.get<double>());
    else
        epss.push_back(p.eps());
    const int lm = static_cast<int>(opt_num(par, "lattice_m", 64));
    const int ln = static_cast<int>(opt_num(par, "lattice_n", 64));
    const long spts = static_cast<long>(opt_num(par, "symbol_points", 1000));

    RunOutput out;
    {
        CsvWriter csv(dir / "bessel.csv",
                      {"eps", "lattice_m", "lattice_n", "bessel_numeric", "bessel_symbol_sup",
                       "b_ofdm"});
        for (double eps : epss) {
            const OfdmPulses pe = OfdmPulses::from_eps(p.tu_s, eps, p.ns, p.t0_s);
            const GaborSystem sys(ofdm_gamma(pe), pe.symbol_period_s(),
                                  pe.subcarrier_spacing_hz(), LatticeRect::centered(lm, ln));
            double sup = 0.0;
            for (long i = 0; i < spts; ++i)
                sup = std::max(sup, cp_toeplitz_symbol(eps, (static_cast<double>(i) + 0.5) /
                                                                static_cast<double>(spts)));
            csv.row({eps, static_cast<double>(lm), static_cast<double>(ln),
                     bessel_bound_numeric(sys), sup, effective_bessel_ofdm(eps)});
        }
        out.files.push_back("bessel.csv");
    }
    for (double eps : epss) {
        const std::string name = "cp_symbol_eps" + fmt_num(eps) + ".csv";
        CsvWriter csv(dir / name, {"omega", "phi"});
        for (long i = 0; i < spts; ++i) {
            const double w = (static_cast<double>(i) + 0.5) / static_cast<double>(spts);
            csv.row({w, cp_toeplitz_symbol(eps, w)});
        }
        out.files.push_back(name);
    }
    return out;
}

RunOutput run_ambiguity(const json& cfg, const OfdmPulses& p, const std::filesystem::path& dir) {
    const json& par = cfg["parameters"];
    check_keys(par, {"tau_grid_s", "nu_grid_hz"}, "parameters");
    std::vector<double> taus = parse_grid(par["tau_grid_s"], "tau_grid_s");
    const std::vector<double> nus = parse_grid(par["nu_grid_hz"], "nu_grid_hz");
    const ComplexSignal g = ofdm_g(p);
    const ComplexSignal gam = ofdm_gamma(p);
    // snap time offsets to the sample grid
    for (double& t : taus) t = std::round(t / p.dt_s()) * p.dt_s();

    CsvWriter csv(dir / "ambiguity.csv", {"tau_s", "nu_hz", "a_re", "a_im", "a_abs",
                                          "a_numeric_re", "a_numeric_im", "abs_err"});
    for (double tau : taus)
        for (double nu : nus) {
            const cplx a = ofdm_ambiguity(p, tau, nu);
            const cplx an = cross_ambiguity(g, gam, tau, nu);
            csv.row({tau, nu, a.real(), a.imag(), std::abs(a), an.real(), an.imag(),
                     std::abs(a - an)});
        }
    return {{"ambiguity.csv"}, false};
}

// closed-form bound for the configured chain, at the observed slot
SinrBound simulate_bound(const SimConfig& sc, const DistortionSpec& spec) {
    const double eps = sc.pulses.eps();
    const double b = effective_bessel_ofdm(eps);
    if (sc.pdp) return corollary1_channel_avg(spec, sc.pulses, *sc.pdp, sc.k_obs, sc.l_obs,
                                              sc.sigma2, b);
    if (sc.fixed_channel) {
        double beta;
        if (const auto* o = std::get_if<Offset>(&spec)) {
            const ComplexSignal g_kl =
                tf_shift(ofdm_g(sc.pulses), TFShift{sc.l_obs * sc.pulses.symbol_period_s(),
                                                    sc.k_obs * sc.pulses.subcarrier_spacing_hz()});
            beta = beta_bound_freq_offset(*sc.fixed_channel, g_kl, o->nu_hz);
        } else {
            beta = beta_bound_general(*sc.fixed_channel).value;
        }
        return corollary1_fixed(spec, sc.pulses, *sc.fixed_channel, sc.k_obs, sc.l_obs, sc.sigma2,
                                b, beta);
    }
    return corollary1_fixed(spec, sc.pulses, ChannelRealization::identity(), sc.k_obs, sc.l_obs,
                            sc.sigma2, b, 1.0);
}

RunOutput run_simulate(const json& cfg, const OfdmPulses& p, const std::filesystem::path& dir,
                       bool verify) {
    const json& par = cfg["parameters"];
    check_keys(par,
               {"distortion", "sweep", "pdp", "channel_taps", "snr_db", "sigma2", "trials",
                "paths_per_trial", "lattice_m", "lattice_n"},
               "parameters");
    if (!par.contains("distortion")) throw ConfigError("parameters: missing 'distortion'");

    const int lm = static_cast<int>(opt_num(par, "lattice_m", 33));
    const int ln = static_cast<int>(opt_num(par, "lattice_n", 17));
    SimConfig sc = SimConfig::make(p, LatticeRect::centered(lm, ln));
    sc.seed = cfg.value("seed", 0);
    sc.trials = static_cast<int>(opt_num(par, "trials", 1000));
    sc.paths_per_trial = static_cast<int>(opt_num(par, "paths_per_trial", 1));
    if (sc.trials < 1) {
        // validation-only run (degenerate input)
        throw ConfigError("parameters: trials must be >= 1");
    }
    if (par.contains("pdp")) sc.pdp = parse_pdp(par["pdp"], "parameters");
    if (par.contains("channel_taps"))
        sc.fixed_channel = parse_channel_taps(par["channel_taps"], "parameters");
    const double p1 = sc.pdp            ? sc.pdp->p1norm()
                      : sc.fixed_channel ? sc.fixed_channel->gain_energy()
                                         : 1.0;
    if (par.contains("snr_db") == par.contains("sigma2"))
        throw ConfigError("parameters: give exactly one of 'snr_db' (slot snr) or 'sigma2'");
    // slot snr = eps ||p||_1 / sigma2
    sc.sigma2 = par.contains("sigma2")
                    ? need_num(par, "sigma2", "parameters")
                    : p.eps() * p1 / std::pow(10.0, need_num(par, "snr_db", "parameters") / 10.0);

    const DistortionSpec base = parse_distortion(par["distortion"], p);
    std::string sweep_key = "none";
    std::vector<double> sweep_vals{0.0};
    if (par.contains("sweep")) {
        check_keys(par["sweep"], {"key", "values"}, "sweep");
        sweep_key = par["sweep"]["key"].get<std::string>();
        sweep_vals = parse_grid(par["sweep"]["values"], "sweep.values");
    }

    RunOutput out;
    CsvWriter csv(dir / "simulate.csv",
                  {"param", "sinr_emp", "sinr_se", "sinr_bound", "bound_vacuous", "SINR_emp",
                   "ici_emp", "mse_emp", "mse_se", "mse_pred_mean", "mse_diff", "mse_diff_se",
                   "excluded_trials"});
    out.files.push_back("simulate.csv");

    for (double v : sweep_vals) {
        DistortionSpec spec = base;
        if (sweep_key == "nu_hz") std::get<Offset>(spec).nu_hz = v;
        else if (sweep_key == "d_s") std::get<Offset>(spec).d_s = v;
        else if (sweep_key == "s_phi") std::get<GaussianPn>(spec).s_phi = v;
        else if (sweep_key == "s_phidot")
            spec = WienerPn(v, std::get<WienerPn>(base).l_sync, p.symbol_period_s());
        else if (sweep_key != "none")
            throw ConfigError("sweep.key must be nu_hz | d_s | s_phi | s_phidot");
        sc.distortion = spec;

        const std::vector<TrialRecord> recs = run_trials(sc);
        const SimResult res = estimate_moments(sc, recs);
        const SinrBound bound = simulate_bound(sc, spec);

        // per-realization prediction and one-sided mse check
        double pred_mean = 0.0, diff_mean = 0.0, diff_m2 = 0.0;
        long n_ok = 0;
        for (const TrialRecord& t : recs) {
            if (t.excluded) continue;
            const double pred =
                mse_prediction(spec, sc.pulses, t.channel, sc.k_obs, sc.l_obs, sc.sigma2);
            pred_mean += pred;
            const double d = t.mse - pred;
            ++n_ok;
            const double delta = d - diff_mean;
            diff_mean += delta / static_cast<double>(n_ok);
            diff_m2 += delta * (d - diff_mean);
        }
        pred_mean = n_ok > 0 ? pred_mean / static_cast<double>(n_ok)
                             : std::numeric_limits<double>::quiet_NaN();
        const double diff_se =
            n_ok > 1 ? std::sqrt(diff_m2 / static_cast<double>(n_ok - 1) / static_cast<double>(n_ok))
                     : std::numeric_limits<double>::quiet_NaN();

        if (verify && !bound.vacuous) {
            const double slack = std::isnan(res.sinr_se) ? 0.0 : kZ95 * res.sinr_se;
            if (res.sinr_hat + slack < bound.value) out.violation = true;
            if (n_ok > 1 && std::isfinite(diff_se) && diff_mean > kZ95 * diff_se)
                out.violation = true;
        }
        csv.row({v, res.sinr_hat, res.sinr_se,
                 bound.vacuous ? std::nullopt : std::optional<double>(bound.value),
                 bound.vacuous ? 1.0 : 0.0, res.SINR_hat, res.ici_power, res.mse, res.mse_se,
                 pred_mean, diff_mean, diff_se, static_cast<double>(res.excluded_trials)});
    }
    return out;
}

RunOutput run_ser_experiment(const json& cfg, const OfdmPulses& p,
                             const std::filesystem::path& dir, bool verify) {
    const json& par = cfg["parameters"];
    check_keys(par,
               {"snr_db_values", "distortion", "pdp", "channel_taps", "n_symbols", "lattice_m",
                "lattice_n"},
               "parameters");
    if (!par.contains("snr_db_values")) throw ConfigError("parameters: missing 'snr_db_values'");
    const std::vector<double> snrs = parse_grid(par["snr_db_values"], "snr_db_values");
    const long n_symbols = static_cast<long>(opt_num(par, "n_symbols", 100000));
    const int lm = static_cast<int>(opt_num(par, "lattice_m", 33));
    const int ln = static_cast<int>(opt_num(par, "lattice_n", 17));

    SimConfig sc = SimConfig::make(p, LatticeRect::centered(lm, ln));
    sc.seed = cfg.value("seed", 0);
    sc.distortion = par.contains("distortion") ? parse_distortion(par["distortion"], p)
                                               : DistortionSpec(Offset{0.0, 0.0});
    if (par.contains("pdp")) sc.pdp = parse_pdp(par["pdp"], "parameters");
    if (par.contains("channel_taps"))
        sc.fixed_channel = parse_channel_taps(par["channel_taps"], "parameters");
    const double p1 = sc.pdp            ? sc.pdp->p1norm()
                      : sc.fixed_channel ? sc.fixed_channel->gain_energy()
                                         : 1.0;
    const long interior = static_cast<long>(lm - 4) * static_cast<long>(ln - 4);
    sc.trials = static_cast<int>((n_symbols + interior - 1) / interior);

    RunOutput out;
    CsvWriter csv(dir / "ser.csv", {"snr_db", "ser", "ser_se", "n_symbols", "n_errors",
                                    "ser_predicted", "mse", "mse_se", "excluded_slots"});
    out.files.push_back("ser.csv");
    const double eps = p.eps();
    for (double snr_db : snrs) {
        const double snr = std::pow(10.0, snr_db / 10.0);  // slot snr = eps ||p||_1 / sigma2
        sc.sigma2 = eps * p1 / snr;
        const SerResult r = run_ser(sc);
        double pred;
        if (const auto* w = std::get_if<WienerPn>(&sc.distortion); w != nullptr && w->s_phidot > 0.0) {
            const SinrBound b = wiener_pn_sinr_ofdm(eps, w->s_phidot * p.tu_s, 0, sc.sigma2);
            pred = b.vacuous ? 1.0 : q_function(std::sqrt(2.0 * b.value));
        } else {
            pred = q_function(std::sqrt(2.0 * snr));
        }
        if (verify && !std::isnan(r.ser_se)) {
            // one-sided: measured rate must not significantly exceed the prediction
            if (r.ser - kZ95 * r.ser_se > pred) out.violation = true;
        }
        csv.row({snr_db, r.ser, r.ser_se, static_cast<double>(r.n_symbols),
                 static_cast<double>(r.n_errors), pred, r.mse, r.mse_se,
                 static_cast<double>(r.excluded_slots)});
    }
    return out;
}

}  // namespace

void apply_override(json& cfg, const std::string& assignment) {
    const std::size_t eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("override must look like key.path=value: " + assignment);
    const std::string path = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    json val;
    try {
        val = json::parse(raw);
    } catch (const json::parse_error&) {
        val = raw;  // plain string
    }
    json* node = &cfg;
    std::size_t pos = 0;
    for (;;) {
        const std::size_t dot = path.find('.', pos);
        const std::string key = path.substr(pos, dot == std::string::npos ? dot : dot - pos);
        if (key.empty()) throw ConfigError("bad override path: " + path);
        if (dot == std::string::npos) {
            (*node)[key] = val;
            return;
        }
        node = &(*node)[key];
        pos = dot + 1;
    }
}

Status run(const json& config, const std::string& out_dir, bool verify) {
    check_keys(config, {"schema_version", "experiment", "seed", "output_dir", "pulses",
                        "parameters"},
               "config");
    if (config.contains("schema_version") &&
        config["schema_version"].get<int>() != kSchemaVersion)
        throw ConfigError("config: unsupported schema_version");
    if (!config.contains("experiment")) throw ConfigError("config: missing 'experiment'");
    const std::string exp = config["experiment"].get<std::string>();
    const OfdmPulses p = parse_pulses(config);
    if (!config.contains("parameters")) throw ConfigError("config: missing 'parameters'");

    const std::filesystem::path dir = out_dir.empty()
        ? std::filesystem::path(config.value("output_dir", "."))
        : std::filesystem::path(out_dir);
    std::filesystem::create_directories(dir);

    RunOutput out;
    if (exp == "offset_bounds") out = run_offset_bounds(config, p, dir);
    else if (exp == "pn_bounds") out = run_pn_bounds(config, p, dir);
    else if (exp == "bessel") out = run_bessel(config, p, dir);
    else if (exp == "ambiguity") out = run_ambiguity(config, p, dir);
    else if (exp == "simulate") out = run_simulate(config, p, dir, verify);
    else if (exp == "ser") out = run_ser_experiment(config, p, dir, verify);
    else throw ConfigError("config: unknown experiment '" + exp + "'");

    write_manifest(dir, config, out.files);
    return out.violation ? Status::BoundViolation : Status::Ok;
}

int run_cli(const std::string& config_path, const std::vector<std::string>& overrides,
            const std::string& out_dir_override, bool verify) {
    try {
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "error: cannot read config file " << config_path << "\n";
            return static_cast<int>(Status::UsageError);
        }
        json cfg = json::parse(in);
        for (const std::string& ov : overrides) apply_override(cfg, ov);
        return static_cast<int>(run(cfg, out_dir_override, verify));
    } catch (const json::parse_error& e) {
        std::cerr << "error: config is not valid JSON: " << e.what() << "\n";
        return static_cast<int>(Status::UsageError);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(Status::UsageError);
    }
}

}  // namespace gabormc::experiments
