// SPDX-License-Identifier: Apache-2.0
//
// gabormc - pulse-shaped multicarrier interference bounds and simulation

#include "gabormc/gabor.hpp"

#include <cmath>
#include <string>

#include "gabormc/rng.hpp"

namespace gabormc {

GaborSystem::GaborSystem(ComplexSignal proto, double T, double F, LatticeRect lat)
    : prototype(std::move(proto)), step_t_s(T), step_f_hz(F), lattice(lat) {
    if (step_t_s <= 0.0 || step_f_hz <= 0.0)
        throw std::invalid_argument("GaborSystem: lattice steps must be > 0");
    const double steps = step_t_s / prototype.dt_s;
    if (std::abs(steps - std::round(steps)) > 1e-9)
        throw std::invalid_argument("GaborSystem: T must be an integer number of samples");
    if (std::abs(prototype.norm() - 1.0) > 1e-6)
        throw std::invalid_argument("GaborSystem: prototype must be unit-norm");
}

ComplexSignal GaborSystem::pulse(int m, int n) const {
    return tf_shift(prototype, TFShift{n * step_t_s, m * step_f_hz});
}

namespace {

// modulated prototypes e^{i 2 pi m F t} p(t - 0) sampled on the prototype grid,
// one row per subcarrier index m
std::vector<std::vector<cplx>> modulated_prototypes(const GaborSystem& sys) {
    const std::size_t len = sys.prototype.size();
    std::vector<std::vector<cplx>> mod(static_cast<std::size_t>(sys.lattice.count_m()));
    for (int m = sys.lattice.m_min; m <= sys.lattice.m_max; ++m) {
        std::vector<cplx>& row = mod[static_cast<std::size_t>(m - sys.lattice.m_min)];
        row.resize(len);
        for (std::size_t j = 0; j < len; ++j)
            row[j] = sys.prototype.samples[j] *
                     std::polar(1.0, 2.0 * M_PI * m * sys.step_f_hz * sys.prototype.time(j));
    }
    return mod;
}

}  // namespace

ComplexSignal synthesize(const GaborSystem& sys, const std::vector<cplx>& x) {
    const LatticeRect& lat = sys.lattice;
    if (x.size() != lat.size())
        throw std::invalid_argument("synthesize: coefficient count does not match lattice");
    const double dt = sys.prototype.dt_s;
    const std::size_t len = sys.prototype.size();
    const std::ptrdiff_t step = static_cast<std::ptrdiff_t>(std::llround(sys.step_t_s / dt));
    const std::size_t total =
        static_cast<std::size_t>(step) * static_cast<std::size_t>(lat.count_n() - 1) + len;
    ComplexSignal out(std::vector<cplx>(total, cplx(0, 0)), dt,
                      lat.n_min * sys.step_t_s + sys.prototype.t0_s);

    const auto mod = modulated_prototypes(sys);
    for (int n = lat.n_min; n <= lat.n_max; ++n) {
        const std::size_t base = static_cast<std::size_t>(step) * static_cast<std::size_t>(n - lat.n_min);
        for (int m = lat.m_min; m <= lat.m_max; ++m) {
            // e^{i 2 pi m F (t + nT)} = e^{i 2 pi m F nT} * modulated row
            const cplx c = x[lat.index(m, n)] *
                           std::polar(1.0, 2.0 * M_PI * m * sys.step_f_hz * n * sys.step_t_s);
            if (c == cplx(0, 0)) continue;
            const std::vector<cplx>& row = mod[static_cast<std::size_t>(m - lat.m_min)];
            for (std::size_t j = 0; j < len; ++j) out.samples[base + j] += c * row[j];
        }
    }
    return out;
}

std::vector<cplx> analyze(const GaborSystem& sys, const ComplexSignal& r) {
    const LatticeRect& lat = sys.lattice;
    const double dt = sys.prototype.dt_s;
    if (std::abs(r.dt_s - dt) > 1e-12 * dt)
        throw std::invalid_argument("analyze: sample interval mismatch");
    const std::size_t len = sys.prototype.size();
    const auto mod = modulated_prototypes(sys);
    std::vector<cplx> out(lat.size(), cplx(0, 0));

    for (int n = lat.n_min; n <= lat.n_max; ++n) {
        // prototype window for symbol n starts at nT + t0 on r's grid
        const double start = n * sys.step_t_s + sys.prototype.t0_s;
        const double steps = (start - r.t0_s) / dt;
        if (std::abs(steps - std::round(steps)) > 1e-6)
            throw std::invalid_argument("analyze: signal not grid-aligned with lattice");
        const std::ptrdiff_t off = static_cast<std::ptrdiff_t>(std::llround(steps));
        const std::ptrdiff_t j0 = std::max<std::ptrdiff_t>(0, -off);
        const std::ptrdiff_t j1 = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(len),
                                                           static_cast<std::ptrdiff_t>(r.size()) - off);
        if (j1 <= j0) continue;
        for (int m = lat.m_min; m <= lat.m_max; ++m) {
            const std::vector<cplx>& row = mod[static_cast<std::size_t>(m - lat.m_min)];
            cplx acc(0, 0);
            for (std::ptrdiff_t j = j0; j < j1; ++j)
                acc += std::conj(row[static_cast<std::size_t>(j)]) *
                       r.samples[static_cast<std::size_t>(j + off)];
            out[lat.index(m, n)] = acc * dt *
                                   std::polar(1.0, -2.0 * M_PI * m * sys.step_f_hz * n * sys.step_t_s);
        }
    }
    return out;
}

namespace {

// Pairwise couplings of the lattice pulses. With the shift algebra
// S*_{a,b} S_{c,d} = e^{-i 2 pi a (b-d)} S_{c-a, d-b} (exact on-grid),
//   <p_kl, p_mn> = e^{i 2 pi l (m-k) T F} A_pp((n-l) T, (m-k) F),
// so entries reduce to the prototype auto-ambiguity plus a row phase.
struct GramCouplings {
    int dk_max;
    int dn_max;
    std::vector<cplx> a;  // A_pp(dn*T, dk*F), index (dn+dn_max)*(2*dk_max+1) + dk+dk_max

    cplx at(int dn, int dk) const {
        return a[static_cast<std::size_t>(dn + dn_max) * static_cast<std::size_t>(2 * dk_max + 1) +
                 static_cast<std::size_t>(dk + dk_max)];
    }
};

GramCouplings compute_couplings(const GaborSystem& sys) {
    GramCouplings c;
    c.dk_max = sys.lattice.count_m() - 1;
    const double support = static_cast<double>(sys.prototype.size()) * sys.prototype.dt_s;
    const int dn_span = static_cast<int>(std::ceil(support / sys.step_t_s));
    c.dn_max = std::min(dn_span, sys.lattice.count_n() - 1);
    c.a.assign(static_cast<std::size_t>(2 * c.dn_max + 1) * static_cast<std::size_t>(2 * c.dk_max + 1),
               cplx(0, 0));
    for (int dn = -c.dn_max; dn <= c.dn_max; ++dn)
        for (int dk = -c.dk_max; dk <= c.dk_max; ++dk)
            c.a[static_cast<std::size_t>(dn + c.dn_max) * static_cast<std::size_t>(2 * c.dk_max + 1) +
                static_cast<std::size_t>(dk + c.dk_max)] =
                cross_ambiguity(sys.prototype, sys.prototype, dn * sys.step_t_s, dk * sys.step_f_hz);
    return c;
}

cplx row_twist(const GaborSystem& sys, int l, int dk) {
    return std::polar(1.0, 2.0 * M_PI * l * dk * sys.step_t_s * sys.step_f_hz);
}

}  // namespace

GramMatrix gram(const GaborSystem& sys) {
    const LatticeRect& lat = sys.lattice;
    const std::size_t sz = lat.size();
    GramMatrix gm{lat, std::vector<cplx>(sz * sz, cplx(0, 0))};
    const GramCouplings c = compute_couplings(sys);
    for (int l = lat.n_min; l <= lat.n_max; ++l)
        for (int k = lat.m_min; k <= lat.m_max; ++k) {
            const std::size_t row = lat.index(k, l);
            for (int n = lat.n_min; n <= lat.n_max; ++n) {
                if (std::abs(n - l) > c.dn_max) continue;
                for (int m = lat.m_min; m <= lat.m_max; ++m)
                    gm.entries[row * sz + lat.index(m, n)] =
                        row_twist(sys, l, m - k) * c.at(n - l, m - k);
            }
        }
    return gm;
}

PowerIterationError::PowerIterationError(double last)
    : std::runtime_error("power iteration did not converge; last estimate " +
                         std::to_string(last)),
      last_estimate(last) {}

double bessel_bound_numeric(const GaborSystem& sys, double rel_tol, int max_iter) {
    const LatticeRect& lat = sys.lattice;
    const std::size_t sz = lat.size();
    const int K = lat.count_m();
    const GramCouplings c = compute_couplings(sys);

    // premultiplied coupling * row twist, per (l, dn, dk)
    const int dk_span = 2 * c.dk_max + 1;
    std::vector<cplx> cw(static_cast<std::size_t>(lat.count_n()) *
                         static_cast<std::size_t>(2 * c.dn_max + 1) * static_cast<std::size_t>(dk_span));
    for (int li = 0; li < lat.count_n(); ++li)
        for (int dn = -c.dn_max; dn <= c.dn_max; ++dn)
            for (int dk = -c.dk_max; dk <= c.dk_max; ++dk)
                cw[(static_cast<std::size_t>(li) * static_cast<std::size_t>(2 * c.dn_max + 1) +
                    static_cast<std::size_t>(dn + c.dn_max)) * static_cast<std::size_t>(dk_span) +
                   static_cast<std::size_t>(dk + c.dk_max)] =
                    row_twist(sys, lat.n_min + li, dk) * c.at(dn, dk);

    auto apply = [&](const std::vector<cplx>& x, std::vector<cplx>& y) {
        for (int li = 0; li < lat.count_n(); ++li)
            for (int ki = 0; ki < K; ++ki) {
                cplx acc(0, 0);
                for (int dn = -c.dn_max; dn <= c.dn_max; ++dn) {
                    const int lj = li + dn;
                    if (lj < 0 || lj >= lat.count_n()) continue;
                    const cplx* w = &cw[(static_cast<std::size_t>(li) *
                                             static_cast<std::size_t>(2 * c.dn_max + 1) +
                                         static_cast<std::size_t>(dn + c.dn_max)) *
                                        static_cast<std::size_t>(dk_span)];
                    const cplx* xr = &x[static_cast<std::size_t>(lj) * static_cast<std::size_t>(K)];
                    const int dk_lo = -ki, dk_hi = K - 1 - ki;
                    for (int dk = dk_lo; dk <= dk_hi; ++dk)
                        acc += w[dk + c.dk_max] * xr[ki + dk];
                }
                y[static_cast<std::size_t>(li) * static_cast<std::size_t>(K) +
                  static_cast<std::size_t>(ki)] = acc;
            }
    };

    // fixed-seed randomized start (documented; keeps the result deterministic)
    Rng rng(0x9E3779B97F4A7C15ULL);
    std::vector<cplx> x(sz), y(sz);
    for (cplx& v : x) v = rng.cnormal();
    double nrm = 0.0;
    for (const cplx& v : x) nrm += std::norm(v);
    nrm = std::sqrt(nrm);
    for (cplx& v : x) v /= nrm;

    double lambda = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        apply(x, y);
        double dot = 0.0, ynorm2 = 0.0;
        for (std::size_t i = 0; i < sz; ++i) {
            dot += (std::conj(x[i]) * y[i]).real();
            ynorm2 += std::norm(y[i]);
        }
        const double prev = lambda;
        lambda = dot;
        if (it > 0 && std::abs(lambda - prev) <= rel_tol * std::abs(lambda)) return lambda;
        const double yn = std::sqrt(ynorm2);
        if (yn == 0.0) return 0.0;
        for (std::size_t i = 0; i < sz; ++i) x[i] = y[i] / yn;
    }
    throw PowerIterationError(lambda);
}

double cp_toeplitz_symbol(double eps, double omega) {
    if (eps <= 0.0 || eps > 1.0) throw std::domain_error("cp_toeplitz_symbol: eps must be in (0,1]");
    if (omega <= 0.0 || omega >= 1.0)
        throw std::domain_error("cp_toeplitz_symbol: omega must be in (0,1)");
    return eps * (std::floor(1.0 / eps - omega) + 1.0);
}

double effective_bessel_ofdm(double eps, bool conservative) {
    if (eps <= 0.0 || eps > 1.0) throw std::domain_error("effective_bessel_ofdm: eps must be in (0,1]");
    return conservative ? 2.0 * eps : eps;
}

}  // namespace gabormc
