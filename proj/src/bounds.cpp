// SPDX-License-Identifier: Apache-2.0
//
// gabormc - pulse-shaped multicarrier interference bounds and simulation

#include "gabormc/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "gabormc/gabor.hpp"

namespace gabormc {

namespace detail {
SinrBound ratio_bound(double num, double den) {
    if (den <= 0.0) return {std::numeric_limits<double>::infinity(), true};
    return {num / den, false};
}
}  // namespace detail

void BoundInputs::validate() const {
    if (bessel < 0.0 || sigma2 < 0.0 || signal_mean_sq < 0.0 || signal_second_moment < 0.0 ||
        beta < 0.0)
        throw std::invalid_argument("BoundInputs: negative input");
    const double tol = 1e-9 * (1.0 + signal_second_moment);
    if (signal_mean_sq > signal_second_moment + tol)
        throw std::invalid_argument("BoundInputs: |<H>|^2 exceeds <|H|^2>");
    if (signal_second_moment > bessel * beta + tol)
        throw std::invalid_argument("BoundInputs: <|H|^2> exceeds B*beta");
}

BoundReport theorem1(const BoundInputs& in) {
    in.validate();
    const double bb = in.bessel * in.beta;
    BoundReport r;
    r.SINR_lower = detail::ratio_bound(in.signal_second_moment,
                                       in.sigma2 + bb - in.signal_second_moment);
    r.sinr_lower = detail::ratio_bound(in.signal_mean_sq, in.sigma2 + bb - in.signal_mean_sq);
    r.ici_upper = bb - in.signal_second_moment;
    return r;
}

double cp_fold(double tau_s, double tcp_s) {
    if (tau_s <= 0.0) return tau_s;
    if (tau_s < tcp_s) return 0.0;
    return tau_s - tcp_s;
}

double sinc(double x) {
    if (x == 0.0) return 1.0;
    const double px = M_PI * x;
    return std::sin(px) / px;
}

cplx ofdm_ambiguity(const OfdmPulses& p, double tau_s, double nu_hz) {
    const double c = cp_fold(tau_s, p.tcp_s);
    if (std::abs(c) > p.tu_s) return cplx(0, 0);
    const double phi0 = M_PI * nu_hz * p.tu_s - 2.0 * M_PI * nu_hz * p.t0_s;
    const double x = M_PI * nu_hz;
    const double width = p.tu_s - std::abs(c);
    const double ratio = (x == 0.0) ? width / p.tu_s : std::sin(x * width) / (x * p.tu_s);
    return std::sqrt(p.eps()) * ratio * std::polar(1.0, phi0 + M_PI * nu_hz * c);
}

// ---- offsets ----

SinrBound offset_sinr_nochannel(const OfdmPulses& p, double d_s, double nu_hz, double sigma2,
                                double bessel) {
    const double a2 = std::norm(ofdm_ambiguity(p, d_s, nu_hz));
    return detail::ratio_bound(a2, sigma2 + bessel - a2);
}

SinrBound offset_sinr_nochannel(const ComplexSignal& g, const ComplexSignal& gamma, double d_s,
                                double nu_hz, double sigma2, double bessel) {
    const double a2 = std::norm(cross_ambiguity(g, gamma, d_s, nu_hz));
    return detail::ratio_bound(a2, sigma2 + bessel - a2);
}

SinrBound offset_sinr_channel_avg(const OfdmPulses& p, const PowerDelayProfile& pdp, double d_s,
                                  double nu_hz, double sigma2) {
    if (cp_fold(pdp.tau_d_s + d_s, p.tcp_s) != 0.0 && pdp.tau_d_s + d_s != 0.0)
        throw std::invalid_argument(
            "offset_sinr_channel_avg: delay spread plus time offset exceeds the cyclic prefix; "
            "use corollary1_channel_avg");
    const double nu_hat = nu_hz * p.tu_s;
    const double s2 = sinc(nu_hat) * sinc(nu_hat);
    return detail::ratio_bound(s2, sigma2 / (p.eps() * pdp.p1norm()) + 1.0 - s2);
}

SinrBound offset_sinr_fixed_channel(const OfdmPulses& p, const ChannelRealization& h, double d_s,
                                    double nu_hz, double sigma2, int k, int l) {
    const DistortionSpec spec = Offset{d_s, nu_hz};
    const double num = std::norm(mean_diagonal(spec, p, h, k, l));
    const ComplexSignal g_kl = tf_shift(
        ofdm_g(p), TFShift{l * p.symbol_period_s(), k * p.subcarrier_spacing_hz()});
    const double beta = beta_bound_freq_offset(h, g_kl, nu_hz);
    const double b = effective_bessel_ofdm(p.eps());
    return detail::ratio_bound(num, sigma2 + b * beta - num);
}

double moose_bound(double nu_hat, double snr) {
    if (nu_hat > 0.5 + 1e-12)
        throw std::domain_error("moose_bound: holds only for normalized offsets <= 0.5");
    const double s = std::sin(M_PI * nu_hat);
    return snr / (1.0 + 0.5947 * s * s * snr);
}

// ---- Gaussian phase noise ----

SinrBound gaussian_pn_sinr_general(double g_gamma_overlap_sq, double s_phi, double sigma2,
                                   double bessel) {
    const double num = g_gamma_overlap_sq;
    return detail::ratio_bound(num, std::exp(s_phi) * (sigma2 + bessel) - num);
}

SinrBound gaussian_pn_sinr_ofdm(double eps, double s_phi, double sigma2) {
    return detail::ratio_bound(1.0, std::exp(s_phi) * (sigma2 / eps + 1.0) - 1.0);
}

SinrBound gaussian_pn_sinr_ofdm_channel_avg(double eps, double s_phi, double sigma2,
                                            double p1norm) {
    return detail::ratio_bound(1.0, std::exp(s_phi) * (sigma2 / (eps * p1norm) + 1.0) - 1.0);
}

SinrBound gaussian_pn_sinr_ofdm_fixed(double eps, double s_phi, double sigma2, double hk_abs2,
                                      double beta) {
    return detail::ratio_bound(hk_abs2, std::exp(s_phi) * (sigma2 / eps + beta) - hk_abs2);
}

// ---- Wiener phase noise ----

double wiener_overlap_ofdm(const OfdmPulses& p, double s_phidot, double tau_s) {
    const double c = cp_fold(tau_s, p.tcp_s);
    if (std::abs(c) > p.tu_s) return 0.0;
    const double width = p.tu_s - std::abs(c);
    const double se = std::sqrt(p.eps());
    if (s_phidot == 0.0) return se * width / p.tu_s;
    // (2 sqrt(eps)/(S Tu)) (1 - e^{-(S/2) width}); expm1 keeps small-S exact
    return se * 2.0 / (s_phidot * p.tu_s) * (-std::expm1(-0.5 * s_phidot * width));
}

double wiener_overlap_general(const ComplexSignal& g, const ComplexSignal& gamma, double s_phidot,
                              double symbol_period_s) {
    const double g_support = static_cast<double>(g.size()) * g.dt_s;
    if (g.t0_s < -1e-12 || g_support > symbol_period_s + 1e-12)
        throw std::domain_error(
            "wiener_overlap_general: receiver pulse must be supported in [0, T) for the "
            "closed-form Wiener bounds");
    ComplexSignal weighted = gamma;
    for (std::size_t i = 0; i < weighted.size(); ++i) {
        const double t = weighted.time(i);
        weighted.samples[i] *= (t >= 0.0) ? std::exp(-0.5 * s_phidot * t) : 0.0;
    }
    return std::abs(inner(g, weighted));
}

namespace {
// rho^2 e^{rho l / eps} / (4 (1-e^{-rho/2})^2)
double wiener_gain_factor(double eps, double rho, int l) {
    if (rho < 0.0 || l < 0) throw std::invalid_argument("wiener bound: need rho >= 0, l >= 0");
    if (rho == 0.0) return 1.0;
    const double d = -std::expm1(-0.5 * rho);
    return rho * rho * std::exp(rho * static_cast<double>(l) / eps) / (4.0 * d * d);
}
}  // namespace

SinrBound wiener_pn_sinr_ofdm(double eps, double rho, int l, double sigma2) {
    const double k = wiener_gain_factor(eps, rho, l);
    return detail::ratio_bound(1.0, k * (sigma2 / eps + 1.0) - 1.0);
}

SinrBound wiener_pn_sinr_ofdm_channel_avg(double eps, double rho, int l, double sigma2,
                                          double p1norm) {
    const double k = wiener_gain_factor(eps, rho, l);
    return detail::ratio_bound(1.0, k * (sigma2 / (eps * p1norm) + 1.0) - 1.0);
}

SinrBound wiener_pn_sinr_ofdm_fixed(double eps, double rho, int l, double sigma2, double hk_abs2,
                                    double beta) {
    const double k = wiener_gain_factor(eps, rho, l);
    return detail::ratio_bound(hk_abs2, k * (sigma2 / eps + beta) - hk_abs2);
}

double wiener_second_moment_ofdm(double eps, double rho) {
    if (rho < 0.0) throw std::invalid_argument("wiener_second_moment_ofdm: rho must be >= 0");
    if (rho == 0.0) return eps;
    const double x = rho + 2.0 * std::expm1(-0.5 * rho);  // rho - 2 + 2 e^{-rho/2}
    return 4.0 * eps / (rho * rho) * x;
}

SinrBound wiener_tracking_asymptotic(double rho, double sigma2, double eps) {
    const double h2 = wiener_second_moment_ofdm(eps, rho);
    return detail::ratio_bound(h2, sigma2 + eps - h2);
}

// ---- Corollary assemblers ----

cplx skl(const DistortionSpec& spec, const OfdmPulses& p, int k, int l, double tau_s) {
    if (const auto* o = std::get_if<Offset>(&spec)) {
        const double ph = 2.0 * M_PI * (o->nu_hz * l * p.symbol_period_s() -
                                        o->d_s * k * p.subcarrier_spacing_hz());
        return std::polar(1.0, ph) * ofdm_ambiguity(p, tau_s + o->d_s, o->nu_hz);
    }
    if (const auto* g = std::get_if<GaussianPn>(&spec))
        return std::exp(-0.5 * g->s_phi) * ofdm_ambiguity(p, tau_s, 0.0);
    const auto& w = std::get<WienerPn>(spec);
    const double decay =
        std::exp(0.5 * w.s_phidot * p.symbol_period_s() * static_cast<double>(w.l_sync - l));
    return cplx(decay * wiener_overlap_ofdm(p, w.s_phidot, tau_s), 0.0);
}

cplx mean_diagonal(const DistortionSpec& spec, const OfdmPulses& p, const ChannelRealization& h,
                   int k, int l) {
    cplx acc(0, 0);
    const double kf = k * p.subcarrier_spacing_hz();
    for (const auto& t : h.taps)
        acc += t.gain * std::polar(1.0, -2.0 * M_PI * kf * t.delay_s) * skl(spec, p, k, l, t.delay_s);
    return acc;
}

double pdp_skl_second_moment(const DistortionSpec& spec, const OfdmPulses& p,
                             const PowerDelayProfile& pdp, int k, int l) {
    double acc = 0.0;
    for (const auto& t : pdp.taps) acc += t.power * std::norm(skl(spec, p, k, l, t.delay_s));
    return acc;
}

SinrBound corollary1_fixed(const DistortionSpec& spec, const OfdmPulses& p,
                           const ChannelRealization& h, int k, int l, double sigma2, double bessel,
                           double beta) {
    const double num = std::norm(mean_diagonal(spec, p, h, k, l));
    return detail::ratio_bound(num, sigma2 + bessel * beta - num);
}

SinrBound corollary1_channel_avg(const DistortionSpec& spec, const OfdmPulses& p,
                                 const PowerDelayProfile& pdp, int k, int l, double sigma2,
                                 double bessel) {
    const double num = pdp_skl_second_moment(spec, p, pdp, k, l);
    return detail::ratio_bound(num, sigma2 + bessel * pdp.p1norm() - num);
}

double mse_prediction(const DistortionSpec& spec, const OfdmPulses& p,
                      const ChannelRealization& h, int k, int l, double sigma2) {
    const double hk2 = std::norm(freq_response(h, k * p.subcarrier_spacing_hz()));
    if (hk2 < 1e-24) return std::numeric_limits<double>::infinity();
    const double eps = p.eps();
    double beta;
    if (const auto* o = std::get_if<Offset>(&spec)) {
        const ComplexSignal g_kl = tf_shift(
            ofdm_g(p), TFShift{l * p.symbol_period_s(), k * p.subcarrier_spacing_hz()});
        beta = beta_bound_freq_offset(h, g_kl, o->nu_hz);
    } else {
        beta = beta_bound_general(h).value;
    }
    const double mean2 = std::norm(mean_diagonal(spec, p, h, k, l));
    const double b = effective_bessel_ofdm(eps);
    const double amp = 1.0 - std::sqrt(mean2 / (eps * hk2));
    return amp * amp + (sigma2 + b * beta - mean2) / (eps * hk2);
}

}  // namespace gabormc
