// SPDX-License-Identifier: Apache-2.0
//
// gabormc - pulse-shaped multicarrier interference bounds and simulation

#pragma once

#include "gabormc/channel.hpp"
#include "gabormc/distortion.hpp"
#include "gabormc/signal.hpp"

namespace gabormc {

/// A lower bound value. When the interference bound swallows the whole
/// signal power the denominator turns non-positive and the bound carries no
/// information; it is reported as +inf with the vacuous flag set rather than
/// clamped.
struct SinrBound {
    double value;
    bool vacuous;
};

/// Moment inputs of the generic interference theorem.
/// signal_mean_sq = |<H_kl>|^2, signal_second_moment = <|H_kl|^2>,
/// beta = channel bound beta_kl (or ||p_h||_1 in channel average),
/// bessel = B_gamma (or B_ofdm).
struct BoundInputs {
    double bessel;
    double sigma2;
    double signal_mean_sq;
    double signal_second_moment;
    double beta;

    void validate() const;  // nonnegativity and moment ordering
};

/// sinr: mean-only tracking; SINR: ideal per-slot tracking of H_kl,kl.
struct BoundReport {
    SinrBound sinr_lower;   // |<H>|^2 / (sigma2 + B beta - |<H>|^2)
    SinrBound SINR_lower;   // <|H|^2> / (sigma2 + B beta - <|H|^2>)
    double ici_upper;       // B beta - <|H|^2>
};

BoundReport theorem1(const BoundInputs& in);

/// CP fold: tau for tau<=0, 0 inside the prefix, tau-Tcp beyond it.
double cp_fold(double tau_s, double tcp_s);

/// Closed-form cp-OFDM cross ambiguity <g, S_{tau,nu} gamma>:
/// sqrt(eps) sin(pi nu (Tu-|c|))/(pi nu Tu) e^{i(phi0 + pi nu c)} on
/// c = cp_fold(tau) in [-Tu,Tu], zero outside, phi0 = pi nu Tu - 2 pi nu t0.
/// (The phase uses the signed fold; verified against the numeric inner
/// product, which fixes the sign for tau >= Tcp.)
cplx ofdm_ambiguity(const OfdmPulses& p, double tau_s, double nu_hz);

/// sin(pi x)/(pi x)
double sinc(double x);

// ---- time-frequency offsets ----

/// No-channel offset bound |A(d,nu)|^2 / (sigma2 + B - |A(d,nu)|^2).
SinrBound offset_sinr_nochannel(const OfdmPulses& p, double d_s, double nu_hz, double sigma2,
                                double bessel);
/// Same for general pulse pairs via the numeric ambiguity.
SinrBound offset_sinr_nochannel(const ComplexSignal& g, const ComplexSignal& gamma, double d_s,
                                double nu_hz, double sigma2, double bessel);

/// Channel-average offset bound sinc^2(nuhat) / (sigma2/(eps ||p||_1) + 1 -
/// sinc^2(nuhat)). Requires cp_fold(tau_d + d) == 0 (delay spread plus time
/// offset inside the CP); otherwise throws and the general Corollary path
/// applies.
SinrBound offset_sinr_channel_avg(const OfdmPulses& p, const PowerDelayProfile& pdp, double d_s,
                                  double nu_hz, double sigma2);

/// Fixed-realization offset bound for slot (k,l):
/// |<S_{0,kF} h, s_kl>|^2 / (sigma2 + B_ofdm beta - |.|^2) with beta from
/// beta_bound_freq_offset.
SinrBound offset_sinr_fixed_channel(const OfdmPulses& p, const ChannelRealization& h, double d_s,
                                    double nu_hz, double sigma2, int k, int l);

/// Moose-style bound snr/(1 + 0.5947 sin^2(pi nuhat) snr), snr = ||p||_1/sigma2.
/// Valid only for nuhat <= 0.5 (throws beyond).
double moose_bound(double nu_hat, double snr);

// ---- Gaussian phase noise ----

SinrBound gaussian_pn_sinr_general(double g_gamma_overlap_sq, double s_phi, double sigma2,
                                   double bessel);
SinrBound gaussian_pn_sinr_ofdm(double eps, double s_phi, double sigma2);
SinrBound gaussian_pn_sinr_ofdm_channel_avg(double eps, double s_phi, double sigma2,
                                            double p1norm);
SinrBound gaussian_pn_sinr_ofdm_fixed(double eps, double s_phi, double sigma2, double hk_abs2,
                                      double beta);

// ---- Wiener phase noise (rho = S_phidot * Tu) ----

/// <g, thetabar_1 S_{tau,0} gamma> for cp-OFDM:
/// (2 sqrt(eps)/(S Tu)) (1 - e^{-(S/2)(Tu-|c|)}) on c = cp_fold(tau) in [-Tu,Tu].
double wiener_overlap_ofdm(const OfdmPulses& p, double s_phidot, double tau_s);

/// Numeric overlap for general pulse pairs; the closed Wiener forms assume
/// receiver pulses supported within one symbol period starting at the sync
/// instant, so that is enforced here.
double wiener_overlap_general(const ComplexSignal& g, const ComplexSignal& gamma, double s_phidot,
                              double symbol_period_s);

SinrBound wiener_pn_sinr_ofdm(double eps, double rho, int l, double sigma2);
SinrBound wiener_pn_sinr_ofdm_channel_avg(double eps, double rho, int l, double sigma2,
                                          double p1norm);
SinrBound wiener_pn_sinr_ofdm_fixed(double eps, double rho, int l, double sigma2, double hk_abs2,
                                    double beta);

/// <|H|^2> = (4 eps / rho^2)(rho - 2 + 2 e^{-rho/2}) under permanent ideal
/// tracking (Lorentzian spectrum integrated against the OFDM sinc^2 kernel).
double wiener_second_moment_ofdm(double eps, double rho);

/// SINR bound with the second moment above, beta = 1, B = eps.
SinrBound wiener_tracking_asymptotic(double rho, double sigma2, double eps);

// ---- Corollary assemblers (generic over the distortion variant) ----

/// s_kl(tau): offset -> e^{i 2 pi (nu l T - d k F)} A(tau+d, nu);
/// Gaussian pn -> e^{-S_phi/2} A(tau, 0);
/// Wiener pn -> e^{(S T/2)(l_sync - l)} <g, thetabar_1 S_tau gamma>.
cplx skl(const DistortionSpec& spec, const OfdmPulses& p, int k, int l, double tau_s);

/// <S_{0,kF} h, s_kl> = sum_j h_j e^{-i 2 pi k F tau_j} s_kl(tau_j).
cplx mean_diagonal(const DistortionSpec& spec, const OfdmPulses& p, const ChannelRealization& h,
                   int k, int l);

/// <p_h, |s_kl|^2> = sum_j p_j |s_kl(tau_j)|^2.
double pdp_skl_second_moment(const DistortionSpec& spec, const OfdmPulses& p,
                             const PowerDelayProfile& pdp, int k, int l);

/// |<S_{0,kF}h, s_kl>|^2 / (sigma2 + B beta - |.|^2)
SinrBound corollary1_fixed(const DistortionSpec& spec, const OfdmPulses& p,
                           const ChannelRealization& h, int k, int l, double sigma2, double bessel,
                           double beta);

/// <p,|s_kl|^2> / (sigma2 + B ||p||_1 - <p,|s_kl|^2>)
SinrBound corollary1_channel_avg(const DistortionSpec& spec, const OfdmPulses& p,
                                 const PowerDelayProfile& pdp, int k, int l, double sigma2,
                                 double bessel);

/// Bound-derived symbol MSE prediction for ZF (division by sqrt(eps) hhat(kF))
/// plus mean tracking at slot (k,l):
///   (1 - |<H>|/(sqrt(eps)|hhat|))^2 + (sigma2 + B_ofdm beta - |<H>|^2)/(eps |hhat|^2)
/// with beta from beta_bound_freq_offset for offsets and beta_bound_general
/// otherwise. Returns +inf on a ZF singularity.
double mse_prediction(const DistortionSpec& spec, const OfdmPulses& p,
                      const ChannelRealization& h, int k, int l, double sigma2);

namespace detail {
SinrBound ratio_bound(double num, double den);
}

}  // namespace gabormc
