// SPDX-License-Identifier: Apache-2.0
//
// gabormc - pulse-shaped multicarrier interference bounds and simulation

#pragma once

#include <complex>
#include <vector>

namespace gabormc {

using cplx = std::complex<double>;

/// Uniformly sampled complex baseband signal. Sample i sits at t0_s + i*dt_s.
/// Continuous-time formulas are discretized with left-endpoint (half-open
/// interval) Riemann sums: energy() = sum |x_i|^2 * dt approximates the L2
/// norm squared.
struct ComplexSignal {
    std::vector<cplx> samples;
    double dt_s = 1.0;  // sample interval, > 0
    double t0_s = 0.0;  // time of samples[0]

    ComplexSignal() = default;
    ComplexSignal(std::vector<cplx> s, double dt, double t0);

    std::size_t size() const { return samples.size(); }
    double time(std::size_t i) const { return t0_s + static_cast<double>(i) * dt_s; }
    double energy() const;
    double norm() const;
};

/// Time-frequency shift (S_{tau,nu} f)(t) = f(t - tau) e^{i 2 pi nu t}.
struct TFShift {
    double tau_s = 0.0;
    double nu_hz = 0.0;
};

/// cp-OFDM prototype geometry. Useful part Tu, cyclic prefix Tcp, ns samples
/// per Tu (so dt = Tu/ns). eps = Tu/(Tu+Tcp) is the bandwidth efficiency,
/// T = Tu+Tcp the symbol period and F = 1/Tu the subcarrier spacing.
struct OfdmPulses {
    double tu_s;
    double tcp_s;
    int ns;
    double t0_s = 0.0;  // time origin: pulses are 1_{[a,b)}(t + t0)

    OfdmPulses(double tu, double tcp, int ns_, double t0 = 0.0);
    static OfdmPulses from_eps(double tu, double eps, int ns_, double t0 = 0.0);

    double eps() const { return tu_s / (tu_s + tcp_s); }
    double symbol_period_s() const { return tu_s + tcp_s; }  // T
    double subcarrier_spacing_hz() const { return 1.0 / tu_s; }  // F
    double dt_s() const { return tu_s / ns; }
    int ncp() const;  // samples in the cyclic prefix
};

/// Transmit prototype gamma = (Tu+Tcp)^{-1/2} 1_{[-Tcp,Tu)}(t + t0),
/// renormalized to unit discrete energy (a no-op up to rounding with the
/// half-open convention).
ComplexSignal ofdm_gamma(const OfdmPulses& p);

/// Receive prototype g = Tu^{-1/2} 1_{[0,Tu)}(t + t0), unit discrete energy.
ComplexSignal ofdm_g(const OfdmPulses& p);

/// S_{tau,nu} f. tau must be an integer multiple of dt unless interpolate is
/// set, in which case a band-limited (FFT phase-ramp) fractional delay is
/// used. The on-grid path is exactly unitary.
ComplexSignal tf_shift(const ComplexSignal& f, const TFShift& s, bool interpolate = false);

/// <f, g> = sum conj(f) g dt over the overlapping support (conjugate-linear
/// in the first argument). Signals must share dt and have grid-aligned t0.
cplx inner(const ComplexSignal& f, const ComplexSignal& g);

/// Cross ambiguity A_{g,gamma}(tau, nu) = <g, S_{tau,nu} gamma>.
cplx cross_ambiguity(const ComplexSignal& g, const ComplexSignal& gamma,
                     double tau_s, double nu_hz, bool interpolate = false);

namespace detail {
// grid index offset of g relative to f; throws if dt mismatch or misaligned
std::ptrdiff_t grid_offset(const ComplexSignal& f, const ComplexSignal& g);
// in-place radix-2 FFT (sign = -1 forward), n a power of two
void fft_pow2(std::vector<cplx>& a, int sign);
}  // namespace detail

}  // namespace gabormc
