// SPDX-License-Identifier: Apache-2.0
//
// gabormc - pulse-shaped multicarrier interference bounds and simulation

#pragma once

#include <stdexcept>
#include <vector>

#include "gabormc/signal.hpp"

namespace gabormc {

/// Rectangular index set m in [m_min,m_max] (subcarriers) x n in
/// [n_min,n_max] (symbols). Flat ordering is row-major over (n, then m):
/// index(m,n) = (n-n_min)*count_m + (m-m_min).
struct LatticeRect {
    int m_min, m_max, n_min, n_max;

    LatticeRect(int m0, int m1, int n0, int n1) : m_min(m0), m_max(m1), n_min(n0), n_max(n1) {
        if (m1 < m0 || n1 < n0) throw std::invalid_argument("LatticeRect: empty range");
    }
    static LatticeRect centered(int count_m, int count_n) {
        return LatticeRect(-(count_m - 1) / 2, count_m - 1 - (count_m - 1) / 2, 0, count_n - 1);
    }
    int count_m() const { return m_max - m_min + 1; }
    int count_n() const { return n_max - n_min + 1; }
    std::size_t size() const {
        return static_cast<std::size_t>(count_m()) * static_cast<std::size_t>(count_n());
    }
    std::size_t index(int m, int n) const {
        return static_cast<std::size_t>(n - n_min) * static_cast<std::size_t>(count_m()) +
               static_cast<std::size_t>(m - m_min);
    }
    bool contains(int m, int n) const {
        return m >= m_min && m <= m_max && n >= n_min && n <= n_max;
    }
};

/// Gabor system: time-frequency shifted copies prototype_{m,n} = S_{nT,mF} p
/// of one prototype pulse on a finite lattice. T must sit on the prototype
/// sample grid.
struct GaborSystem {
    ComplexSignal prototype;
    double step_t_s;   // T
    double step_f_hz;  // F
    LatticeRect lattice;

    GaborSystem(ComplexSignal proto, double T, double F, LatticeRect lat);
    double eps() const { return 1.0 / (step_t_s * step_f_hz); }
    /// S_{nT, mF} prototype
    ComplexSignal pulse(int m, int n) const;
};

/// Dense Gram matrix <p_kl, p_mn> over lattice pairs; rows and columns share
/// the lattice flat ordering.
struct GramMatrix {
    LatticeRect lattice;
    std::vector<cplx> entries;  // row-major, size() x size()

    cplx at(std::size_t row, std::size_t col) const { return entries[row * lattice.size() + col]; }
};

/// s = sum_{mn} x_mn S_{nT,mF} prototype on a grid covering every shifted
/// support. x is indexed by the lattice flat ordering.
ComplexSignal synthesize(const GaborSystem& sys, const std::vector<cplx>& x);

/// x_kl = <p_kl, r> for all lattice points; r is zero-extended outside its
/// support.
std::vector<cplx> analyze(const GaborSystem& sys, const ComplexSignal& r);

GramMatrix gram(const GaborSystem& sys);

struct PowerIterationError : std::runtime_error {
    double last_estimate;
    explicit PowerIterationError(double last);
};

/// Largest Gram eigenvalue (Bessel bound of the truncated system) by power
/// iteration with a matrix-free Gram apply. Deterministic: the start vector
/// comes from a fixed documented seed (0x9E3779B97F4A7C15). Stops when the
/// Rayleigh quotient changes by less than rel_tol relative; throws
/// PowerIterationError after max_iter.
double bessel_bound_numeric(const GaborSystem& sys, double rel_tol = 1e-8, int max_iter = 10000);

/// Toeplitz symbol of the cp-OFDM Gram frequency blocks:
/// phi(omega) = eps (floor(1/eps - omega) + 1), omega in (0,1).
double cp_toeplitz_symbol(double eps, double omega);

/// B_ofdm = eps * B_g = eps (receiver set orthonormal). With conservative set,
/// returns the transmit-set Bessel bound 2*eps valid for arbitrary linear
/// distortions.
double effective_bessel_ofdm(double eps, bool conservative = false);

}  // namespace gabormc
