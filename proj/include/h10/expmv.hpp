#pragma once

/**
 * @file expmv.hpp
 * @brief exp(-i tau H) v for a Hermitian operator given only as a matvec,
 *        by Chebyshev expansion over a known spectral interval.
 *
 * With H' = (H - c)/r mapping [lo, hi] onto [-1, 1],
 *   exp(-i tau H) = e^{-i tau c} [J_0(tau r) + 2 sum_k (-i)^k J_k(tau r) T_k(H')].
 * Past k = tau r the coefficients decay faster than geometrically, so the
 * cost is about tau r + O((tau r)^{1/3}) matvecs and the truncation error
 * can be pushed to rounding level at little extra cost.
 */

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace h10 {

struct ExpmvOptions {
    /// Series is cut once k > tau r and 2|J_k(tau r)| falls below this. The
    /// truncation error is also the per-step norm error, which accumulates
    /// over long runs, so the default sits near rounding.
    double tolerance = 1e-15;
};

struct ExpmvStats {
    std::size_t matvecs = 0;
    std::size_t calls = 0;
};

/**
 * J_0(x) .. J_K(x) for x >= 0, with K the first order past x at which
 * |J_K| < tol. Miller's backward recurrence, normalized by
 * J_0 + 2 sum J_{2k} = 1.
 */
inline std::vector<double> bessel_j_sequence(double x, double tol) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw std::invalid_argument("bessel_j_sequence needs finite x >= 0");
    if (x == 0.0) return {1.0};
    // J_k is below 1e-20 for k beyond x + 15 x^{1/3} + 20 (Airy transition region).
    const auto start = static_cast<std::size_t>(std::ceil(x + 15.0 * std::cbrt(x) + 40.0)) | 1u;
    std::vector<double> j(start + 2, 0.0);
    j[start + 1] = 0.0;
    j[start] = 1e-300;
    for (std::size_t k = start; k >= 1; --k) {
        j[k - 1] = (2.0 * static_cast<double>(k) / x) * j[k] - j[k + 1];
        if (std::abs(j[k - 1]) > 1e250) {
            for (std::size_t i = k - 1; i <= start; ++i) j[i] *= 1e-250;
        }
    }
    double norm = j[0];
    for (std::size_t k = 2; k <= start; k += 2) norm += 2.0 * j[k];
    for (auto& v : j) v /= norm;

    std::size_t last = 0;
    while (last + 1 < j.size() && !(static_cast<double>(last) > x && std::abs(j[last]) < tol)) ++last;
    j.resize(last + 1);
    return j;
}

/**
 * Propagate `v` by exp(-i tau H), where the spectrum of H lies in [lo, hi].
 * `matvec(in, out)` must write H*in to out.
 */
template <class MatVec>
Eigen::VectorXcd chebyshev_expmv(MatVec&& matvec, const Eigen::VectorXcd& v, double tau, double lo, double hi,
                                 const ExpmvOptions& opt = {}, ExpmvStats* stats = nullptr) {
    if (!(hi >= lo)) throw std::invalid_argument("chebyshev_expmv needs lo <= hi");
    if (stats) ++stats->calls;
    using C = std::complex<double>;
    const double c = 0.5 * (hi + lo);
    // A zero-width interval would make H' singular; widen it slightly.
    const double r = std::max(0.5 * (hi - lo), 1e-12 * std::max(1.0, std::abs(c)));
    const auto coef = bessel_j_sequence(std::abs(tau) * r, 0.5 * opt.tolerance);
    const C minus_i(0.0, tau >= 0.0 ? -1.0 : 1.0);

    // Three-term recurrence T_{k+1} = 2 H' T_k - T_{k-1}, with H' = (H - c)/r.
    Eigen::VectorXcd prev = v;
    Eigen::VectorXcd cur(v.size());
    Eigen::VectorXcd hv(v.size());
    Eigen::VectorXcd next(v.size());
    Eigen::VectorXcd acc = coef[0] * v;
    if (coef.size() > 1) {
        matvec(prev, hv);
        if (stats) ++stats->matvecs;
        cur = (hv - c * prev) / r;
        acc += (2.0 * coef[1]) * minus_i * cur;
    }
    C phase = minus_i;
    for (std::size_t k = 2; k < coef.size(); ++k) {
        matvec(cur, hv);
        if (stats) ++stats->matvecs;
        next.noalias() = (2.0 / r) * (hv - c * cur) - prev;
        prev.swap(cur);
        cur.swap(next);
        phase *= minus_i;
        acc += (2.0 * coef[k]) * phase * cur;
    }
    return std::polar(1.0, -tau * c) * acc;
}

}  // namespace h10
