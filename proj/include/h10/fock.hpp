#pragma once

/**
 * @file fock.hpp
 * @brief Truncated single-mode Fock-space representations of the
 *        Weyl-Heisenberg and su(1,1) algebras, their coherent states, and the
 *        modified Bessel series used to normalize Barut-Girardello states.
 *
 * Energies are in natural units where the infinite-square-well scale
 * hbar^2/(2 m l^2) is 1, so H_isw = diag(n(n+2)).
 */

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string_view>

namespace h10 {

using Complex = std::complex<double>;

enum class AlgebraKind { weyl_heisenberg, su11 };

inline std::string_view to_string(AlgebraKind a) {
    return a == AlgebraKind::su11 ? "su11" : "wh";
}

/// Band structure of a single-mode operator in the number basis.
/// `raising` has its nonzeros on the subdiagonal (row n+1, column n),
/// `lowering` on the superdiagonal.
enum class Structure { diagonal, raising, lowering, general };

inline std::string_view to_string(Structure s) {
    switch (s) {
        case Structure::diagonal: return "diagonal";
        case Structure::raising: return "raising";
        case Structure::lowering: return "lowering";
        case Structure::general: return "general";
    }
    return "general";
}

inline void require_mode_dim(std::size_t d) {
    if (d < 2) throw std::invalid_argument("mode dimension must be at least 2");
}

/// d x d complex operator on one truncated mode. Construction checks that the
/// entries respect the declared band.
class ModeOperator {
public:
    ModeOperator(Eigen::MatrixXcd entries, Structure structure)
        : m_(std::move(entries)), structure_(structure) {
        if (m_.rows() != m_.cols()) throw std::invalid_argument("mode operator must be square");
        require_mode_dim(dim());
        for (Eigen::Index r = 0; r < m_.rows(); ++r) {
            for (Eigen::Index c = 0; c < m_.cols(); ++c) {
                if (!in_band(r, c) && m_(r, c) != Complex(0.0)) {
                    throw std::invalid_argument("entry outside the declared band");
                }
            }
        }
    }

    std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
    Structure structure() const noexcept { return structure_; }
    const Eigen::MatrixXcd& matrix() const noexcept { return m_; }
    Complex operator()(std::size_t row, std::size_t col) const { return m_(row, col); }

    ModeOperator adjoint() const {
        Structure s = structure_;
        if (s == Structure::raising) s = Structure::lowering;
        else if (s == Structure::lowering) s = Structure::raising;
        return ModeOperator(m_.adjoint(), s);
    }

    Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const { return m_ * v; }

private:
    bool in_band(Eigen::Index r, Eigen::Index c) const {
        switch (structure_) {
            case Structure::diagonal: return r == c;
            case Structure::raising: return r == c + 1;
            case Structure::lowering: return c == r + 1;
            case Structure::general: return true;
        }
        return true;
    }

    Eigen::MatrixXcd m_;
    Structure structure_;
};

/// Amplitudes of a single-mode state. Truncated coherent states are not
/// renormalized unless asked, so tail_mass() reports what the cut lost.
struct ModeState {
    Eigen::VectorXcd amps;

    std::size_t dim() const noexcept { return static_cast<std::size_t>(amps.size()); }
    double norm_squared() const { return amps.squaredNorm(); }
    double tail_mass() const { return 1.0 - norm_squared(); }

    static ModeState basis(std::size_t n, std::size_t d) {
        require_mode_dim(d);
        if (n >= d) throw std::out_of_range("basis index outside truncation");
        ModeState s{Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(d))};
        s.amps(static_cast<Eigen::Index>(n)) = 1.0;
        return s;
    }
};

struct LadderPair {
    ModeOperator lowering;
    ModeOperator raising;
};

namespace detail {

inline ModeOperator lowering_from(std::size_t d, auto&& weight) {
    require_mode_dim(d);
    const auto n = static_cast<Eigen::Index>(d);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index j = 1; j < n; ++j) m(j - 1, j) = std::sqrt(weight(static_cast<double>(j)));
    return ModeOperator(std::move(m), Structure::lowering);
}

inline ModeOperator diagonal_from(std::size_t d, auto&& value) {
    require_mode_dim(d);
    const auto n = static_cast<Eigen::Index>(d);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) m(j, j) = value(static_cast<double>(j));
    return ModeOperator(std::move(m), Structure::diagonal);
}

}  // namespace detail

/// a|n> = sqrt(n)|n-1>, and a^dagger its adjoint.
inline LadderPair wh_ladder(std::size_t d) {
    auto a = detail::lowering_from(d, [](double n) { return n; });
    auto ad = a.adjoint();
    return {std::move(a), std::move(ad)};
}

inline ModeOperator wh_number(std::size_t d) {
    return detail::diagonal_from(d, [](double n) { return n; });
}

struct Su11Generators {
    ModeOperator k_minus;
    ModeOperator k_plus;
    ModeOperator k3;
};

/// K-|n> = sqrt(n(n+2))|n-1>, K+ = (K-)^dagger, K3|n> = (2n+3)|n>.
inline Su11Generators su11_generators(std::size_t d) {
    auto km = detail::lowering_from(d, [](double n) { return n * (n + 2.0); });
    auto kp = km.adjoint();
    auto k3 = detail::diagonal_from(d, [](double n) { return 2.0 * n + 3.0; });
    return {std::move(km), std::move(kp), std::move(k3)};
}

/// (K3 - 3)/2, which is diag(0, 1, ..., d-1).
inline ModeOperator su11_number(std::size_t d) {
    return detail::diagonal_from(d, [](double n) { return ((2.0 * n + 3.0) - 3.0) / 2.0; });
}

inline ModeOperator isw_hamiltonian(std::size_t d) {
    return detail::diagonal_from(d, [](double n) { return n * (n + 2.0); });
}

inline LadderPair ladder(AlgebraKind algebra, std::size_t d) {
    if (algebra == AlgebraKind::weyl_heisenberg) return wh_ladder(d);
    auto g = su11_generators(d);
    return {std::move(g.k_minus), std::move(g.k_plus)};
}

/**
 * Modified Bessel function of the first kind for integer order, summed from
 * its power series until a term drops below 1e-17 of the running sum.
 * Intended for moderate arguments (the coherent-state range, x up to ~20).
 */
inline double bessel_i(unsigned order, double x) {
    if (x < 0.0) throw std::domain_error("bessel_i requires x >= 0");
    if (x == 0.0) return order == 0 ? 1.0 : 0.0;
    const double half = 0.5 * x;
    const double q = half * half;
    double term = std::exp(order * std::log(half) - std::lgamma(order + 1.0));
    double sum = term;
    for (unsigned m = 1; m < 100000; ++m) {
        term *= q / (static_cast<double>(m) * static_cast<double>(m + order));
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return sum;
}

/// Sum_n r^(2n) / (n!(n+2)!), i.e. I2(2r)/r^2, finite at r = 0 (value 1/2).
inline double bg_norm_series(double r) {
    const double q = r * r;
    double term = 0.5;
    double sum = term;
    for (unsigned n = 1; n < 100000; ++n) {
        term *= q / (static_cast<double>(n) * static_cast<double>(n + 2));
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return sum;
}

/// |<z|0>|^2 = |z|^2 / (2 I2(2|z|)) through the Bessel closed form.
inline double bg_vacuum_probability(double r) {
    if (r == 0.0) return 1.0;
    return r * r / (2.0 * bessel_i(2, 2.0 * r));
}

namespace detail {

inline void normalize_if(ModeState& s, bool normalize) {
    if (!normalize) return;
    const double nrm = s.amps.norm();
    if (nrm > 0.0) s.amps /= nrm;
}

// amps[n] = exp(log_prefactor + n log r - log_den(n)) e^{i n arg c}
inline ModeState coherent_series(Complex c, std::size_t d, double log_prefactor, auto&& log_den) {
    require_mode_dim(d);
    ModeState s{Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(d))};
    const double r = std::abs(c);
    if (r == 0.0) {
        s.amps(0) = 1.0;
        return s;
    }
    const double lr = std::log(r);
    const double phase = std::arg(c);
    for (std::size_t n = 0; n < d; ++n) {
        const double nn = static_cast<double>(n);
        const double mag = std::exp(log_prefactor + nn * lr - log_den(nn));
        s.amps(static_cast<Eigen::Index>(n)) = std::polar(mag, nn * phase);
    }
    return s;
}

}  // namespace detail

/// Glauber state e^{-|a|^2/2} sum a^n/sqrt(n!) |n>, truncated at d levels.
inline ModeState glauber_state(Complex alpha, std::size_t d, bool normalize = false) {
    const double r = std::abs(alpha);
    auto s = detail::coherent_series(alpha, d, -0.5 * r * r,
                                     [](double n) { return 0.5 * std::lgamma(n + 1.0); });
    detail::normalize_if(s, normalize);
    return s;
}

/**
 * Barut-Girardello state |z| / sqrt(I2(2|z|)) sum z^n / sqrt(n!(n+2)!) |n>,
 * the eigenstate of K-. The prefactor is taken from bg_norm_series, so the
 * z -> 0 limit gives |0> exactly.
 */
inline ModeState bg_state(Complex z, std::size_t d, bool normalize = false) {
    const double r = std::abs(z);
    const double log_pref = -0.5 * std::log(bg_norm_series(r));
    auto s = detail::coherent_series(z, d, log_pref, [](double n) {
        return 0.5 * (std::lgamma(n + 1.0) + std::lgamma(n + 3.0));
    });
    detail::normalize_if(s, normalize);
    return s;
}

inline ModeState coherent_state(AlgebraKind algebra, Complex c, std::size_t d, bool normalize = false) {
    return algebra == AlgebraKind::su11 ? bg_state(c, d, normalize) : glauber_state(c, d, normalize);
}

/// Largest |<n|s>|^2 with ties broken toward smaller n.
struct BasisOverlap {
    std::size_t n;
    double prob;
};

inline BasisOverlap max_basis_overlap(const ModeState& s) {
    if (std::abs(s.norm_squared() - 1.0) > 1e-6) {
        throw std::invalid_argument("max_basis_overlap expects a normalized state");
    }
    BasisOverlap best{0, std::norm(s.amps(0))};
    for (Eigen::Index n = 1; n < s.amps.size(); ++n) {
        const double p = std::norm(s.amps(n));
        if (p > best.prob) best = {static_cast<std::size_t>(n), p};
    }
    return best;
}

/// Smallest coherent-state modulus for which every |<c|n>|^2 stays below 1/2.
/// For Barut-Girardello states the bound is the |z| > 1.6 guard; for Glauber
/// states it is |alpha|^2 > ln 2 (the vacuum weight e^{-|alpha|^2}).
inline double halting_threshold(AlgebraKind algebra) {
    return algebra == AlgebraKind::su11 ? 1.6 : std::sqrt(std::log(2.0));
}

}  // namespace h10
