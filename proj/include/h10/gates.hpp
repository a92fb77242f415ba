#pragma once

/**
 * @file gates.hpp
 * @brief Free infinite-square-well evolution as a diagonal phase unitary, and
 *        the controlled-NOT obtained from it on a 2-qubit space coded into
 *        the levels {0, 1, 2, 4}.
 */

#include "h10/fock.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace h10 {

/// diag(e^{-i theta_n}).
class DiagonalUnitary {
public:
    explicit DiagonalUnitary(std::vector<double> phases) : phases_(std::move(phases)) {
        require_mode_dim(phases_.size());
    }

    std::size_t dim() const noexcept { return phases_.size(); }
    const std::vector<double>& phases() const noexcept { return phases_; }
    Complex entry(std::size_t n) const { return std::polar(1.0, -phases_.at(n)); }

    Eigen::VectorXcd entries() const {
        Eigen::VectorXcd e(static_cast<Eigen::Index>(dim()));
        for (std::size_t n = 0; n < dim(); ++n) e(static_cast<Eigen::Index>(n)) = entry(n);
        return e;
    }

    ModeState apply(const ModeState& s) const {
        if (s.dim() != dim()) throw std::invalid_argument("state and unitary dimensions differ");
        return {s.amps.cwiseProduct(entries())};
    }

    friend DiagonalUnitary operator*(const DiagonalUnitary& a, const DiagonalUnitary& b) {
        if (a.dim() != b.dim()) throw std::invalid_argument("unitary dimensions differ");
        std::vector<double> sum(a.dim());
        for (std::size_t n = 0; n < a.dim(); ++n) sum[n] = a.phases_[n] + b.phases_[n];
        return DiagonalUnitary(std::move(sum));
    }

private:
    std::vector<double> phases_;
};

/// exp(-i H_isw t) with H_isw = diag(n(n+2)) in natural units.
inline DiagonalUnitary isw_propagator(double t, std::size_t d) {
    require_mode_dim(d);
    std::vector<double> theta(d);
    for (std::size_t n = 0; n < d; ++n) theta[n] = static_cast<double>(n * (n + 2)) * t;
    return DiagonalUnitary(std::move(theta));
}

inline constexpr std::size_t kCodedMinDim = 5;

inline void require_coded_dim(std::size_t d) {
    if (d < kCodedMinDim) throw std::invalid_argument("the coded 2-qubit space needs at least 5 levels");
}

/**
 * The propagator at t = pi, with entries (-1)^n. Phases are reduced by the
 * parity of n(n+2) before multiplying by pi, which is the same operator but
 * keeps every entry exact for large n.
 */
inline DiagonalUnitary cnot_inf(std::size_t d) {
    require_coded_dim(d);
    std::vector<double> theta(d);
    for (std::size_t n = 0; n < d; ++n) theta[n] = static_cast<double>((n * (n + 2)) % 2) * std::numbers::pi;
    return DiagonalUnitary(std::move(theta));
}

/// Coordinates in the basis {|00>, |01>, (|10>+|11>)/sqrt2, (|11>-|10>)/sqrt2}.
struct CodedTwoQubit {
    Eigen::Vector4cd amps4;
};

namespace detail {

// Column j is the Fock-space image of rotated basis vector j.
inline Eigen::MatrixXcd coding_isometry(std::size_t d) {
    require_coded_dim(d);
    const double h = std::numbers::sqrt2 / 2.0;
    Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d), 4);
    c(0, 0) = 1.0;
    c(2, 1) = 1.0;
    c(4, 2) = h;
    c(1, 2) = h;
    c(4, 3) = h;
    c(1, 3) = -h;
    return c;
}

}  // namespace detail

/// |00> -> |0>, |01> -> |2>, (|10>+|11>)/sqrt2 -> (|4>+|1>)/sqrt2,
/// (|11>-|10>)/sqrt2 -> (|4>-|1>)/sqrt2, extended linearly.
inline ModeState encode_2qubit(const CodedTwoQubit& q, std::size_t d) {
    return {detail::coding_isometry(d) * q.amps4};
}

struct DecodedTwoQubit {
    CodedTwoQubit q;
    /// Probability mass outside span{|0>, |1>, |2>, |4>}.
    double leakage = 0.0;
};

inline DecodedTwoQubit decode_2qubit(const ModeState& s) {
    const Eigen::MatrixXcd c = detail::coding_isometry(s.dim());
    Eigen::Vector4cd q = c.adjoint() * s.amps;
    const double leak = std::max(0.0, s.norm_squared() - q.squaredNorm());
    return {{q}, leak};
}

/// |x, y> -> |x, x xor y> on the index j = 2x + y of the coded coordinates.
inline Eigen::Matrix4cd cnot_truth_table() {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) m(2 * x + (x ^ y), 2 * x + y) = 1.0;
    return m;
}

}  // namespace h10
