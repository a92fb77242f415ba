#pragma once

/**
 * @file hamiltonians.hpp
 * @brief k-mode tensor-product Hamiltonians of the adiabatic decision
 *        procedure: the problem Hamiltonian D(N_1..N_k)^2, the displaced
 *        initial Hamiltonian sum_i (R_i - c_i^*)(L_i - c_i), the coherent
 *        product state, and matrix-free application of their interpolation.
 */

#include "h10/fock.hpp"
#include "h10/poly.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace h10 {

class CapExceeded : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Default ceiling on d^k for dense materialization and eigensolves.
inline constexpr std::size_t kDenseCap = 4096;

/**
 * Row-major mixed-radix codec between multi-indices (n_1..n_k) in
 * {0..d-1}^k and flat indices; mode 1 varies slowest.
 */
class MultiIndexCodec {
public:
    MultiIndexCodec(std::size_t k, std::size_t d) : k_(k), d_(d) {
        if (k_ == 0) throw std::invalid_argument("codec needs at least one mode");
        require_mode_dim(d_);
        // Keep the flat index comfortably addressable by Eigen::Index.
        constexpr std::size_t limit = std::size_t{1} << 40;
        total_ = 1;
        for (std::size_t i = 0; i < k_; ++i) {
            if (total_ > limit / d_) throw CapExceeded("d^k overflows the addressable state size");
            total_ *= d_;
        }
    }

    std::size_t modes() const noexcept { return k_; }
    std::size_t dim() const noexcept { return d_; }
    std::size_t total() const noexcept { return total_; }

    /// Distance in flat index between neighbours along `mode`.
    std::size_t stride(std::size_t mode) const {
        std::size_t s = 1;
        for (std::size_t i = mode + 1; i < k_; ++i) s *= d_;
        return s;
    }

    std::size_t encode(std::span<const std::uint64_t> idx) const {
        if (idx.size() != k_) throw DimensionError("multi-index length differs from k");
        std::size_t flat = 0;
        for (auto n : idx) {
            if (n >= d_) throw std::out_of_range("multi-index coordinate outside truncation");
            flat = flat * d_ + static_cast<std::size_t>(n);
        }
        return flat;
    }

    LatticePoint decode(std::size_t flat) const {
        if (flat >= total_) throw std::out_of_range("flat index outside codec range");
        LatticePoint idx(k_);
        for (std::size_t i = k_; i > 0; --i) {
            idx[i - 1] = flat % d_;
            flat /= d_;
        }
        return idx;
    }

    friend bool operator==(const MultiIndexCodec&, const MultiIndexCodec&) = default;

private:
    std::size_t k_;
    std::size_t d_;
    std::size_t total_;
};

inline MultiIndexCodec build_codec(std::size_t k, std::size_t d) { return MultiIndexCodec(k, d); }

/// Amplitudes on the d^k product space.
struct StateVector {
    MultiIndexCodec codec;
    Eigen::VectorXcd amps;

    StateVector(MultiIndexCodec c, Eigen::VectorXcd a) : codec(c), amps(std::move(a)) {
        if (static_cast<std::size_t>(amps.size()) != codec.total()) {
            throw DimensionError("amplitude vector length differs from d^k");
        }
    }

    static StateVector zero(const MultiIndexCodec& c) {
        return {c, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(c.total()))};
    }

    static StateVector basis(const MultiIndexCodec& c, std::span<const std::uint64_t> idx) {
        auto s = zero(c);
        s.amps(static_cast<Eigen::Index>(c.encode(idx))) = 1.0;
        return s;
    }

    double norm() const { return amps.norm(); }
};

/// |<a|b>|^2 for unit vectors.
inline double fidelity(const StateVector& a, const StateVector& b) {
    if (!(a.codec == b.codec)) throw DimensionError("states live on different spaces");
    return std::norm(a.amps.dot(b.amps));
}

/**
 * Diagonal of (D(N_1..N_k))^2. Entries are exact integers; `values()` holds
 * their double images for the numerical path. Both algebras share this
 * operator since their number operators coincide on the truncation.
 */
class ProblemHamiltonian {
public:
    ProblemHamiltonian(MultiIndexCodec codec, std::vector<Integer> diag)
        : codec_(codec), exact_(std::move(diag)) {
        if (exact_.size() != codec_.total()) throw DimensionError("diagonal length differs from d^k");
        values_.resize(static_cast<Eigen::Index>(exact_.size()));
        for (std::size_t i = 0; i < exact_.size(); ++i) {
            if (exact_[i] < 0) throw std::invalid_argument("problem Hamiltonian entries must be non-negative");
            values_(static_cast<Eigen::Index>(i)) = exact_[i].convert_to<double>();
        }
    }

    const MultiIndexCodec& codec() const noexcept { return codec_; }
    const std::vector<Integer>& exact() const noexcept { return exact_; }
    const Eigen::VectorXd& values() const noexcept { return values_; }

    Integer minimum() const { return *std::min_element(exact_.begin(), exact_.end()); }

    /// Flat indices where the diagonal attains its minimum.
    std::vector<std::size_t> minimizers() const {
        const Integer m = minimum();
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < exact_.size(); ++i) {
            if (exact_[i] == m) out.push_back(i);
        }
        return out;
    }

    bool ground_degenerate() const { return minimizers().size() > 1; }

private:
    MultiIndexCodec codec_;
    std::vector<Integer> exact_;
    Eigen::VectorXd values_;
};

inline ProblemHamiltonian build_problem_hamiltonian(const Polynomial& p, const MultiIndexCodec& codec) {
    if (p.num_vars() != codec.modes()) throw DimensionError("polynomial variable count differs from mode count");
    std::vector<Integer> diag(codec.total());
    LatticePoint idx(codec.modes(), 0);
    for (std::size_t i = 0; i < codec.total(); ++i) {
        const Integer v = p.evaluate(idx);
        diag[i] = v * v;
        // Odometer increment in row-major order.
        for (std::size_t m = codec.modes(); m > 0; --m) {
            if (++idx[m - 1] < codec.dim()) break;
            idx[m - 1] = 0;
        }
    }
    return ProblemHamiltonian(codec, std::move(diag));
}

/// Sum over modes of (R - conj(c_i))(L - c_i), stored per mode.
class InitialHamiltonian {
public:
    InitialHamiltonian(MultiIndexCodec codec, AlgebraKind algebra, std::vector<Complex> params)
        : codec_(codec), algebra_(algebra), params_(std::move(params)) {
        if (params_.size() != codec_.modes()) throw DimensionError("one parameter per mode is required");
        const auto ops = ladder(algebra_, codec_.dim());
        const auto d = static_cast<Eigen::Index>(codec_.dim());
        const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
        for (const auto& c : params_) {
            const Eigen::MatrixXcd shifted_lower = ops.lowering.matrix() - c * id;
            Eigen::MatrixXcd term = shifted_lower.adjoint() * shifted_lower;
            // Exact Hermitian symmetry; the product is Hermitian up to rounding.
            term = (0.5 * (term + term.adjoint())).eval();
            terms_.emplace_back(std::move(term), Structure::general);
        }
    }

    const MultiIndexCodec& codec() const noexcept { return codec_; }
    AlgebraKind algebra() const noexcept { return algebra_; }
    const std::vector<Complex>& params() const noexcept { return params_; }
    const std::vector<ModeOperator>& mode_terms() const noexcept { return terms_; }

    /// Upper bound on the largest eigenvalue: the sum over modes of each
    /// term's Gershgorin radius.
    double spectral_bound() const {
        double bound = 0.0;
        for (const auto& t : terms_) bound += t.matrix().cwiseAbs().rowwise().sum().maxCoeff();
        return bound;
    }

    /// out += scale * H_I * in, mode by mode over the Kronecker-sum structure.
    void apply_add(const Eigen::VectorXcd& in, Eigen::VectorXcd& out, double scale) const {
        const std::size_t d = codec_.dim();
        const std::size_t total = codec_.total();
        for (std::size_t mode = 0; mode < codec_.modes(); ++mode) {
            const auto& m = terms_[mode].matrix();
            const std::size_t stride = codec_.stride(mode);
            const std::size_t block = stride * d;
            for (std::size_t base = 0; base < total; base += block) {
                for (std::size_t inner = 0; inner < stride; ++inner) {
                    const std::size_t origin = base + inner;
                    for (std::size_t r = 0; r < d; ++r) {
                        Complex acc = 0.0;
                        // Mode terms are tridiagonal in the number basis.
                        const std::size_t lo = r == 0 ? 0 : r - 1;
                        const std::size_t hi = std::min(d, r + 2);
                        for (std::size_t c = lo; c < hi; ++c) {
                            acc += m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) *
                                   in(static_cast<Eigen::Index>(origin + c * stride));
                        }
                        out(static_cast<Eigen::Index>(origin + r * stride)) += scale * acc;
                    }
                }
            }
        }
    }

private:
    MultiIndexCodec codec_;
    AlgebraKind algebra_;
    std::vector<Complex> params_;
    std::vector<ModeOperator> terms_;
};

inline InitialHamiltonian build_initial_hamiltonian(const std::vector<Complex>& params, AlgebraKind algebra,
                                                    const MultiIndexCodec& codec) {
    return InitialHamiltonian(codec, algebra, params);
}

/// Product of per-mode coherent states, renormalized to unit norm.
inline StateVector build_initial_state(const std::vector<Complex>& params, AlgebraKind algebra,
                                       const MultiIndexCodec& codec) {
    if (params.size() != codec.modes()) throw DimensionError("one parameter per mode is required");
    Eigen::VectorXcd amps = Eigen::VectorXcd::Ones(1);
    for (const auto& c : params) {
        const auto mode = coherent_state(algebra, c, codec.dim(), true);
        Eigen::VectorXcd next(amps.size() * mode.amps.size());
        for (Eigen::Index i = 0; i < amps.size(); ++i) {
            next.segment(i * mode.amps.size(), mode.amps.size()) = amps(i) * mode.amps;
        }
        amps = std::move(next);
    }
    amps /= amps.norm();
    return {codec, std::move(amps)};
}

namespace detail {

inline void check_pair(const InitialHamiltonian& hI, const ProblemHamiltonian& hD) {
    if (!(hI.codec() == hD.codec())) throw DimensionError("initial and problem Hamiltonians differ in shape");
}

}  // namespace detail

/// out = (1-s) H_I in + s H_D in, without forming the d^k x d^k matrix.
inline void apply_hamiltonian_into(const InitialHamiltonian& hI, const ProblemHamiltonian& hD, double s,
                                   const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
    detail::check_pair(hI, hD);
    if (static_cast<std::size_t>(in.size()) != hI.codec().total()) {
        throw DimensionError("state length differs from d^k");
    }
    out = in.array() * (s * hD.values().array()).cast<Complex>();
    if (s != 1.0) hI.apply_add(in, out, 1.0 - s);
}

inline StateVector apply_hamiltonian(const InitialHamiltonian& hI, const ProblemHamiltonian& hD, double s,
                                     const StateVector& v) {
    if (!(v.codec == hI.codec())) throw DimensionError("state lives on a different space");
    Eigen::VectorXcd out;
    apply_hamiltonian_into(hI, hD, s, v.amps, out);
    return {v.codec, std::move(out)};
}

/// Dense H_A(s); for tests and small eigensolves only.
inline Eigen::MatrixXcd materialize_dense(const InitialHamiltonian& hI, const ProblemHamiltonian& hD, double s,
                                          std::size_t cap = kDenseCap) {
    detail::check_pair(hI, hD);
    const auto& codec = hI.codec();
    if (codec.total() > cap) throw CapExceeded("d^k exceeds the dense cap");
    const auto n = static_cast<Eigen::Index>(codec.total());
    const auto d = static_cast<Eigen::Index>(codec.dim());
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t mode = 0; mode < codec.modes(); ++mode) {
        // I_(d^mode) (x) term (x) I_(d^(k-mode-1))
        const auto left = static_cast<Eigen::Index>(codec.total() / (codec.stride(mode) * codec.dim()));
        const auto right = static_cast<Eigen::Index>(codec.stride(mode));
        const auto& t = hI.mode_terms()[mode].matrix();
        for (Eigen::Index a = 0; a < left; ++a)
            for (Eigen::Index r = 0; r < d; ++r)
                for (Eigen::Index c = 0; c < d; ++c)
                    for (Eigen::Index b = 0; b < right; ++b)
                        h((a * d + r) * right + b, (a * d + c) * right + b) += (1.0 - s) * t(r, c);
    }
    for (Eigen::Index i = 0; i < n; ++i) h(i, i) += s * hD.values()(i);
    return h;
}

}  // namespace h10
