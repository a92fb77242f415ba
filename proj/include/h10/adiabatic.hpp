#pragma once

/**
 * @file adiabatic.hpp
 * @brief Schrodinger evolution along H_A(s) = (1-s) H_I + s H_D, the
 *        P_max > 1/2 halting loop, and dense spectral-gap diagnostics.
 *
 * Time is in natural units (hbar = 1). Each uniform step applies the exact
 * exponential of the midpoint Hamiltonian, evaluated matrix-free by a
 * Chebyshev expansion cut at rounding level, so the evolution is unitary up
 * to that truncation.
 */

#include "h10/expmv.hpp"
#include "h10/fock.hpp"
#include "h10/hamiltonians.hpp"
#include "h10/poly.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace h10 {

/// Invalid run configuration, e.g. a coherent parameter inside the halting bound.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Integration aborted because the state norm drifted past 1e-6.
class EvolutionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kHaltingProbability = 0.5;
inline constexpr double kAbortNormDrift = 1e-6;
inline constexpr double kDegeneracyTolerance = 1e-9;

struct Schedule {
    double total_time = 0.0;
    std::size_t steps = 1;
    /// Fractions of total_time at which P_max is sampled, sorted, in [0, 1].
    std::vector<double> checkpoints;

    static Schedule uniform(double total_time, std::size_t steps, std::size_t samples = 16) {
        Schedule s{total_time, steps, {}};
        if (samples == 1) s.checkpoints.push_back(1.0);
        for (std::size_t j = 0; samples > 1 && j < samples; ++j) {
            s.checkpoints.push_back(static_cast<double>(j) / static_cast<double>(samples - 1));
        }
        s.validate();
        return s;
    }

    void validate() const {
        if (!(total_time >= 0.0) || !std::isfinite(total_time)) throw ConfigError("schedule time must be finite and >= 0");
        if (steps < 1) throw ConfigError("schedule needs at least one step");
        if (!std::is_sorted(checkpoints.begin(), checkpoints.end())) throw ConfigError("checkpoints must be sorted");
        for (double c : checkpoints) {
            if (c < 0.0 || c > 1.0) throw ConfigError("checkpoints must lie in [0, 1]");
        }
    }
};

struct TracePoint {
    double t = 0.0;
    double p_max = 0.0;
    LatticePoint argmax;
    double norm = 1.0;
    /// Largest single-basis-state probability among H_D excited states.
    double excited_max = 0.0;
};

struct PMax {
    double prob = 0.0;
    LatticePoint index;
    std::size_t flat = 0;
};

/// max_i |amps_i|^2 and the decoded argmax; ties go to the smaller flat index.
inline PMax measure_pmax(const StateVector& psi) {
    if (std::abs(psi.amps.squaredNorm() - 1.0) > 1e-6) throw std::invalid_argument("measure_pmax expects a unit vector");
    std::size_t best = 0;
    double prob = std::norm(psi.amps(0));
    for (Eigen::Index i = 1; i < psi.amps.size(); ++i) {
        const double p = std::norm(psi.amps(i));
        if (p > prob) {
            prob = p;
            best = static_cast<std::size_t>(i);
        }
    }
    return {prob, psi.codec.decode(best), best};
}

struct EvolveResult {
    StateVector final_state;
    std::vector<TracePoint> trace;
    /// max over steps of | ||psi|| - 1 |
    double norm_drift = 0.0;
    std::size_t matvecs = 0;
};

namespace detail {

inline TracePoint sample(const StateVector& psi, double t, const std::vector<bool>& ground_mask) {
    TracePoint tp;
    tp.t = t;
    tp.norm = psi.norm();
    double best = -1.0;
    std::size_t arg = 0;
    for (Eigen::Index i = 0; i < psi.amps.size(); ++i) {
        const double p = std::norm(psi.amps(i));
        if (p > best) {
            best = p;
            arg = static_cast<std::size_t>(i);
        }
        if (!ground_mask[static_cast<std::size_t>(i)]) tp.excited_max = std::max(tp.excited_max, p);
    }
    tp.p_max = best / (tp.norm * tp.norm);
    tp.argmax = psi.codec.decode(arg);
    return tp;
}

}  // namespace detail

/**
 * Integrate i d/dt psi = H_A(t/T) psi over [0, T] in `steps` uniform steps,
 * psi <- exp(-i dt H_A(s_mid)) psi. Checkpoints are taken at the step
 * nearest each requested fraction. Throws EvolutionError if the norm drifts
 * by more than 1e-6.
 */
inline EvolveResult evolve(const InitialHamiltonian& hI, const ProblemHamiltonian& hD, const StateVector& psi0,
                           const Schedule& sched, const ExpmvOptions& expmv = {}) {
    sched.validate();
    if (!(psi0.codec == hI.codec()) || !(psi0.codec == hD.codec())) throw DimensionError("state and Hamiltonians differ in shape");
    if (std::abs(psi0.norm() - 1.0) > 1e-9) throw std::invalid_argument("evolve expects a unit initial state");

    std::vector<bool> ground_mask(hD.codec().total(), false);
    for (auto i : hD.minimizers()) ground_mask[i] = true;

    std::vector<std::size_t> marks;
    for (double c : sched.checkpoints) {
        marks.push_back(static_cast<std::size_t>(std::llround(c * static_cast<double>(sched.steps))));
    }

    EvolveResult res{psi0, {}, 0.0, 0};
    const double dt = sched.total_time / static_cast<double>(sched.steps);
    std::size_t next_mark = 0;
    auto record = [&](std::size_t step_index) {
        while (next_mark < marks.size() && marks[next_mark] == step_index) {
            res.trace.push_back(detail::sample(res.final_state, dt * static_cast<double>(step_index), ground_mask));
            ++next_mark;
        }
    };
    record(0);
    if (dt == 0.0) {
        for (std::size_t j = 1; j <= sched.steps; ++j) record(j);
        return res;
    }

    // Both terms are positive semidefinite, so the spectrum of H_A(s) lies in [0, hi(s)].
    const double hi_I = hI.spectral_bound();
    const double hi_D = hD.values().size() ? hD.values().maxCoeff() : 0.0;
    ExpmvStats stats;
    for (std::size_t j = 0; j < sched.steps; ++j) {
        const double s = (static_cast<double>(j) + 0.5) / static_cast<double>(sched.steps);
        auto matvec = [&](const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
            apply_hamiltonian_into(hI, hD, s, in, out);
        };
        const double hi = (1.0 - s) * hi_I + s * hi_D;
        res.final_state.amps = chebyshev_expmv(matvec, res.final_state.amps, dt, 0.0, hi, expmv, &stats);
        const double drift = std::abs(res.final_state.norm() - 1.0);
        res.norm_drift = std::max(res.norm_drift, drift);
        if (drift > kAbortNormDrift) {
            std::ostringstream msg;
            msg << "norm drift " << drift << " at step " << j + 1 << " of " << sched.steps << " (dt = " << dt
                << "); reduce the step size or the expansion tolerance";
            throw EvolutionError(msg.str());
        }
        record(j + 1);
    }
    res.matvecs = stats.matvecs;
    return res;
}

enum class Verdict { solution_exists, no_solution, inconclusive };

inline std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::solution_exists: return "SolutionExists";
        case Verdict::no_solution: return "NoSolution";
        case Verdict::inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

/// One evolve-and-measure round at a fixed total time.
struct Attempt {
    double total_time = 0.0;
    std::size_t steps = 0;
    double p_max = 0.0;
    LatticePoint argmax;
    double norm_drift = 0.0;
};

struct RunReport {
    Verdict verdict = Verdict::inconclusive;
    std::optional<LatticePoint> witness;
    /// Checkpoint samples of the final attempt.
    std::vector<TracePoint> p_max_trace;
    std::vector<Attempt> attempts;
    double final_time = 0.0;
    std::size_t box_k = 0;
    std::size_t box_d = 0;
    /// H_D has more than one minimizing basis state inside the box.
    bool degeneracy_flag = false;
    double norm_drift = 0.0;
    /// Largest probability any single H_D excited basis state reached at a checkpoint.
    double max_excited_probability = 0.0;
    AlgebraKind algebra = AlgebraKind::su11;
    std::vector<Complex> params;
};

struct DecideConfig {
    std::size_t dim = 32;
    /// One value per mode; a single value is used for every mode; empty
    /// means the algebra default (z = 2 for su11, alpha = 3 for wh).
    std::vector<Complex> params;
    double initial_time = 10.0;
    double growth = 2.0;
    double time_cap = 1e4;
    double steps_per_unit_time = 20.0;
    std::size_t min_steps = 50;
    std::size_t checkpoints = 16;
    ExpmvOptions expmv;
};

inline double default_param(AlgebraKind algebra) { return algebra == AlgebraKind::su11 ? 2.0 : 3.0; }

/// Per-mode parameters after defaulting and broadcasting; enforces the
/// halting bound for the algebra.
inline std::vector<Complex> resolve_params(const DecideConfig& cfg, AlgebraKind algebra, std::size_t k) {
    std::vector<Complex> params = cfg.params;
    if (params.empty()) params.assign(1, Complex(default_param(algebra), 0.0));
    if (params.size() == 1 && k > 1) params.assign(k, params.front());
    if (params.size() != k) {
        throw ConfigError("expected " + std::to_string(k) + " coherent parameters, got " + std::to_string(params.size()));
    }
    const double bound = halting_threshold(algebra);
    for (const auto& c : params) {
        if (!(std::abs(c) > bound)) {
            std::ostringstream msg;
            msg << "coherent parameter modulus " << std::abs(c) << " must exceed " << bound << " for the "
                << to_string(algebra) << " algebra, otherwise the initial state can already exceed P = 1/2";
            throw ConfigError(msg.str());
        }
    }
    return params;
}

inline void validate(const DecideConfig& cfg) {
    require_mode_dim(cfg.dim);
    if (!(cfg.initial_time > 0.0)) throw ConfigError("initial time must be positive");
    if (!(cfg.growth > 1.0)) throw ConfigError("time growth factor must exceed 1");
    if (!(cfg.time_cap >= cfg.initial_time)) throw ConfigError("time cap must be at least the initial time");
    if (!(cfg.steps_per_unit_time > 0.0)) throw ConfigError("steps per unit time must be positive");
}

inline std::size_t steps_for(const DecideConfig& cfg, double total_time) {
    const auto n = static_cast<std::size_t>(std::ceil(total_time * cfg.steps_per_unit_time));
    return std::max(cfg.min_steps, n);
}

/**
 * The halting loop: evolve from the coherent product state for time T,
 * stop as soon as P_max(T) > 1/2, otherwise grow T up to the cap. Every
 * attempt restarts from a fresh initial state. A SolutionExists verdict is
 * only issued after exact evaluation of D at the witness.
 */
inline RunReport decide(const Polynomial& p, AlgebraKind algebra, const DecideConfig& cfg) {
    validate(cfg);
    const std::size_t k = p.num_vars();
    RunReport report;
    report.algebra = algebra;
    report.box_k = k;
    report.box_d = cfg.dim;
    report.params = resolve_params(cfg, algebra, k);

    if (p.is_zero()) {
        report.verdict = Verdict::solution_exists;
        report.witness = LatticePoint(k, 0);
        report.degeneracy_flag = true;
        return report;
    }

    const auto codec = build_codec(k, cfg.dim);
    const auto hD = build_problem_hamiltonian(p, codec);
    const auto hI = build_initial_hamiltonian(report.params, algebra, codec);
    const auto psi0 = build_initial_state(report.params, algebra, codec);
    report.degeneracy_flag = hD.ground_degenerate();

    double horizon = cfg.initial_time;
    for (;;) {
        const double total = std::min(horizon, cfg.time_cap);
        const auto sched = Schedule::uniform(total, steps_for(cfg, total), cfg.checkpoints);
        auto run = evolve(hI, hD, psi0, sched, cfg.expmv);
        const auto pm = measure_pmax(run.final_state);

        report.attempts.push_back({total, sched.steps, pm.prob, pm.index, run.norm_drift});
        report.final_time = total;
        report.norm_drift = std::max(report.norm_drift, run.norm_drift);
        for (const auto& tp : run.trace) report.max_excited_probability = std::max(report.max_excited_probability, tp.excited_max);
        report.p_max_trace = std::move(run.trace);

        if (pm.prob > kHaltingProbability) {
            report.witness = pm.index;
            report.verdict = p.evaluate(pm.index) == 0 ? Verdict::solution_exists : Verdict::no_solution;
            return report;
        }
        if (total >= cfg.time_cap) {
            report.verdict = Verdict::inconclusive;
            return report;
        }
        horizon *= cfg.growth;
    }
}

struct GapTrace {
    std::vector<double> grid;
    std::vector<double> e0;
    std::vector<double> e1;
    double min_gap = 0.0;
};

inline std::vector<double> linspace01(std::size_t points) {
    if (points < 2) throw ConfigError("a gap grid needs at least two points");
    std::vector<double> g(points);
    for (std::size_t i = 0; i < points; ++i) g[i] = static_cast<double>(i) / static_cast<double>(points - 1);
    return g;
}

/// Two lowest eigenvalues of the dense H_A(s) at each grid point.
inline GapTrace gap_scan(const InitialHamiltonian& hI, const ProblemHamiltonian& hD, const std::vector<double>& grid,
                         std::size_t cap = kDenseCap) {
    if (hI.codec().total() > cap) throw CapExceeded("d^k exceeds the dense cap");
    GapTrace out;
    out.grid = grid;
    out.min_gap = std::numeric_limits<double>::infinity();
    for (double s : grid) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(materialize_dense(hI, hD, s, cap), Eigen::EigenvaluesOnly);
        const auto& ev = es.eigenvalues();
        out.e0.push_back(ev(0));
        out.e1.push_back(ev(1));
        out.min_gap = std::min(out.min_gap, ev(1) - ev(0));
    }
    return out;
}

struct GroundState {
    double e0 = 0.0;
    StateVector v;
    /// Number of eigenvalues within kDegeneracyTolerance of e0.
    std::size_t multiplicity = 1;
    bool degenerate() const { return multiplicity > 1; }
};

inline GroundState ground_state(const InitialHamiltonian& hI, const ProblemHamiltonian& hD, double s,
                                std::size_t cap = kDenseCap) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(materialize_dense(hI, hD, s, cap));
    const auto& ev = es.eigenvalues();
    std::size_t mult = 1;
    while (mult < static_cast<std::size_t>(ev.size()) && ev(static_cast<Eigen::Index>(mult)) - ev(0) <= kDegeneracyTolerance) ++mult;
    Eigen::VectorXcd v = es.eigenvectors().col(0);
    // Fix the global phase so the largest component is real and positive.
    Eigen::Index big = 0;
    v.cwiseAbs().maxCoeff(&big);
    v *= std::polar(1.0, -std::arg(v(big)));
    return {ev(0), StateVector(hI.codec(), std::move(v)), mult};
}

}  // namespace h10
