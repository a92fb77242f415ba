#include "h10/adiabatic.hpp"
#include "h10/io.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using h10::AlgebraKind;
using h10::Complex;
using h10::LatticePoint;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

namespace {

struct Instance {
    h10::MultiIndexCodec codec;
    h10::InitialHamiltonian hI;
    h10::ProblemHamiltonian hD;
    h10::StateVector psi0;
};

Instance make(const char* poly, std::size_t d, std::vector<Complex> z, AlgebraKind algebra = AlgebraKind::su11) {
    const auto p = h10::parse_polynomial(poly);
    const auto codec = h10::build_codec(p.num_vars(), d);
    return {codec, h10::build_initial_hamiltonian(z, algebra, codec), h10::build_problem_hamiltonian(p, codec),
            h10::build_initial_state(z, algebra, codec)};
}

// Same midpoint rule, with each step's exponential taken from a dense
// Hermitian eigendecomposition.
VectorXcd dense_midpoint(const Instance& in, double total, std::size_t steps) {
    VectorXcd psi = in.psi0.amps;
    const double dt = total / static_cast<double>(steps);
    for (std::size_t j = 0; j < steps; ++j) {
        const double s = (static_cast<double>(j) + 0.5) / static_cast<double>(steps);
        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h10::materialize_dense(in.hI, in.hD, s));
        const VectorXcd phase = (es.eigenvalues().cast<Complex>() * Complex(0.0, -dt)).array().exp();
        psi = es.eigenvectors() * phase.cwiseProduct(es.eigenvectors().adjoint() * psi);
    }
    return psi;
}

double fidelity_with(const VectorXcd& psi, std::size_t flat) { return std::norm(psi(static_cast<Eigen::Index>(flat))); }

}  // namespace

TEST(Schedule, ValidatesInvariants) {
    const auto s = h10::Schedule::uniform(10.0, 100);
    EXPECT_EQ(s.checkpoints.size(), 16u);
    EXPECT_DOUBLE_EQ(s.checkpoints.front(), 0.0);
    EXPECT_DOUBLE_EQ(s.checkpoints.back(), 1.0);
    EXPECT_THROW((h10::Schedule{1.0, 0, {}}.validate()), h10::ConfigError);
    EXPECT_THROW((h10::Schedule{1.0, 5, {0.5, 0.2}}.validate()), h10::ConfigError);
    EXPECT_THROW((h10::Schedule{1.0, 5, {1.5}}.validate()), h10::ConfigError);
    EXPECT_THROW((h10::Schedule{-1.0, 5, {}}.validate()), h10::ConfigError);
}

TEST(Evolve, NullGeneratorLeavesStateUnchanged) {
    // H_I vanishes at z = 0 only on the vacuum; pair it with D = x so H_D is
    // zero there too.
    const auto codec = h10::build_codec(1, 8);
    const auto hI = h10::build_initial_hamiltonian({0.0}, AlgebraKind::weyl_heisenberg, codec);
    const auto hD = h10::build_problem_hamiltonian(h10::parse_polynomial("x"), codec);
    const auto psi0 = h10::StateVector::basis(codec, LatticePoint{0});
    const auto res = h10::evolve(hI, hD, psi0, h10::Schedule::uniform(50.0, 200));
    EXPECT_LT((res.final_state.amps - psi0.amps).norm(), 1e-12);
}

TEST(Evolve, ShortTimeLimit) {
    const auto in = make("x-2", 16, {2.0});
    const auto res = h10::evolve(in.hI, in.hD, in.psi0, h10::Schedule::uniform(1e-6, 1));
    EXPECT_GT(h10::fidelity(res.final_state, in.psi0), 1.0 - 1e-8);
}

TEST(Evolve, MatchesDenseExponentialOracle) {
    const auto in = make("x-2", 16, {2.0});
    const auto res = h10::evolve(in.hI, in.hD, in.psi0, h10::Schedule::uniform(100.0, 2000));
    const VectorXcd ref = dense_midpoint(in, 100.0, 2000);
    EXPECT_LT((res.final_state.amps - ref).norm(), 1e-8);
    EXPECT_GT(fidelity_with(res.final_state.amps, 2), 0.5);
    EXPECT_LT(res.norm_drift, 1e-9);
}

TEST(Evolve, MatchesDenseOracleForTwoModes) {
    const auto in = make("x^2+y^2-5", 6, {Complex(2.0, 0.0), Complex(1.8, 0.0)});
    const auto res = h10::evolve(in.hI, in.hD, in.psi0, h10::Schedule::uniform(10.0, 200));
    EXPECT_LT((res.final_state.amps - dense_midpoint(in, 10.0, 200)).norm(), 1e-8);
}

TEST(Evolve, TraceHasOneSamplePerCheckpoint) {
    const auto in = make("x-2", 16, {2.0});
    const auto res = h10::evolve(in.hI, in.hD, in.psi0, h10::Schedule::uniform(10.0, 200, 16));
    ASSERT_EQ(res.trace.size(), 16u);
    EXPECT_DOUBLE_EQ(res.trace.front().t, 0.0);
    EXPECT_NEAR(res.trace.back().t, 10.0, 1e-12);
    for (std::size_t i = 1; i < res.trace.size(); ++i) EXPECT_GT(res.trace[i].t, res.trace[i - 1].t);
    for (const auto& tp : res.trace) EXPECT_NEAR(tp.norm, 1.0, 1e-9);
    // Initial-state soundness at t = 0.
    EXPECT_LT(res.trace.front().p_max, 0.5);
    EXPECT_NEAR(res.trace.back().p_max, h10::measure_pmax(res.final_state).prob, 1e-12);
}

TEST(Evolve, RejectsMismatchedOrUnnormalizedInput) {
    const auto in = make("x-2", 16, {2.0});
    const auto other = h10::StateVector::basis(h10::build_codec(1, 8), LatticePoint{0});
    EXPECT_THROW(h10::evolve(in.hI, in.hD, other, h10::Schedule::uniform(1.0, 10)), h10::DimensionError);
    h10::StateVector scaled = in.psi0;
    scaled.amps *= 2.0;
    EXPECT_THROW(h10::evolve(in.hI, in.hD, scaled, h10::Schedule::uniform(1.0, 10)), std::invalid_argument);
}

TEST(Evolve, SpecToleranceAgreesWithDefault) {
    const auto in = make("x-2", 16, {2.0});
    h10::ExpmvOptions loose;
    loose.tolerance = 1e-10;
    const auto sched = h10::Schedule::uniform(20.0, 40);
    const auto a = h10::evolve(in.hI, in.hD, in.psi0, sched, loose);
    const auto b = h10::evolve(in.hI, in.hD, in.psi0, sched);
    EXPECT_LT((a.final_state.amps - b.final_state.amps).norm(), 40 * 1e-10);
    EXPECT_LE(a.matvecs, b.matvecs);
    EXPECT_GT(b.matvecs, 0u);
}

TEST(MeasurePMax, SpecExamples) {
    const auto codec = h10::build_codec(2, 4);
    const auto pm = h10::measure_pmax(h10::StateVector::basis(codec, LatticePoint{1, 2}));
    EXPECT_DOUBLE_EQ(pm.prob, 1.0);
    EXPECT_EQ(pm.index, (LatticePoint{1, 2}));

    const h10::StateVector uniform(codec, VectorXcd::Constant(16, Complex(0.25, 0.0)));
    const auto u = h10::measure_pmax(uniform);
    EXPECT_DOUBLE_EQ(u.prob, 1.0 / 16.0);
    EXPECT_EQ(u.index, (LatticePoint{0, 0}));

    const auto psi = h10::build_initial_state({2.0}, AlgebraKind::su11, h10::build_codec(1, 64));
    EXPECT_LT(h10::measure_pmax(psi).prob, 0.5);

    const h10::StateVector bad(codec, VectorXcd::Constant(16, Complex(1.0, 0.0)));
    EXPECT_THROW(h10::measure_pmax(bad), std::invalid_argument);
}

TEST(Decide, SolutionExistsWithWitness) {
    h10::DecideConfig cfg;
    cfg.dim = 16;
    cfg.params = {2.0};
    const auto r = h10::decide(h10::parse_polynomial("(x-2)^2"), AlgebraKind::su11, cfg);
    EXPECT_EQ(r.verdict, h10::Verdict::solution_exists);
    EXPECT_EQ(r.witness, LatticePoint{2});
    EXPECT_FALSE(r.degeneracy_flag);
    EXPECT_EQ(r.box_k, 1u);
    EXPECT_EQ(r.box_d, 16u);
    EXPECT_LT(r.norm_drift, 1e-9);
    EXPECT_EQ(h10::brute_force_search(h10::parse_polynomial("(x-2)^2"), 15), r.witness);
}

TEST(Decide, NoSolutionAtMinimizer) {
    h10::DecideConfig cfg;
    cfg.dim = 16;
    const auto r = h10::decide(h10::parse_polynomial("x+1"), AlgebraKind::su11, cfg);
    EXPECT_EQ(r.verdict, h10::Verdict::no_solution);
    EXPECT_EQ(r.witness, LatticePoint{0});
    EXPECT_FALSE(h10::brute_force_search(h10::parse_polynomial("x+1"), 15).has_value());
}

TEST(Decide, ZeroPolynomialShortCircuits) {
    const auto r = h10::decide(h10::parse_polynomial("x*y - y*x"), AlgebraKind::su11, {});
    EXPECT_EQ(r.verdict, h10::Verdict::solution_exists);
    EXPECT_EQ(r.witness, (LatticePoint{0, 0}));
    EXPECT_TRUE(r.attempts.empty());
}

TEST(Decide, GrowsTimeUntilHaltOrCap) {
    h10::DecideConfig cfg;
    cfg.dim = 16;
    cfg.initial_time = 0.5;
    cfg.time_cap = 3.0;
    const auto r = h10::decide(h10::parse_polynomial("(x-5)^2"), AlgebraKind::su11, cfg);
    ASSERT_FALSE(r.attempts.empty());
    EXPECT_DOUBLE_EQ(r.attempts.front().total_time, 0.5);
    for (std::size_t i = 1; i < r.attempts.size(); ++i) {
        EXPECT_DOUBLE_EQ(r.attempts[i].total_time, std::min(2.0 * r.attempts[i - 1].total_time, 3.0));
    }
    if (r.verdict == h10::Verdict::inconclusive) {
        EXPECT_DOUBLE_EQ(r.final_time, 3.0);
        EXPECT_FALSE(r.witness.has_value());
    }
}

TEST(Decide, VerdictIsAlwaysRevalidated) {
    h10::DecideConfig cfg;
    cfg.dim = 16;
    for (const char* text : {"(x-2)^2", "x+1", "2x-5", "(x-1)(x-3)"}) {
        const auto p = h10::parse_polynomial(text);
        const auto r = h10::decide(p, AlgebraKind::su11, cfg);
        if (r.verdict == h10::Verdict::solution_exists) {
            ASSERT_TRUE(r.witness.has_value());
            EXPECT_EQ(p.evaluate(*r.witness), 0) << text;
        }
        if (r.verdict == h10::Verdict::no_solution) {
            ASSERT_TRUE(r.witness.has_value());
            EXPECT_NE(p.evaluate(*r.witness), 0) << text;
        }
    }
}

TEST(Decide, RejectsParametersInsideHaltingBound) {
    h10::DecideConfig cfg;
    cfg.params = {1.6};
    EXPECT_THROW(h10::decide(h10::parse_polynomial("x-2"), AlgebraKind::su11, cfg), h10::ConfigError);
    cfg.params = {0.8};
    EXPECT_THROW(h10::decide(h10::parse_polynomial("x-2"), AlgebraKind::weyl_heisenberg, cfg), h10::ConfigError);
    cfg.params = {2.0, 2.0, 2.0};
    EXPECT_THROW(h10::decide(h10::parse_polynomial("x+y"), AlgebraKind::su11, cfg), h10::ConfigError);
    cfg.params = {};
    cfg.growth = 1.0;
    EXPECT_THROW(h10::decide(h10::parse_polynomial("x-2"), AlgebraKind::su11, cfg), h10::ConfigError);
}

TEST(GapScan, SpecExamples) {
    const auto small = make("x-2", 5, {2.0});
    const auto end = h10::gap_scan(small.hI, small.hD, {1.0});
    EXPECT_NEAR(end.e0[0], 0.0, 1e-12);
    EXPECT_NEAR(end.e1[0], 1.0, 1e-12);

    const auto wide = make("x-2", 64, {2.0});
    EXPECT_NEAR(h10::gap_scan(wide.hI, wide.hD, {0.0}).e0[0], 0.0, 1e-8);

    const auto ref = make("x-2", 16, {2.0});
    const auto g = h10::gap_scan(ref.hI, ref.hD, h10::linspace01(21));
    EXPECT_GT(g.min_gap, 0.0);
    for (std::size_t i = 0; i < g.grid.size(); ++i) EXPECT_GE(g.e1[i], g.e0[i]);
}

TEST(GapScan, CapAndGrid) {
    const auto in = make("x+y", 8, {2.0, 2.0});
    EXPECT_THROW(h10::gap_scan(in.hI, in.hD, {0.5}, 32), h10::CapExceeded);
    EXPECT_THROW(h10::linspace01(1), h10::ConfigError);
}

TEST(GroundState, SpecExamples) {
    const auto in = make("x-2", 16, {2.0});
    const auto end = h10::ground_state(in.hI, in.hD, 1.0);
    EXPECT_NEAR(end.e0, 0.0, 1e-12);
    EXPECT_GT(h10::fidelity(end.v, h10::StateVector::basis(in.codec, LatticePoint{2})), 1.0 - 1e-12);
    EXPECT_FALSE(end.degenerate());

    const auto wide = make("x-2", 64, {2.0});
    EXPECT_GT(h10::fidelity(h10::ground_state(wide.hI, wide.hD, 0.0).v, wide.psi0), 1.0 - 1e-6);

    const auto twin = make("(x-1)(x-3)", 16, {2.0});
    const auto g = h10::ground_state(twin.hI, twin.hD, 1.0);
    EXPECT_NEAR(g.e0, 0.0, 1e-12);
    EXPECT_EQ(g.multiplicity, 2u);
    h10::DecideConfig cfg;
    cfg.dim = 16;
    EXPECT_TRUE(h10::decide(h10::parse_polynomial("(x-1)(x-3)"), AlgebraKind::su11, cfg).degeneracy_flag);
}

TEST(RunReportIo, JsonAndCsvRoundTrip) {
    h10::DecideConfig cfg;
    cfg.dim = 16;
    const auto r = h10::decide(h10::parse_polynomial("(x-2)^2"), AlgebraKind::su11, cfg);
    const auto back = h10::run_report_from_json(nlohmann::json::parse(h10::to_json(r).dump()));
    EXPECT_EQ(back.verdict, r.verdict);
    EXPECT_EQ(back.witness, r.witness);
    EXPECT_EQ(back.final_time, r.final_time);
    EXPECT_EQ(back.attempts.size(), r.attempts.size());
    ASSERT_EQ(back.p_max_trace.size(), r.p_max_trace.size());
    for (std::size_t i = 0; i < r.p_max_trace.size(); ++i) {
        EXPECT_EQ(back.p_max_trace[i].p_max, r.p_max_trace[i].p_max);
        EXPECT_EQ(back.p_max_trace[i].argmax, r.p_max_trace[i].argmax);
    }
    EXPECT_EQ(back.params, r.params);

    std::stringstream csv;
    h10::write_trace_csv(csv, r.p_max_trace);
    const auto header = csv.str().substr(0, csv.str().find('\n'));
    EXPECT_EQ(header, "t,p_max,argmax,norm");
    const auto rows = h10::read_trace_csv(csv);
    ASSERT_EQ(rows.size(), r.p_max_trace.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(rows[i].t, r.p_max_trace[i].t);
        EXPECT_EQ(rows[i].p_max, r.p_max_trace[i].p_max);
        EXPECT_EQ(rows[i].argmax, r.p_max_trace[i].argmax);
    }

    auto null_witness = h10::to_json(h10::RunReport{});
    EXPECT_TRUE(null_witness.at("witness").is_null());
    EXPECT_EQ(h10::join_index(LatticePoint{1, 2, 3}), "1;2;3");
}
