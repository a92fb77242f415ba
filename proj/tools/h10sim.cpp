// h10sim: adiabatic Diophantine decision simulator.
//
//   h10sim solve "(x-2)^2" --algebra su11 --d 16 --z 2
//   h10sim oracle "x^2+y^2-5" --bound 5
//   h10sim gap "x-2" --d 16 --grid-points 21
//   h10sim coherent --z 1.61 --d 64
//   h10sim gate-demo --d 8

#include "h10/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

namespace {

void add_run_options(CLI::App* cmd, h10::cli::RunConfig& rc, std::string& algebra) {
    cmd->add_option("equation", rc.equation, "Polynomial D, e.g. \"x^2 + y^2 - 5 = 0\"")->required();
    cmd->add_option("--algebra", algebra, "su11 (infinite square well) or wh (harmonic oscillator)")
        ->check(CLI::IsMember({"su11", "wh"}));
    cmd->add_option("--d", rc.d, "Fock levels kept per mode");
    cmd->add_option("--z,--alpha", rc.params, "Coherent parameter(s): re or re+imi, comma-separated per mode");
    cmd->add_option("--T0", rc.t0, "Initial total evolution time");
    cmd->add_option("--T-growth", rc.t_growth, "Factor applied to T after an attempt with P_max <= 1/2");
    cmd->add_option("--T-cap", rc.t_cap, "Largest total time before giving up as Inconclusive");
    cmd->add_option("--steps-per-unit-time", rc.steps_per_unit_time, "Integrator steps per unit of time");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adiabatic quantum decision procedure for Diophantine equations on truncated Fock spaces"};
    app.require_subcommand(1);

    h10::cli::GlobalOptions global;
    app.add_option("--output-dir", global.output_dir, "Directory for report.json, trace.csv and gap.csv");
    app.add_flag("--json", global.json, "Machine-readable output where a command offers both");
    app.add_option("--seed", global.seed, "Seed for randomized verification");

    h10::cli::RunConfig solve_cfg;
    std::string solve_algebra = "su11";
    auto* solve = app.add_subcommand("solve", "Run the adiabatic decision procedure");
    add_run_options(solve, solve_cfg, solve_algebra);

    std::string oracle_eq;
    std::uint64_t bound = 10;
    auto* oracle = app.add_subcommand("oracle", "Exhaustive root search over {0..bound}^k");
    oracle->add_option("equation", oracle_eq, "Polynomial D")->required();
    oracle->add_option("--bound", bound, "Largest coordinate searched");

    h10::cli::RunConfig gap_cfg;
    std::string gap_algebra = "su11";
    std::size_t grid_points = 21;
    auto* gap = app.add_subcommand("gap", "Lowest two eigenvalues of H_A(s) on a uniform grid");
    add_run_options(gap, gap_cfg, gap_algebra);
    gap->add_option("--grid-points", grid_points, "Number of s values in [0, 1]");

    std::string coherent_z = "2";
    std::size_t coherent_d = 64;
    auto* coherent = app.add_subcommand("coherent", "Barut-Girardello state diagnostics");
    coherent->add_option("--z", coherent_z, "Coherent parameter");
    coherent->add_option("--d", coherent_d, "Fock levels kept");

    std::size_t gate_d = 8;
    auto* gate = app.add_subcommand("gate-demo", "CNOT from free square-well evolution on coded levels");
    gate->add_option("--d", gate_d, "Fock levels kept");

    // Global flags are accepted after the subcommand as well.
    for (auto* sub : {solve, oracle, gap, coherent, gate}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : h10::cli::kParseError;
    }

    auto& out = std::cout;
    auto& err = std::cerr;
    if (*solve) {
        solve_cfg.algebra = h10::algebra_from_string(solve_algebra);
        return h10::cli::cmd_solve(solve_cfg, global, out, err);
    }
    if (*oracle) return h10::cli::cmd_oracle(oracle_eq, bound, global, out, err);
    if (*gap) {
        gap_cfg.algebra = h10::algebra_from_string(gap_algebra);
        return h10::cli::cmd_gap(gap_cfg, grid_points, global, out, err);
    }
    if (*coherent) {
        try {
            const auto z = h10::cli::parse_complex(coherent_z);
            return h10::cli::cmd_coherent(z, coherent_d, global, out, err);
        } catch (const h10::ConfigError& e) {
            err << "configuration error: " << e.what() << '\n';
            return h10::cli::kConfigError;
        }
    }
    if (*gate) return h10::cli::cmd_gate_demo(gate_d, global, out, err);
    return h10::cli::kInternalError;
}
