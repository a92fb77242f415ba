#pragma once

/**
 * @file io.hpp
 * @brief JSON and CSV forms of polynomials, single-mode states and
 *        operators, Hamiltonian provenance summaries, run reports, P_max
 *        traces and gap traces.
 *
 * Complex numbers are written as [re, im] pairs. Polynomial coefficients are
 * decimal strings so arbitrary precision survives the round trip.
 */

#include "h10/adiabatic.hpp"
#include "h10/fock.hpp"
#include "h10/hamiltonians.hpp"
#include "h10/poly.hpp"

#include <json.hpp>

#include <cstdint>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

namespace h10 {

using nlohmann::json;

inline json complex_to_json(Complex c) { return json::array({c.real(), c.imag()}); }

inline Complex complex_from_json(const json& j) {
    return {j.at(0).get<double>(), j.at(1).get<double>()};
}

// ---- polynomials ----

inline json to_json(const Polynomial& p) {
    json terms = json::array();
    for (const auto& [exp, coef] : p.terms()) {
        terms.push_back({{"exp", exp}, {"coef", coef.str()}});
    }
    return {{"k", p.num_vars()}, {"terms", std::move(terms)}};
}

inline Polynomial polynomial_from_json(const json& j) {
    Polynomial p(j.at("k").get<std::size_t>());
    for (const auto& t : j.at("terms")) {
        const auto exp = t.at("exp").get<Exponents>();
        const Integer coef(t.at("coef").get<std::string>());
        if (coef == 0) throw std::invalid_argument("serialized polynomial stores a zero coefficient");
        p.add_term(exp, coef);
    }
    return p;
}

// ---- single-mode states and operators ----

inline json to_json(const ModeState& s) {
    json amps = json::array();
    for (Eigen::Index i = 0; i < s.amps.size(); ++i) amps.push_back(complex_to_json(s.amps(i)));
    return {{"dim", s.dim()}, {"amps", std::move(amps)}};
}

inline ModeState mode_state_from_json(const json& j) {
    const auto d = j.at("dim").get<std::size_t>();
    const auto& amps = j.at("amps");
    if (amps.size() != d) throw std::invalid_argument("amplitude count differs from dim");
    ModeState s{Eigen::VectorXcd(static_cast<Eigen::Index>(d))};
    for (std::size_t i = 0; i < d; ++i) s.amps(static_cast<Eigen::Index>(i)) = complex_from_json(amps[i]);
    return s;
}

inline Structure structure_from_string(const std::string& s) {
    if (s == "diagonal") return Structure::diagonal;
    if (s == "raising") return Structure::raising;
    if (s == "lowering") return Structure::lowering;
    if (s == "general") return Structure::general;
    throw std::invalid_argument("unknown operator structure '" + s + "'");
}

/// Entries in row-major order.
inline json to_json(const ModeOperator& op) {
    json entries = json::array();
    for (std::size_t r = 0; r < op.dim(); ++r)
        for (std::size_t c = 0; c < op.dim(); ++c) entries.push_back(complex_to_json(op(r, c)));
    return {{"dim", op.dim()}, {"structure", std::string(to_string(op.structure()))}, {"entries", std::move(entries)}};
}

inline ModeOperator mode_operator_from_json(const json& j) {
    const auto d = j.at("dim").get<std::size_t>();
    const auto& entries = j.at("entries");
    if (entries.size() != d * d) throw std::invalid_argument("entry count differs from dim^2");
    const auto n = static_cast<Eigen::Index>(d);
    Eigen::MatrixXcd m(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c) m(r, c) = complex_from_json(entries[static_cast<std::size_t>(r * n + c)]);
    return ModeOperator(std::move(m), structure_from_string(j.at("structure").get<std::string>()));
}

// ---- Hamiltonian provenance ----

/// FNV-1a over the decimal diagonal entries joined by ','.
inline std::string diag_checksum(const ProblemHamiltonian& hD) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](char ch) {
        h ^= static_cast<unsigned char>(ch);
        h *= 1099511628211ull;
    };
    bool first = true;
    for (const auto& v : hD.exact()) {
        if (!first) mix(',');
        first = false;
        for (char ch : v.str()) mix(ch);
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

inline json hamiltonian_summary(const InitialHamiltonian& hI, const ProblemHamiltonian& hD) {
    json params = json::array();
    for (const auto& c : hI.params()) params.push_back(complex_to_json(c));
    return {{"k", hI.codec().modes()},
            {"d", hI.codec().dim()},
            {"algebra", std::string(to_string(hI.algebra()))},
            {"params", std::move(params)},
            {"diag_checksum", diag_checksum(hD)},
            {"diag_min", hD.minimum().str()}};
}

// ---- run reports ----

inline Verdict verdict_from_string(const std::string& s) {
    if (s == "SolutionExists") return Verdict::solution_exists;
    if (s == "NoSolution") return Verdict::no_solution;
    if (s == "Inconclusive") return Verdict::inconclusive;
    throw std::invalid_argument("unknown verdict '" + s + "'");
}

inline AlgebraKind algebra_from_string(const std::string& s) {
    if (s == "su11") return AlgebraKind::su11;
    if (s == "wh") return AlgebraKind::weyl_heisenberg;
    throw std::invalid_argument("unknown algebra '" + s + "' (expected su11 or wh)");
}

inline json to_json(const RunReport& r) {
    json trace = json::array();
    for (const auto& tp : r.p_max_trace) {
        trace.push_back({{"t", tp.t}, {"p_max", tp.p_max}, {"argmax", tp.argmax}, {"norm", tp.norm},
                         {"excited_max", tp.excited_max}});
    }
    json attempts = json::array();
    for (const auto& a : r.attempts) {
        attempts.push_back({{"T", a.total_time}, {"steps", a.steps}, {"p_max", a.p_max}, {"argmax", a.argmax},
                            {"norm_drift", a.norm_drift}});
    }
    json params = json::array();
    for (const auto& c : r.params) params.push_back(complex_to_json(c));
    return {{"verdict", std::string(to_string(r.verdict))},
            {"witness", r.witness ? json(*r.witness) : json(nullptr)},
            {"final_T", r.final_time},
            {"box", {{"k", r.box_k}, {"d", r.box_d}}},
            {"degeneracy_flag", r.degeneracy_flag},
            {"norm_drift", r.norm_drift},
            {"max_excited_probability", r.max_excited_probability},
            {"algebra", std::string(to_string(r.algebra))},
            {"params", std::move(params)},
            {"attempts", std::move(attempts)},
            {"p_max_trace", std::move(trace)}};
}

inline RunReport run_report_from_json(const json& j) {
    RunReport r;
    r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
    if (!j.at("witness").is_null()) r.witness = j.at("witness").get<LatticePoint>();
    r.final_time = j.at("final_T").get<double>();
    r.box_k = j.at("box").at("k").get<std::size_t>();
    r.box_d = j.at("box").at("d").get<std::size_t>();
    r.degeneracy_flag = j.at("degeneracy_flag").get<bool>();
    r.norm_drift = j.at("norm_drift").get<double>();
    r.max_excited_probability = j.value("max_excited_probability", 0.0);
    r.algebra = algebra_from_string(j.value("algebra", std::string("su11")));
    for (const auto& c : j.value("params", json::array())) r.params.push_back(complex_from_json(c));
    for (const auto& a : j.value("attempts", json::array())) {
        r.attempts.push_back({a.at("T").get<double>(), a.at("steps").get<std::size_t>(), a.at("p_max").get<double>(),
                              a.at("argmax").get<LatticePoint>(), a.at("norm_drift").get<double>()});
    }
    for (const auto& t : j.value("p_max_trace", json::array())) {
        r.p_max_trace.push_back({t.at("t").get<double>(), t.at("p_max").get<double>(),
                                 t.at("argmax").get<LatticePoint>(), t.at("norm").get<double>(),
                                 t.value("excited_max", 0.0)});
    }
    return r;
}

// ---- CSV ----

inline std::string join_index(const LatticePoint& idx) {
    std::string out;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (i) out += ';';
        out += std::to_string(idx[i]);
    }
    return out;
}

/// Columns t,p_max,argmax,norm; argmax is the semicolon-joined multi-index.
inline void write_trace_csv(std::ostream& os, const std::vector<TracePoint>& trace) {
    const auto old = os.precision(std::numeric_limits<double>::max_digits10);
    os << "t,p_max,argmax,norm\n";
    for (const auto& tp : trace) os << tp.t << ',' << tp.p_max << ',' << join_index(tp.argmax) << ',' << tp.norm << '\n';
    os.precision(old);
}

inline std::vector<TracePoint> read_trace_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != "t,p_max,argmax,norm") throw std::invalid_argument("missing trace CSV header");
    std::vector<TracePoint> out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string t, p, arg, n;
        std::getline(row, t, ',');
        std::getline(row, p, ',');
        std::getline(row, arg, ',');
        std::getline(row, n, ',');
        TracePoint tp;
        tp.t = std::stod(t);
        tp.p_max = std::stod(p);
        tp.norm = std::stod(n);
        std::istringstream parts(arg);
        std::string piece;
        while (std::getline(parts, piece, ';')) tp.argmax.push_back(std::stoull(piece));
        out.push_back(std::move(tp));
    }
    return out;
}

/// Columns s,e0,e1,gap followed by a "# min_gap=..." summary line.
inline void write_gap_csv(std::ostream& os, const GapTrace& g) {
    const auto old = os.precision(std::numeric_limits<double>::max_digits10);
    os << "s,e0,e1,gap\n";
    for (std::size_t i = 0; i < g.grid.size(); ++i) {
        os << g.grid[i] << ',' << g.e0[i] << ',' << g.e1[i] << ',' << g.e1[i] - g.e0[i] << '\n';
    }
    os << "# min_gap=" << g.min_gap << '\n';
    os.precision(old);
}

}  // namespace h10
