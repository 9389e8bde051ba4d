#pragma once

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qxmap/architecture.hpp"
#include "qxmap/circuit.hpp"
#include "qxmap/encoder.hpp"
#include "qxmap/errors.hpp"
#include "qxmap/qasm.hpp"
#include "qxmap/reconstruction.hpp"
#include "qxmap/solver.hpp"
#include "qxmap/strategies.hpp"
#include "qxmap/verifier.hpp"

namespace qxmap::cli {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitTimeout = 3;

struct RunConfig {
    std::string input;
    std::string arch = "ibm-qx4";
    std::string mode = "exact";
    std::vector<int> custom_points;
    std::string out;
    std::string csv;
    double timeout_s = 600.0;
    int jobs = 1;
    bool oracle_check = false;
};

inline const std::vector<std::string>& known_modes() {
    static const std::vector<std::string> modes = {"exact",    "exact-subsets", "disjoint",
                                                   "odd",      "triangle",      "custom"};
    return modes;
}

inline CouplingMap load_architecture(const std::string& spec) {
    if (spec == "ibm-qx4") return builtin_qx4();
    std::ifstream in(spec, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot read architecture file " + spec);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_coupling_map(buf.str());
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << text;
}

inline PermutationPolicy policy_for_mode(const std::string& mode) {
    if (mode == "exact" || mode == "exact-subsets") return PermutationPolicy::AllGates;
    if (mode == "disjoint") return PermutationPolicy::DisjointQubits;
    if (mode == "odd") return PermutationPolicy::OddGates;
    if (mode == "triangle") return PermutationPolicy::QubitTriangle;
    if (mode == "custom") return PermutationPolicy::Custom;
    throw std::invalid_argument("unknown mode " + mode);
}

// Resolves the permutation-point set for a mode. Throws invalid_argument
// when the mode's preconditions fail (e.g. no triangle in the device).
inline std::set<int> resolve_points(const std::string& mode, const CnotSkeleton& sk,
                                    const CouplingMap& cm,
                                    const std::vector<int>& custom_points) {
    const PermutationPolicy policy = policy_for_mode(mode);
    if (policy == PermutationPolicy::OddGates && !odd_gates_supported(cm))
        std::cerr << "warning: no qubit of this architecture can interact with two others; "
                     "the odd-gates restriction may be infeasible\n";
    return points_for_policy(policy, sk, cm,
                             std::set<int>(custom_points.begin(), custom_points.end()));
}

inline nlohmann::json solution_to_json(const MappingSolution& sol, const std::string& arch,
                                       const std::string& mode, const std::set<int>& points,
                                       int num_physical) {
    nlohmann::json j;
    j["arch"] = arch;
    j["mode"] = mode;
    j["m"] = num_physical;
    j["n"] = sol.initial.num_logical();
    j["cost"] = sol.cost;
    j["subset"] = sol.subset_used;
    j["initial"] = sol.initial.assign;
    auto placements = nlohmann::json::array();
    for (const Placement& p : sol.placements) placements.push_back(p.assign);
    j["placements"] = placements;
    j["switches"] = std::vector<int>(sol.switches.begin(), sol.switches.end());
    nlohmann::json seqs = nlohmann::json::object();
    for (const auto& [k, edges] : sol.swap_sequences) {
        auto arr = nlohmann::json::array();
        for (const auto& [a, b] : edges) arr.push_back({a, b});
        seqs[std::to_string(k)] = arr;
    }
    j["swap_sequences"] = seqs;
    j["points"] = std::vector<int>(points.begin(), points.end());
    return j;
}

inline MappingSolution solution_from_json(const nlohmann::json& j) {
    MappingSolution sol;
    sol.cost = j.at("cost").get<long long>();
    sol.subset_used = j.at("subset").get<std::vector<int>>();
    sol.initial.assign = j.at("initial").get<std::vector<int>>();
    for (const auto& p : j.at("placements"))
        sol.placements.push_back(Placement{p.get<std::vector<int>>()});
    for (int s : j.at("switches").get<std::vector<int>>()) sol.switches.push_back(s != 0);
    for (const auto& [key, edges] : j.at("swap_sequences").items()) {
        std::vector<std::pair<int, int>> seq;
        for (const auto& e : edges) seq.emplace_back(e[0].get<int>(), e[1].get<int>());
        sol.swap_sequences[std::stoi(key)] = seq;
    }
    return sol;
}

namespace detail {

struct SolveOutcome {
    std::optional<MappingSolution> solution;
    bool timed_out = false;
    bool unavailable = false;  // mode precondition failed (e.g. no triangle)
    std::optional<std::size_t> num_points;
    double seconds = 0.0;
};

inline SolveOutcome run_mode(const std::string& mode, const CnotSkeleton& sk,
                             const CouplingMap& cm, const std::vector<int>& custom_points,
                             double timeout_s, int jobs) {
    SolveOutcome outcome;
    const auto start = std::chrono::steady_clock::now();
    SolveOptions options;
    options.jobs = jobs;
    options.deadline = start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                   std::chrono::duration<double>(timeout_s));
    try {
        const auto points = resolve_points(mode, sk, cm, custom_points);
        outcome.num_points = points.size();
        if (mode == "exact-subsets") {
            outcome.solution = solve_with_subsets(sk, cm, points, options);
        } else {
            std::vector<int> all(cm.num_physical);
            std::iota(all.begin(), all.end(), 0);
            outcome.solution = solve_exact(sk, cm, all, points, options);
        }
    } catch (const TimeoutError&) {
        outcome.timed_out = true;
    } catch (const std::invalid_argument&) {
        outcome.unavailable = true;
    }
    outcome.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return outcome;
}

inline std::string format_seconds(double s) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(3) << s;
    return out.str();
}

}  // namespace detail

inline int cmd_map(const RunConfig& cfg) {
    const auto arch = load_architecture(cfg.arch);
    const auto parsed = parse_qasm(read_text_file(cfg.input));
    for (const std::string& w : parsed.warnings) std::cerr << "warning: " << w << "\n";
    const auto sk = extract_skeleton(parsed.circuit);
    if (sk.num_qubits > arch.num_physical) {
        std::cerr << "error: circuit needs " << sk.num_qubits
                  << " qubits but the architecture has " << arch.num_physical << "\n";
        return kExitError;
    }

    const auto outcome =
        detail::run_mode(cfg.mode, sk, arch, cfg.custom_points, cfg.timeout_s, cfg.jobs);
    if (outcome.timed_out) {
        std::cerr << "error: timed out after " << cfg.timeout_s << " s\n";
        return kExitTimeout;
    }
    if (outcome.unavailable) {
        std::cerr << "error: mode " << cfg.mode
                  << " is not applicable to this architecture/point set\n";
        return kExitInfeasible;
    }
    if (!outcome.solution) {
        std::cerr << "error: no valid mapping exists under mode " << cfg.mode << "\n";
        return kExitInfeasible;
    }
    const MappingSolution& sol = *outcome.solution;

    if (cfg.oracle_check) {
        const auto points = resolve_points(cfg.mode, sk, arch, cfg.custom_points);
        try {
            const auto oracle = brute_force_oracle(sk, arch, sol.subset_used, points);
            if (!oracle || *oracle != sol.cost) {
                std::cerr << "error: oracle disagrees with the solver\n";
                return kExitError;
            }
            std::cerr << "oracle check passed\n";
        } catch (const CapExceededError&) {
            std::cerr << "warning: instance too large for the oracle, check skipped\n";
        }
    }

    const auto mc = build_mapped_circuit(parsed.circuit, sol, arch);
    std::string out = cfg.out;
    if (out.empty())
        out = std::filesystem::path(cfg.input).replace_extension(".mapped.qasm").string();
    write_text_file(out, emit_qasm(mc));
    const auto points = resolve_points(cfg.mode, sk, arch, cfg.custom_points);
    write_text_file(out + ".sol.json",
                    solution_to_json(sol, cfg.arch, cfg.mode, points, arch.num_physical)
                        .dump(2) +
                        "\n");

    std::cout << "n: " << parsed.circuit.num_qubits << "\n";
    std::cout << "original cost: " << parsed.circuit.gates.size() << "\n";
    std::cout << "F: " << sol.cost << "\n";
    std::cout << "mapped gates: " << mc.gates.size() << "\n";
    std::cout << "time: " << detail::format_seconds(outcome.seconds) << " s\n";
    std::cout << "mapped qasm: " << out << "\n";
    std::cout << "solution: " << out << ".sol.json\n";
    return kExitOk;
}

inline int cmd_encode(const RunConfig& cfg) {
    const auto arch = load_architecture(cfg.arch);
    const auto parsed = parse_qasm(read_text_file(cfg.input));
    const auto sk = extract_skeleton(parsed.circuit);
    if (sk.cnots.empty()) {
        std::cerr << "error: the circuit has no CNOT gates, nothing to encode\n";
        return kExitError;
    }
    const auto points = resolve_points(cfg.mode, sk, arch, cfg.custom_points);

    std::string out = cfg.out;
    if (out.empty())
        out = std::filesystem::path(cfg.input).replace_extension(".wcnf").string();

    if (cfg.mode == "exact-subsets") {
        const auto subsets = connected_subsets(arch, sk.num_qubits);
        for (std::size_t i = 0; i < subsets.size(); ++i) {
            const auto inst = encode(sk, arch, subsets[i], points);
            const std::string path =
                std::filesystem::path(out).replace_extension(".s" + std::to_string(i) + ".wcnf")
                    .string();
            write_text_file(path, emit_wcnf(inst));
            write_text_file(path + ".vars", emit_varmap(inst));
            std::cout << "wcnf: " << path << " (x-vars: " << inst.book.x_count << ")\n";
        }
        return kExitOk;
    }

    std::vector<int> all(arch.num_physical);
    std::iota(all.begin(), all.end(), 0);
    const auto inst = encode(sk, arch, all, points);
    write_text_file(out, emit_wcnf(inst));
    write_text_file(out + ".vars", emit_varmap(inst));
    std::cout << "wcnf: " << out << " (x-vars: " << inst.book.x_count << ")\n";
    std::cout << "varmap: " << out << ".vars\n";
    return kExitOk;
}

inline int cmd_verify(const std::string& original_path, const std::string& mapped_path,
                      const std::string& solution_path, const std::string& arch_spec) {
    const auto arch = load_architecture(arch_spec);
    const auto original = parse_qasm(read_text_file(original_path)).circuit;
    const auto mc = parse_mapped_qasm(read_text_file(mapped_path));
    const auto sol = solution_from_json(nlohmann::json::parse(read_text_file(solution_path)));

    const auto report = verify_all(original, mc, sol, arch);
    std::cout << "coupling_legal: " << (report.coupling_legal ? "pass" : "FAIL") << "\n";
    std::cout << "tracking: " << (report.tracking_ok ? "pass" : "FAIL") << "\n";
    std::cout << "unitary: " << (report.unitary_ok ? "pass" : "FAIL")
              << " (max deviation " << std::scientific << std::setprecision(2)
              << report.max_deviation << ")\n";
    if (report.coupling_legal && report.tracking_ok && report.unitary_ok) return kExitOk;
    std::cerr << "error: verification failed:";
    if (!report.coupling_legal) std::cerr << " coupling_legal";
    if (!report.tracking_ok) std::cerr << " tracking";
    if (!report.unitary_ok) std::cerr << " unitary";
    std::cerr << "\n";
    return kExitError;
}

namespace detail {

struct BenchRow {
    std::string text;
};

inline BenchRow bench_one(const std::filesystem::path& path, const CouplingMap& arch,
                          double timeout_s) {
    const std::string name = path.stem().string();
    std::ostringstream row;
    row << name;

    QuantumCircuit circuit;
    try {
        circuit = parse_qasm(read_text_file(path.string())).circuit;
    } catch (const std::exception& e) {
        std::cerr << "warning: skipping " << path.string() << ": " << e.what() << "\n";
        row << ",ERR";
        for (int i = 0; i < 17; ++i) row << ',';
        return {row.str()};
    }
    const auto sk = extract_skeleton(circuit);
    row << ',' << circuit.num_qubits << ',' << circuit.gates.size();

    const auto exact = run_mode("exact", sk, arch, {}, timeout_s, 1);
    std::optional<long long> c_min;
    if (exact.timed_out)
        row << ",TO," << format_seconds(exact.seconds);
    else if (!exact.solution)
        row << ",INF," << format_seconds(exact.seconds);
    else {
        c_min = exact.solution->cost;
        row << ',' << *c_min << ',' << format_seconds(exact.seconds);
    }

    const auto subsets = run_mode("exact-subsets", sk, arch, {}, timeout_s, 1);
    if (subsets.timed_out)
        row << ",TO," << format_seconds(subsets.seconds);
    else if (!subsets.solution)
        row << ",INF," << format_seconds(subsets.seconds);
    else
        row << ',' << subsets.solution->cost << ',' << format_seconds(subsets.seconds);

    for (const std::string mode : {"disjoint", "odd", "triangle"}) {
        const auto outcome = run_mode(mode, sk, arch, {}, timeout_s, 1);
        if (outcome.unavailable) {
            row << ",NA,NA,,";
            continue;
        }
        row << ',' << *outcome.num_points;
        if (outcome.timed_out) {
            row << ",TO,," << format_seconds(outcome.seconds);
        } else if (!outcome.solution) {
            row << ",INF,," << format_seconds(outcome.seconds);
        } else {
            row << ',' << outcome.solution->cost << ',';
            if (c_min) row << outcome.solution->cost - *c_min;
            row << ',' << format_seconds(outcome.seconds);
        }
    }
    return {row.str()};
}

}  // namespace detail

inline const char* bench_csv_header() {
    return "benchmark,n,original_cost,c_min,t_min_s,c_subsets,t_subsets_s,"
           "Gp_disjoint,c_disjoint,d_disjoint,t_disjoint_s,"
           "Gp_odd,c_odd,d_odd,t_odd_s,"
           "Gp_triangle,c_triangle,d_triangle,t_triangle_s";
}

inline int cmd_bench(const std::string& dir, const RunConfig& cfg) {
    const auto arch = load_architecture(cfg.arch);
    std::vector<std::filesystem::path> files;
    if (!std::filesystem::is_directory(dir)) {
        std::cerr << "error: " << dir << " is not a directory\n";
        return kExitError;
    }
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".qasm")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    std::vector<detail::BenchRow> rows(files.size());
    if (cfg.jobs > 1) {
        std::vector<std::future<detail::BenchRow>> futures;
        futures.reserve(files.size());
        for (const auto& f : files)
            futures.push_back(std::async(std::launch::async, [&, f] {
                return detail::bench_one(f, arch, cfg.timeout_s);
            }));
        for (std::size_t i = 0; i < futures.size(); ++i) rows[i] = futures[i].get();
    } else {
        for (std::size_t i = 0; i < files.size(); ++i)
            rows[i] = detail::bench_one(files[i], arch, cfg.timeout_s);
    }

    std::ostringstream csv;
    csv << bench_csv_header() << "\n";
    for (const auto& row : rows) csv << row.text << "\n";
    if (cfg.csv.empty())
        std::cout << csv.str();
    else
        write_text_file(cfg.csv, csv.str());
    return kExitOk;
}

// Full command-line front end; returns the process exit code.
inline int run_cli(std::vector<std::string> args) {
    CLI::App app{"Minimal-cost mapping of quantum circuits onto coupled architectures"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string verify_original, verify_mapped, verify_solution, bench_dir;

    auto add_common = [&](CLI::App* cmd, bool with_mode) {
        cmd->add_option("--arch", cfg.arch, "built-in name (ibm-qx4) or coupling-map JSON path");
        if (with_mode) {
            cmd->add_option("--mode", cfg.mode, "exact|exact-subsets|disjoint|odd|triangle|custom")
                ->check(CLI::IsMember(known_modes()));
            cmd->add_option("--points", cfg.custom_points,
                            "custom permutation points (1-based CNOT indices)")
                ->delimiter(',');
        }
        cmd->add_option("--timeout", cfg.timeout_s, "per-solve timeout in seconds")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--jobs", cfg.jobs, "worker threads")->check(CLI::PositiveNumber);
    };

    auto* map_cmd = app.add_subcommand("map", "map a circuit and write the result");
    map_cmd->add_option("input", cfg.input, "OpenQASM 2.0 file")->required();
    add_common(map_cmd, true);
    map_cmd->add_option("--out", cfg.out, "output path for the mapped QASM");
    map_cmd->add_flag("--oracle-check", cfg.oracle_check,
                      "cross-check the optimum with the exhaustive oracle");

    auto* encode_cmd = app.add_subcommand("encode", "emit the weighted-CNF instance");
    encode_cmd->add_option("input", cfg.input, "OpenQASM 2.0 file")->required();
    add_common(encode_cmd, true);
    encode_cmd->add_option("--out", cfg.out, "output path for the WCNF file");

    auto* verify_cmd = app.add_subcommand("verify", "check a mapping end to end");
    verify_cmd->add_option("original", verify_original, "original QASM")->required();
    verify_cmd->add_option("mapped", verify_mapped, "mapped QASM")->required();
    verify_cmd->add_option("solution", verify_solution, "solution JSON")->required();
    verify_cmd->add_option("--arch", cfg.arch, "architecture");

    auto* bench_cmd = app.add_subcommand("bench", "run all modes over a directory of circuits");
    bench_cmd->add_option("dir", bench_dir, "directory of .qasm files")->required();
    add_common(bench_cmd, false);
    bench_cmd->add_option("--csv", cfg.csv, "CSV output path (default: stdout)");

    std::reverse(args.begin(), args.end());  // CLI11 consumes reversed argv
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitError;
    }

    try {
        if (map_cmd->parsed()) return cmd_map(cfg);
        if (encode_cmd->parsed()) return cmd_encode(cfg);
        if (verify_cmd->parsed())
            return cmd_verify(verify_original, verify_mapped, verify_solution, cfg.arch);
        if (bench_cmd->parsed()) return cmd_bench(bench_dir, cfg);
    } catch (const TimeoutError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitTimeout;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}

}  // namespace qxmap::cli
