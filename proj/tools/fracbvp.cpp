// Command-line front end: validate problem documents, compute the structural
// constants, run solvability certificates, solve, and reproduce the built-in
// reference problems.
//
// Exit codes: 0 success/affirmed, 1 inconclusive or reproduction mismatch,
// 2 input error, 3 solver non-convergence.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fracbvp/certify.hpp"
#include "fracbvp/model.hpp"
#include "fracbvp/problem_file.hpp"
#include "fracbvp/solver.hpp"

namespace {

constexpr std::uint64_t kDefaultSeed = 42;
constexpr std::uint64_t kLipschitzTSamples = 1000;
constexpr std::uint64_t kLipschitzPairSamples = 1000;
constexpr std::uint64_t kAuditSamples = 20000;
constexpr double kSampleBoxLo = -10.0;
constexpr double kSampleBoxHi = 10.0;

enum ExitCode : int { kOk = 0, kInconclusive = 1, kInputError = 2, kNoConvergence = 3 };

std::string fmt9(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.9g", v);
    return buffer;
}

struct Overrides {
    std::optional<std::size_t> nodes;
    std::optional<int> oversample;
    std::optional<double> tol;
    std::optional<std::size_t> max_iter;
};

fracbvp::QuadratureConfig quad_for(const fracbvp::ProblemFile& file, const Overrides& o) {
    fracbvp::QuadratureConfig quad = file.solver.quadrature();
    if (o.nodes) quad.n_nodes = *o.nodes;
    if (o.oversample) quad.oversample = *o.oversample;
    quad.validate();
    return quad;
}

std::uint64_t default_seed() {
    const char* env = std::getenv("FRACBVP_SEED");
    if (env == nullptr || *env == '\0') return kDefaultSeed;
    std::uint64_t value = 0;
    const char* last = env + std::string_view(env).size();
    auto [ptr, ec] = std::from_chars(env, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw fracbvp::ProblemFileError(std::string("FRACBVP_SEED: malformed value \"") + env +
                                        "\"");
    }
    return value;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw fracbvp::ProblemFileError("cannot open " + path + " for writing");
    out << text;
    if (!out) throw fracbvp::ProblemFileError("failed writing " + path);
}

// ---- constants --------------------------------------------------------------

int run_constants(const std::string& path, const Overrides& overrides,
                  const std::string& out_path) {
    const fracbvp::ProblemFile file = fracbvp::load_problem_file(path);
    const fracbvp::StructuralConstants constants = fracbvp::compute_constants(file.problem);

    std::cout << "file: " << path << "\n";
    std::cout << "delta1 = " << fmt9(constants.delta1) << "\n";
    std::cout << "delta2 = " << fmt9(constants.delta2) << "\n";
    std::cout << "delta3 = " << fmt9(constants.delta3) << "\n";
    std::cout << "theta  = " << fmt9(constants.theta) << "\n";
    std::cout << "omega  = " << fmt9(constants.omega) << "\n";

    nlohmann::ordered_json report;
    report["file"] = path;
    report["constants"] = {{"delta1", constants.delta1}, {"delta2", constants.delta2},
                           {"delta3", constants.delta3}, {"theta", constants.theta},
                           {"omega", constants.omega}};
    if (file.certificates.boyd_wong) {
        const double phi = fracbvp::compute_phi(file.problem, file.certificates.boyd_wong->g,
                                                quad_for(file, overrides));
        std::cout << "phi    = " << fmt9(phi) << "\n";
        report["constants"]["phi"] = phi;
    }
    if (!out_path.empty()) {
        write_text_file(out_path, report.dump(2) + "\n");
        std::cout << "wrote " << out_path << "\n";
    }
    return kOk;
}

// ---- check ------------------------------------------------------------------

struct CheckResult {
    std::string text;
    nlohmann::ordered_json report;
    bool any_affirmative = false;
};

CheckResult check_one(const std::string& path, const Overrides& overrides, std::uint64_t seed) {
    const fracbvp::ProblemFile file = fracbvp::load_problem_file(path);
    if (!file.certificates.any()) {
        throw fracbvp::ProblemFileError(
            path + ": no certificate block; add \"certificates\" with at least one of "
                   "banach, boyd_wong, leray_schauder");
    }
    const fracbvp::QuadratureConfig quad = quad_for(file, overrides);

    CheckResult result;
    result.report["file"] = path;
    std::string text = "file: " + path + "\n";

    const bool samples = (file.certificates.banach && !file.certificates.banach->lipschitz) ||
                         file.certificates.boyd_wong.has_value();
    if (samples) {
        text += "seed: " + std::to_string(seed) + "\n";
        result.report["seed"] = seed;
    }

    std::vector<fracbvp::Certificate> certificates;
    if (file.certificates.banach) {
        fracbvp::LipschitzEstimate lipschitz;
        if (file.certificates.banach->lipschitz) {
            lipschitz.value = *file.certificates.banach->lipschitz;
            lipschitz.method = fracbvp::LipschitzEstimate::Method::user_supplied;
        } else {
            lipschitz = fracbvp::estimate_lipschitz(file.problem.f(), kLipschitzTSamples,
                                                    kSampleBoxLo, kSampleBoxHi,
                                                    kLipschitzPairSamples, seed);
        }
        fracbvp::Certificate cert = fracbvp::check_banach(file.problem, lipschitz, quad);
        if (lipschitz.method == fracbvp::LipschitzEstimate::Method::sampled &&
            cert.verdict == fracbvp::Verdict::unique_solution) {
            const auto rho = cert.quantities.find("rho");
            if (rho != cert.quantities.end() && rho->second > kSampleBoxHi) {
                cert.notes.push_back("certified ball radius exceeds the sampling box [" +
                                     fmt9(kSampleBoxLo) + ", " + fmt9(kSampleBoxHi) +
                                     "]; widen the box to trust the sampled constant");
            }
        }
        certificates.push_back(std::move(cert));
    }
    if (file.certificates.boyd_wong) {
        certificates.push_back(fracbvp::check_boyd_wong(file.problem, file.certificates.boyd_wong->g,
                                                        quad, kAuditSamples, seed, kSampleBoxLo,
                                                        kSampleBoxHi));
    }
    if (file.certificates.leray_schauder) {
        certificates.push_back(fracbvp::check_leray_schauder(
            file.problem, file.certificates.leray_schauder->p,
            file.certificates.leray_schauder->psi, quad));
    }

    result.report["certificates"] = nlohmann::ordered_json::array();
    for (const fracbvp::Certificate& cert : certificates) {
        text += to_string(cert.kind) + ": " + to_string(cert.verdict) + "\n";
        for (const auto& [name, value] : cert.quantities) {
            text += "  " + name + " = " + fmt9(value) + "\n";
        }
        for (const std::string& note : cert.notes) text += "  note: " + note + "\n";
        if (cert.verdict != fracbvp::Verdict::inconclusive) result.any_affirmative = true;
        result.report["certificates"].push_back(fracbvp::certificate_to_json(cert));
    }
    result.text = std::move(text);
    return result;
}

int run_check(const std::vector<std::string>& paths, const Overrides& overrides,
              std::uint64_t seed, unsigned jobs, const std::string& out_path) {
    std::vector<CheckResult> results(paths.size());
    if (jobs <= 1 || paths.size() <= 1) {
        for (std::size_t i = 0; i < paths.size(); ++i) {
            results[i] = check_one(paths[i], overrides, seed);
        }
    } else {
        // bounded batch of async workers; results land in input order
        std::vector<std::future<CheckResult>> futures(paths.size());
        std::size_t next = 0;
        std::size_t active = 0;
        std::size_t drained = 0;
        while (drained < paths.size()) {
            while (next < paths.size() && active < jobs) {
                futures[next] = std::async(std::launch::async, check_one, paths[next], overrides,
                                           seed);
                ++next;
                ++active;
            }
            results[drained] = futures[drained].get();  // rethrows worker errors
            ++drained;
            --active;
        }
    }

    bool all_affirmative = true;
    nlohmann::ordered_json report = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (i > 0) std::cout << "\n";
        std::cout << results[i].text;
        all_affirmative = all_affirmative && results[i].any_affirmative;
        report.push_back(std::move(results[i].report));
    }
    if (!out_path.empty()) {
        write_text_file(out_path, report.dump(2) + "\n");
        std::cout << "wrote " << out_path << "\n";
    }
    return all_affirmative ? kOk : kInconclusive;
}

// ---- solve ------------------------------------------------------------------

int run_solve(const std::string& path, const Overrides& overrides, const std::string& out_path) {
    const fracbvp::ProblemFile file = fracbvp::load_problem_file(path);
    const fracbvp::QuadratureConfig quad = quad_for(file, overrides);
    const double tol = overrides.tol.value_or(file.solver.tol);
    const std::size_t max_iter = overrides.max_iter.value_or(file.solver.max_iter);

    const fracbvp::Solution solution = fracbvp::picard_solve(file.problem, quad, tol, max_iter);

    std::cout << "file: " << path << "\n";
    std::cout << "n_nodes = " << quad.n_nodes << ", oversample = " << quad.oversample
              << ", tol = " << fmt9(tol) << ", max_iter = " << max_iter << "\n";
    if (solution.trace.converged) {
        std::cout << "converged after " << solution.trace.iterates << " iterations (final delta "
                  << fmt9(solution.trace.final_delta) << ")\n";
    } else {
        std::cout << "did not converge within " << solution.trace.iterates
                  << " iterations (final delta " << fmt9(solution.trace.final_delta) << ")\n";
    }
    if (!solution.trace.observed_ratios.empty()) {
        std::cout << "step ratios:";
        for (double ratio : solution.trace.observed_ratios) std::cout << " " << fmt9(ratio);
        std::cout << "\n";
    }
    std::cout << "residuals: ode " << fmt9(solution.residuals.ode_residual_sup) << ", bc1 "
              << fmt9(solution.residuals.bc1_residual) << ", bc2 "
              << fmt9(solution.residuals.bc2_residual) << "\n";
    std::cout << "sup norm = " << fmt9(solution.x.max_abs()) << "\n";

    if (file.certificates.banach && file.certificates.banach->lipschitz) {
        const double contraction =
            *file.certificates.banach->lipschitz * fracbvp::compute_theta(file.problem);
        if (contraction < 1.0) {
            std::cout << "a priori bound: "
                      << fmt9(fracbvp::a_priori_bound(solution.trace, contraction))
                      << " (contraction factor " << fmt9(contraction) << ")\n";
        } else {
            std::cout << "no a priori bound: L*theta = " << fmt9(contraction) << " >= 1\n";
        }
    }

    if (!out_path.empty()) {
        fracbvp::write_solution_csv(out_path, solution.x);
        std::cout << "wrote " << out_path << "\n";
    }
    return solution.trace.converged ? kOk : kNoConvergence;
}

// ---- reproduce --------------------------------------------------------------

struct ReferenceRow {
    std::string name;
    double computed;
    std::string published_text;
    double published;
    double tol;
};

fracbvp::ProblemSpec builtin_problem(int id) {
    using fracbvp::Expr;
    switch (id) {
        case 1:
            return fracbvp::ProblemSpec(
                1.5, 1.0 / 3.0, 0.25, 0.6,
                {{0.8, 1.0, 1.0 / 3.0, 3.0}, {6.0 / 7.0, 0.5, 2.0 / 3.0, 1.0 / 7.0}},
                Expr::parse("t*exp(-pi*t)*sin(x)/(56+exp(-2*t))"
                            "+atan(x)*exp(-cos(t)^2)/sqrt(64+t)+1/3",
                            {"t", "x"}));
        case 2:
            return fracbvp::ProblemSpec(
                7.0 / 6.0, 0.5, 1.0 / 3.0, 0.2,
                {{0.25, 2.0, 0.4, 0.5}, {2.0 / 3.0, 3.0, 1.0 / 7.0, 1.0}},
                Expr::parse("1/11*exp(-t)*(2*x^3/(1+x^2)+(7+t)/(2*(5+cos(t)))+1)", {"t", "x"}));
        default:
            return fracbvp::ProblemSpec(
                4.0 / 3.0, 0.8, 2.0 / 3.0, 3.0 / 11.0,
                {{7.0 / 8.0, 3.0 / 7.0, 0.25, 0.1}, {8.0 / 9.0, 11.0 / 12.0, 1.5, 0.4}},
                Expr::parse("1/6*exp(-t^2)*ln(1+abs(x))", {"t", "x"}));
    }
}

int run_reproduce(int id, const Overrides& overrides) {
    const fracbvp::ProblemSpec problem = builtin_problem(id);
    const fracbvp::StructuralConstants constants = fracbvp::compute_constants(problem);
    fracbvp::QuadratureConfig quad{1025, 4};
    if (overrides.nodes) quad.n_nodes = *overrides.nodes;
    if (overrides.oversample) quad.oversample = *overrides.oversample;
    quad.validate();

    std::vector<ReferenceRow> rows;
    if (id == 1) {
        rows.push_back({"delta1", constants.delta1, "-0.51192", -0.51192, 5e-5});
        rows.push_back({"delta2", constants.delta2, "-313/105", -313.0 / 105.0, 1e-12});
        rows.push_back({"delta3", constants.delta3, "13774/3675", 13774.0 / 3675.0, 1e-12});
        rows.push_back({"theta", constants.theta, "5.70719", 5.70719, 1e-4});
        rows.push_back({"L*theta", constants.theta / 7.0, "0.81531", 0.81531, 1e-4});
    } else if (id == 2) {
        rows.push_back({"delta1", constants.delta1, "-2.32863", -2.32863, 5e-5});
        rows.push_back({"delta2", constants.delta2, "-73/105", -73.0 / 105.0, 1e-12});
        rows.push_back({"delta3", constants.delta3, "-827/2520", -827.0 / 2520.0, 1e-12});
        rows.push_back({"theta", constants.theta, "4.67261", 4.67261, 1e-4});
        const fracbvp::Certificate cert = fracbvp::check_leray_schauder(
            problem, fracbvp::Expr::parse("2/11*exp(-t)", {"t"}),
            fracbvp::Expr::parse("u+1", {"u"}), quad);
        rows.push_back({"M*", cert.quantities.at("M_star"), "5.64742", 5.64742, 1e-3});
    } else {
        rows.push_back({"delta1", constants.delta1, "-0.496989", -0.496989, 5e-5});
        rows.push_back({"delta2", constants.delta2, "-101/96", -101.0 / 96.0, 1e-12});
        rows.push_back({"delta3", constants.delta3, "9079/34560", 9079.0 / 34560.0, 1e-12});
        const double phi = fracbvp::compute_phi(
            problem, fracbvp::Expr::parse("1/6*exp(-t^2)", {"t"}), quad);
        rows.push_back({"phi", phi, "0.809777", 0.809777, 1e-3});
    }

    std::cout << "reference problem " << id << "\n";
    bool all_pass = true;
    for (const ReferenceRow& row : rows) {
        const double diff = std::abs(row.computed - row.published);
        const bool pass = diff <= row.tol;
        all_pass = all_pass && pass;
        std::printf("%-8s computed %-15s published %-12s |diff| %-12s tol %-8s %s\n",
                    row.name.c_str(), fmt9(row.computed).c_str(), row.published_text.c_str(),
                    fmt9(diff).c_str(), fmt9(row.tol).c_str(), pass ? "pass" : "FAIL");
    }
    std::cout << (all_pass ? "all values reproduced\n" : "reproduction FAILED\n");
    return all_pass ? kOk : kInconclusive;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nonlocal fractional boundary value problems: constants, solvability "
                 "certificates, Picard solves, and reference reproductions"};
    app.require_subcommand(1);

    Overrides overrides;
    std::string out_path;
    std::uint64_t seed = 0;
    bool seed_given = false;
    unsigned jobs = 1;

    std::string constants_file;
    CLI::App* constants_cmd =
        app.add_subcommand("constants", "Print the structural constants of a problem document");
    constants_cmd->add_option("file", constants_file, "problem document (JSON)")->required();

    std::vector<std::string> check_files;
    CLI::App* check_cmd =
        app.add_subcommand("check", "Run the certificates configured in problem documents");
    check_cmd->add_option("files", check_files, "problem documents (JSON)")->required();
    check_cmd->add_option("--jobs", jobs, "parallel workers for multi-file checks")
        ->check(CLI::PositiveNumber);

    std::string solve_file;
    CLI::App* solve_cmd = app.add_subcommand("solve", "Run the fixed-point iteration");
    solve_cmd->add_option("file", solve_file, "problem document (JSON)")->required();

    int reproduce_id = 0;
    CLI::App* reproduce_cmd = app.add_subcommand(
        "reproduce", "Recompute a built-in reference problem and diff its published constants");
    reproduce_cmd->add_option("id", reproduce_id, "reference problem id")
        ->required()
        ->check(CLI::Range(1, 3));

    for (CLI::App* cmd : {constants_cmd, check_cmd, solve_cmd, reproduce_cmd}) {
        cmd->add_option("--nodes", [&overrides](const std::vector<std::string>& v) {
               overrides.nodes = static_cast<std::size_t>(std::stoull(v.front()));
               return true;
           },
           "solver grid nodes (overrides the document)")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--oversample", [&overrides](const std::vector<std::string>& v) {
               overrides.oversample = std::stoi(v.front());
               return true;
           },
           "quadrature refinement factor (overrides the document)")
            ->check(CLI::PositiveNumber);
    }
    for (CLI::App* cmd : {constants_cmd, check_cmd, solve_cmd}) {
        cmd->add_option("--out", out_path,
                        "write a report (JSON for constants/check, CSV curve for solve)");
    }
    solve_cmd->add_option("--tol", [&overrides](const std::vector<std::string>& v) {
                 overrides.tol = fracbvp::parse_scalar_text(v.front());
                 return true;
             },
             "stop when the sup change drops below this");
    solve_cmd->add_option("--max-iter", [&overrides](const std::vector<std::string>& v) {
                 overrides.max_iter = static_cast<std::size_t>(std::stoull(v.front()));
                 return true;
             },
             "iteration budget")
        ->check(CLI::PositiveNumber);
    check_cmd->add_option("--seed", seed, "seed for sampled audits (default: FRACBVP_SEED or 42)")
        ->each([&seed_given](const std::string&) { seed_given = true; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInputError;
    }

    try {
        if (!seed_given) seed = default_seed();
        if (*constants_cmd) return run_constants(constants_file, overrides, out_path);
        if (*check_cmd) return run_check(check_files, overrides, seed, jobs, out_path);
        if (*solve_cmd) return run_solve(solve_file, overrides, out_path);
        return run_reproduce(reproduce_id, overrides);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
}
