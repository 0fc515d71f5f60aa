#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "fracbvp/certify.hpp"
#include "fracbvp/model.hpp"
#include "fracbvp/solver.hpp"

namespace fracbvp {

/// Document parse or validation failure; the message starts with the JSON
/// field path (e.g. "problem.terms[1].eta: ...").
struct ProblemFileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BanachRequest {
    std::optional<double> lipschitz;  // supplied L; estimated by sampling when absent
};

struct BoydWongRequest {
    Expr g;
};

struct LeraySchauderRequest {
    Expr p;
    Expr psi;
};

struct CertificateRequests {
    std::optional<BanachRequest> banach;
    std::optional<BoydWongRequest> boyd_wong;
    std::optional<LeraySchauderRequest> leray_schauder;

    bool any() const { return banach || boyd_wong || leray_schauder; }
};

struct SolverSettings {
    std::size_t n_nodes = 1025;
    int oversample = 4;
    double tol = 1e-9;
    std::size_t max_iter = 80;

    QuadratureConfig quadrature() const { return {n_nodes, oversample}; }
};

/// A parsed problem document: the validated problem plus the optional
/// certificate requests and solver settings it carries.
struct ProblemFile {
    int schema_version;
    ProblemSpec problem;
    CertificateRequests certificates;
    SolverSettings solver;
};

/// Parses and validates a JSON problem document. Scalar fields accept JSON
/// numbers or exact rational strings "a/b"; unknown fields are rejected.
/// Expression contexts: f over (t,x); g and p over t; psi over u.
ProblemFile parse_problem_file(const std::string& text);

/// parse_problem_file on the contents of `path`.
ProblemFile load_problem_file(const std::string& path);

/// Exact rational-or-number scalar ("313/105", "-3/2", "42", or any JSON
/// number). Exposed for CLI flag parsing; throws ProblemFileError.
double parse_scalar_text(const std::string& text);

/// "t,x" CSV of a solution curve: header row, LF endings, shortest
/// round-trip formatting.
std::string solution_csv(const GridFunction& x);
void write_solution_csv(const std::string& path, const GridFunction& x);

/// JSON mirrors of the result records, for --out reports.
nlohmann::ordered_json certificate_to_json(const Certificate& c);
nlohmann::ordered_json solution_to_json(const Solution& s);

} // namespace fracbvp
