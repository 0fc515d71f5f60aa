#include "fracbvp/problem_file.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>
#include <system_error>

namespace fracbvp {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& why) {
    throw ProblemFileError(path + ": " + why);
}

const json& require(const json& obj, const std::string& path, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(path + "." + key, "missing required field");
    return *it;
}

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) fail(path, "expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (std::string_view key : allowed) {
            if (it.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) fail(path + "." + it.key(), "unknown field");
    }
}

long long parse_integer_token(std::string_view token, const std::string& path) {
    long long value = 0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        fail(path, "malformed rational \"" + std::string(token) + "\"");
    }
    return value;
}

// "a" or "a/b" with integer a, positive integer b; both halves are integers
// below 2^53 in practice, so the one division is correctly rounded.
double parse_rational(std::string_view text, const std::string& path) {
    const std::size_t slash = text.find('/');
    if (slash == std::string_view::npos) {
        return static_cast<double>(parse_integer_token(text, path));
    }
    const long long num = parse_integer_token(text.substr(0, slash), path);
    const long long den = parse_integer_token(text.substr(slash + 1), path);
    if (den <= 0) fail(path, "rational denominator must be positive");
    return static_cast<double>(num) / static_cast<double>(den);
}

double scalar(const json& value, const std::string& path) {
    if (value.is_number()) return value.get<double>();
    if (value.is_string()) return parse_rational(value.get<std::string>(), path);
    fail(path, "expected a number or a rational string \"a/b\"");
}

std::size_t positive_integer(const json& value, const std::string& path) {
    if (!value.is_number_integer() || value.get<long long>() <= 0) {
        fail(path, "expected a positive integer");
    }
    return static_cast<std::size_t>(value.get<long long>());
}

std::string expression_text(const json& value, const std::string& path) {
    if (!value.is_string()) fail(path, "expected an expression string");
    return value.get<std::string>();
}

Expr parse_expression(const json& value, const std::string& path,
                      std::vector<std::string> context) {
    const std::string text = expression_text(value, path);
    try {
        return Expr::parse(text, std::move(context));
    } catch (const ParseError& e) {
        fail(path, e.what());
    }
}

ProblemSpec parse_problem(const json& node, const std::string& path) {
    reject_unknown(node, path, {"q", "sigma", "nu", "xi", "terms", "f"});
    const double q = scalar(require(node, path, "q"), path + ".q");
    const double sigma = scalar(require(node, path, "sigma"), path + ".sigma");
    const double nu = scalar(require(node, path, "nu"), path + ".nu");
    const double xi = scalar(require(node, path, "xi"), path + ".xi");

    const json& terms_node = require(node, path, "terms");
    if (!terms_node.is_array() || terms_node.empty()) {
        fail(path + ".terms", "expected a non-empty array");
    }
    std::vector<BoundaryTerm> terms;
    terms.reserve(terms_node.size());
    for (std::size_t i = 0; i < terms_node.size(); ++i) {
        const std::string term_path = path + ".terms[" + std::to_string(i) + "]";
        const json& term = terms_node[i];
        reject_unknown(term, term_path, {"eta", "alpha", "beta", "gamma"});
        terms.push_back({scalar(require(term, term_path, "eta"), term_path + ".eta"),
                         scalar(require(term, term_path, "alpha"), term_path + ".alpha"),
                         scalar(require(term, term_path, "beta"), term_path + ".beta"),
                         scalar(require(term, term_path, "gamma"), term_path + ".gamma")});
    }

    Expr f = parse_expression(require(node, path, "f"), path + ".f", {"t", "x"});
    try {
        return ProblemSpec(q, sigma, nu, xi, std::move(terms), std::move(f));
    } catch (const std::exception& e) {
        fail(path, e.what());
    }
}

CertificateRequests parse_certificates(const json& node, const std::string& path) {
    reject_unknown(node, path, {"banach", "boyd_wong", "leray_schauder"});
    CertificateRequests requests;
    if (auto it = node.find("banach"); it != node.end()) {
        const std::string sub = path + ".banach";
        reject_unknown(*it, sub, {"L"});
        BanachRequest banach;
        if (auto lit = it->find("L"); lit != it->end()) {
            banach.lipschitz = scalar(*lit, sub + ".L");
            if (!(*banach.lipschitz > 0.0)) fail(sub + ".L", "Lipschitz constant must be positive");
        }
        requests.banach = banach;
    }
    if (auto it = node.find("boyd_wong"); it != node.end()) {
        const std::string sub = path + ".boyd_wong";
        reject_unknown(*it, sub, {"g"});
        requests.boyd_wong =
            BoydWongRequest{parse_expression(require(*it, sub, "g"), sub + ".g", {"t"})};
    }
    if (auto it = node.find("leray_schauder"); it != node.end()) {
        const std::string sub = path + ".leray_schauder";
        reject_unknown(*it, sub, {"p", "psi"});
        requests.leray_schauder =
            LeraySchauderRequest{parse_expression(require(*it, sub, "p"), sub + ".p", {"t"}),
                                 parse_expression(require(*it, sub, "psi"), sub + ".psi", {"u"})};
    }
    return requests;
}

SolverSettings parse_solver(const json& node, const std::string& path) {
    reject_unknown(node, path, {"n_nodes", "oversample", "tol", "max_iter"});
    SolverSettings settings;
    if (auto it = node.find("n_nodes"); it != node.end()) {
        settings.n_nodes = positive_integer(*it, path + ".n_nodes");
    }
    if (auto it = node.find("oversample"); it != node.end()) {
        settings.oversample = static_cast<int>(positive_integer(*it, path + ".oversample"));
    }
    if (auto it = node.find("tol"); it != node.end()) {
        settings.tol = scalar(*it, path + ".tol");
        if (!(settings.tol > 0.0)) fail(path + ".tol", "tolerance must be positive");
    }
    if (auto it = node.find("max_iter"); it != node.end()) {
        settings.max_iter = positive_integer(*it, path + ".max_iter");
    }
    try {
        settings.quadrature().validate();
    } catch (const std::exception& e) {
        fail(path, e.what());
    }
    return settings;
}

std::string format_double(double value) {
    char buffer[32];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, ptr);
}

} // namespace

double parse_scalar_text(const std::string& text) {
    // Accept the rational forms first, then fall back to decimal notation.
    if (text.find('/') != std::string::npos ||
        text.find_first_not_of("+-0123456789") == std::string::npos) {
        return parse_rational(text, "value");
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
        fail("value", "malformed number \"" + text + "\"");
    }
    return value;
}

ProblemFile parse_problem_file(const std::string& text) {
    json document;
    try {
        document = json::parse(text);
    } catch (const json::parse_error& e) {
        fail("document", e.what());
    }
    reject_unknown(document, "document",
                   {"schema_version", "problem", "certificates", "solver"});

    const json& version_node = require(document, "document", "schema_version");
    if (!version_node.is_number_integer()) {
        fail("document.schema_version", "expected an integer");
    }
    const int version = version_node.get<int>();
    if (version != 1) {
        fail("document.schema_version",
             "unsupported version " + std::to_string(version) + " (expected 1)");
    }

    ProblemSpec problem = parse_problem(require(document, "document", "problem"), "problem");

    CertificateRequests certificates;
    if (auto it = document.find("certificates"); it != document.end()) {
        certificates = parse_certificates(*it, "certificates");
    }
    SolverSettings settings;
    if (auto it = document.find("solver"); it != document.end()) {
        settings = parse_solver(*it, "solver");
    }
    return ProblemFile{version, std::move(problem), std::move(certificates), settings};
}

ProblemFile load_problem_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ProblemFileError("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_problem_file(buffer.str());
}

std::string solution_csv(const GridFunction& x) {
    std::string out = "t,x\n";
    for (std::size_t j = 0; j < x.n_nodes(); ++j) {
        out += format_double(x.node(j));
        out += ',';
        out += format_double(x[j]);
        out += '\n';
    }
    return out;
}

void write_solution_csv(const std::string& path, const GridFunction& x) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ProblemFileError("cannot open " + path + " for writing");
    out << solution_csv(x);
    if (!out) throw ProblemFileError("failed writing " + path);
}

nlohmann::ordered_json certificate_to_json(const Certificate& c) {
    nlohmann::ordered_json out;
    out["kind"] = to_string(c.kind);
    out["verdict"] = to_string(c.verdict);
    out["quantities"] = nlohmann::ordered_json::object();
    for (const auto& [name, value] : c.quantities) out["quantities"][name] = value;
    out["notes"] = c.notes;
    return out;
}

nlohmann::ordered_json solution_to_json(const Solution& s) {
    nlohmann::ordered_json out;
    out["n_nodes"] = s.x.n_nodes();
    out["sup_norm"] = s.x.max_abs();
    out["converged"] = s.trace.converged;
    out["iterates"] = s.trace.iterates;
    out["final_delta"] = s.trace.final_delta;
    out["sup_deltas"] = s.trace.sup_deltas;
    out["observed_ratios"] = s.trace.observed_ratios;
    out["residuals"] = {{"ode_residual_sup", s.residuals.ode_residual_sup},
                        {"bc1_residual", s.residuals.bc1_residual},
                        {"bc2_residual", s.residuals.bc2_residual}};
    out["linear_constants"] = s.linear_constants;
    if (s.linear_constants) {
        out["c0"] = s.c0;
        out["c1"] = s.c1;
    }
    return out;
}

} // namespace fracbvp
