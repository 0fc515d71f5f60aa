#include "fracbvp/solver.hpp"

#include <cmath>
#include <stdexcept>

#include "fracbvp/fracops.hpp"
#include "fracbvp/special.hpp"

namespace fracbvp {

namespace {

GridFunction sample_rhs(const ProblemSpec& p, const GridFunction& x) {
    const std::size_t n = x.n_nodes();
    std::vector<double> values(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double args[] = {x.node(j), x[j]};
        values[j] = p.f().eval(args);
    }
    return GridFunction(std::move(values));
}

// The operator splits into I^q f plus k0 + k1*(delta3 + 2 delta2 t); the
// closed-form constants are c1 = 2 k1 delta2 and c0 = k0 + k1 delta3.
struct CorrectionParts {
    double k0;
    double k1;
};

CorrectionParts correction_parts(const ProblemSpec& p, const GridFunction& rhs,
                                 const Deltas& d) {
    const double q = p.q();
    double bracket1 = -rl_integral(rhs, q, 1.0);
    for (const BoundaryTerm& term : p.terms()) {
        bracket1 += term.beta * rl_integral(rhs, q + 1.0, term.eta) +
                    term.gamma * rl_integral(rhs, q, term.eta);
    }
    double bracket2 = -rl_integral(rhs, q - p.sigma(), p.xi());
    for (const BoundaryTerm& term : p.terms()) {
        bracket2 += term.alpha * rl_integral(rhs, q - p.nu(), term.eta);
    }
    CorrectionParts parts;
    parts.k0 = bracket1 / d.delta2;
    parts.k1 = gamma(2.0 - p.sigma()) * gamma(2.0 - p.nu()) * bracket2 /
               (2.0 * d.delta1 * d.delta2);
    return parts;
}

GridFunction evaluate_operator(const ProblemSpec& p, const GridFunction& rhs,
                               CorrectionParts* parts_out) {
    const Deltas d = compute_deltas(p);
    const CorrectionParts parts = correction_parts(p, rhs, d);
    std::vector<double> out = rl_integral_all_nodes(rhs, p.q());
    const std::size_t n = rhs.n_nodes();
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(n - 1);
        out[i] += parts.k0 + parts.k1 * (d.delta3 + 2.0 * d.delta2 * t);
    }
    if (parts_out != nullptr) *parts_out = parts;
    return GridFunction(std::move(out));
}

// ∫₀ᵇ x(s) ds of the piecewise-linear interpolant (trapezoid plus an exact
// partial panel).
double trapezoid_to(const GridFunction& x, double b) {
    if (!(b >= 0.0 && b <= 1.0)) throw std::domain_error("integration endpoint outside [0,1]");
    const double h = x.spacing();
    const std::size_t last = x.n_nodes() - 1;
    double scaled = b * static_cast<double>(last);
    auto k = static_cast<std::size_t>(scaled);
    if (k > last - 1) k = last - 1;
    while (k > 0 && x.node(k) > b) --k;
    double acc = 0.0;
    for (std::size_t j = 0; j < k; ++j) acc += 0.5 * h * (x[j] + x[j + 1]);
    const double w = b - x.node(k);
    if (w > 0.0) {
        const double xb = x[k] + (x[k + 1] - x[k]) * (w / h);
        acc += 0.5 * w * (x[k] + xb);
    }
    return acc;
}

} // namespace

GridFunction apply_operator(const ProblemSpec& p, const GridFunction& x,
                            const QuadratureConfig& quad) {
    quad.validate();
    if (x.n_nodes() != quad.n_nodes) {
        throw std::invalid_argument("grid function does not match the configured resolution");
    }
    return evaluate_operator(p, sample_rhs(p, x), nullptr);
}

Solution solve_linear(const ProblemSpec& p, const QuadratureConfig& quad) {
    quad.validate();
    if (p.f().uses_variable("x")) {
        throw std::invalid_argument("direct linear solve requires f independent of x");
    }
    const GridFunction rhs = sample_rhs(p, GridFunction::zeros(quad.n_nodes));
    CorrectionParts parts{};
    GridFunction x = evaluate_operator(p, rhs, &parts);
    const Deltas d = compute_deltas(p);

    Solution solution{std::move(x), {}, {}, 0.0, 0.0, true};
    solution.c0 = parts.k0 + parts.k1 * d.delta3;
    solution.c1 = 2.0 * parts.k1 * d.delta2;
    solution.trace.iterates = 1;
    solution.trace.converged = true;
    solution.trace.final_delta = 0.0;
    solution.residuals = verify(p, solution.x, quad);
    return solution;
}

Solution picard_solve(const ProblemSpec& p, const QuadratureConfig& quad, double tol,
                      std::size_t max_iter, const GridFunction* init) {
    quad.validate();
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    if (max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");

    GridFunction x = init != nullptr ? *init : GridFunction::zeros(quad.n_nodes);
    if (x.n_nodes() != quad.n_nodes) {
        throw std::invalid_argument("initial iterate does not match the configured resolution");
    }

    IterationTrace trace;
    for (std::size_t k = 0; k < max_iter; ++k) {
        GridFunction next = evaluate_operator(p, sample_rhs(p, x), nullptr);
        double delta = 0.0;
        for (std::size_t j = 0; j < next.n_nodes(); ++j) {
            delta = std::max(delta, std::abs(next[j] - x[j]));
        }
        trace.sup_deltas.push_back(delta);
        x = std::move(next);
        if (delta <= tol) {
            trace.converged = true;
            break;
        }
    }
    trace.iterates = trace.sup_deltas.size();
    trace.final_delta = trace.sup_deltas.back();
    for (std::size_t k = 0; k + 1 < trace.sup_deltas.size(); ++k) {
        trace.observed_ratios.push_back(trace.sup_deltas[k + 1] / trace.sup_deltas[k]);
    }

    Solution solution{std::move(x), std::move(trace), {}, 0.0, 0.0, false};
    solution.residuals = verify(p, solution.x, quad);
    return solution;
}

Residuals verify(const ProblemSpec& p, const GridFunction& x, const QuadratureConfig& quad) {
    quad.validate();
    const std::size_t n = x.n_nodes();
    const double h = x.spacing();

    // First-difference derivative grid; the order-q derivative of x is the
    // order-(q-1) derivative of this grid.
    std::vector<double> d(n);
    for (std::size_t j = 0; j + 1 < n; ++j) d[j] = (x[j + 1] - x[j]) / h;
    d[n - 1] = d[n - 2];
    const GridFunction derivative(std::move(d));

    Residuals r;
    for (std::size_t j = 0; j < n; ++j) {
        const double t = x.node(j);
        if (t < 0.125) continue;
        const double lhs = caputo_derivative(derivative, p.q() - 1.0, t);
        const double args[] = {t, x[j]};
        r.ode_residual_sup = std::max(r.ode_residual_sup, std::abs(lhs - p.f().eval(args)));
    }

    double lhs1 = caputo_derivative(x, p.sigma(), p.xi());
    double rhs1 = 0.0;
    for (const BoundaryTerm& term : p.terms()) {
        rhs1 += term.alpha * caputo_derivative(x, p.nu(), term.eta);
    }
    r.bc1_residual = std::abs(lhs1 - rhs1);

    double rhs2 = 0.0;
    for (const BoundaryTerm& term : p.terms()) {
        rhs2 += term.beta * trapezoid_to(x, term.eta) + term.gamma * x.interpolate(term.eta);
    }
    r.bc2_residual = std::abs(x[n - 1] - rhs2);
    return r;
}

double a_priori_bound(const IterationTrace& trace, double contraction_factor) {
    if (!(contraction_factor > 0.0 && contraction_factor < 1.0)) {
        throw std::invalid_argument("contraction factor must lie in (0,1)");
    }
    if (trace.sup_deltas.empty()) return 0.0;
    return std::pow(contraction_factor, static_cast<double>(trace.iterates)) /
           (1.0 - contraction_factor) * trace.sup_deltas[0];
}

} // namespace fracbvp
