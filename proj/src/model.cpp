#include "fracbvp/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fracbvp/fracops.hpp"
#include "fracbvp/special.hpp"

namespace fracbvp {

namespace {

constexpr double kDeltaThreshold = 1e-10;

void require(bool ok, const std::string& message) {
    if (!ok) throw std::invalid_argument(message);
}

} // namespace

ProblemSpec::ProblemSpec(double q, double sigma, double nu, double xi,
                         std::vector<BoundaryTerm> terms, Expr f)
    : q_(q), sigma_(sigma), nu_(nu), xi_(xi), terms_(std::move(terms)), f_(std::move(f)) {
    require(q > 1.0 && q <= 2.0, "q must lie in (1,2]");
    require(sigma > 0.0 && sigma <= 1.0, "sigma must lie in (0,1]");
    require(nu > 0.0 && nu <= 1.0, "nu must lie in (0,1]");
    require(xi > 0.0 && xi < 1.0, "xi must lie in (0,1)");
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        require(terms_[i].eta > 0.0 && terms_[i].eta < 1.0,
                "eta[" + std::to_string(i) + "] must lie in (0,1)");
        require(std::isfinite(terms_[i].alpha) && std::isfinite(terms_[i].beta) &&
                    std::isfinite(terms_[i].gamma),
                "weights of term " + std::to_string(i) + " must be finite");
    }
    if (!terms_.empty()) {
        require(xi < terms_[0].eta, "xi must be smaller than the first eta");
        for (std::size_t i = 0; i + 1 < terms_.size(); ++i) {
            require(terms_[i].eta < terms_[i + 1].eta, "eta values must be strictly increasing");
        }
    }
    require(f_.variables() == std::vector<std::string>{"t", "x"},
            "f must be declared over the variables (t, x)");

    const Deltas d = compute_deltas(*this);
    require(std::abs(d.delta1) > kDeltaThreshold,
            "delta1 = " + std::to_string(d.delta1) +
                " is too close to zero; the problem is ill-posed");
    require(std::abs(d.delta2) > kDeltaThreshold,
            "delta2 = " + std::to_string(d.delta2) +
                " is too close to zero; the problem is ill-posed");
}

Deltas compute_deltas(const ProblemSpec& p) {
    double sum1 = 0.0;
    double sum2 = 0.0;
    double sum3 = 0.0;
    for (const BoundaryTerm& term : p.terms()) {
        sum1 += term.alpha * std::pow(term.eta, 1.0 - p.nu());
        sum2 += term.beta * term.eta + term.gamma;
        sum3 += term.eta * (term.beta * term.eta + 2.0 * term.gamma);
    }
    Deltas d;
    d.delta1 = std::pow(p.xi(), 1.0 - p.sigma()) * gamma(2.0 - p.nu()) -
               gamma(2.0 - p.sigma()) * sum1;
    d.delta2 = 1.0 - sum2;
    d.delta3 = -2.0 + sum3;
    return d;
}

double compute_theta(const ProblemSpec& p) {
    const Deltas d = compute_deltas(p);
    const double q = p.q();

    double boundary_sum = 0.0;
    for (const BoundaryTerm& term : p.terms()) {
        boundary_sum += std::pow(term.eta, q) *
                        (term.eta * std::abs(term.beta) + (q + 1.0) * std::abs(term.gamma));
    }
    double derivative_sum = std::pow(p.xi(), q - p.sigma()) * reciprocal_gamma(q - p.sigma() + 1.0);
    for (const BoundaryTerm& term : p.terms()) {
        derivative_sum += std::abs(term.alpha) * std::pow(term.eta, q - p.nu()) *
                          reciprocal_gamma(q - p.nu() + 1.0);
    }

    const double front = gamma(2.0 - p.sigma()) * gamma(2.0 - p.nu()) *
                         (std::abs(d.delta3) + 2.0 * std::abs(d.delta2)) /
                         (2.0 * std::abs(d.delta1) * std::abs(d.delta2));
    return reciprocal_gamma(q + 1.0) +
           (1.0 + q + boundary_sum) * reciprocal_gamma(q + 2.0) / std::abs(d.delta2) +
           front * derivative_sum;
}

double compute_omega(const ProblemSpec& p) {
    const Deltas d = compute_deltas(p);
    const double q = p.q();
    double derivative_sum = std::pow(p.xi(), q - p.sigma()) * reciprocal_gamma(q - p.sigma() + 1.0);
    for (const BoundaryTerm& term : p.terms()) {
        derivative_sum += std::abs(term.alpha) * std::pow(term.eta, q - p.nu()) *
                          reciprocal_gamma(q - p.nu() + 1.0);
    }
    return reciprocal_gamma(q) +
           gamma(2.0 - p.sigma()) * gamma(2.0 - p.nu()) * derivative_sum / std::abs(d.delta1);
}

StructuralConstants compute_constants(const ProblemSpec& p) {
    const Deltas d = compute_deltas(p);
    return {d.delta1, d.delta2, d.delta3, compute_theta(p), compute_omega(p)};
}

double compute_phi(const ProblemSpec& p, const Expr& g, const QuadratureConfig& quad) {
    quad.validate();
    if (g.variables() != std::vector<std::string>{"t"}) {
        throw std::invalid_argument("weight g must be declared over the single variable t");
    }

    const std::size_t n = quad.oversampled_nodes();
    std::vector<double> samples(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double t = static_cast<double>(j) / static_cast<double>(n - 1);
        const double value = g.eval(std::span<const double>(&t, 1));
        if (value < 0.0) {
            throw std::domain_error("weight g is negative at t = " + std::to_string(t));
        }
        samples[j] = value;
    }
    GridFunction grid(std::move(samples));

    const Deltas d = compute_deltas(p);
    const double q = p.q();

    double phi = (1.0 + 1.0 / std::abs(d.delta2)) * rl_integral(grid, q, 1.0);
    for (const BoundaryTerm& term : p.terms()) {
        phi += (std::abs(term.gamma) * rl_integral(grid, q, term.eta) +
                std::abs(term.beta) * rl_integral(grid, q + 1.0, term.eta)) /
               std::abs(d.delta2);
    }
    double derivative_part = rl_integral(grid, q - p.sigma(), p.xi());
    for (const BoundaryTerm& term : p.terms()) {
        derivative_part += std::abs(term.alpha) * rl_integral(grid, q - p.nu(), term.eta);
    }
    phi += gamma(2.0 - p.sigma()) * gamma(2.0 - p.nu()) *
           (std::abs(d.delta3) + 2.0 * std::abs(d.delta2)) /
           (2.0 * std::abs(d.delta1) * std::abs(d.delta2)) * derivative_part;

    if (!(phi > 0.0)) {
        throw std::domain_error("weight g yields a non-positive contraction constant");
    }
    return phi;
}

double grid_sup_norm(const Expr& e, const QuadratureConfig& quad) {
    quad.validate();
    if (e.variables().size() != 1) {
        throw std::invalid_argument("grid_sup_norm expects an expression in one variable");
    }
    const std::size_t n = quad.oversampled_nodes();
    double sup = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double t = static_cast<double>(j) / static_cast<double>(n - 1);
        sup = std::max(sup, std::abs(e.eval(std::span<const double>(&t, 1))));
    }
    return sup;
}

} // namespace fracbvp
