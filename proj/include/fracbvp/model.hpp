#pragma once

#include <vector>

#include "fracbvp/expr.hpp"
#include "fracbvp/grid.hpp"

namespace fracbvp {

/// One nonlocal boundary term: the interior point eta with its derivative
/// weight alpha, integral weight beta, and point-value weight gamma.
struct BoundaryTerm {
    double eta;
    double alpha;
    double beta;
    double gamma;
};

/// The full problem: Caputo order q in (1,2] for the equation, derivative
/// orders sigma, nu in (0,1] for the first boundary condition, the point xi,
/// the boundary terms (strictly increasing eta, all inside (xi,1)), and the
/// right-hand side f(t,x).
///
/// Construction validates everything, including that the two structural
/// denominators delta1 and delta2 stay away from zero (|delta| > 1e-10);
/// problems violating that are rejected because the solution representation
/// divides by both.
class ProblemSpec {
public:
    ProblemSpec(double q, double sigma, double nu, double xi, std::vector<BoundaryTerm> terms,
                Expr f);

    double q() const { return q_; }
    double sigma() const { return sigma_; }
    double nu() const { return nu_; }
    double xi() const { return xi_; }
    const std::vector<BoundaryTerm>& terms() const { return terms_; }
    const Expr& f() const { return f_; }

private:
    double q_;
    double sigma_;
    double nu_;
    double xi_;
    std::vector<BoundaryTerm> terms_;
    Expr f_;
};

struct Deltas {
    double delta1;
    double delta2;
    double delta3;
};

/// The closed-form constants derived from the problem data alone.
struct StructuralConstants {
    double delta1;
    double delta2;
    double delta3;
    double theta;
    double omega;
};

/// delta1 = xi^{1-sigma} G(2-nu) - G(2-sigma) Σ alpha_i eta_i^{1-nu}
/// delta2 = 1 - Σ (beta_i eta_i + gamma_i)
/// delta3 = -2 + Σ eta_i (beta_i eta_i + 2 gamma_i)
Deltas compute_deltas(const ProblemSpec& p);

/// Operator norm bound used by every certificate; closed form, no quadrature.
double compute_theta(const ProblemSpec& p);

/// Derivative-operator norm bound; closed form.
double compute_omega(const ProblemSpec& p);

StructuralConstants compute_constants(const ProblemSpec& p);

/// Weighted-integral constant of the nonlinear-contraction certificate:
/// the weight g (nonnegative on [0,1], not identically zero) integrated
/// against the problem's kernels by product quadrature on the oversampled
/// grid. Equals compute_theta when g is identically 1.
double compute_phi(const ProblemSpec& p, const Expr& g, const QuadratureConfig& quad);

/// Max of |e(t)| over the oversampled grid on [0,1]; e must have exactly one
/// variable. Reported in certificates as the grid sup-norm.
double grid_sup_norm(const Expr& e, const QuadratureConfig& quad);

} // namespace fracbvp
