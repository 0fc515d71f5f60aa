#pragma once

#include <cstddef>
#include <vector>

#include "fracbvp/grid.hpp"
#include "fracbvp/model.hpp"

namespace fracbvp {

/// Per-step convergence record of the fixed-point iteration.
struct IterationTrace {
    std::size_t iterates = 0;
    std::vector<double> sup_deltas;       // ||x_{k+1} - x_k||_inf per step
    std::vector<double> observed_ratios;  // sup_deltas[k+1] / sup_deltas[k]
    bool converged = false;
    double final_delta = 0.0;
};

struct Residuals {
    double ode_residual_sup = 0.0;
    double bc1_residual = 0.0;
    double bc2_residual = 0.0;
};

struct Solution {
    GridFunction x;
    IterationTrace trace;
    Residuals residuals;
    // Constants of the closed-form representation, recorded by the direct
    // linear solve; zero-filled with linear_constants=false otherwise.
    double c0 = 0.0;
    double c1 = 0.0;
    bool linear_constants = false;
};

/// One application of the solution operator: the fractional integral of
/// f(., x(.)) plus the two boundary-correction terms, sampled on x's grid.
/// Off-grid evaluation points (xi, eta_i) use the product rule up to the
/// nearest node plus an exact partial panel.
GridFunction apply_operator(const ProblemSpec& p, const GridFunction& x,
                            const QuadratureConfig& quad);

/// Direct evaluation of the closed-form solution for x-independent f; rejects
/// f that references x. Records c0 and c1.
Solution solve_linear(const ProblemSpec& p, const QuadratureConfig& quad);

/// Fixed-point iteration x <- apply_operator(x) from init (zero when null)
/// until the sup change is at most tol or max_iter is reached. Non-convergence
/// is a reported state, not an error.
Solution picard_solve(const ProblemSpec& p, const QuadratureConfig& quad, double tol,
                      std::size_t max_iter, const GridFunction* init = nullptr);

/// Residuals of a candidate solution: sup of the equation residual over the
/// interior check nodes (t >= 1/8; the double-differencing scheme is noise
/// near 0), plus the absolute defect of each boundary condition.
Residuals verify(const ProblemSpec& p, const GridFunction& x, const QuadratureConfig& quad);

/// A-priori contraction bound ||x_k - x*|| <= c^k/(1-c) * ||x_1 - x_0|| after
/// k = trace.iterates steps, using the certified contraction factor c.
double a_priori_bound(const IterationTrace& trace, double contraction_factor);

} // namespace fracbvp
