#pragma once

#include <vector>

#include "fracbvp/grid.hpp"

namespace fracbvp {

/// Riemann-Liouville integral I^mu f(t) = (1/Gamma(mu)) ∫₀ᵗ (t-s)^{mu-1} f(s) ds
/// by product quadrature: f is replaced by its piecewise-linear interpolant and
/// each panel is integrated against the kernel in closed form, so the weak
/// singularity at s = t costs no accuracy. Error O(h²) for smooth f. t may lie
/// between nodes; the panel containing t contributes a closed-form partial
/// integral. Requires mu in (0,3] and t in [0,1].
double rl_integral(const GridFunction& f, double mu, double t);

/// I^mu f evaluated at every grid node in one pass. Equals rl_integral at each
/// node up to roundoff; O(n²) total instead of O(n³).
std::vector<double> rl_integral_all_nodes(const GridFunction& f, double mu);

/// Caputo derivative of order mu in (0,1]: (1/Gamma(1-mu)) ∫₀ᵗ (t-s)^{-mu} x'(s) ds
/// with x' the per-panel first differences (piecewise constant), each panel
/// integrated in closed form; O(h) accuracy. For mu = 1 returns the one-sided
/// finite-difference derivative at t. Requires t in [0,1].
double caputo_derivative(const GridFunction& x, double mu, double t);

} // namespace fracbvp
