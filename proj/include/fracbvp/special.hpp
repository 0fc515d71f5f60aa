#pragma once

namespace fracbvp {

/// Gamma function for real x > 0.
///
/// Lanczos approximation (g = 7, 9 terms); relative error below 1e-14 on
/// (0, 10], which covers every argument the boundary-value formulas produce
/// (q+2 <= 4 for admissible problems).
///
/// Throws std::domain_error for x <= 0.
double gamma(double x);

/// 1/Gamma(x) for x > 0. Convenience for kernel normalization.
double reciprocal_gamma(double x);

} // namespace fracbvp
