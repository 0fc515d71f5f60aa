#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fracbvp/expr.hpp"
#include "fracbvp/grid.hpp"
#include "fracbvp/model.hpp"

namespace fracbvp {

enum class CertificateKind { banach, boyd_wong, leray_schauder };
enum class Verdict { unique_solution, at_least_one_solution, inconclusive };

std::string to_string(CertificateKind kind);
std::string to_string(Verdict verdict);

/// A checker's verdict together with every intermediate quantity it computed
/// and plain-text caveats. An inconclusive verdict means the sufficient
/// condition failed or could not be witnessed, not that no solution exists.
struct Certificate {
    CertificateKind kind;
    Verdict verdict;
    std::map<std::string, double> quantities;
    std::vector<std::string> notes;
};

/// A Lipschitz-in-x constant for f, either supplied or estimated by sampling
/// difference quotients (sampled values are lower bounds of the true constant).
struct LipschitzEstimate {
    double value = 0.0;
    enum class Method { user_supplied, sampled } method = Method::user_supplied;
    std::uint64_t samples = 0;
};

/// Contraction certificate: unique solution iff L*theta < 1. On success also
/// records M = grid sup of |f(t,0)| and the invariant-ball radius
/// rho = theta*M/(1 - theta*L).
Certificate check_banach(const ProblemSpec& p, const LipschitzEstimate& lipschitz,
                         const QuadratureConfig& quad = {});

/// Nonlinear-contraction certificate with comparison function ln(1+.): computes
/// phi from the weight g, then audits |f(t,x)-f(t,y)| <= g(t)/phi * ln(1+|x-y|)
/// on h2_samples random (t,x,y) triples with x,y drawn from [box_lo, box_hi].
/// A sampled violation (recorded with its witness triple) makes the verdict
/// inconclusive. The audit is evidence over the box, not a proof.
Certificate check_boyd_wong(const ProblemSpec& p, const Expr& g, const QuadratureConfig& quad,
                            std::uint64_t h2_samples, std::uint64_t seed = 0,
                            double box_lo = -10.0, double box_hi = 10.0);

/// Growth certificate: with |f(t,x)| <= p(t) psi(|x|), a threshold M with
/// M > theta*psi(M)*||p|| certifies at least one solution. Searches (0, 1e12]
/// by bracketing and bisection on r(M) = M - theta*psi(M)*||p|| and records the
/// minimal threshold. p_expr must be nonnegative on the grid; psi must be
/// nondecreasing (audited by sampling; violations are errors).
Certificate check_leray_schauder(const ProblemSpec& p, const Expr& p_expr, const Expr& psi,
                                 const QuadratureConfig& quad);

/// Max sampled difference quotient |f(t,x)-f(t,y)|/|x-y| over t_samples random
/// t values with pair_samples random (x,y) pairs each, x,y in [x_lo, x_hi].
/// Deterministic for a fixed seed; a lower bound of the true constant.
LipschitzEstimate estimate_lipschitz(const Expr& f, std::uint64_t t_samples, double x_lo,
                                     double x_hi, std::uint64_t pair_samples, std::uint64_t seed);

} // namespace fracbvp
