#include "fracbvp/certify.hpp"

#include <cmath>
#include <random>
#include <span>
#include <stdexcept>

namespace fracbvp {

namespace {

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

double eval1(const Expr& e, double v) { return e.eval(std::span<const double>(&v, 1)); }

double eval2(const Expr& e, double t, double x) {
    const double values[] = {t, x};
    return e.eval(values);
}

// Grid sup of |f(t,0)| over the oversampled grid.
double sup_f_at_zero(const ProblemSpec& p, const QuadratureConfig& quad) {
    const std::size_t n = quad.oversampled_nodes();
    double sup = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double t = static_cast<double>(j) / static_cast<double>(n - 1);
        sup = std::max(sup, std::abs(eval2(p.f(), t, 0.0)));
    }
    return sup;
}

} // namespace

std::string to_string(CertificateKind kind) {
    switch (kind) {
        case CertificateKind::banach: return "banach";
        case CertificateKind::boyd_wong: return "boyd_wong";
        case CertificateKind::leray_schauder: return "leray_schauder";
    }
    return "unknown";
}

std::string to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::unique_solution: return "unique_solution";
        case Verdict::at_least_one_solution: return "at_least_one_solution";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "unknown";
}

Certificate check_banach(const ProblemSpec& p, const LipschitzEstimate& lipschitz,
                         const QuadratureConfig& quad) {
    if (!(lipschitz.value > 0.0)) {
        throw std::invalid_argument("Lipschitz constant must be positive");
    }
    quad.validate();

    Certificate cert;
    cert.kind = CertificateKind::banach;
    const double theta = compute_theta(p);
    const double l_theta = lipschitz.value * theta;
    cert.quantities["L"] = lipschitz.value;
    cert.quantities["theta"] = theta;
    cert.quantities["L_theta"] = l_theta;
    if (lipschitz.method == LipschitzEstimate::Method::sampled) {
        cert.quantities["L_samples"] = static_cast<double>(lipschitz.samples);
        cert.notes.push_back(
            "L was estimated from sampled difference quotients; it is a lower bound of the "
            "true constant, so this verdict is heuristic");
    }

    if (l_theta < 1.0) {
        cert.verdict = Verdict::unique_solution;
        const double m = sup_f_at_zero(p, quad);
        cert.quantities["M"] = m;
        cert.quantities["rho"] = theta * m / (1.0 - l_theta);
    } else {
        cert.verdict = Verdict::inconclusive;
        cert.notes.push_back(
            "contraction condition L*theta < 1 not met; the condition is sufficient, not "
            "necessary, so no conclusion follows");
    }
    return cert;
}

Certificate check_boyd_wong(const ProblemSpec& p, const Expr& g, const QuadratureConfig& quad,
                            std::uint64_t h2_samples, std::uint64_t seed, double box_lo,
                            double box_hi) {
    if (!(box_lo < box_hi)) throw std::invalid_argument("empty sampling box");

    Certificate cert;
    cert.kind = CertificateKind::boyd_wong;
    const double phi = compute_phi(p, g, quad);
    cert.quantities["phi"] = phi;
    cert.quantities["h2_samples"] = static_cast<double>(h2_samples);

    // Audit |f(t,x)-f(t,y)| <= g(t)/phi * ln(1+|x-y|) by sampling.
    std::mt19937_64 rng(seed);
    std::uint64_t violations = 0;
    bool have_witness = false;
    for (std::uint64_t i = 0; i < h2_samples; ++i) {
        const double t = uniform01(rng);
        const double x = uniform(rng, box_lo, box_hi);
        const double y = uniform(rng, box_lo, box_hi);
        if (x == y) continue;
        const double lhs = std::abs(eval2(p.f(), t, x) - eval2(p.f(), t, y));
        const double rhs = eval1(g, t) / phi * std::log1p(std::abs(x - y));
        if (lhs > rhs) {
            ++violations;
            if (!have_witness) {
                have_witness = true;
                cert.quantities["witness_t"] = t;
                cert.quantities["witness_x"] = x;
                cert.quantities["witness_y"] = y;
                cert.quantities["witness_lhs"] = lhs;
                cert.quantities["witness_rhs"] = rhs;
            }
        }
    }
    cert.quantities["violations"] = static_cast<double>(violations);

    if (violations == 0) {
        cert.verdict = Verdict::unique_solution;
        cert.notes.push_back("nonlinear-contraction bound audited on x,y in [" +
                             std::to_string(box_lo) + ", " + std::to_string(box_hi) +
                             "]; sampling is evidence over that box, not a proof");
    } else {
        cert.verdict = Verdict::inconclusive;
        cert.notes.push_back(
            "sampled a violation of the nonlinear-contraction bound; witness recorded in "
            "quantities");
    }
    return cert;
}

Certificate check_leray_schauder(const ProblemSpec& p, const Expr& p_expr, const Expr& psi,
                                 const QuadratureConfig& quad) {
    quad.validate();
    if (p_expr.variables() != std::vector<std::string>{"t"}) {
        throw std::invalid_argument("p must be declared over the single variable t");
    }
    if (psi.variables().size() != 1) {
        throw std::invalid_argument("psi must be an expression in one variable");
    }

    // Grid sup of p, rejecting negative nodes.
    const std::size_t n = quad.oversampled_nodes();
    double p_norm = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double t = static_cast<double>(j) / static_cast<double>(n - 1);
        const double value = eval1(p_expr, t);
        if (value < 0.0) {
            throw std::domain_error("p is negative at t = " + std::to_string(t));
        }
        p_norm = std::max(p_norm, value);
    }

    // Monotonicity audit of psi on the searched range, log-spaced.
    constexpr double kCap = 1e12;
    double prev_u = 0.0;
    double prev_psi = eval1(psi, 0.0);
    for (int j = 0; j <= 84; ++j) {
        const double u = std::pow(10.0, -9.0 + 0.25 * static_cast<double>(j));
        const double value = eval1(psi, u);
        if (value < prev_psi) {
            throw std::domain_error("psi is not nondecreasing: psi(" + std::to_string(u) +
                                    ") < psi(" + std::to_string(prev_u) + ")");
        }
        prev_u = u;
        prev_psi = value;
    }

    Certificate cert;
    cert.kind = CertificateKind::leray_schauder;
    const double theta = compute_theta(p);
    cert.quantities["theta"] = theta;
    cert.quantities["p_norm"] = p_norm;
    cert.quantities["theta_pnorm"] = theta * p_norm;
    cert.notes.push_back(
        "growth hypothesis |f(t,x)| <= p(t) psi(|x|) is taken as given, not audited");

    const auto residual = [&](double m) { return m - theta * eval1(psi, m) * p_norm; };

    // Bracket the first sign change of r scanning up from 0.
    double lo = 0.0;
    double r_lo = residual(0.0);
    double hi = 0.0;
    bool bracketed = false;
    if (r_lo > 0.0) {
        // r(0) = -theta*psi(0)*||p|| <= 0 whenever psi(0) >= 0; a positive
        // value means psi(0) < 0, which the cap below still handles.
        bracketed = true;
        hi = 0.0;
    } else {
        for (int j = 0; j <= 84 && !bracketed; ++j) {
            const double m = std::pow(10.0, -9.0 + 0.25 * static_cast<double>(j));
            if (m > kCap) break;
            const double r = residual(m);
            if (r > 0.0) {
                bracketed = true;
                hi = m;
            } else {
                lo = m;
                r_lo = r;
            }
        }
    }

    if (!bracketed) {
        cert.verdict = Verdict::inconclusive;
        cert.notes.push_back(
            "no threshold M with M > theta*psi(M)*||p|| found up to 1e12; the growth "
            "condition gives no conclusion");
        return cert;
    }

    cert.quantities["M_witness"] = hi;
    if (hi > 0.0) {
        const double denom = theta * eval1(psi, hi) * p_norm;
        if (denom > 0.0) cert.quantities["witness_ratio"] = hi / denom;
    }

    // Bisect to the crossing; r(lo) <= 0 < r(hi) throughout.
    for (int iter = 0; iter < 200 && hi - lo > 1e-13 * std::max(1.0, hi); ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (residual(mid) > 0.0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    cert.verdict = Verdict::at_least_one_solution;
    cert.quantities["M_star"] = 0.5 * (lo + hi);
    return cert;
}

LipschitzEstimate estimate_lipschitz(const Expr& f, std::uint64_t t_samples, double x_lo,
                                     double x_hi, std::uint64_t pair_samples,
                                     std::uint64_t seed) {
    if (t_samples < 1 || pair_samples < 1) {
        throw std::invalid_argument("sampling counts must be at least 1");
    }
    if (!(x_lo < x_hi)) throw std::invalid_argument("empty sampling box");

    std::mt19937_64 rng(seed);
    double best = 0.0;
    for (std::uint64_t i = 0; i < t_samples; ++i) {
        const double t = uniform01(rng);
        for (std::uint64_t j = 0; j < pair_samples; ++j) {
            const double x = uniform(rng, x_lo, x_hi);
            const double y = uniform(rng, x_lo, x_hi);
            // Below ~1e-9 separation the quotient is dominated by rounding in
            // the numerator; skip those pairs.
            if (std::abs(x - y) < 1e-9) continue;
            const double quotient = std::abs(eval2(f, t, x) - eval2(f, t, y)) / std::abs(x - y);
            best = std::max(best, quotient);
        }
    }
    LipschitzEstimate estimate;
    estimate.value = best;
    estimate.method = LipschitzEstimate::Method::sampled;
    estimate.samples = t_samples * pair_samples;
    return estimate;
}

} // namespace fracbvp
