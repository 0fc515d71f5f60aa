#include "fracbvp/fracops.hpp"

#include <cmath>
#include <stdexcept>

#include "fracbvp/special.hpp"

namespace fracbvp {

namespace {

// Index k of the panel [node(k), node(k+1)] whose closure contains t, nudged
// so that node(k) <= t despite rounding in t*(n-1).
std::size_t panel_index(const GridFunction& f, double t) {
    const std::size_t last_panel = f.n_nodes() - 2;
    auto k = static_cast<std::size_t>(t * static_cast<double>(f.n_nodes() - 1));
    if (k > last_panel) k = last_panel;
    while (k > 0 && f.node(k) > t) --k;
    while (k < last_panel && f.node(k + 1) <= t) ++k;
    return k;
}

} // namespace

double rl_integral(const GridFunction& f, double mu, double t) {
    if (!(mu > 0.0 && mu <= 3.0)) {
        throw std::domain_error("fractional integral order must lie in (0,3]");
    }
    if (!(t >= 0.0 && t <= 1.0)) {
        throw std::domain_error("evaluation point must lie in [0,1]");
    }
    if (t == 0.0) return 0.0;

    const double inv_g1 = reciprocal_gamma(mu + 1.0);
    const double inv_g2 = reciprocal_gamma(mu + 2.0);
    const double h = f.spacing();
    const std::size_t k = panel_index(f, t);

    // Panel j spans [node(j), min(node(j+1), t)]; with A = t - node(j) and
    // B = t - panel end, the interpolant f(s) = f_j + slope*(s - node(j)) has
    //   ∫ (t-s)^{mu-1} f(s) ds / Gamma(mu)
    //     = f_j (A^mu - B^mu)/Gamma(mu+1)
    //       + slope [A (A^mu - B^mu)/Gamma(mu+1) - mu (A^{mu+1} - B^{mu+1})/Gamma(mu+2)].
    double acc = 0.0;
    for (std::size_t j = 0; j <= k; ++j) {
        const double a = f.node(j);
        const double big_a = t - a;
        if (big_a <= 0.0) break;  // empty partial panel when t sits on node(k)
        const double big_b = j < k ? t - f.node(j + 1) : 0.0;
        const double pa = std::pow(big_a, mu);
        const double pb = big_b > 0.0 ? std::pow(big_b, mu) : 0.0;
        const double w1 = (pa - pb) * inv_g1;
        const double w2 = big_a * w1 - mu * (pa * big_a - pb * big_b) * inv_g2;
        const double slope = (f[j + 1] - f[j]) / h;
        acc += f[j] * w1 + slope * w2;
    }
    return acc;
}

std::vector<double> rl_integral_all_nodes(const GridFunction& f, double mu) {
    if (!(mu > 0.0 && mu <= 3.0)) {
        throw std::domain_error("fractional integral order must lie in (0,3]");
    }
    const std::size_t n = f.n_nodes();
    const double h = f.spacing();
    const double inv_g1 = reciprocal_gamma(mu + 1.0);
    const double inv_g2 = reciprocal_gamma(mu + 2.0);

    // At node i, every panel gap t_i - t_j depends only on the lag m = i - j,
    // so the per-panel closed forms collapse into two weight tables.
    std::vector<double> kernel_pow(n);
    for (std::size_t m = 0; m < n; ++m) {
        kernel_pow[m] = std::pow(static_cast<double>(m) * h, mu);
    }
    std::vector<double> w1(n), w2(n);
    for (std::size_t m = 1; m < n; ++m) {
        const double big_a = static_cast<double>(m) * h;
        const double big_b = static_cast<double>(m - 1) * h;
        w1[m] = (kernel_pow[m] - kernel_pow[m - 1]) * inv_g1;
        w2[m] = big_a * w1[m] -
                mu * (kernel_pow[m] * big_a - kernel_pow[m - 1] * big_b) * inv_g2;
    }
    std::vector<double> slope(n - 1);
    for (std::size_t j = 0; j + 1 < n; ++j) slope[j] = (f[j + 1] - f[j]) / h;

    std::vector<double> out(n);
    out[0] = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < i; ++j) {
            const std::size_t m = i - j;
            acc += f[j] * w1[m] + slope[j] * w2[m];
        }
        out[i] = acc;
    }
    return out;
}

double caputo_derivative(const GridFunction& x, double mu, double t) {
    if (!(mu > 0.0 && mu <= 1.0)) {
        throw std::domain_error("Caputo order must lie in (0,1]");
    }
    if (!(t >= 0.0 && t <= 1.0)) {
        throw std::domain_error("evaluation point must lie in [0,1]");
    }
    const double h = x.spacing();

    if (mu == 1.0) {
        // One-sided derivative of the interpolant: slope of the panel ending
        // at t (forward difference at t = 0).
        if (t == 0.0) return (x[1] - x[0]) / h;
        std::size_t k = panel_index(x, t);
        if (x.node(k) >= t && k > 0) --k;
        return (x[k + 1] - x[k]) / h;
    }

    if (t == 0.0) return 0.0;
    const double inv_g = reciprocal_gamma(2.0 - mu);
    const double ex = 1.0 - mu;
    const std::size_t k = panel_index(x, t);

    // x' is d_j on panel j; ∫ (t-s)^{-mu} d_j ds / Gamma(1-mu)
    //   = d_j (A^{1-mu} - B^{1-mu}) / Gamma(2-mu).
    double acc = 0.0;
    for (std::size_t j = 0; j <= k; ++j) {
        const double big_a = t - x.node(j);
        if (big_a <= 0.0) break;
        const double big_b = j < k ? t - x.node(j + 1) : 0.0;
        const double pa = std::pow(big_a, ex);
        const double pb = big_b > 0.0 ? std::pow(big_b, ex) : 0.0;
        const double d = (x[j + 1] - x[j]) / h;
        acc += d * (pa - pb) * inv_g;
    }
    return acc;
}

} // namespace fracbvp
