#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fracbvp/fracops.hpp"
#include "fracbvp/model.hpp"
#include "fracbvp/solver.hpp"
#include "fracbvp/special.hpp"

#include "example_problems.hpp"

using fracbvp::apply_operator;
using fracbvp::BoundaryTerm;
using fracbvp::compute_deltas;
using fracbvp::Expr;
using fracbvp::GridFunction;
using fracbvp::picard_solve;
using fracbvp::ProblemSpec;
using fracbvp::QuadratureConfig;
using fracbvp::Solution;
using fracbvp::solve_linear;

namespace {

ProblemSpec with_f(const ProblemSpec& base, const char* ftext) {
    return ProblemSpec(base.q(), base.sigma(), base.nu(), base.xi(), base.terms(),
                       testutil::parse_f(ftext));
}

double sup_diff(const GridFunction& a, const GridFunction& b) {
    double d = 0.0;
    for (std::size_t j = 0; j < a.n_nodes(); ++j) d = std::max(d, std::abs(a[j] - b[j]));
    return d;
}

// hand-integrated closed form of one operator application for f == 1
double constant_f_closed_form(const ProblemSpec& p, double t) {
    namespace fb = fracbvp;
    const auto d = compute_deltas(p);
    const double q = p.q();
    double b1 = -1.0 / fb::gamma(q + 1.0);
    for (const BoundaryTerm& term : p.terms()) {
        b1 += term.beta * std::pow(term.eta, q + 1.0) / fb::gamma(q + 2.0) +
              term.gamma * std::pow(term.eta, q) / fb::gamma(q + 1.0);
    }
    double b2 = -std::pow(p.xi(), q - p.sigma()) / fb::gamma(q - p.sigma() + 1.0);
    for (const BoundaryTerm& term : p.terms()) {
        b2 += term.alpha * std::pow(term.eta, q - p.nu()) / fb::gamma(q - p.nu() + 1.0);
    }
    return std::pow(t, q) / fb::gamma(q + 1.0) + b1 / d.delta2 +
           fb::gamma(2.0 - p.sigma()) * fb::gamma(2.0 - p.nu()) * (d.delta3 + 2.0 * d.delta2 * t) *
               b2 / (2.0 * d.delta1 * d.delta2);
}

} // namespace

TEST_CASE("zero right-hand side maps every grid function to zero") {
    const ProblemSpec p = with_f(testutil::example1(), "0");
    const QuadratureConfig quad{257, 4};
    const GridFunction x = GridFunction::sample(257, [](double t) { return std::sin(3.0 * t) + t * t; });
    const GridFunction ax = apply_operator(p, x, quad);
    CHECK(ax.max_abs() == 0.0);
}

TEST_CASE("constant right-hand side matches the hand-integrated closed form") {
    const QuadratureConfig quad{257, 4};
    for (const ProblemSpec& base :
         {testutil::example1(), testutil::example2(), testutil::example3()}) {
        const ProblemSpec p = with_f(base, "1");
        const GridFunction ax = apply_operator(p, GridFunction::zeros(257), quad);
        double worst = 0.0;
        for (std::size_t j = 0; j < ax.n_nodes(); ++j) {
            worst = std::max(worst, std::abs(ax[j] - constant_f_closed_form(p, ax.node(j))));
        }
        // constant integrands telescope exactly; only rounding remains
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("x-free right-hand side makes the operator constant in x") {
    const ProblemSpec p = with_f(testutil::example1(), "sin(pi*t)+1/2");
    const QuadratureConfig quad{129, 4};
    const GridFunction a = apply_operator(p, GridFunction::zeros(129), quad);
    const GridFunction b =
        apply_operator(p, GridFunction::sample(129, [](double t) { return std::cos(t); }), quad);
    for (std::size_t j = 0; j < a.n_nodes(); ++j) CHECK(a[j] == b[j]);
}

TEST_CASE("operator rejects a grid that disagrees with the configuration") {
    const ProblemSpec p = with_f(testutil::example1(), "1");
    CHECK_THROWS_AS(apply_operator(p, GridFunction::zeros(257), QuadratureConfig{1025, 4}),
                    std::invalid_argument);
}

TEST_CASE("zero forcing solves to the zero function with zero constants") {
    const Solution s = solve_linear(with_f(testutil::example1(), "0"), QuadratureConfig{129, 4});
    CHECK(s.x.max_abs() == 0.0);
    CHECK(s.c0 == 0.0);
    CHECK(s.c1 == 0.0);
    CHECK(s.linear_constants);
    CHECK(s.trace.converged);
    CHECK(s.residuals.ode_residual_sup <= 1e-12);
    CHECK(s.residuals.bc1_residual <= 1e-12);
    CHECK(s.residuals.bc2_residual <= 1e-12);
}

TEST_CASE("unit forcing reproduces the closed-form constants on all three data sets") {
    const QuadratureConfig quad{1025, 4};

    const Solution s1 = solve_linear(with_f(testutil::example1(), "1"), quad);
    CHECK(std::abs(s1.c0 - 0.14950102993432507983) <= 1e-13);
    CHECK(std::abs(s1.c1 - -0.84703224130983357775) <= 1e-13);
    // solution values at quarter points (closed form x = t^q/G(q+1) + c0 + c1 t)
    CHECK(std::abs(s1.x[256] - 0.031774566864826066555) <= 1e-13);
    CHECK(std::abs(s1.x[512] - -0.008053570452969923748) <= 1e-13);
    CHECK(std::abs(s1.x[768] - 0.0028293608548698181072) <= 1e-13);
    CHECK(std::abs(s1.x[1024] - 0.054721566688166551347) <= 1e-13);

    const Solution s2 = solve_linear(with_f(testutil::example2(), "1"), quad);
    CHECK(std::abs(s2.c0 - 0.1124107288751768725) <= 1e-13);
    CHECK(std::abs(s2.c1 - -0.88148151322314092812) <= 1e-13);

    const Solution s3 = solve_linear(with_f(testutil::example3(), "1"), quad);
    CHECK(std::abs(s3.c0 - 0.17284579950939799714) <= 1e-13);
    CHECK(std::abs(s3.c1 - -1.3358342562961710324) <= 1e-13);
}

TEST_CASE("unit forcing satisfies both boundary conditions on all three data sets") {
    for (const ProblemSpec& base :
         {testutil::example1(), testutil::example2(), testutil::example3()}) {
        const Solution s = solve_linear(with_f(base, "1"), QuadratureConfig{1025, 4});
        // measured defects: bc1 reaches 4e-5 on the third data set (off-grid
        // panel phase), bc2 stays below 2.4e-7; the acceptance ceiling is 5e-4
        CHECK(s.residuals.bc1_residual <= 1e-4);
        CHECK(s.residuals.bc2_residual <= 1e-6);
    }
}

TEST_CASE("equation residual of the unit-forcing solve stays within its budget") {
    // double numerical differentiation makes this the weakest residual; the
    // measured sup over the check nodes is 3.74e-2 at this resolution
    const Solution s = solve_linear(with_f(testutil::example1(), "1"), QuadratureConfig{1025, 4});
    CHECK(s.residuals.ode_residual_sup <= 5e-2);
}

TEST_CASE("direct solve rejects a right-hand side that references x") {
    CHECK_THROWS_AS(solve_linear(with_f(testutil::example1(), "x"), QuadratureConfig{129, 4}),
                    std::invalid_argument);
    CHECK_THROWS_AS(solve_linear(with_f(testutil::example1(), "t+x/2"), QuadratureConfig{129, 4}),
                    std::invalid_argument);
    CHECK_NOTHROW(solve_linear(with_f(testutil::example1(), "t"), QuadratureConfig{129, 4}));
}

TEST_CASE("direct solve equals one operator application to the zero function") {
    const ProblemSpec p = with_f(testutil::example2(), "sin(pi*t)+1/2");
    const QuadratureConfig quad{513, 4};
    const Solution s = solve_linear(p, quad);
    const GridFunction ax = apply_operator(p, GridFunction::zeros(513), quad);
    for (std::size_t j = 0; j < ax.n_nodes(); ++j) CHECK(s.x[j] == ax[j]);
}

TEST_CASE("zero right-hand side fixed point is found immediately") {
    const ProblemSpec p = with_f(testutil::example1(), "0");
    const QuadratureConfig quad{129, 4};

    const Solution from_zero = picard_solve(p, quad, 1e-9, 10);
    CHECK(from_zero.trace.converged);
    CHECK(from_zero.trace.iterates == 1);
    CHECK(from_zero.x.max_abs() == 0.0);

    // a nonzero start lands on the fixed point after one application, but the
    // step-difference stop rule needs the second application to see that
    const GridFunction init = GridFunction::sample(129, [](double t) { return std::cos(2.0 * t); });
    const Solution from_init = picard_solve(p, quad, 1e-9, 10, &init);
    CHECK(from_init.trace.converged);
    CHECK(from_init.trace.iterates == 2);
    CHECK(from_init.x.max_abs() == 0.0);
}

TEST_CASE("x-free right-hand side converges in exactly two iterations") {
    const ProblemSpec p = with_f(testutil::example1(), "sin(pi*t)+1/2");
    const QuadratureConfig quad{257, 4};
    const Solution iterated = picard_solve(p, quad, 1e-12, 10);
    CHECK(iterated.trace.converged);
    CHECK(iterated.trace.iterates == 2);
    CHECK(iterated.trace.sup_deltas[1] <= 1e-12);
    const Solution direct = solve_linear(p, quad);
    for (std::size_t j = 0; j < iterated.x.n_nodes(); ++j) CHECK(iterated.x[j] == direct.x[j]);
}

TEST_CASE("contractive problem converges fast and consistently") {
    const ProblemSpec p = testutil::example1();
    const QuadratureConfig quad{1025, 4};
    const double tol = 1e-9;
    const Solution s = picard_solve(p, quad, tol, 80);

    REQUIRE(s.trace.converged);
    CHECK(s.trace.iterates <= 80);
    CHECK(s.trace.final_delta <= tol);
    CHECK(s.trace.observed_ratios.size() == s.trace.sup_deltas.size() - 1);

    // every observed contraction ratio sits far below the certified bound
    // 0.81531 + 0.01; measured ratios peak at 0.0115
    for (double ratio : s.trace.observed_ratios) CHECK(ratio <= 0.8154 + 0.01);

    // fixed-point consistency
    const GridFunction ax = apply_operator(p, s.x, quad);
    CHECK(sup_diff(ax, s.x) <= 2.0 * tol);

    // boundary residuals of the computed fixed point (measured <= 1.4e-7)
    CHECK(s.residuals.bc1_residual <= 1e-6);
    CHECK(s.residuals.bc2_residual <= 1e-6);

    // regression pin; libm variation stays well inside this window
    CHECK(std::abs(s.x.max_abs() - 0.049768662719367474) <= 1e-9);
}

TEST_CASE("expanding problem reports non-convergence instead of throwing") {
    const ProblemSpec p = with_f(testutil::example1(), "100*x+1");
    const Solution s = picard_solve(p, QuadratureConfig{129, 4}, 1e-9, 5);
    CHECK_FALSE(s.trace.converged);
    CHECK(s.trace.iterates == 5);
    CHECK(s.trace.final_delta > 1e-9);
    CHECK(s.trace.sup_deltas.size() == 5);
    CHECK(s.trace.observed_ratios.size() == 4);
    for (double ratio : s.trace.observed_ratios) CHECK(ratio > 1.0);
}

TEST_CASE("iteration rejects bad controls") {
    const ProblemSpec p = testutil::example1();
    const QuadratureConfig quad{129, 4};
    CHECK_THROWS_AS(picard_solve(p, quad, 0.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(picard_solve(p, quad, -1e-9, 10), std::invalid_argument);
    CHECK_THROWS_AS(picard_solve(p, quad, 1e-9, 0), std::invalid_argument);
    const GridFunction bad_init = GridFunction::zeros(257);
    CHECK_THROWS_AS(picard_solve(p, quad, 1e-9, 10, &bad_init), std::invalid_argument);
}

TEST_CASE("zero candidate for the zero equation has zero residuals") {
    const fracbvp::Residuals r = fracbvp::verify(with_f(testutil::example1(), "0"),
                                                 GridFunction::zeros(129), QuadratureConfig{129, 4});
    CHECK(r.ode_residual_sup <= 1e-12);
    CHECK(r.bc1_residual <= 1e-12);
    CHECK(r.bc2_residual <= 1e-12);
}

TEST_CASE("constant candidate exposes a violated point-value condition") {
    // beta = gamma = 0 turns the second condition into x(1) = 0
    const ProblemSpec p(1.5, 0.5, 0.5, 0.3, {{0.7, 0.5, 0.0, 0.0}}, testutil::parse_f("0"));
    const std::vector<double> ones(129, 1.0);
    const fracbvp::Residuals r =
        fracbvp::verify(p, GridFunction(ones), QuadratureConfig{129, 4});
    CHECK(r.ode_residual_sup <= 1e-12);
    CHECK(r.bc1_residual <= 1e-12);
    CHECK(r.bc2_residual == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("boundary residuals shrink under grid refinement") {
    for (const ProblemSpec& base :
         {testutil::example1(), testutil::example2(), testutil::example3()}) {
        const ProblemSpec p = with_f(base, "1");
        std::vector<double> bc1;
        std::vector<double> bc2;
        for (std::size_t n : {257u, 513u, 1025u, 2049u}) {
            const Solution s = solve_linear(p, QuadratureConfig{n, 4});
            bc1.push_back(s.residuals.bc1_residual);
            bc2.push_back(s.residuals.bc2_residual);
        }
        // the integral condition converges cleanly at every doubling
        for (std::size_t k = 0; k + 1 < bc2.size(); ++k) CHECK(bc2[k + 1] <= bc2[k] / 1.5);
        // the fractional-derivative condition oscillates with the off-grid
        // panel phase, so it is compared across two doublings with a noise
        // floor; measured margins are at least 5x
        for (std::size_t k = 0; k + 2 < bc1.size(); ++k) {
            const double coarse = std::max(bc1[k], bc2[k]);
            const double fine = std::max(bc1[k + 2], bc2[k + 2]);
            CHECK((fine <= coarse / 2.25 || fine <= 1e-6));
        }
    }
}

TEST_CASE("a-priori bound brackets the true distance to the fixed point") {
    // f = x/14 + 1/4 has Lipschitz constant 1/14, and L*Theta ~ 0.4077 < 1
    const ProblemSpec p = with_f(testutil::example1(), "x/14+1/4");
    const QuadratureConfig quad{257, 4};
    const double contraction = fracbvp::compute_theta(p) / 14.0;
    REQUIRE(contraction < 1.0);

    const Solution truth = picard_solve(p, quad, 1e-13, 80);
    REQUIRE(truth.trace.converged);

    const Solution partial = picard_solve(p, quad, 1e-15, 3);
    REQUIRE_FALSE(partial.trace.converged);
    const double bound = fracbvp::a_priori_bound(partial.trace, contraction);
    CHECK(sup_diff(partial.x, truth.x) <= bound);
}

TEST_CASE("a-priori bound formula and input checks") {
    fracbvp::IterationTrace trace;
    trace.iterates = 3;
    trace.sup_deltas = {0.4, 0.2, 0.1};
    CHECK(fracbvp::a_priori_bound(trace, 0.5) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK_THROWS_AS(fracbvp::a_priori_bound(trace, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(fracbvp::a_priori_bound(trace, 0.0), std::invalid_argument);
    const fracbvp::IterationTrace empty;
    CHECK(fracbvp::a_priori_bound(empty, 0.5) == 0.0);
}

TEST_CASE("solves are bit-identical across repeated runs") {
    const ProblemSpec p = testutil::example1();
    const QuadratureConfig quad{257, 4};
    const Solution a = picard_solve(p, quad, 1e-9, 80);
    const Solution b = picard_solve(p, quad, 1e-9, 80);
    REQUIRE(a.trace.iterates == b.trace.iterates);
    for (std::size_t j = 0; j < a.x.n_nodes(); ++j) CHECK(a.x[j] == b.x[j]);
    for (std::size_t k = 0; k < a.trace.sup_deltas.size(); ++k) {
        CHECK(a.trace.sup_deltas[k] == b.trace.sup_deltas[k]);
    }
    CHECK(a.residuals.ode_residual_sup == b.residuals.ode_residual_sup);
    CHECK(a.residuals.bc1_residual == b.residuals.bc1_residual);
    CHECK(a.residuals.bc2_residual == b.residuals.bc2_residual);

    const Solution c = solve_linear(with_f(p, "sin(pi*t)"), quad);
    const Solution d = solve_linear(with_f(p, "sin(pi*t)"), quad);
    CHECK(c.c0 == d.c0);
    CHECK(c.c1 == d.c1);
    for (std::size_t j = 0; j < c.x.n_nodes(); ++j) CHECK(c.x[j] == d.x[j]);
}
