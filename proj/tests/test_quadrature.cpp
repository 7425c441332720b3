#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "fsbp/quadrature.hpp"

using namespace fsbp;

namespace {

FunctionSpace quad_target(const FunctionSpace& f) {
    return product_rule_space(direct_sum(f, derivative_space(f)));
}

}  // namespace

TEST_CASE("moments of simple integrands", "[quadrature]") {
    const FunctionSpace consts(
        {{[](double) { return 1.0; }, [](double) { return 0.0; }, {}, "1"}},
        kReferenceElement);
    CHECK(moments(consts)[0] == Catch::Approx(2.0).epsilon(1e-14));

    const FunctionSpace sine(
        {{[](double x) { return std::sin(M_PI * x); },
          [](double x) { return M_PI * std::cos(M_PI * x); }, {}, "sin"}},
        kReferenceElement);
    CHECK(moments(sine)[0] == Catch::Approx(0.0).margin(1e-14));

    // closed-form antiderivative: int_{-1}^{1} e^x = e - 1/e
    const FunctionSpace expf(
        {{[](double x) { return std::exp(x); },
          [](double x) { return std::exp(x); }, {}, "e^x"}},
        kReferenceElement);
    CHECK(moments(expf)[0] ==
          Catch::Approx(std::exp(1.0) - std::exp(-1.0)).epsilon(1e-13));
}

TEST_CASE("adaptive refinement agrees with itself one level deeper",
          "[quadrature]") {
    // MomentOracle invariant: two successive tolerance levels agree
    const auto f = [](double x) { return std::exp(-20 * x * x) * std::cos(7 * x); };
    const double a = integrate(f, -1.0, 1.0, 1e-12);
    const double b = integrate(f, -1.0, 1.0, 1e-14);
    CHECK(std::abs(a - b) <= 1e-13 * std::max(1.0, std::abs(b)));
}

TEST_CASE("adaptive refinement reports non-convergence", "[quadrature]") {
    // a jump keeps the panel estimate O(1) at every depth
    const auto step = [](double x) { return x < 1.0 / 3 ? 0.0 : 1.0; };
    CHECK_THROWS_WITH(integrate(step, -1.0, 1.0),
                      Catch::Matchers::ContainsSubstring("20 halvings"));
}

TEST_CASE("trapezoidal weights for the trigonometric target", "[quadrature]") {
    const auto target = quad_target(make_trigonometric(1));
    const auto rule = least_squares_weights(target, equidistant_nodes(4));
    CHECK(rule.weights[0] == Catch::Approx(1.0 / 3).epsilon(1e-12));
    CHECK(rule.weights[1] == Catch::Approx(2.0 / 3).epsilon(1e-12));
    CHECK(rule.weights[2] == Catch::Approx(2.0 / 3).epsilon(1e-12));
    CHECK(rule.weights[3] == Catch::Approx(1.0 / 3).epsilon(1e-12));
    CHECK(rule.weights.sum() == Catch::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("exponential target weights match the reference rule", "[quadrature]") {
    const auto target = quad_target(make_exponential(2, 1.0));
    const auto rule = least_squares_weights(target, equidistant_nodes(5));
    const double expected[5] = {0.14, 0.77, 0.19, 0.75, 0.15};
    for (int i = 0; i < 5; ++i)
        CHECK(std::abs(rule.weights[i] - expected[i]) < 0.005);
}

TEST_CASE("gaussian kernel target weights match the reference rule",
          "[quadrature]") {
    const auto target = quad_target(make_gaussian_rbf(1.0));
    const auto rule = least_squares_weights(target, equidistant_nodes(5));
    const double expected[5] = {0.20, 0.58, 0.44, 0.58, 0.20};
    for (int i = 0; i < 5; ++i)
        CHECK(std::abs(rule.weights[i] - expected[i]) < 0.005);
}

TEST_CASE("polynomial rules on Lobatto nodes are the classical ones",
          "[quadrature]") {
    SECTION("d=2: p = [1/3, 4/3, 1/3]") {
        const auto rule = least_squares_weights(quad_target(make_polynomial(2)),
                                                gauss_lobatto_nodes(3));
        CHECK(rule.weights[0] == Catch::Approx(1.0 / 3).epsilon(1e-12));
        CHECK(rule.weights[1] == Catch::Approx(4.0 / 3).epsilon(1e-12));
        CHECK(rule.weights[2] == Catch::Approx(1.0 / 3).epsilon(1e-12));
    }
    SECTION("closed-form Lobatto weights for d <= 4") {
        // w_j = 2 / (n(n-1) P_{n-1}(x_j)^2), uniform at interior for small n
        const double w3[] = {1.0 / 3, 4.0 / 3, 1.0 / 3};
        const double w4[] = {1.0 / 6, 5.0 / 6, 5.0 / 6, 1.0 / 6};
        const double w5[] = {0.1, 49.0 / 90, 32.0 / 45, 49.0 / 90, 0.1};
        const double* expected[] = {w3, w4, w5};
        for (int d = 2; d <= 4; ++d) {
            const auto rule = least_squares_weights(
                quad_target(make_polynomial(d)), gauss_lobatto_nodes(d + 1));
            for (int i = 0; i <= d; ++i)
                CHECK(rule.weights[i] ==
                      Catch::Approx(expected[d - 2][i]).epsilon(1e-12));
        }
    }
    SECTION("Lobatto nodes for n=4 are +-1, +-1/sqrt(5)") {
        const auto x = gauss_lobatto_nodes(4);
        CHECK(x[1] == Catch::Approx(-1.0 / std::sqrt(5.0)).epsilon(1e-13));
        CHECK(x[2] == Catch::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-13));
    }
}

TEST_CASE("find_positive_rule behavior", "[quadrature]") {
    SECTION("trig target succeeds immediately at N = 2d+2") {
        const auto rule = find_positive_rule(quad_target(make_trigonometric(1)), 4);
        CHECK(rule.size() == 4);
    }
    SECTION("empty exactness space returns trapezoidal weights") {
        const FunctionSpace empty({}, kReferenceElement);
        const auto rule = find_positive_rule(empty, 5);
        CHECK(rule.size() == 5);
        CHECK(rule.weights.minCoeff() > 0);
        CHECK(rule.weights.sum() == Catch::Approx(2.0));
        CHECK(rule.weights[1] == Catch::Approx(0.5));
    }
    SECTION("a nonpositive solution raises the typed error") {
        // alpha = 1/sqrt(20) on 5 points: the unique exact rule has a
        // negative center weight
        const auto target = quad_target(make_gaussian_rbf(1.0 / std::sqrt(20.0)));
        CHECK_THROWS_AS(least_squares_weights(target, equidistant_nodes(5)),
                        NonPositiveWeightsError);
    }
    SECTION("narrow gaussian kernel skips the degenerate N") {
        // alpha = 1/sqrt(20): N=5..9 have nonpositive weights, N=10 is
        // epsilon-degenerate, the first healthy rule appears at N=11
        const auto target = quad_target(make_gaussian_rbf(1.0 / std::sqrt(20.0)));
        const auto rule = find_positive_rule(target, 5);
        CHECK(rule.size() == 11);
        CHECK(rule.weights.minCoeff() > 1e-2 * 2.0 / rule.size());
    }
    SECTION("impossible target reports the node-family advice") {
        // growing bump e^{+20 x^2}: no positive equidistant rule exists for
        // its product-rule space below the 16*dim cap
        const double b = 20.0;
        const FunctionSpace pos_bump(
            {{[](double) { return 1.0; }, [](double) { return 0.0; },
              [](double) { return 0.0; }, "1"},
             {[](double x) { return x; }, [](double) { return 1.0; },
              [](double) { return 0.0; }, "x"},
             {[b](double x) { return std::exp(b * x * x); },
              [b](double x) { return 2 * b * x * std::exp(b * x * x); },
              [b](double x) {
                  return (2 * b + 4 * b * b * x * x) * std::exp(b * x * x);
              },
              "bump"}},
            kReferenceElement);
        const auto target = quad_target(pos_bump);
        CHECK_THROWS_WITH(find_positive_rule(target, 5),
                          Catch::Matchers::ContainsSubstring("node family"));
    }
}

TEST_CASE("rules satisfy the exactness invariant against the moment oracle",
          "[quadrature]") {
    for (const auto& f : {make_polynomial(3), make_trigonometric(2),
                          make_exponential(2, 1.0), make_gaussian_rbf(1.0)}) {
        const auto target = quad_target(f);
        const auto rule = find_positive_rule(target, std::max(target.dim(), 3));
        CHECK(exactness_residual(rule, target) <= 1e-10);
        CHECK(rule.weights.minCoeff() > 1e-14 * 2.0);
        CHECK(rule.weights.sum() == Catch::Approx(2.0).epsilon(1e-12));
        CHECK(rule.nodes[0] == Catch::Approx(-1.0));
        CHECK(rule.nodes[rule.size() - 1] == Catch::Approx(1.0));
    }
}
