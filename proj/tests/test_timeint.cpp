#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "fsbp/timeint.hpp"

using namespace fsbp;

namespace {

// stability polynomial of the scheme: R(z) = 1 + z + z^2/2 + z^3/6
double amplification(double z) {
    return 1.0 + z + z * z / 2 + z * z * z / 6;
}

}  // namespace

TEST_CASE("ssprk33 is the identity for a vanishing right-hand side",
          "[timeint]") {
    Eigen::VectorXd u(3);
    u << 1.0, -2.5, 0.25;
    const Eigen::VectorXd u0 = u;
    Ssprk33Scratch s;
    RhsFn rhs = [](const Eigen::VectorXd& v, double, Eigen::VectorXd& out) {
        out = Eigen::VectorXd::Zero(v.size());
    };
    ssprk33_step(rhs, u, 0.0, 0.37, s);
    CHECK((u - u0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("one step of u' = -u matches the cubic Taylor polynomial",
          "[timeint]") {
    Eigen::VectorXd u(1);
    u << 1.0;
    Ssprk33Scratch s;
    RhsFn rhs = [](const Eigen::VectorXd& v, double, Eigen::VectorXd& out) {
        out = -v;
    };
    ssprk33_step(rhs, u, 0.0, 0.1, s);
    // 1 - 0.1 + 0.005 - 0.1^3/6, exactly the scheme's linear amplification
    CHECK(u[0] == Catch::Approx(amplification(-0.1)).epsilon(1e-15));
    CHECK(u[0] == Catch::Approx(0.9048333333333333).epsilon(1e-14));
    CHECK(std::abs(u[0] - std::exp(-0.1)) < 1e-5);  // local error O(dt^4)
}

TEST_CASE("linear amplification matches the stability polynomial", "[timeint]") {
    Ssprk33Scratch s;
    for (double z : {-2.5, -1.0, -0.2, 0.3}) {
        Eigen::VectorXd u(1);
        u << 1.0;
        RhsFn rhs = [z](const Eigen::VectorXd& v, double, Eigen::VectorXd& out) {
            out = z * v;  // z folded into the rate; dt = 1
        };
        ssprk33_step(rhs, u, 0.0, 1.0, s);
        CHECK(u[0] == Catch::Approx(amplification(z)).epsilon(1e-14));
    }
    // real-axis stability boundary is near z = -2.51
    CHECK(std::abs(amplification(-2.51)) <= 1.0 + 1e-2);
    CHECK(std::abs(amplification(-3.0)) > 1.0);
}

TEST_CASE("global order three on u' = lambda u", "[timeint]") {
    const double lambda = -1.3, t_end = 1.0;
    const double exact = std::exp(lambda * t_end);
    Ssprk33Scratch s;
    RhsFn rhs = [lambda](const Eigen::VectorXd& v, double, Eigen::VectorXd& out) {
        out = lambda * v;
    };
    std::vector<double> errs;
    for (int steps : {20, 40, 80, 160}) {
        Eigen::VectorXd u(1);
        u << 1.0;
        const double dt = t_end / steps;
        for (int k = 0; k < steps; ++k) ssprk33_step(rhs, u, k * dt, dt, s);
        errs.push_back(std::abs(u[0] - exact));
    }
    for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
        const double order = std::log2(errs[i] / errs[i + 1]);
        CHECK(order == Catch::Approx(3.0).margin(0.2));
    }
}

TEST_CASE("divergence detection carries the step index", "[timeint]") {
    Eigen::VectorXd u(2);
    u << 1.0, std::nan("");
    try {
        ensure_finite(u, 0.5, 7);
        FAIL("expected DivergenceError");
    } catch (const DivergenceError& e) {
        CHECK(e.step_index == 7);
        CHECK(e.last_finite_time == Catch::Approx(0.5));
    }
}

TEST_CASE("time step rule", "[timeint]") {
    // 1/dt = (lambda/dx + eps/dx^2) / c_cfl per dimension
    const double dt = cfl_time_step(2.0, 1e-2, 0.1, 0.5);
    CHECK(dt == Catch::Approx(0.5 / (2.0 / 0.1 + 1e-2 / 0.01)));
    CHECK(cfl_time_step(1.0, 0.0, 0.1, 0.5, 2) ==
          Catch::Approx(0.5 / (2 * 10.0)));
    CHECK(dt > 0);
    CHECK_THROWS_AS(cfl_time_step(1.0, 0.0, 0.0, 0.5), Error);
}
