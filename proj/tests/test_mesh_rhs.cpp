#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "fsbp/rhs.hpp"

using namespace fsbp;

namespace {

Eigen::VectorXd random_state(int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss;
    Eigen::VectorXd u(n);
    for (int i = 0; i < n; ++i) u[i] = gauss(rng);
    return u;
}

double mass_rate(const BlockMesh& mesh, const Eigen::VectorXd& rhs) {
    double total = 0.0;
    for (int b = 0; b < mesh.blocks; ++b)
        total += mesh.op.p.dot(rhs.segment(b * mesh.n, mesh.n));
    return total;
}

double energy_rate(const BlockMesh& mesh, const Eigen::VectorXd& u,
                   const Eigen::VectorXd& rhs) {
    double total = 0.0;
    for (int b = 0; b < mesh.blocks; ++b) {
        const auto ub = u.segment(b * mesh.n, mesh.n);
        const auto rb = rhs.segment(b * mesh.n, mesh.n);
        total += 2.0 * ub.dot(mesh.op.p.asDiagonal() * rb);
    }
    return total;
}

}  // namespace

TEST_CASE("SAT coefficient relations", "[mesh]") {
    const auto s = make_sat_coefficients(1.0, 1e-2);
    CHECK(s.s1R == 0.0);
    CHECK(s.s2R == Catch::Approx(-5e-3));
    CHECK(s.s1L == Catch::Approx(-1.0));
    CHECK(s.s2L == Catch::Approx(5e-3));
    CHECK(s.s3R == Catch::Approx(-5e-3));
    CHECK(s.s3L == Catch::Approx(5e-3));
    CHECK(s.relation_residual() <= 1e-14);

    SatCoefficients bad = s;
    bad.s1R = 2.0;  // violates s1R <= a/2 and s1L = s1R - a
    CHECK_THROWS_AS(bad.validate(), ConstructionError);
}

TEST_CASE("block mesh partitions the domain uniformly", "[mesh]") {
    const auto op = construct_operator("exp:d=2,alpha=1", "equi:5");
    const auto mesh = make_block_mesh(op, {0.0, 1.0}, 8);
    CHECK(mesh.total() == 40);
    CHECK(mesh.nodes[0] == Catch::Approx(0.0).margin(1e-15));
    CHECK(mesh.nodes[mesh.total() - 1] == Catch::Approx(1.0));
    for (int b = 0; b + 1 < mesh.blocks; ++b)
        CHECK(mesh.nodes[b * mesh.n + mesh.n - 1] ==
              Catch::Approx(mesh.nodes[(b + 1) * mesh.n]).margin(1e-14));
    CHECK(mesh.op.sbp_identity_residual() <= 1e-12);
}

TEST_CASE("free-stream preservation", "[rhs]") {
    const auto op = construct_operator("rbf:alpha=1", "equi:5");
    const auto mesh = make_block_mesh(op, {-1.0, 1.0}, 6);
    const auto sats = make_sat_coefficients(1.0, 1e-2);
    const Eigen::VectorXd u = Eigen::VectorXd::Constant(mesh.total(), 2.7);
    Eigen::VectorXd out;

    advdiff_rhs_1d(mesh, sats, u, out);
    CHECK(out.cwiseAbs().maxCoeff() <= 1e-12 * mesh.op.D1.cwiseAbs().maxCoeff());

    burgers_rhs(mesh, 1e-2, u, out);
    CHECK(out.cwiseAbs().maxCoeff() <= 1e-11 * mesh.op.D1.cwiseAbs().maxCoeff());

    // Dirichlet with matching boundary data is also stationary
    advdiff_rhs_1d(mesh, sats, u, out, Boundary::Dirichlet, {2.7, 2.7});
    CHECK(out.cwiseAbs().maxCoeff() <= 1e-12 * mesh.op.D1.cwiseAbs().maxCoeff());
}

TEST_CASE("advection-diffusion right-hand side is linear", "[rhs]") {
    const auto op = construct_operator("trig:d=1", "equi:4");
    const auto mesh = make_block_mesh(op, {-1.0, 1.0}, 5);
    const auto sats = make_sat_coefficients(0.7, 3e-3);
    const auto u = random_state(mesh.total(), 1);
    const auto w = random_state(mesh.total(), 2);
    Eigen::VectorXd ru, rw, rc;
    advdiff_rhs_1d(mesh, sats, u, ru);
    advdiff_rhs_1d(mesh, sats, w, rw);
    advdiff_rhs_1d(mesh, sats, (1.5 * u - 0.3 * w).eval(), rc);
    const double scale = ru.cwiseAbs().maxCoeff() + rw.cwiseAbs().maxCoeff();
    CHECK((rc - 1.5 * ru + 0.3 * rw).cwiseAbs().maxCoeff() <= 1e-12 * scale);
}

TEST_CASE("discrete mass is conserved by the periodic couplings", "[rhs]") {
    for (const char* spec : {"poly:d=2", "exp:d=2,alpha=1"}) {
        const auto op = construct_operator(
            spec, std::string(spec) == "poly:d=2" ? "lobatto:3" : "equi:5");
        for (int blocks : {1, 7}) {
            const auto mesh = make_block_mesh(op, {0.0, 1.0}, blocks);
            const auto u = random_state(mesh.total(), 40 + blocks);
            Eigen::VectorXd out;
            INFO(spec << " blocks=" << blocks);

            const auto sats = make_sat_coefficients(1.0, 1e-2);
            advdiff_rhs_1d(mesh, sats, u, out);
            CHECK(std::abs(mass_rate(mesh, out)) <=
                  1e-11 * out.cwiseAbs().maxCoeff());

            burgers_rhs(mesh, 1e-2, u, out);
            CHECK(std::abs(mass_rate(mesh, out)) <=
                  1e-11 * out.cwiseAbs().maxCoeff());
        }
    }
}

TEST_CASE("energy dissipates for pure diffusion", "[rhs]") {
    const auto op = construct_operator("exp:d=2,alpha=1", "equi:5");
    const auto mesh = make_block_mesh(op, {0.0, 1.0}, 4);
    const auto sats = make_sat_coefficients(0.0, 1e-2);
    for (unsigned seed = 0; seed < 20; ++seed) {
        const auto u = random_state(mesh.total(), seed);
        Eigen::VectorXd out;
        advdiff_rhs_1d(mesh, sats, u, out);
        CHECK(energy_rate(mesh, u, out) <= 1e-10 * u.squaredNorm());
    }
}

TEST_CASE("skew-symmetric Burgers flux only moves energy through interfaces",
          "[rhs]") {
    // with eps = 0 the split form plus the entropy-conservative coupling
    // keeps the total energy rate at zero for any state
    const auto op = construct_operator("exp:d=2,alpha=1", "equi:5");
    const auto mesh = make_block_mesh(op, {0.0, 1.0}, 5);
    for (unsigned seed = 0; seed < 20; ++seed) {
        const auto u = random_state(mesh.total(), 100 + seed);
        Eigen::VectorXd out;
        burgers_rhs(mesh, 0.0, u, out);
        const double scale = u.cwiseAbs().maxCoeff();
        CHECK(std::abs(energy_rate(mesh, u, out)) <=
              1e-11 * scale * scale * scale);
    }
}

TEST_CASE("single periodic block reproduces the explicit formula", "[rhs]") {
    const auto op = construct_operator("trig:d=1", "equi:4");
    const auto mesh = make_block_mesh(op, {-1.0, 1.0}, 1);
    const auto s = make_sat_coefficients(1.0, 1e-2);
    const auto u = random_state(4, 9);
    Eigen::VectorXd out;
    advdiff_rhs_1d(mesh, s, u, out);

    // -a D1 u + eps D2 u + P^{-1}(S_L + S_R) with wraparound self-traces
    const auto& o = mesh.op;
    const Eigen::VectorXd du = o.D1 * u;
    const int n = 4;
    Eigen::VectorXd sat = Eigen::VectorXd::Zero(n);
    const double jump_l = u[0] - u[n - 1];
    const double jump_dl = du[0] - du[n - 1];
    sat[0] += s.s1L * jump_l + s.s2L * jump_dl;
    sat += s.s3L * jump_l * o.D1.row(0).transpose();
    const double jump_r = u[n - 1] - u[0];
    const double jump_dr = du[n - 1] - du[0];
    sat[n - 1] += s.s1R * jump_r + s.s2R * jump_dr;
    sat += s.s3R * jump_r * o.D1.row(n - 1).transpose();
    const Eigen::VectorXd expect =
        -s.a * du + s.eps * (o.D2 * u) + o.p.cwiseInverse().asDiagonal() * sat;
    CHECK((out - expect).cwiseAbs().maxCoeff() <= 1e-13 * expect.cwiseAbs().maxCoeff());
}

TEST_CASE("OpenMP kernels agree with the serial references", "[rhs]") {
    const auto op = construct_operator("exp:d=2,alpha=1", "equi:5");
    const auto mesh = make_block_mesh(op, {0.0, 1.0}, 13);
    const auto u = random_state(mesh.total(), 77);
    Eigen::VectorXd a, b;

    const auto sats = make_sat_coefficients(1.0, 1e-2);
    advdiff_rhs_1d(mesh, sats, u, a);
    serial::advdiff_rhs_1d(mesh, sats, u, b);
    CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-13 * b.cwiseAbs().maxCoeff());

    advdiff_rhs_1d(mesh, sats, u, a, Boundary::Dirichlet, {0.3, -1.0});
    serial::advdiff_rhs_1d(mesh, sats, u, b, Boundary::Dirichlet, {0.3, -1.0});
    CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-13 * b.cwiseAbs().maxCoeff());

    burgers_rhs(mesh, 1e-2, u, a);
    serial::burgers_rhs(mesh, 1e-2, u, b);
    CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-13 * b.cwiseAbs().maxCoeff());

    const auto trig = construct_operator("trig:d=3", "equi:auto");
    const auto w = random_state(trig.size(), 5);
    const auto wv = random_state(trig.size(), 6);
    Eigen::VectorXd du1, dv1, du2, dv2;
    wave_rhs(trig.D2, 1.3, w, wv, du1, dv1);
    serial::wave_rhs(trig.D2, 1.3, w, wv, du2, dv2);
    CHECK((du1 - du2).cwiseAbs().maxCoeff() == 0.0);
    CHECK((dv1 - dv2).cwiseAbs().maxCoeff() <= 1e-12 * dv2.cwiseAbs().maxCoeff());
}

TEST_CASE("2D tensor right-hand side", "[rhs]") {
    const auto op = construct_operator("poly:d=2", "lobatto:3");
    const auto mesh = make_block_mesh(op, {0.0, 1.0}, 3);
    const int nl = mesh.total();

    SECTION("constant states are stationary") {
        Advdiff2d system(mesh, mesh, 1.0, 1.0, 1e-3, 1e-3);
        const Eigen::VectorXd u =
            Eigen::VectorXd::Constant(static_cast<Eigen::Index>(nl) * nl, 0.8);
        Eigen::VectorXd out;
        system.apply(u, out);
        CHECK(out.cwiseAbs().maxCoeff() <=
              1e-12 * mesh.op.D1.cwiseAbs().maxCoeff());
    }

    SECTION("x-only physics reduces to the 1D operator applied per row") {
        Advdiff2d system(mesh, mesh, 0.9, 0.0, 2e-3, 0.0);
        const auto sats = make_sat_coefficients(0.9, 2e-3);
        Eigen::VectorXd u(static_cast<Eigen::Index>(nl) * nl);
        std::mt19937 rng(4);
        std::normal_distribution<double> gauss;
        for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = gauss(rng);
        Eigen::VectorXd out;
        system.apply(u, out);
        for (int r = 0; r < nl; ++r) {
            const Eigen::VectorXd row = u.segment(r * nl, nl);
            Eigen::VectorXd expect;
            advdiff_rhs_1d(mesh, sats, row, expect);
            CHECK((out.segment(r * nl, nl) - expect).cwiseAbs().maxCoeff() <=
                  1e-12 * expect.cwiseAbs().maxCoeff());
        }
    }

    SECTION("y-independent states reduce to stacked 1D rows even with full "
            "y-physics") {
        Advdiff2d system(mesh, mesh, 0.9, 1.3, 2e-3, 4e-3);
        const auto sats = make_sat_coefficients(0.9, 2e-3);
        const auto fx = [](double x) { return std::sin(3 * x) + 0.2 * x * x; };
        Eigen::VectorXd u(static_cast<Eigen::Index>(nl) * nl);
        for (int r = 0; r < nl; ++r)
            for (int c = 0; c < nl; ++c) u[r * nl + c] = fx(mesh.nodes[c]);
        Eigen::VectorXd out;
        system.apply(u, out);
        Eigen::VectorXd expect;
        advdiff_rhs_1d(mesh, sats, u.segment(0, nl).eval(), expect);
        for (int r = 0; r < nl; ++r)
            CHECK((out.segment(r * nl, nl) - expect).cwiseAbs().maxCoeff() <=
                  1e-11 * expect.cwiseAbs().maxCoeff());
    }

    SECTION("mass rate vanishes") {
        Advdiff2d system(mesh, mesh, 1.0, 0.5, 1e-3, 2e-3);
        Eigen::VectorXd u(static_cast<Eigen::Index>(nl) * nl);
        std::mt19937 rng(11);
        std::normal_distribution<double> gauss;
        for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = gauss(rng);
        Eigen::VectorXd out;
        system.apply(u, out);
        // 1^T (Py x Px) rhs via the mass helper on the rhs itself
        CHECK(std::abs(system.mass(out)) <= 1e-11 * out.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("wave right-hand side is stationary on the kernel", "[rhs]") {
    const auto trig = construct_operator("trig:d=2", "equi:auto");
    Eigen::VectorXd u = Eigen::VectorXd::Ones(trig.size());
    Eigen::VectorXd v = Eigen::VectorXd::Zero(trig.size());
    Eigen::VectorXd du, dv;
    wave_rhs(trig.D2, 2.0, u, v, du, dv);
    CHECK(du.cwiseAbs().maxCoeff() == 0.0);
    CHECK(dv.cwiseAbs().maxCoeff() <= 1e-10 * trig.D2.cwiseAbs().maxCoeff());
}
