#include "fsbp/quadrature.hpp"

#include <cmath>

namespace fsbp {

namespace {

// 15-point Kronrod extension of 7-point Gauss on [-1,1].
constexpr double kKronrodX[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kKronrodW[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kGaussW[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelResult {
    double value;
    double error;
    double resabs;  // quadrature of |f|, the amplitude scale of the panel
};

PanelResult gk15(const ScalarFn& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * kKronrodX[i]);
        fv[14 - i] = f(c + h * kKronrodX[i]);
    }
    fv[7] = f(c);
    double kron = kKronrodW[7] * fv[7];
    double resabs = kKronrodW[7] * std::abs(fv[7]);
    for (int i = 0; i < 7; ++i) {
        kron += kKronrodW[i] * (fv[i] + fv[14 - i]);
        resabs += kKronrodW[i] * (std::abs(fv[i]) + std::abs(fv[14 - i]));
    }
    double gauss = kGaussW[3] * fv[7];
    for (int i = 0; i < 3; ++i)
        gauss += kGaussW[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
    return {h * kron, std::abs(h * (kron - gauss)), h * resabs};
}

double integrate_rec(const ScalarFn& f, double a, double b, double tol_abs,
                     int depth) {
    const PanelResult r = gk15(f, a, b);
    // a panel may carry error up to the target relative accuracy of its own
    // |f| mass; summed over panels that keeps the total at 1e-13 of ||f||_L1
    const double floor_abs = 1.1e-13 * r.resabs;
    if (r.error <= std::max(tol_abs, floor_abs) || depth >= 20) {
        if (depth >= 20 && r.error > std::max(tol_abs, floor_abs)) {
            char msg[128];
            std::snprintf(msg, sizeof msg,
                          "moment integration did not converge after 20 "
                          "halvings (residual estimate %.3g)",
                          r.error);
            throw ConstructionError(msg);
        }
        return r.value;
    }
    const double m = 0.5 * (a + b);
    return integrate_rec(f, a, m, tol_abs / 2, depth + 1) +
           integrate_rec(f, m, b, tol_abs / 2, depth + 1);
}

}  // namespace

double integrate(const ScalarFn& f, double a, double b, double rel_tol) {
    const PanelResult whole = gk15(f, a, b);
    // oscillatory integrands can have |integral| << integral of |f|; the
    // achievable accuracy is relative to the latter
    const double scale =
        std::max({std::abs(whole.value), whole.resabs, 1e-300});
    return integrate_rec(f, a, b, rel_tol * scale, 0);
}

Eigen::VectorXd moments(const FunctionSpace& space) {
    Eigen::VectorXd m(space.dim());
    for (int j = 0; j < space.dim(); ++j)
        m[j] = integrate(space[j].eval, space.element().left,
                         space.element().right);
    return m;
}

Eigen::VectorXd equidistant_nodes(int n, Interval el) {
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i)
        x[i] = el.left + el.length() * i / double(n - 1);
    return x;
}

Eigen::VectorXd gauss_lobatto_nodes(int n, Interval el) {
    if (n < 2) throw ConstructionError("Lobatto grid needs n >= 2");
    Eigen::VectorXd xi(n);
    xi[0] = -1.0;
    xi[n - 1] = 1.0;
    const int m = n - 1;  // interior nodes are roots of P'_m
    for (int i = 1; i < n - 1; ++i) {
        double x = -std::cos(M_PI * i / m);  // Chebyshev-Lobatto start
        for (int it = 0; it < 100; ++it) {
            // Newton on P'_m using P''_m
            double p0 = 1.0, p1 = x, d0 = 0.0, d1 = 1.0, s0 = 0.0, s1 = 0.0;
            for (int k = 1; k < m; ++k) {
                const double p2 = ((2 * k + 1) * x * p1 - k * p0) / (k + 1);
                const double d2 = d0 + (2 * k + 1) * p1;
                const double s2 = s0 + (2 * k + 1) * d1;
                p0 = p1; p1 = p2; d0 = d1; d1 = d2; s0 = s1; s1 = s2;
            }
            const double step = d1 / s1;
            x -= step;
            if (std::abs(step) < 1e-15) break;
        }
        xi[i] = x;
    }
    const double mid = 0.5 * (el.left + el.right), half = 0.5 * el.length();
    return (xi.array() * half + mid).matrix();
}

namespace {

QuadratureRule least_squares_weights_impl(const FunctionSpace& space,
                                          const Eigen::VectorXd& nodes,
                                          const Eigen::VectorXd& space_moments) {
    const int n = static_cast<int>(nodes.size());
    const Interval el = space.element();
    if (n < 2 || std::abs(nodes[0] - el.left) > 1e-13 * el.length() ||
        std::abs(nodes[n - 1] - el.right) > 1e-13 * el.length())
        throw ConstructionError("quadrature nodes must include both endpoints");
    for (int i = 0; i + 1 < n; ++i)
        if (nodes[i + 1] <= nodes[i])
            throw ConstructionError("quadrature nodes must be strictly increasing");

    // composite trapezoidal reference weights
    Eigen::VectorXd w0 = Eigen::VectorXd::Zero(n);
    for (int i = 0; i + 1 < n; ++i) {
        const double h = nodes[i + 1] - nodes[i];
        w0[i] += h / 2;
        w0[i + 1] += h / 2;
    }

    // constraint rows: the constant plus every basis function of `space`;
    // among all exact weight vectors pick the one closest to w0
    const int nrows = space.dim() + 1;
    Eigen::MatrixXd A(nrows, n);
    Eigen::VectorXd m(nrows);
    A.row(0).setOnes();
    m[0] = el.length();
    if (space.dim() > 0) {
        A.bottomRows(space.dim()) = space.sample(nodes).transpose();
        m.tail(space.dim()) = space_moments;
    }
    // scale rows so bases with huge nodal values do not dominate
    for (int r = 0; r < nrows; ++r) {
        const double s = std::max({A.row(r).cwiseAbs().maxCoeff(),
                                   std::abs(m[r]), 1e-300});
        A.row(r) /= s;
        m[r] /= s;
    }
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
    cod.setThreshold(1e-12);
    const Eigen::VectorXd w = w0 + cod.solve(m - A * w0);

    QuadratureRule rule{nodes, w, el};
    double resid = 0.0;
    if (space.dim() > 0) {
        const Eigen::VectorXd got =
            space.sample(nodes).transpose() * rule.weights;
        for (int j = 0; j < space.dim(); ++j)
            resid = std::max(resid, std::abs(got[j] - space_moments[j]) /
                                        (1.0 + std::abs(space_moments[j])));
    }
    if (resid > 1e-10)
        throw InexactQuadratureError(
            "quadrature residual " + std::to_string(resid) + " exceeds 1e-10 on " +
            std::to_string(n) + " nodes");
    if (w.minCoeff() <= 1e-14 * el.length())
        throw NonPositiveWeightsError(
            "nonpositive quadrature weight " + std::to_string(w.minCoeff()) +
            " on " + std::to_string(n) + " nodes");
    return rule;
}

}  // namespace

QuadratureRule least_squares_weights(const FunctionSpace& space,
                                     const Eigen::VectorXd& nodes) {
    return least_squares_weights_impl(space, nodes, moments(space));
}

QuadratureRule find_positive_rule(const FunctionSpace& space, int start_n) {
    const int cap = 16 * std::max(space.dim(), 2);
    const Eigen::VectorXd m = moments(space);
    std::string last_failure = "no attempt";
    for (int n = std::max(start_n, 2); n <= cap; ++n) {
        try {
            QuadratureRule rule = least_squares_weights_impl(
                space, equidistant_nodes(n, space.element()), m);
            // reject epsilon-degenerate rules: a weight below 1% of the
            // uniform scale makes P^{-1} blow up and the operator unusably
            // stiff (e.g. alpha = 1/sqrt(20) at N = 10)
            if (rule.weights.minCoeff() <
                1e-2 * space.element().length() / rule.size()) {
                last_failure = "degenerate weight " +
                               std::to_string(rule.weights.minCoeff()) + " at N=" +
                               std::to_string(n);
                continue;
            }
            return rule;
        } catch (const ConstructionError& e) {
            last_failure = e.what();
        }
    }
    throw ConstructionError(
        "no positive quadrature up to N=" + std::to_string(cap) +
        " (last failure: " + last_failure +
        "); consider a different node family");
}

double exactness_residual(const QuadratureRule& rule, const FunctionSpace& space) {
    if (space.dim() == 0) return 0.0;
    const Eigen::MatrixXd V = space.sample(rule.nodes);
    const Eigen::VectorXd m = moments(space);
    const Eigen::VectorXd got = V.transpose() * rule.weights;
    double worst = 0.0;
    for (int j = 0; j < space.dim(); ++j)
        worst = std::max(worst,
                         std::abs(got[j] - m[j]) / (1.0 + std::abs(m[j])));
    return worst;
}

}  // namespace fsbp
