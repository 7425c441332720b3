#include "fsbp/operators.hpp"

#include <algorithm>
#include <cmath>

namespace fsbp {

Eigen::MatrixXd FsbpOperatorSet::boundary_matrix() const {
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(size(), size());
    B(0, 0) = -1.0;
    B(size() - 1, size() - 1) = 1.0;
    return B;
}

double FsbpOperatorSet::sbp_identity_residual() const {
    return (Q + Q.transpose() - boundary_matrix()).cwiseAbs().maxCoeff();
}

namespace {

Eigen::MatrixXd pseudo_inverse_spd(const Eigen::MatrixXd& G, double rel_cut) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
    const auto& lam = es.eigenvalues();
    const double cut = rel_cut * std::max(lam.cwiseAbs().maxCoeff(), 1e-300);
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(lam.size());
    for (Eigen::Index i = 0; i < lam.size(); ++i)
        if (std::abs(lam[i]) > cut) inv[i] = 1.0 / lam[i];
    return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

// per-basis column scales making the exactness system O(1)
Eigen::VectorXd column_scales(const Eigen::MatrixXd& V, const Eigen::MatrixXd& R) {
    Eigen::VectorXd s(V.cols());
    for (Eigen::Index j = 0; j < V.cols(); ++j)
        s[j] = std::max({V.col(j).cwiseAbs().maxCoeff(),
                         R.col(j).cwiseAbs().maxCoeff(), 1e-300});
    return s;
}

}  // namespace

Eigen::MatrixXd min_norm_antisymmetric(const Eigen::MatrixXd& V,
                                       const Eigen::MatrixXd& R) {
    const Eigen::MatrixXd G = V.transpose() * V;
    const Eigen::MatrixXd Gi = pseudo_inverse_spd(G, 1e-14);
    const Eigen::MatrixXd A = R.transpose() * V;  // antisymmetric iff consistent
    const Eigen::MatrixXd L = (2.0 * R + V * (Gi * A)) * Gi;
    return 0.5 * (L * V.transpose() - V * L.transpose());
}

Eigen::MatrixXd min_norm_antisymmetric_reference(const Eigen::MatrixXd& V,
                                                 const Eigen::MatrixXd& R) {
    const int n = static_cast<int>(V.rows());
    const int nl = static_cast<int>(V.cols());
    const int m = n * (n - 1) / 2;
    std::vector<std::pair<int, int>> idx;
    idx.reserve(m);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < i; ++k) idx.emplace_back(i, k);
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n * nl, m);
    Eigen::VectorXd y(n * nl);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < nl; ++j) y[i * nl + j] = R(i, j);
    for (int e = 0; e < m; ++e) {
        const auto [i, k] = idx[e];
        for (int j = 0; j < nl; ++j) {
            C(i * nl + j, e) += V(k, j);
            C(k * nl + j, e) -= V(i, j);
        }
    }
    Eigen::BDCSVD<Eigen::MatrixXd> svd(C, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-12);
    const Eigen::VectorXd q = svd.solve(y);
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(n, n);
    for (int e = 0; e < m; ++e) {
        const auto [i, k] = idx[e];
        X(i, k) = q[e];
        X(k, i) = -q[e];
    }
    return X;
}

FsbpOperatorSet build_first_derivative_exact_on(const FunctionSpace& exact_on,
                                                const FunctionSpace& target,
                                                const QuadratureRule& rule) {
    const int n = rule.size();
    if (exact_on.dim() == 0)
        throw ConstructionError("empty exactness space");
    auto [V, Vp] = vandermonde(exact_on, rule.nodes);

    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
    B(0, 0) = -1.0;
    B(n - 1, n - 1) = 1.0;
    Eigen::MatrixXd R = rule.weights.asDiagonal() * Vp - 0.5 * (B * V);

    const Eigen::VectorXd s = column_scales(V, R);
    Eigen::MatrixXd Vs = V * s.cwiseInverse().asDiagonal();
    Eigen::MatrixXd Rs = R * s.cwiseInverse().asDiagonal();

    const Eigen::MatrixXd QA = min_norm_antisymmetric(Vs, Rs);

    const Eigen::MatrixXd residual = QA * Vs - Rs;
    Eigen::Index worst_col = 0;
    const double resid = residual.cwiseAbs().maxCoeff();
    residual.cwiseAbs().colwise().maxCoeff().maxCoeff(&worst_col);
    if (resid > 1e-10)
        throw ConstructionError(
            "first-derivative construction residual " + std::to_string(resid) +
            " exceeds 1e-10; worst basis element '" +
            exact_on[static_cast<int>(worst_col)].label + "'");

    FsbpOperatorSet set;
    set.grid = rule.nodes;
    set.p = rule.weights;
    set.Q = QA + 0.5 * B;
    set.D1 = rule.weights.cwiseInverse().asDiagonal() * set.Q;
    set.S = set.D1;
    set.exactness_space = exact_on;
    set.target_space = target;
    set.element = rule.element;
    set.space_tag = target.tag();
    return set;
}

FsbpOperatorSet build_first_derivative(const FunctionSpace& space_f,
                                       const QuadratureRule& rule) {
    const FunctionSpace g = direct_sum(space_f, derivative_space(space_f));
    return build_first_derivative_exact_on(g, space_f, rule);
}

void assemble_second_derivative(FsbpOperatorSet& set) {
    const Eigen::MatrixXd B = set.boundary_matrix();
    const Eigen::MatrixXd PD1 = set.p.asDiagonal() * set.D1;
    set.D2 = set.p.cwiseInverse().asDiagonal() *
             (B * set.D1 - set.D1.transpose() * PD1).eval();
}

void build_second_derivative(FsbpOperatorSet& set) {
    assemble_second_derivative(set);
    const double resid = verify_exactness_relative(set, set.target_space, 2);
    // roundoff floor: applying a matrix with entries ~ |D2| to O(1) data
    // cannot do better than eps * |D2| * sqrt(n)
    const double floor = 16.0 * 2.22e-16 * set.D2.cwiseAbs().maxCoeff() *
                         std::sqrt(double(set.size()));
    if (resid > 1e-8 + floor) {
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "second-derivative exactness residual %.3g; the first "
                      "derivative is not exact on F + F'",
                      resid);
        throw ConstructionError(msg);
    }
}

namespace {

double exactness_residual_impl(const FsbpOperatorSet& set,
                               const FunctionSpace& space, int order,
                               bool relative) {
    const Eigen::MatrixXd& D = (order == 1) ? set.D1 : set.D2;
    if (D.rows() != set.grid.size())
        throw ConstructionError("operator of order " + std::to_string(order) +
                                " not assembled");
    double worst = 0.0;
    for (int j = 0; j < space.dim(); ++j) {
        const BasisFunction& f = space[j];
        Eigen::VectorXd fv(set.size()), dv(set.size());
        for (int i = 0; i < set.size(); ++i) {
            fv[i] = f.eval(set.grid[i]);
            dv[i] = (order == 1) ? f.d1(set.grid[i]) : f.d2(set.grid[i]);
        }
        double r = (D * fv - dv).cwiseAbs().maxCoeff();
        if (relative)
            r /= std::max({1.0, fv.cwiseAbs().maxCoeff(), dv.cwiseAbs().maxCoeff()});
        worst = std::max(worst, r);
    }
    return worst;
}

}  // namespace

double verify_exactness(const FsbpOperatorSet& set, const FunctionSpace& space,
                        int order) {
    return exactness_residual_impl(set, space, order, false);
}

double verify_exactness_relative(const FsbpOperatorSet& set,
                                 const FunctionSpace& space, int order) {
    return exactness_residual_impl(set, space, order, true);
}

Eigen::MatrixXd nullspace_basis(const Eigen::MatrixXd& M, double tol) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double smax = s.size() ? s[0] : 0.0;
    int k = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s[i] <= tol * smax) ++k;
    return svd.matrixV().rightCols(k);
}

NullspaceReport nullspace_report(const Eigen::MatrixXd& M,
                                 const FsbpOperatorSet& set, int order,
                                 double tol) {
    NullspaceReport rep;
    rep.tag = (order == 1) ? "D1" : "D2";
    rep.basis = nullspace_basis(M, tol);

    // expected continuous kernel on the target space: constants for d/dx,
    // constants plus x for d^2/dx^2 whenever x lies in the space
    const int n = set.size();
    std::vector<Eigen::VectorXd> expected;
    expected.push_back(Eigen::VectorXd::Ones(n).normalized());
    if (order == 2 &&
        set.target_space.contains([](double x) { return x; })) {
        Eigen::VectorXd xv = set.grid;
        for (const auto& e : expected) xv -= e.dot(xv) * e;
        expected.push_back(xv.normalized());
    }
    rep.expected_dim = static_cast<int>(expected.size());

    const int k = static_cast<int>(rep.basis.cols());
    double worst_sin = 0.0;
    for (const auto& e : expected) {
        const Eigen::VectorXd proj = rep.basis * (rep.basis.transpose() * e);
        worst_sin = std::max(worst_sin, (e - proj).norm());
    }
    rep.max_angle = worst_sin;
    rep.verdict = (k == rep.expected_dim && worst_sin <= 1e-6)
                      ? NullspaceVerdict::Consistent
                      : NullspaceVerdict::Inconsistent;

    if (rep.verdict == NullspaceVerdict::Inconsistent && k > 0) {
        // surplus direction, reported with first entry zero, last entry one
        // (the normalization the kernel vectors are usually quoted in)
        Eigen::VectorXd v;
        if (k >= 2) {
            Eigen::VectorXd c = Eigen::VectorXd::Zero(k);
            c[0] = rep.basis(0, 1);
            c[1] = -rep.basis(0, 0);
            if (c.norm() < 1e-14) c << 1, Eigen::VectorXd::Zero(k - 1);
            v = rep.basis * c;
        } else {
            v = rep.basis.col(0);
        }
        if (std::abs(v[n - 1]) > 1e-14) v /= v[n - 1];
        rep.extra = v;
    }
    return rep;
}

SpectrumReport spectrum(const Eigen::MatrixXd& M) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(M);
    if (es.info() != Eigen::Success)
        throw ConstructionError("eigensolver did not converge");
    SpectrumReport rep;
    rep.eigenvalues = es.eigenvalues();
    rep.max_real = rep.eigenvalues.real().maxCoeff();
    rep.max_abs_imag = rep.eigenvalues.imag().cwiseAbs().maxCoeff();
    return rep;
}

Eigen::MatrixXd periodic_fd_operator(const std::vector<double>& stencil, int n,
                                     Interval element) {
    const int len = static_cast<int>(stencil.size());
    if (len % 2 == 0) throw ConstructionError("stencil length must be odd");
    if (n <= len) throw ConstructionError("need more points than stencil taps");
    const double dx = element.length() / n;
    const int c = (len - 1) / 2;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < len; ++k)
            A(i, (((i + k - c) % n) + n) % n) += stencil[k] / (dx * dx);
    return A;
}

std::vector<double> fd_second_derivative_stencil(int order) {
    switch (order) {
        case 2: return {1.0, -2.0, 1.0};
        case 4: return {-1.0 / 12, 4.0 / 3, -5.0 / 2, 4.0 / 3, -1.0 / 12};
        case 6:
            return {1.0 / 90, -3.0 / 20, 3.0 / 2, -49.0 / 18,
                    3.0 / 2,  -3.0 / 20, 1.0 / 90};
        default:
            throw ConstructionError("periodic FD stencils exist for orders 2, 4, 6");
    }
}

namespace {

FunctionSpace remap_space(const std::string& tag, Interval block) {
    if (tag.rfind("custom", 0) == 0) return FunctionSpace({}, block);
    return parse_space_spec(tag, block);
}

}  // namespace

FsbpOperatorSet map_to_block(const FsbpOperatorSet& set, Interval block) {
    if (block.length() <= 0)
        throw ConstructionError("map_to_block: empty block interval");
    const double j = block.length() / set.element.length();
    FsbpOperatorSet out = set;
    out.element = block;
    out.grid = ((set.grid.array() - set.element.left) * j + block.left).matrix();
    out.p = set.p * j;
    out.Q = set.Q;
    out.D1 = set.D1 / j;
    out.S = set.S / j;
    if (set.has_d2()) out.D2 = set.D2 / (j * j);
    out.target_space = remap_space(set.target_space.tag(), block);
    out.exactness_space =
        direct_sum(out.target_space, derivative_space(out.target_space));
    return out;
}

FsbpOperatorSet construct_operator(const std::string& space_spec,
                                   const std::string& grid_spec) {
    const FunctionSpace f = parse_space_spec(space_spec);
    const FunctionSpace g = direct_sum(f, derivative_space(f));
    const FunctionSpace quad_target = product_rule_space(g);

    const auto colon = grid_spec.find(':');
    const std::string family = grid_spec.substr(0, colon);
    const std::string arg =
        (colon == std::string::npos) ? "auto" : grid_spec.substr(colon + 1);

    QuadratureRule rule;
    if (family == "lobatto") {
        if (arg == "auto")
            throw ParseError("lobatto grid needs an explicit point count");
        rule = least_squares_weights(quad_target,
                                     gauss_lobatto_nodes(std::stoi(arg)));
    } else if (family == "equi") {
        const int start = (arg == "auto") ? g.dim() + 1 : std::stoi(arg);
        rule = find_positive_rule(quad_target, start);
    } else {
        throw ParseError("unknown grid family '" + family + "'");
    }

    FsbpOperatorSet set = build_first_derivative(f, rule);
    build_second_derivative(set);
    return set;
}

}  // namespace fsbp
