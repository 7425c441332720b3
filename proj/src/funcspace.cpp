#include "fsbp/funcspace.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace fsbp {

namespace {

Eigen::VectorXd sampling_grid(const Interval& el, int points) {
    Eigen::VectorXd x(points);
    for (int i = 0; i < points; ++i)
        x[i] = el.left + el.length() * i / double(points - 1);
    return x;
}

// Legendre P_k, P_k', P_k'' at x via the forward recurrences
//   (k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}
//   P'_{k+1} = P'_{k-1} + (2k+1) P_k     (and once more for P'').
struct Legendre3 {
    double p, dp, ddp;
};

Legendre3 legendre_eval(int n, double x) {
    double p0 = 1.0, p1 = x;
    double d0 = 0.0, d1 = 1.0;
    double s0 = 0.0, s1 = 0.0;
    if (n == 0) return {p0, d0, s0};
    for (int k = 1; k < n; ++k) {
        double p2 = ((2 * k + 1) * x * p1 - k * p0) / (k + 1);
        double d2 = d0 + (2 * k + 1) * p1;
        double s2 = s0 + (2 * k + 1) * d1;
        p0 = p1; p1 = p2;
        d0 = d1; d1 = d2;
        s0 = s1; s1 = s2;
    }
    return {p1, d1, s1};
}

// Affine pullback to the reference coordinate xi in [-1,1].
struct RefMap {
    double mid, half;
    double xi(double x) const { return (x - mid) / half; }
};

RefMap ref_map(const Interval& el) {
    return {0.5 * (el.left + el.right), 0.5 * el.length()};
}

}  // namespace

Eigen::MatrixXd FunctionSpace::sample(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd V(x.size(), dim());
    for (int j = 0; j < dim(); ++j)
        for (Eigen::Index i = 0; i < x.size(); ++i) V(i, j) = basis_[j].eval(x[i]);
    return V;
}

Eigen::MatrixXd FunctionSpace::sample_d1(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd V(x.size(), dim());
    for (int j = 0; j < dim(); ++j)
        for (Eigen::Index i = 0; i < x.size(); ++i) V(i, j) = basis_[j].d1(x[i]);
    return V;
}

bool FunctionSpace::contains(const ScalarFn& f, double tol) const {
    const Eigen::VectorXd x = sampling_grid(element_, std::max(4 * dim(), 16));
    Eigen::VectorXd fv(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) fv[i] = f(x[i]);
    const double scale = std::max(fv.norm(), 1e-300);
    Eigen::MatrixXd V = sample(x);
    Eigen::VectorXd c = V.colPivHouseholderQr().solve(fv);
    return (V * c - fv).norm() <= tol * scale;
}

FunctionSpace make_polynomial(int degree, Interval el) {
    std::vector<BasisFunction> b;
    const RefMap m = ref_map(el);
    for (int k = 0; k <= degree; ++k) {
        b.push_back({[m, k](double x) { return legendre_eval(k, m.xi(x)).p; },
                     [m, k](double x) { return legendre_eval(k, m.xi(x)).dp / m.half; },
                     [m, k](double x) {
                         return legendre_eval(k, m.xi(x)).ddp / (m.half * m.half);
                     },
                     "P" + std::to_string(k)});
    }
    return FunctionSpace(std::move(b), el, true, "poly:d=" + std::to_string(degree));
}

FunctionSpace make_trigonometric(int degree, Interval el) {
    std::vector<BasisFunction> b;
    const RefMap m = ref_map(el);
    b.push_back({[](double) { return 1.0; }, [](double) { return 0.0; },
                 [](double) { return 0.0; }, "1"});
    for (int k = 1; k <= degree; ++k) {
        const double w = k * M_PI;
        b.push_back({[m, w](double x) { return std::sin(w * m.xi(x)); },
                     [m, w](double x) { return w / m.half * std::cos(w * m.xi(x)); },
                     [m, w](double x) {
                         return -w * w / (m.half * m.half) * std::sin(w * m.xi(x));
                     },
                     "sin" + std::to_string(k)});
        b.push_back({[m, w](double x) { return std::cos(w * m.xi(x)); },
                     [m, w](double x) { return -w / m.half * std::sin(w * m.xi(x)); },
                     [m, w](double x) {
                         return -w * w / (m.half * m.half) * std::cos(w * m.xi(x));
                     },
                     "cos" + std::to_string(k)});
    }
    return FunctionSpace(std::move(b), el, true, "trig:d=" + std::to_string(degree));
}

FunctionSpace make_exponential(int degree, double alpha, Interval el) {
    if (degree < 1) throw ConstructionError("exponential space needs d >= 1");
    FunctionSpace polys = make_polynomial(degree - 1, el);
    std::vector<BasisFunction> b(polys.basis().begin(), polys.basis().end());
    const RefMap m = ref_map(el);
    b.push_back({[m, alpha](double x) { return std::exp(alpha * m.xi(x)); },
                 [m, alpha](double x) {
                     return alpha / m.half * std::exp(alpha * m.xi(x));
                 },
                 [m, alpha](double x) {
                     return alpha * alpha / (m.half * m.half) *
                            std::exp(alpha * m.xi(x));
                 },
                 "exp"});
    std::ostringstream tag;
    tag << "exp:d=" << degree << ",alpha=" << alpha;
    return FunctionSpace(std::move(b), el, true, tag.str());
}

FunctionSpace make_gaussian_rbf(double alpha, Interval el) {
    FunctionSpace polys = make_polynomial(1, el);
    std::vector<BasisFunction> b(polys.basis().begin(), polys.basis().end());
    const RefMap m = ref_map(el);
    const double c = -1.0 / (alpha * alpha);  // exponent of e^{c xi^2}
    b.push_back({[m, c](double x) {
                     const double xi = m.xi(x);
                     return std::exp(c * xi * xi);
                 },
                 [m, c](double x) {
                     const double xi = m.xi(x);
                     return 2.0 * c * xi / m.half * std::exp(c * xi * xi);
                 },
                 [m, c](double x) {
                     const double xi = m.xi(x);
                     return (2.0 * c + 4.0 * c * c * xi * xi) / (m.half * m.half) *
                            std::exp(c * xi * xi);
                 },
                 "gauss"});
    std::ostringstream tag;
    tag << "rbf:alpha=" << alpha;
    return FunctionSpace(std::move(b), el, false, tag.str());
}

FunctionSpace parse_space_spec(const std::string& spec, Interval el) {
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    double d = -1, alpha = 1.0;
    if (colon != std::string::npos) {
        std::stringstream rest(spec.substr(colon + 1));
        std::string kv;
        while (std::getline(rest, kv, ',')) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw ParseError("bad space parameter '" + kv + "' in '" + spec + "'");
            const std::string key = kv.substr(0, eq);
            const double val = std::stod(kv.substr(eq + 1));
            if (key == "d") d = val;
            else if (key == "alpha") alpha = val;
            else throw ParseError("unknown space parameter '" + key + "'");
        }
    }
    if (kind == "poly") {
        if (d < 0) throw ParseError("poly space needs d=<degree>");
        return make_polynomial(static_cast<int>(d), el);
    }
    if (kind == "trig") {
        if (d < 1) throw ParseError("trig space needs d>=1");
        return make_trigonometric(static_cast<int>(d), el);
    }
    if (kind == "exp") {
        if (d < 1) throw ParseError("exp space needs d>=1");
        return make_exponential(static_cast<int>(d), alpha, el);
    }
    if (kind == "rbf") return make_gaussian_rbf(alpha, el);
    throw ParseError("unknown space kind '" + kind + "'");
}

void validate_derivatives(const FunctionSpace& space, unsigned seed) {
    std::mt19937 rng(seed);
    const Interval el = space.element();
    const double h = 1e-5 * el.length() / 2.0;
    std::uniform_real_distribution<double> unif(el.left + 2 * h, el.right - 2 * h);
    for (const auto& f : space.basis()) {
        for (int k = 0; k < 10; ++k) {
            const double x = unif(rng);
            const double fd1 = (f.eval(x + h) - f.eval(x - h)) / (2 * h);
            const double scale = std::max({1.0, std::abs(fd1), std::abs(f.d1(x))});
            if (std::abs(f.d1(x) - fd1) > 1e-6 * scale)
                throw ConstructionError("d1 of basis '" + f.label +
                                        "' disagrees with a finite difference");
            if (f.has_d2()) {
                const double fd2 = (f.d1(x + h) - f.d1(x - h)) / (2 * h);
                const double s2 = std::max({1.0, std::abs(fd2), std::abs(f.d2(x))});
                if (std::abs(f.d2(x) - fd2) > 1e-6 * s2)
                    throw ConstructionError("d2 of basis '" + f.label +
                                            "' disagrees with a finite difference");
            }
        }
    }
}

namespace {

// Greedy in-order selection of a linearly independent subset: sample on an
// equidistant grid, normalize each column, keep a function when its residual
// against the span of already-kept ones exceeds the rank tolerance. Keeping
// the earliest-listed functions resolves the pruning-order tie.
std::vector<int> select_independent(const std::vector<BasisFunction>& fns,
                                    const Interval& el) {
    const int k = static_cast<int>(fns.size());
    if (k == 0) return {};
    const int grid = (k <= 256) ? std::max(4 * k, 16) : 4 * (2 * k / 16 + 64);
    const Eigen::VectorXd x = sampling_grid(el, grid);
    std::vector<Eigen::VectorXd> kept_q;
    std::vector<int> kept;
    for (int j = 0; j < k; ++j) {
        Eigen::VectorXd c(grid);
        for (int i = 0; i < grid; ++i) c[i] = fns[j].eval(x[i]);
        const double n0 = c.norm();
        if (n0 < 1e-300) continue;  // identically zero (e.g. derivative of 1)
        c /= n0;
        for (const auto& q : kept_q) c -= q.dot(c) * q;
        // re-orthogonalize once; classic Gram-Schmidt loses digits otherwise
        for (const auto& q : kept_q) c -= q.dot(c) * q;
        if (c.norm() > kRankTol) {
            kept_q.push_back(c.normalized());
            kept.push_back(j);
        }
    }
    return kept;
}

std::vector<BasisFunction> take(const std::vector<BasisFunction>& fns,
                                const std::vector<int>& idx) {
    std::vector<BasisFunction> out;
    out.reserve(idx.size());
    for (int j : idx) out.push_back(fns[j]);
    return out;
}

}  // namespace

int numerical_rank(const Eigen::MatrixXd& samples, double tol) {
    Eigen::MatrixXd A = samples;
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
        const double n = A.col(j).norm();
        if (n > 1e-300) A.col(j) /= n;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s[0] <= 0) return 0;
    int r = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s[i] > tol * s[0]) ++r;
    return r;
}

FunctionSpace derivative_space(const FunctionSpace& space) {
    std::vector<BasisFunction> ders;
    for (const auto& f : space.basis()) {
        BasisFunction g;
        g.eval = f.d1;
        g.d1 = f.d2;  // may be empty; then d1 of the derivative is unknown
        g.label = f.label + "'";
        if (!g.d1) g.d1 = [](double) { return 0.0; };
        ders.push_back(std::move(g));
    }
    const auto kept = select_independent(ders, space.element());
    if (kept.empty() && space.dim() > 0) {
        // all derivatives vanished (space of constants): empty span
        return FunctionSpace({}, space.element(), false, space.tag() + "'");
    }
    return FunctionSpace(take(ders, kept), space.element(), false,
                         space.tag() + "'");
}

FunctionSpace direct_sum(const FunctionSpace& a, const FunctionSpace& b) {
    if (std::abs(a.element().left - b.element().left) > 1e-14 ||
        std::abs(a.element().right - b.element().right) > 1e-14)
        throw ConstructionError("direct_sum: element intervals differ");
    std::vector<BasisFunction> all(a.basis().begin(), a.basis().end());
    all.insert(all.end(), b.basis().begin(), b.basis().end());
    const auto kept = select_independent(all, a.element());
    return FunctionSpace(take(all, kept), a.element(), false,
                         a.tag() + "+" + b.tag());
}

FunctionSpace product_rule_space(const FunctionSpace& g) {
    std::vector<BasisFunction> prods;
    const int L = g.dim();
    for (int i = 0; i < L; ++i) {
        for (int j = i; j < L; ++j) {
            const BasisFunction& fi = g[i];
            const BasisFunction& fj = g[j];
            BasisFunction h;
            h.eval = [fi, fj](double x) {
                return fi.d1(x) * fj.eval(x) + fi.eval(x) * fj.d1(x);
            };
            if (fi.has_d2() && fj.has_d2()) {
                h.d1 = [fi, fj](double x) {
                    return fi.d2(x) * fj.eval(x) + 2.0 * fi.d1(x) * fj.d1(x) +
                           fi.eval(x) * fj.d2(x);
                };
            } else {
                h.d1 = [](double) { return 0.0; };
            }
            h.label = "(" + fi.label + "*" + fj.label + ")'";
            prods.push_back(std::move(h));
        }
    }
    const auto kept = select_independent(prods, g.element());
    return FunctionSpace(take(prods, kept), g.element(), false,
                         "(" + g.tag() + "^2)'");
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> vandermonde(
    const FunctionSpace& space, const Eigen::VectorXd& nodes) {
    for (Eigen::Index i = 0; i < nodes.size(); ++i) {
        if (!space.element().contains(nodes[i]))
            throw ConstructionError("vandermonde: node " + std::to_string(i) +
                                    " lies outside the element");
        if (i > 0 && nodes[i] <= nodes[i - 1])
            throw ConstructionError("vandermonde: nodes not strictly increasing at " +
                                    std::to_string(i));
    }
    return {space.sample(nodes), space.sample_d1(nodes)};
}

}  // namespace fsbp
