#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fsbp/types.hpp"

namespace fsbp {

using ScalarFn = std::function<double(double)>;

/// One basis function with analytic derivatives. The second derivative is
/// optional: spaces obtained by differentiation or products only carry the
/// orders that are still known in closed form.
struct BasisFunction {
    ScalarFn eval;
    ScalarFn d1;
    ScalarFn d2;  // may be empty
    std::string label;

    bool has_d2() const { return static_cast<bool>(d2); }
};

/// A finite span of C^2 functions on a closed interval.
class FunctionSpace {
  public:
    FunctionSpace() = default;
    FunctionSpace(std::vector<BasisFunction> basis, Interval element,
                  bool derivative_closed = false, std::string tag = "custom")
        : basis_(std::move(basis)), element_(element),
          derivative_closed_(derivative_closed), tag_(std::move(tag)) {}

    int dim() const { return static_cast<int>(basis_.size()); }
    const Interval& element() const { return element_; }
    const std::vector<BasisFunction>& basis() const { return basis_; }
    const BasisFunction& operator[](int j) const { return basis_[j]; }

    /// True when F' is known to be a subspace of F (polynomial, trig, exponential).
    bool derivative_closed() const { return derivative_closed_; }

    /// Canonical spec string ("poly:d=2", "rbf:alpha=1", ...).
    const std::string& tag() const { return tag_; }

    /// Nodal values of every basis function at `x`: rows = nodes, cols = basis.
    Eigen::MatrixXd sample(const Eigen::VectorXd& x) const;
    Eigen::MatrixXd sample_d1(const Eigen::VectorXd& x) const;

    /// True if f lies in this span: least-squares residual on a sampling grid
    /// of 4*dim equidistant points stays below `tol` relative to ||f||.
    bool contains(const ScalarFn& f, double tol = 1e-10) const;

  private:
    std::vector<BasisFunction> basis_;
    Interval element_ = kReferenceElement;
    bool derivative_closed_ = false;
    std::string tag_ = "custom";
};

/// Built-in space factories. Polynomial spaces use a Legendre basis in the
/// reference coordinate of `el` (same span as the monomials, usable at d = 60).
FunctionSpace make_polynomial(int degree, Interval el = kReferenceElement);
/// span{1, sin(k pi xi), cos(k pi xi) | k=1..d} in the reference coordinate.
FunctionSpace make_trigonometric(int degree, Interval el = kReferenceElement);
/// span{1, x, ..., x^{d-1}, e^{alpha xi}}.
FunctionSpace make_exponential(int degree, double alpha,
                               Interval el = kReferenceElement);
/// span{1, x, e^{-(xi/alpha)^2}}: a Gaussian kernel centered at zero.
FunctionSpace make_gaussian_rbf(double alpha, Interval el = kReferenceElement);

/// Parses "poly:d=2", "trig:d=1", "exp:d=2,alpha=1", "rbf:alpha=1".
FunctionSpace parse_space_spec(const std::string& spec,
                               Interval el = kReferenceElement);

/// Validates the finite-difference consistency of d1 (and d2 when present)
/// at 10 random points; throws ConstructionError on mismatch. Used for
/// custom spaces whose derivatives are user-supplied.
void validate_derivatives(const FunctionSpace& space, unsigned seed = 0x5eed);

/// span{f' : f in F}, with vanished or dependent derivatives pruned.
FunctionSpace derivative_space(const FunctionSpace& space);

/// Smallest space containing both arguments; keeps the earliest-listed
/// independent functions (a's basis before b's).
FunctionSpace direct_sum(const FunctionSpace& a, const FunctionSpace& b);

/// span{ g_i' g_j + g_i g_j' : i <= j }, rank-reduced. This is the space a
/// quadrature must integrate exactly for an SBP operator on g to exist.
FunctionSpace product_rule_space(const FunctionSpace& g);

/// Vandermonde pair (V, V'): V(i,j) = g_j(x_i), V'(i,j) = g_j'(x_i).
/// Nodes must be strictly increasing and inside the element.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> vandermonde(
    const FunctionSpace& space, const Eigen::VectorXd& nodes);

/// Numerical rank of a sampled basis via SVD with a relative singular value
/// cutoff (columns are normalized first so wildly scaled bases coexist).
int numerical_rank(const Eigen::MatrixXd& samples, double tol = 1e-10);

/// Relative tolerance used by every rank decision in this module.
inline constexpr double kRankTol = 1e-10;

}  // namespace fsbp
