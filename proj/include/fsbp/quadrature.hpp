#pragma once

#include <Eigen/Dense>

#include "fsbp/funcspace.hpp"
#include "fsbp/types.hpp"

namespace fsbp {

/// Grid nodes plus strictly positive weights, exact on a target space.
struct QuadratureRule {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
    Interval element;

    int size() const { return static_cast<int>(nodes.size()); }
};

/// Adaptive Gauss-Kronrod integral of f over [a, b], relative tolerance
/// 1e-13, at most 20 bisection levels. Throws ConstructionError when the
/// refinement does not converge.
double integrate(const ScalarFn& f, double a, double b, double rel_tol = 1e-13);

/// Exact integrals of every basis function of `space` over its element.
Eigen::VectorXd moments(const FunctionSpace& space);

/// Least-squares quadrature weights on the given nodes, exact on `space`
/// (the constant function is always added to the exactness set). Among all
/// exact weight vectors the one closest to the composite trapezoidal
/// reference in the Euclidean norm is selected. Throws
/// NonPositiveWeightsError / InexactQuadratureError on failure.
QuadratureRule least_squares_weights(const FunctionSpace& space,
                                     const Eigen::VectorXd& nodes);

/// Grows N over equidistant grids (both endpoints fixed) until
/// least_squares_weights succeeds with healthy weights; gives up at 16*dim.
QuadratureRule find_positive_rule(const FunctionSpace& space, int start_n);

/// n equidistant nodes spanning the element, both endpoints included.
Eigen::VectorXd equidistant_nodes(int n, Interval el = kReferenceElement);

/// n Gauss-Lobatto nodes (roots of (1-x^2) P'_{n-1}) mapped to the element.
Eigen::VectorXd gauss_lobatto_nodes(int n, Interval el = kReferenceElement);

/// Residual of the rule against the moments of `space`, normalized per basis
/// function by 1 + |integral|.
double exactness_residual(const QuadratureRule& rule, const FunctionSpace& space);

}  // namespace fsbp
