#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "fsbp/funcspace.hpp"
#include "fsbp/quadrature.hpp"

namespace fsbp {

/// The matrix family (P, Q, B, D1, S, D2) of an FSBP operator set on one
/// element, together with the spaces it is exact for. D2 has size zero
/// until build_second_derivative fills it.
struct FsbpOperatorSet {
    Eigen::VectorXd grid;
    Eigen::VectorXd p;  // diagonal of the norm matrix P
    Eigen::MatrixXd Q;
    Eigen::MatrixXd D1;
    Eigen::MatrixXd S;
    Eigen::MatrixXd D2;
    FunctionSpace exactness_space;  // the F + F' the first derivative is exact on
    FunctionSpace target_space;     // the F the second derivative aims at
    Interval element;
    std::string space_tag;

    int size() const { return static_cast<int>(grid.size()); }
    bool has_d2() const { return D2.rows() == grid.size(); }

    /// Boundary matrix diag(-1, 0, ..., 0, 1).
    Eigen::MatrixXd boundary_matrix() const;
    /// max |Q + Q^T - B|.
    double sbp_identity_residual() const;
};

/// Minimal-Frobenius-norm antisymmetric solution of X V = R. The closed form
/// X = (L V^T - V L^T)/2 with L = (2R + V G^+ A) G^+, G = V^T V, A = R^T V
/// realizes the same minimizer as the vectorized SVD pseudo-inverse route.
Eigen::MatrixXd min_norm_antisymmetric(const Eigen::MatrixXd& V,
                                       const Eigen::MatrixXd& R);

/// Reference route: vectorize the strictly lower triangle and solve the
/// stacked least-squares system by SVD with a 1e-12 relative cutoff. Kept as
/// the independent check of min_norm_antisymmetric; O(n^4 L) so small n only.
Eigen::MatrixXd min_norm_antisymmetric_reference(const Eigen::MatrixXd& V,
                                                 const Eigen::MatrixXd& R);

/// Builds a first-derivative set whose D1 is exact on exactly `exact_on`
/// (used directly by the theory checks; normal callers want the overload
/// below, which enforces exactness on F + F').
FsbpOperatorSet build_first_derivative_exact_on(const FunctionSpace& exact_on,
                                                const FunctionSpace& target,
                                                const QuadratureRule& rule);

/// G = F + F'; assembles Q = Q_A + B/2 from the minimal-norm antisymmetric
/// solve of Q_A V = P V' - B V / 2 on the rule's nodes, then D1 = P^{-1} Q,
/// S = D1. Throws ConstructionError when the construction residual exceeds
/// 1e-10 (per basis function, relative to its nodal scale).
FsbpOperatorSet build_first_derivative(const FunctionSpace& space_f,
                                       const QuadratureRule& rule);

/// Fills D2 = P^{-1} (B D1 - D1^T P D1) without checking exactness.
void assemble_second_derivative(FsbpOperatorSet& set);

/// assemble + verify: D2 must reproduce f'' for every basis f of the target
/// space to 1e-8 (relative to the basis scale); otherwise the first
/// derivative was not exact on F + F' and a ConstructionError is thrown.
void build_second_derivative(FsbpOperatorSet& set);

/// max over the basis of ||D_order f - f^(order)||_inf (raw, unnormalized).
double verify_exactness(const FsbpOperatorSet& set, const FunctionSpace& space,
                        int order);
/// Same residual divided per basis function by its nodal scale.
double verify_exactness_relative(const FsbpOperatorSet& set,
                                 const FunctionSpace& space, int order);

enum class NullspaceVerdict { Consistent, Inconsistent };

struct NullspaceReport {
    std::string tag;
    Eigen::MatrixXd basis;        // orthonormal columns spanning the kernel
    int expected_dim = 1;
    NullspaceVerdict verdict = NullspaceVerdict::Consistent;
    double max_angle = 0.0;       // sin of the largest principal angle
    Eigen::VectorXd extra;        // normalized surplus vector when inconsistent
};

/// Numerical nullspace (right singular vectors with sigma <= tol * sigma_max)
/// compared against the expected continuous kernel: span{1} for order 1,
/// span{1, x} for order 2 when x lies in the operator's target space.
NullspaceReport nullspace_report(const Eigen::MatrixXd& M,
                                 const FsbpOperatorSet& set, int order,
                                 double tol = 1e-8);

/// Raw kernel basis of an arbitrary square matrix.
Eigen::MatrixXd nullspace_basis(const Eigen::MatrixXd& M, double tol = 1e-8);

struct SpectrumReport {
    Eigen::VectorXcd eigenvalues;
    double max_real = 0.0;
    double max_abs_imag = 0.0;
};

SpectrumReport spectrum(const Eigen::MatrixXd& M);

/// Circulant second-derivative operator generated by an odd-length stencil
/// on n periodic points; entries scaled by 1/dx^2 with dx = |element| / n.
Eigen::MatrixXd periodic_fd_operator(const std::vector<double>& stencil, int n,
                                     Interval element);

/// Standard central stencils of orders 2, 4, 6 for the second derivative.
std::vector<double> fd_second_derivative_stencil(int order);

/// Affine image of the operator set on `block`: nodes mapped, P scaled by J,
/// Q kept, D1 and S by 1/J, D2 by 1/J^2, so Q + Q^T = B is preserved exactly.
FsbpOperatorSet map_to_block(const FsbpOperatorSet& set, Interval block);

/// find_positive_rule + build_first_derivative + build_second_derivative for
/// a built-in space spec; grid "lobatto:N" | "equi:N" | "equi:auto".
FsbpOperatorSet construct_operator(const std::string& space_spec,
                                   const std::string& grid_spec);

}  // namespace fsbp
