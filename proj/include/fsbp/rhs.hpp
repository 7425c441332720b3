#pragma once

#include <Eigen/Dense>

#include "fsbp/mesh.hpp"

namespace fsbp {

enum class Boundary { Periodic, Dirichlet };

struct DirichletData {
    double left = 0.0;
    double right = 0.0;
};

/// Semi-discrete right-hand side of u_t + a u_x = eps u_xx on a multi-block
/// mesh with three-term Baumann-Oden SATs at every interface. Periodic runs
/// wrap block 0 to block I-1 (a single block couples to itself). Dirichlet
/// runs replace the missing neighbor trace by the boundary datum and drop
/// the derivative jump at the physical boundary. OpenMP over blocks.
void advdiff_rhs_1d(const BlockMesh& mesh, const SatCoefficients& sats,
                    const Eigen::VectorXd& u, Eigen::VectorXd& out,
                    Boundary bc = Boundary::Periodic, DirichletData g = {});

/// Skew-symmetric split-form viscous Burgers right-hand side, periodic.
/// Interface coupling uses the entropy-conservative two-point flux
/// f* = (uL^2 + uL uR + uR^2)/6 with penalty u^2/2 - f* at each face, plus
/// the diffusive SAT terms with the advective coefficient set to zero.
void burgers_rhs(const BlockMesh& mesh, double eps, const Eigen::VectorXd& u,
                 Eigen::VectorXd& out);

/// Tensor-product 2D advection-diffusion: the 1D multi-block operator is
/// applied along every x-line and every y-line and the contributions sum.
/// State layout: row-major, y outer, x inner.
class Advdiff2d {
  public:
    Advdiff2d(BlockMesh mesh_x, BlockMesh mesh_y, double a1, double a2,
              double eps1, double eps2, double s1R = 0.0,
              double s2R = std::nan(""));

    void apply(const Eigen::VectorXd& u, Eigen::VectorXd& out) const;

    const BlockMesh& mesh_x() const { return mx_; }
    const BlockMesh& mesh_y() const { return my_; }
    int points_x() const { return mx_.total(); }
    int points_y() const { return my_.total(); }

    double mass(const Eigen::VectorXd& u) const;
    double energy(const Eigen::VectorXd& u) const;

  private:
    BlockMesh mx_, my_;
    SatCoefficients sx_, sy_;
    mutable Eigen::VectorXd ut_, outt_;  // transpose scratch for the y pass
};

/// First-order system form of the wave equation: (u, v)_t = (v, c^2 D2 u).
void wave_rhs(const Eigen::MatrixXd& d2, double c, const Eigen::VectorXd& u,
              const Eigen::VectorXd& v, Eigen::VectorXd& du,
              Eigen::VectorXd& dv);

/// Straightforward single-threaded reference implementations, kept
/// independent of the OpenMP kernels for testing and benchmarking.
namespace serial {
void advdiff_rhs_1d(const BlockMesh& mesh, const SatCoefficients& sats,
                    const Eigen::VectorXd& u, Eigen::VectorXd& out,
                    Boundary bc = Boundary::Periodic, DirichletData g = {});
void burgers_rhs(const BlockMesh& mesh, double eps, const Eigen::VectorXd& u,
                 Eigen::VectorXd& out);
void wave_rhs(const Eigen::MatrixXd& d2, double c, const Eigen::VectorXd& u,
              const Eigen::VectorXd& v, Eigen::VectorXd& du,
              Eigen::VectorXd& dv);
}  // namespace serial

}  // namespace fsbp
