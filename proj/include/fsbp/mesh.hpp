#pragma once

#include <Eigen/Dense>

#include "fsbp/operators.hpp"

namespace fsbp {

/// Baumann-Oden SAT coefficients for advection-diffusion interface coupling.
/// The free parameters are s1R and s2R; the rest follow from the stability
/// relations s1R <= a/2, s1L = s1R - a, s2L = eps + s2R, s3R = -eps - s2R,
/// s3L = -s2R.
struct SatCoefficients {
    double s1L = 0, s2L = 0, s3L = 0;
    double s1R = 0, s2R = 0, s3R = 0;
    double a = 0;
    double eps = 0;

    /// Largest violation of the defining relations (0 for a valid set).
    double relation_residual() const;
    void validate() const;
};

/// s2R defaults to -eps/2 when NaN is passed.
SatCoefficients make_sat_coefficients(double a, double eps, double s1R = 0.0,
                                      double s2R = std::nan(""));

/// Uniform partition of a physical interval into mapped reference elements.
/// All blocks share one mapped operator set (widths are uniform).
struct BlockMesh {
    Interval domain;
    int blocks = 0;
    FsbpOperatorSet op;       // reference operator mapped to block width
    Eigen::VectorXd nodes;    // global coordinates, blocks * n entries
    int n = 0;                // nodes per block
    double min_spacing = 0;   // smallest node distance inside a block

    // cached SAT application vectors: row 0 / row n-1 of D1 divided by p
    Eigen::VectorXd d1_row_first_over_p;
    Eigen::VectorXd d1_row_last_over_p;

    int total() const { return blocks * n; }
};

BlockMesh make_block_mesh(const FsbpOperatorSet& reference, Interval domain,
                          int blocks);

/// Total discrete mass sum_i 1^T P^(i) u^(i).
double mesh_mass(const BlockMesh& mesh, const Eigen::VectorXd& u);
/// Total discrete energy sum_i u^(i)T P^(i) u^(i).
double mesh_energy(const BlockMesh& mesh, const Eigen::VectorXd& u);

}  // namespace fsbp
