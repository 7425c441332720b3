#include "fsbp/mesh.hpp"

#include <cmath>

namespace fsbp {

double SatCoefficients::relation_residual() const {
    double r = 0.0;
    r = std::max(r, std::abs(s1L - (s1R - a)));
    r = std::max(r, std::abs(s2L - (eps + s2R)));
    r = std::max(r, std::abs(s3R - (-eps - s2R)));
    r = std::max(r, std::abs(s3L - (-s2R)));
    r = std::max(r, std::max(0.0, s1R - a / 2));
    return r;
}

void SatCoefficients::validate() const {
    if (relation_residual() > 1e-14)
        throw ConstructionError("SAT coefficients violate the stability relations");
}

SatCoefficients make_sat_coefficients(double a, double eps, double s1R,
                                      double s2R) {
    if (std::isnan(s2R)) s2R = -eps / 2;
    SatCoefficients s;
    s.a = a;
    s.eps = eps;
    s.s1R = s1R;
    s.s2R = s2R;
    s.s1L = s1R - a;
    s.s2L = eps + s2R;
    s.s3R = -eps - s2R;
    s.s3L = -s2R;
    s.validate();
    return s;
}

BlockMesh make_block_mesh(const FsbpOperatorSet& reference, Interval domain,
                          int blocks) {
    if (blocks < 1) throw ConstructionError("mesh needs at least one block");
    BlockMesh mesh;
    mesh.domain = domain;
    mesh.blocks = blocks;
    const double width = domain.length() / blocks;
    mesh.op = map_to_block(reference, {domain.left, domain.left + width});
    mesh.n = mesh.op.size();
    mesh.nodes.resize(mesh.total());
    for (int b = 0; b < blocks; ++b)
        mesh.nodes.segment(b * mesh.n, mesh.n) =
            mesh.op.grid.array() + b * width;
    mesh.min_spacing = domain.length();
    for (int i = 0; i + 1 < mesh.n; ++i)
        mesh.min_spacing =
            std::min(mesh.min_spacing, mesh.op.grid[i + 1] - mesh.op.grid[i]);
    mesh.d1_row_first_over_p =
        (mesh.op.D1.row(0).transpose().array() / mesh.op.p.array()).matrix();
    mesh.d1_row_last_over_p =
        (mesh.op.D1.row(mesh.n - 1).transpose().array() / mesh.op.p.array())
            .matrix();
    return mesh;
}

double mesh_mass(const BlockMesh& mesh, const Eigen::VectorXd& u) {
    double total = 0.0;
    for (int b = 0; b < mesh.blocks; ++b)
        total += mesh.op.p.dot(u.segment(b * mesh.n, mesh.n));
    return total;
}

double mesh_energy(const BlockMesh& mesh, const Eigen::VectorXd& u) {
    double total = 0.0;
    for (int b = 0; b < mesh.blocks; ++b) {
        const auto ub = u.segment(b * mesh.n, mesh.n);
        total += ub.dot(mesh.op.p.asDiagonal() * ub);
    }
    return total;
}

}  // namespace fsbp
