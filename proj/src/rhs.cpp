#include "fsbp/rhs.hpp"

#include <omp.h>

namespace fsbp {

namespace {

struct LineScratch {
    Eigen::VectorXd du;        // D1 u on one block
    Eigen::VectorXd tr_first;  // (D1 u^(b))_1 per block
    Eigen::VectorXd tr_last;   // (D1 u^(b))_N per block

    void resize(int n, int blocks) {
        du.resize(n);
        tr_first.resize(blocks);
        tr_last.resize(blocks);
    }
};

// One full multi-block line of the advection-diffusion right-hand side,
// sequential over its blocks.
void advdiff_line(const BlockMesh& mesh, const SatCoefficients& s, Boundary bc,
                  DirichletData g, const double* u, double* out,
                  LineScratch& scratch) {
    const int n = mesh.n, I = mesh.blocks;
    const auto& op = mesh.op;

    for (int b = 0; b < I; ++b) {
        const Eigen::Map<const Eigen::VectorXd> ub(u + b * n, n);
        scratch.tr_first[b] = op.D1.row(0).dot(ub);
        scratch.tr_last[b] = op.D1.row(n - 1).dot(ub);
    }

    for (int b = 0; b < I; ++b) {
        const Eigen::Map<const Eigen::VectorXd> ub(u + b * n, n);
        Eigen::Map<Eigen::VectorXd> ob(out + b * n, n);
        scratch.du.noalias() = op.D1 * ub;
        ob.noalias() = -s.a * scratch.du;
        ob.noalias() += s.eps * (op.D2 * ub);

        const int left = (b == 0) ? I - 1 : b - 1;
        const int right = (b == I - 1) ? 0 : b + 1;
        double u_nbrL = u[left * n + n - 1];       // u_N of the left neighbor
        double du_nbrL = scratch.tr_last[left];
        double u_nbrR = u[right * n];              // u_1 of the right neighbor
        double du_nbrR = scratch.tr_first[right];
        if (bc == Boundary::Dirichlet) {
            if (b == 0) {
                u_nbrL = g.left;
                du_nbrL = scratch.tr_first[b];  // no derivative jump at the wall
            }
            if (b == I - 1) {
                u_nbrR = g.right;
                du_nbrR = scratch.tr_last[b];
            }
        }

        const double jump_l = ub[0] - u_nbrL;
        const double jump_dl = scratch.tr_first[b] - du_nbrL;
        const double jump_r = ub[n - 1] - u_nbrR;
        const double jump_dr = scratch.tr_last[b] - du_nbrR;

        ob[0] += (s.s1L * jump_l + s.s2L * jump_dl) / op.p[0];
        ob[n - 1] += (s.s1R * jump_r + s.s2R * jump_dr) / op.p[n - 1];
        ob.noalias() += (s.s3L * jump_l) * mesh.d1_row_first_over_p;
        ob.noalias() += (s.s3R * jump_r) * mesh.d1_row_last_over_p;
    }
}

}  // namespace

void advdiff_rhs_1d(const BlockMesh& mesh, const SatCoefficients& sats,
                    const Eigen::VectorXd& u, Eigen::VectorXd& out,
                    Boundary bc, DirichletData g) {
    const int n = mesh.n, I = mesh.blocks;
    out.resize(u.size());
    const auto& op = mesh.op;

    Eigen::VectorXd tr_first(I), tr_last(I);
#pragma omp parallel for schedule(static)
    for (int b = 0; b < I; ++b) {
        const auto ub = u.segment(b * n, n);
        tr_first[b] = op.D1.row(0).dot(ub);
        tr_last[b] = op.D1.row(n - 1).dot(ub);
    }

#pragma omp parallel
    {
        Eigen::VectorXd du(n);
#pragma omp for schedule(static)
        for (int b = 0; b < I; ++b) {
            const auto ub = u.segment(b * n, n);
            auto ob = out.segment(b * n, n);
            du.noalias() = op.D1 * ub;
            ob.noalias() = -sats.a * du;
            ob.noalias() += sats.eps * (op.D2 * ub);

            const int left = (b == 0) ? I - 1 : b - 1;
            const int right = (b == I - 1) ? 0 : b + 1;
            double u_nbrL = u[left * n + n - 1];
            double du_nbrL = tr_last[left];
            double u_nbrR = u[right * n];
            double du_nbrR = tr_first[right];
            if (bc == Boundary::Dirichlet) {
                if (b == 0) {
                    u_nbrL = g.left;
                    du_nbrL = tr_first[b];
                }
                if (b == I - 1) {
                    u_nbrR = g.right;
                    du_nbrR = tr_last[b];
                }
            }

            const double jump_l = ub[0] - u_nbrL;
            const double jump_dl = tr_first[b] - du_nbrL;
            const double jump_r = ub[n - 1] - u_nbrR;
            const double jump_dr = tr_last[b] - du_nbrR;

            ob[0] += (sats.s1L * jump_l + sats.s2L * jump_dl) / op.p[0];
            ob[n - 1] +=
                (sats.s1R * jump_r + sats.s2R * jump_dr) / op.p[n - 1];
            ob.noalias() += (sats.s3L * jump_l) * mesh.d1_row_first_over_p;
            ob.noalias() += (sats.s3R * jump_r) * mesh.d1_row_last_over_p;
        }
    }
}

void burgers_rhs(const BlockMesh& mesh, double eps, const Eigen::VectorXd& u,
                 Eigen::VectorXd& out) {
    const int n = mesh.n, I = mesh.blocks;
    out.resize(u.size());
    const SatCoefficients s = make_sat_coefficients(0.0, eps);
    const auto& op = mesh.op;

    Eigen::VectorXd tr_first(I), tr_last(I);
#pragma omp parallel for schedule(static)
    for (int b = 0; b < I; ++b) {
        const auto ub = u.segment(b * n, n);
        tr_first[b] = op.D1.row(0).dot(ub);
        tr_last[b] = op.D1.row(n - 1).dot(ub);
    }

#pragma omp parallel
    {
        Eigen::VectorXd du(n), w(n), dw(n);
#pragma omp for schedule(static)
        for (int b = 0; b < I; ++b) {
            const auto ub = u.segment(b * n, n);
            auto ob = out.segment(b * n, n);
            du.noalias() = op.D1 * ub;
            w = ub.cwiseProduct(ub);
            dw.noalias() = op.D1 * w;
            ob = -(1.0 / 3.0) * (dw + ub.cwiseProduct(du));
            ob.noalias() += eps * (op.D2 * ub);

            const int left = (b == 0) ? I - 1 : b - 1;
            const int right = (b == I - 1) ? 0 : b + 1;
            const double ul = ub[0], ur = ub[n - 1];
            const double u_nbrL = u[left * n + n - 1];
            const double u_nbrR = u[right * n];

            const double fstar_l =
                (u_nbrL * u_nbrL + u_nbrL * ul + ul * ul) / 6.0;
            const double fstar_r =
                (ur * ur + ur * u_nbrR + u_nbrR * u_nbrR) / 6.0;
            const double adv_l = -(0.5 * ul * ul - fstar_l);
            const double adv_r = 0.5 * ur * ur - fstar_r;

            const double jump_l = ul - u_nbrL;
            const double jump_dl = tr_first[b] - tr_last[left];
            const double jump_r = ur - u_nbrR;
            const double jump_dr = tr_last[b] - tr_first[right];

            ob[0] += (adv_l + s.s2L * jump_dl) / op.p[0];
            ob[n - 1] += (adv_r + s.s2R * jump_dr) / op.p[n - 1];
            ob.noalias() += (s.s3L * jump_l) * mesh.d1_row_first_over_p;
            ob.noalias() += (s.s3R * jump_r) * mesh.d1_row_last_over_p;
        }
    }
}

Advdiff2d::Advdiff2d(BlockMesh mesh_x, BlockMesh mesh_y, double a1, double a2,
                     double eps1, double eps2, double s1R, double s2R)
    : mx_(std::move(mesh_x)), my_(std::move(mesh_y)),
      sx_(make_sat_coefficients(a1, eps1, s1R, s2R)),
      sy_(make_sat_coefficients(a2, eps2, s1R, s2R)) {
    ut_.resize(static_cast<Eigen::Index>(mx_.total()) * my_.total());
    outt_.resize(ut_.size());
}

void Advdiff2d::apply(const Eigen::VectorXd& u, Eigen::VectorXd& out) const {
    const int nx = mx_.total(), ny = my_.total();
    out.resize(u.size());

    // x pass: rows are contiguous
#pragma omp parallel
    {
        LineScratch scratch;
        scratch.resize(mx_.n, mx_.blocks);
#pragma omp for schedule(static)
        for (int r = 0; r < ny; ++r)
            advdiff_line(mx_, sx_, Boundary::Periodic, {},
                         u.data() + static_cast<Eigen::Index>(r) * nx,
                         out.data() + static_cast<Eigen::Index>(r) * nx, scratch);
    }

    // y pass on the transpose
#pragma omp parallel for schedule(static)
    for (int r = 0; r < ny; ++r)
        for (int c = 0; c < nx; ++c)
            ut_[static_cast<Eigen::Index>(c) * ny + r] =
                u[static_cast<Eigen::Index>(r) * nx + c];
#pragma omp parallel
    {
        LineScratch scratch;
        scratch.resize(my_.n, my_.blocks);
#pragma omp for schedule(static)
        for (int c = 0; c < nx; ++c)
            advdiff_line(my_, sy_, Boundary::Periodic, {},
                         ut_.data() + static_cast<Eigen::Index>(c) * ny,
                         outt_.data() + static_cast<Eigen::Index>(c) * ny,
                         scratch);
    }
#pragma omp parallel for schedule(static)
    for (int r = 0; r < ny; ++r)
        for (int c = 0; c < nx; ++c)
            out[static_cast<Eigen::Index>(r) * nx + c] +=
                outt_[static_cast<Eigen::Index>(c) * ny + r];
}

double Advdiff2d::mass(const Eigen::VectorXd& u) const {
    const int nx = mx_.total(), ny = my_.total();
    double total = 0.0;
    for (int r = 0; r < ny; ++r) {
        const double wy = my_.op.p[r % my_.n];
        double row = 0.0;
        for (int c = 0; c < nx; ++c)
            row += mx_.op.p[c % mx_.n] * u[static_cast<Eigen::Index>(r) * nx + c];
        total += wy * row;
    }
    return total;
}

double Advdiff2d::energy(const Eigen::VectorXd& u) const {
    const int nx = mx_.total(), ny = my_.total();
    double total = 0.0;
    for (int r = 0; r < ny; ++r) {
        const double wy = my_.op.p[r % my_.n];
        double row = 0.0;
        for (int c = 0; c < nx; ++c) {
            const double v = u[static_cast<Eigen::Index>(r) * nx + c];
            row += mx_.op.p[c % mx_.n] * v * v;
        }
        total += wy * row;
    }
    return total;
}

void wave_rhs(const Eigen::MatrixXd& d2, double c, const Eigen::VectorXd& u,
              const Eigen::VectorXd& v, Eigen::VectorXd& du,
              Eigen::VectorXd& dv) {
    du = v;
    dv.resize(u.size());
    const int n = static_cast<int>(u.size());
    const double c2 = c * c;
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) dv[i] = c2 * d2.row(i).dot(u);
}

}  // namespace fsbp
