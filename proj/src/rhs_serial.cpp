#include "fsbp/rhs.hpp"

// Plain-loop reference kernels. These mirror the semi-discretization
// definitions one index at a time and are the ground truth the OpenMP
// kernels are tested against.

namespace fsbp::serial {

namespace {

double dot_row(const Eigen::MatrixXd& m, int row, const double* v, int n) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += m(row, j) * v[j];
    return s;
}

}  // namespace

void advdiff_rhs_1d(const BlockMesh& mesh, const SatCoefficients& s,
                    const Eigen::VectorXd& u, Eigen::VectorXd& out,
                    Boundary bc, DirichletData g) {
    const int n = mesh.n, I = mesh.blocks;
    const auto& op = mesh.op;
    out.resize(u.size());

    for (int b = 0; b < I; ++b) {
        const double* ub = u.data() + b * n;
        double* ob = out.data() + b * n;
        for (int i = 0; i < n; ++i) {
            double adv = 0.0, diff = 0.0;
            for (int j = 0; j < n; ++j) {
                adv += op.D1(i, j) * ub[j];
                diff += op.D2(i, j) * ub[j];
            }
            ob[i] = -s.a * adv + s.eps * diff;
        }

        const int left = (b == 0) ? I - 1 : b - 1;
        const int right = (b == I - 1) ? 0 : b + 1;
        const double du_first = dot_row(op.D1, 0, ub, n);
        const double du_last = dot_row(op.D1, n - 1, ub, n);

        double u_nbrL = u[left * n + n - 1];
        double du_nbrL = dot_row(op.D1, n - 1, u.data() + left * n, n);
        double u_nbrR = u[right * n];
        double du_nbrR = dot_row(op.D1, 0, u.data() + right * n, n);
        if (bc == Boundary::Dirichlet) {
            if (b == 0) {
                u_nbrL = g.left;
                du_nbrL = du_first;
            }
            if (b == I - 1) {
                u_nbrR = g.right;
                du_nbrR = du_last;
            }
        }

        const double jump_l = ub[0] - u_nbrL;
        const double jump_dl = du_first - du_nbrL;
        const double jump_r = ub[n - 1] - u_nbrR;
        const double jump_dr = du_last - du_nbrR;

        ob[0] += (s.s1L * jump_l + s.s2L * jump_dl) / op.p[0];
        ob[n - 1] += (s.s1R * jump_r + s.s2R * jump_dr) / op.p[n - 1];
        for (int j = 0; j < n; ++j) {
            ob[j] += s.s3L * jump_l * op.D1(0, j) / op.p[j];
            ob[j] += s.s3R * jump_r * op.D1(n - 1, j) / op.p[j];
        }
    }
}

void burgers_rhs(const BlockMesh& mesh, double eps, const Eigen::VectorXd& u,
                 Eigen::VectorXd& out) {
    const int n = mesh.n, I = mesh.blocks;
    const auto& op = mesh.op;
    const SatCoefficients s = make_sat_coefficients(0.0, eps);
    out.resize(u.size());

    for (int b = 0; b < I; ++b) {
        const double* ub = u.data() + b * n;
        double* ob = out.data() + b * n;
        for (int i = 0; i < n; ++i) {
            double dw = 0.0, du = 0.0, diff = 0.0;
            for (int j = 0; j < n; ++j) {
                dw += op.D1(i, j) * ub[j] * ub[j];
                du += op.D1(i, j) * ub[j];
                diff += op.D2(i, j) * ub[j];
            }
            ob[i] = -(dw + ub[i] * du) / 3.0 + eps * diff;
        }

        const int left = (b == 0) ? I - 1 : b - 1;
        const int right = (b == I - 1) ? 0 : b + 1;
        const double ul = ub[0], ur = ub[n - 1];
        const double u_nbrL = u[left * n + n - 1];
        const double u_nbrR = u[right * n];
        const double du_first = dot_row(op.D1, 0, ub, n);
        const double du_last = dot_row(op.D1, n - 1, ub, n);
        const double du_nbrL = dot_row(op.D1, n - 1, u.data() + left * n, n);
        const double du_nbrR = dot_row(op.D1, 0, u.data() + right * n, n);

        const double fstar_l = (u_nbrL * u_nbrL + u_nbrL * ul + ul * ul) / 6.0;
        const double fstar_r = (ur * ur + ur * u_nbrR + u_nbrR * u_nbrR) / 6.0;

        ob[0] += (-(0.5 * ul * ul - fstar_l) + s.s2L * (du_first - du_nbrL)) /
                 op.p[0];
        ob[n - 1] +=
            ((0.5 * ur * ur - fstar_r) + s.s2R * (du_last - du_nbrR)) /
            op.p[n - 1];
        for (int j = 0; j < n; ++j) {
            ob[j] += s.s3L * (ul - u_nbrL) * op.D1(0, j) / op.p[j];
            ob[j] += s.s3R * (ur - u_nbrR) * op.D1(n - 1, j) / op.p[j];
        }
    }
}

void wave_rhs(const Eigen::MatrixXd& d2, double c, const Eigen::VectorXd& u,
              const Eigen::VectorXd& v, Eigen::VectorXd& du,
              Eigen::VectorXd& dv) {
    const int n = static_cast<int>(u.size());
    du.resize(n);
    dv.resize(n);
    for (int i = 0; i < n; ++i) {
        du[i] = v[i];
        double acc = 0.0;
        for (int j = 0; j < n; ++j) acc += d2(i, j) * u[j];
        dv[i] = c * c * acc;
    }
}

}  // namespace fsbp::serial
