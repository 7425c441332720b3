#include "fsbp/timeint.hpp"

#include <cmath>

namespace fsbp {

void ssprk33_step(const RhsFn& rhs, Eigen::VectorXd& u, double t, double dt,
                  Ssprk33Scratch& s) {
    rhs(u, t, s.k);
    s.u1 = u + dt * s.k;
    rhs(s.u1, t + dt, s.k);
    s.u2 = 0.75 * u + 0.25 * (s.u1 + dt * s.k);
    rhs(s.u2, t + dt / 2, s.k);
    u = u / 3.0 + (2.0 / 3.0) * (s.u2 + dt * s.k);
}

void ensure_finite(const Eigen::VectorXd& u, double t, long step) {
    if (!u.allFinite())
        throw DivergenceError("state became non-finite at t=" + std::to_string(t),
                              t, step);
}

double cfl_time_step(double lambda_max, double eps, double dx, double c_cfl,
                     int dims) {
    if (dx <= 0 || c_cfl <= 0) throw Error("cfl_time_step: bad parameters");
    const double rate = dims * (std::abs(lambda_max) / dx + eps / (dx * dx));
    if (rate <= 0) throw Error("cfl_time_step: zero stiffness estimate");
    return c_cfl / rate;
}

}  // namespace fsbp
