#pragma once

#include <Eigen/Dense>
#include <functional>

#include "fsbp/types.hpp"

namespace fsbp {

/// rhs(u, t, out): writes the semi-discrete right-hand side into out.
using RhsFn =
    std::function<void(const Eigen::VectorXd&, double, Eigen::VectorXd&)>;

struct Ssprk33Scratch {
    Eigen::VectorXd k, u1, u2;
};

/// One step of the three-stage, third-order strong-stability-preserving
/// Runge-Kutta scheme:
///   u1 = u + dt f(u, t)
///   u2 = 3/4 u + 1/4 (u1 + dt f(u1, t + dt))
///   u  = 1/3 u + 2/3 (u2 + dt f(u2, t + dt/2))
void ssprk33_step(const RhsFn& rhs, Eigen::VectorXd& u, double t, double dt,
                  Ssprk33Scratch& scratch);

/// Throws DivergenceError when the state contains a non-finite entry.
void ensure_finite(const Eigen::VectorXd& u, double t, long step);

/// Time step from the scaling rule 1/dt = (lambda_max/dx + eps/dx^2)/c_cfl,
/// summed over space dimensions before dividing.
double cfl_time_step(double lambda_max, double eps, double dx, double c_cfl,
                     int dims = 1);

}  // namespace fsbp
