#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "fsbp/config.hpp"
#include "fsbp/rhs.hpp"

namespace fsbp {

/// Relative error norms against a reference nodal vector: 1, 2, max, and
/// P-weighted 2-norm in that order.
struct ErrorNorms {
    double n1 = std::nan("");
    double n2 = std::nan("");
    double ninf = std::nan("");
    double np = std::nan("");
};

ErrorNorms relative_errors(const Eigen::VectorXd& u, const Eigen::VectorXd& ref,
                           const Eigen::VectorXd& p_weights);

/// Time series of diagnostics plus the final solution and its errors.
struct ExperimentReport {
    std::string experiment;
    std::vector<double> times;
    std::vector<double> mass;
    std::vector<double> energy;
    bool per_sample_errors = false;
    std::vector<ErrorNorms> sample_errors;

    Eigen::VectorXd x;        // node coordinates (x line for 2D)
    Eigen::VectorXd y;        // empty for 1D
    Eigen::VectorXd final_u;  // nodal solution at t_end (2D: row-major y-outer)
    ErrorNorms final_errors;  // NaN entries when no reference exists

    double dt = 0.0;
    long steps = 0;
    /// |m(t) - m(0)| / max(|m(0)|, mass scale); the scale guards initial data
    /// with vanishing total mass.
    double mass_drift = 0.0;
    bool energy_nonincreasing_after_transient = true;
};

/// Runs one of the named experiments:
///   advdiff-1d-single, advdiff-1d-multi, advdiff-2d, boundary-layer,
///   burgers, wave.
/// The config's unset fields are filled with the experiment's defaults.
ExperimentReport run_experiment(const std::string& name, const RunConfig& cfg);

/// Report CSV: header t,mass,energy[,err_1,err_2,err_inf,err_P].
void write_report_csv(const std::string& path, const ExperimentReport& rep);
/// Snapshot CSV: x,u rows (x,y,u for 2D) at the final time.
void write_snapshot_csv(const std::string& path, const ExperimentReport& rep);

/// Exact solutions used as references (exposed for tests).
double advdiff_exact_single(double x, double t, double a, double eps);
double advdiff_exact_multi(double x, double t, double a, double eps);
double boundary_layer_steady(double x, double eps);
/// d'Alembert wave solution f(x+ct) + g(x-ct) with f in {f1, f2, f3} and
/// g = cos^2(2 pi .); f3 is the periodic extension of x^2.
double wave_exact(const std::string& ic, double k, double x, double t, double c);
double wave_exact_velocity(const std::string& ic, double k, double x, double t,
                           double c);

/// Piecewise interpolation of a multi-block nodal field onto query points
/// (Lagrange within each block of the source mesh).
Eigen::VectorXd interp_block_field(const BlockMesh& src,
                                   const Eigen::VectorXd& u,
                                   const Eigen::VectorXd& xq);

}  // namespace fsbp
