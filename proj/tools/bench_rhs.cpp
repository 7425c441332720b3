// Times the OpenMP right-hand-side kernels against the serial reference
// implementations on a sizable mesh. Run with FSBP_THREADS / OMP_NUM_THREADS
// to control the worker count.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <omp.h>
#include <random>

#include "fsbp/rhs.hpp"

using Clock = std::chrono::steady_clock;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
    fn();  // warm up
    const auto t0 = Clock::now();
    for (int r = 0; r < reps; ++r) fn();
    const auto t1 = Clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void report(const std::string& name, double serial_ms, double omp_ms) {
    std::printf("%-24s serial %8.3f ms   omp %8.3f ms   speedup %.2fx\n",
                name.c_str(), serial_ms, omp_ms, serial_ms / omp_ms);
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* threads = std::getenv("FSBP_THREADS"))
        omp_set_num_threads(std::max(1, std::atoi(threads)));
    const int blocks = argc > 1 ? std::atoi(argv[1]) : 512;
    const int reps = argc > 2 ? std::atoi(argv[2]) : 50;
    std::printf("threads=%d blocks=%d reps=%d\n", omp_get_max_threads(), blocks,
                reps);

    const fsbp::FsbpOperatorSet op =
        fsbp::construct_operator("exp:d=2,alpha=1", "equi:5");
    const fsbp::BlockMesh mesh = fsbp::make_block_mesh(op, {0.0, 1.0}, blocks);
    const fsbp::SatCoefficients sats = fsbp::make_sat_coefficients(1.0, 1e-2);

    std::mt19937 rng(7);
    std::normal_distribution<double> gauss;
    Eigen::VectorXd u(mesh.total());
    for (int i = 0; i < mesh.total(); ++i) u[i] = gauss(rng);
    Eigen::VectorXd out_a(u.size()), out_b(u.size());

    report("advdiff_rhs_1d",
           time_ms([&] { fsbp::serial::advdiff_rhs_1d(mesh, sats, u, out_a); },
                   reps),
           time_ms([&] { fsbp::advdiff_rhs_1d(mesh, sats, u, out_b); }, reps));
    std::printf("  max |serial - omp| = %.3e\n",
                (out_a - out_b).cwiseAbs().maxCoeff());

    report("burgers_rhs",
           time_ms([&] { fsbp::serial::burgers_rhs(mesh, 1e-2, u, out_a); },
                   reps),
           time_ms([&] { fsbp::burgers_rhs(mesh, 1e-2, u, out_b); }, reps));
    std::printf("  max |serial - omp| = %.3e\n",
                (out_a - out_b).cwiseAbs().maxCoeff());

    const int blocks2d = std::max(4, blocks / 16);
    const fsbp::BlockMesh mx = fsbp::make_block_mesh(op, {0.0, 1.0}, blocks2d);
    fsbp::Advdiff2d system(mx, mx, 1.0, 1.0, 1e-4, 1e-4);
    Eigen::VectorXd u2(static_cast<Eigen::Index>(mx.total()) * mx.total());
    for (Eigen::Index i = 0; i < u2.size(); ++i) u2[i] = gauss(rng);
    Eigen::VectorXd o2(u2.size());
    const double t2 =
        time_ms([&] { system.apply(u2, o2); }, std::max(1, reps / 5));
    std::printf("advdiff_2d (%dx%d nodes)   omp %8.3f ms\n", mx.total(),
                mx.total(), t2);

    const fsbp::FsbpOperatorSet trig =
        fsbp::construct_operator("trig:d=20", "equi:auto");
    Eigen::VectorXd w(trig.size()), wv(trig.size()), dw(trig.size()),
        dwv(trig.size());
    for (int i = 0; i < trig.size(); ++i) {
        w[i] = gauss(rng);
        wv[i] = gauss(rng);
    }
    report("wave_rhs (N=42)",
           time_ms([&] { fsbp::serial::wave_rhs(trig.D2, 1.0, w, wv, dw, dwv); },
                   reps * 10),
           time_ms([&] { fsbp::wave_rhs(trig.D2, 1.0, w, wv, dw, dwv); },
                   reps * 10));
    return 0;
}
