#include "fsbp/experiments.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "fsbp/opio.hpp"
#include "fsbp/timeint.hpp"

namespace fsbp {

ErrorNorms relative_errors(const Eigen::VectorXd& u, const Eigen::VectorXd& ref,
                           const Eigen::VectorXd& p_weights) {
    ErrorNorms e;
    const Eigen::VectorXd d = u - ref;
    e.n1 = d.lpNorm<1>() / std::max(ref.lpNorm<1>(), 1e-300);
    e.n2 = d.norm() / std::max(ref.norm(), 1e-300);
    e.ninf = d.lpNorm<Eigen::Infinity>() /
             std::max(ref.lpNorm<Eigen::Infinity>(), 1e-300);
    const double dp = std::sqrt(d.cwiseProduct(d).dot(p_weights));
    const double rp = std::sqrt(ref.cwiseProduct(ref).dot(p_weights));
    e.np = dp / std::max(rp, 1e-300);
    return e;
}

double advdiff_exact_single(double x, double t, double a, double eps) {
    const double k1 = 4 * M_PI, k2 = 40 * M_PI;
    return std::exp(-eps * k1 * k1 * t) * std::cos(k1 * (x - a * t)) +
           0.75 * std::exp(-eps * k2 * k2 * t) * std::sin(k2 * (x - a * t));
}

double advdiff_exact_multi(double x, double t, double a, double eps) {
    const double k1 = 4 * M_PI, k2 = 10 * M_PI;
    return std::exp(-eps * k1 * k1 * t) * std::cos(k1 * (x - a * t)) +
           2.0 * std::exp(-eps * k2 * k2 * t) * std::sin(k2 * (x - a * t));
}

double boundary_layer_steady(double x, double eps) {
    return std::expm1(x / eps) / std::expm1(0.5 / eps);
}

namespace {

// wraps into [-1, 1)
double wrap_ref(double x) { return std::fmod(std::fmod(x + 1.0, 2.0) + 2.0, 2.0) - 1.0; }

double wave_f(const std::string& ic, double k, double s) {
    if (ic == "f1") return std::sin(M_PI * s);
    if (ic == "f2") return std::exp(100.0 * std::sin(k * M_PI * s));
    if (ic == "f3") {
        const double w = wrap_ref(s);
        return w * w;
    }
    throw ParseError("unknown wave initial data '" + ic + "'");
}

double wave_fp(const std::string& ic, double k, double s) {
    if (ic == "f1") return M_PI * std::cos(M_PI * s);
    if (ic == "f2")
        return 100.0 * k * M_PI * std::cos(k * M_PI * s) *
               std::exp(100.0 * std::sin(k * M_PI * s));
    if (ic == "f3") return 2.0 * wrap_ref(s);
    throw ParseError("unknown wave initial data '" + ic + "'");
}

double wave_g(double s) {
    const double c = std::cos(2 * M_PI * s);
    return c * c;
}

double wave_gp(double s) { return -2 * M_PI * std::sin(4 * M_PI * s); }

}  // namespace

double wave_exact(const std::string& ic, double k, double x, double t, double c) {
    return wave_f(ic, k, x + c * t) + wave_g(x - c * t);
}

double wave_exact_velocity(const std::string& ic, double k, double x, double t,
                           double c) {
    return c * wave_fp(ic, k, x + c * t) - c * wave_gp(x - c * t);
}

Eigen::VectorXd interp_block_field(const BlockMesh& src,
                                   const Eigen::VectorXd& u,
                                   const Eigen::VectorXd& xq) {
    const int n = src.n;
    const double width = src.domain.length() / src.blocks;
    Eigen::VectorXd out(xq.size());
    for (Eigen::Index q = 0; q < xq.size(); ++q) {
        const double x = xq[q];
        int b = static_cast<int>((x - src.domain.left) / width);
        b = std::clamp(b, 0, src.blocks - 1);
        const auto xs = src.nodes.segment(b * n, n);
        const auto us = u.segment(b * n, n);
        double val = 0.0;
        for (int j = 0; j < n; ++j) {
            double lj = 1.0;
            for (int m = 0; m < n; ++m)
                if (m != j) lj *= (x - xs[m]) / (xs[j] - xs[m]);
            val += us[j] * lj;
        }
        out[q] = val;
    }
    return out;
}

void apply_experiment_defaults(RunConfig& c) {
    auto def_num = [](double& v, double d) {
        if (std::isnan(v)) v = d;
    };
    auto def_str = [](std::string& v, const std::string& d) {
        if (v.empty()) v = d;
    };
    auto def_int = [](int& v, int d) {
        if (v < 0) v = d;
    };

    const std::string& e = c.experiment;
    if (e == "advdiff-1d-single") {
        def_num(c.x_min, -1.0); def_num(c.x_max, 1.0);
        def_int(c.blocks, 1); def_int(c.dims, 1);
        def_num(c.a, 1.0); def_num(c.eps, 1e-5);
        def_num(c.t_end, 1.0);
        def_str(c.space, "trig:d=30");
        def_str(c.grid, "equi:auto");
        def_str(c.ref_kind, "analytic");
    } else if (e == "advdiff-1d-multi") {
        def_num(c.x_min, -1.0); def_num(c.x_max, 1.0);
        def_int(c.blocks, 10); def_int(c.dims, 1);
        def_num(c.a, 1.0); def_num(c.eps, 1e-2);
        def_num(c.t_end, 0.1);
        def_str(c.space, "rbf:alpha=1");
        def_str(c.grid, "equi:5");
        def_str(c.ref_kind, "analytic");
    } else if (e == "advdiff-2d") {
        def_num(c.x_min, 0.0); def_num(c.x_max, 1.0);
        def_int(c.blocks, 20); def_int(c.dims, 2);
        def_num(c.a, 1.0); def_num(c.a2, c.a);
        def_num(c.eps, 1e-4); def_num(c.eps2, c.eps);
        def_num(c.t_end, 0.25);
        def_str(c.space, "poly:d=2");
        def_str(c.grid, "lobatto:3");
        def_str(c.ref_kind, "fine");
        def_int(c.ref_blocks, 100);
    } else if (e == "boundary-layer") {
        def_num(c.x_min, 0.0); def_num(c.x_max, 0.5);
        def_int(c.blocks, 20); def_int(c.dims, 1);
        def_num(c.a, 1.0); def_num(c.eps, 1e-2);
        def_num(c.t_end, 0.75);
        def_str(c.space, "exp:d=2,alpha=0.1");
        def_str(c.grid, "equi:5");
        def_str(c.ref_kind, "analytic");
    } else if (e == "burgers") {
        def_num(c.x_min, 0.0); def_num(c.x_max, 1.0);
        def_int(c.blocks, 30); def_int(c.dims, 1);
        def_num(c.eps, 1e-2);
        def_num(c.t_end, 0.1);
        def_str(c.space, "exp:d=2,alpha=1");
        def_str(c.grid, "equi:5");
        def_str(c.ref_kind, "fine");
        def_int(c.ref_blocks, 200);
    } else if (e == "wave") {
        def_num(c.x_min, -1.0); def_num(c.x_max, 1.0);
        def_int(c.blocks, 1); def_int(c.dims, 1);
        def_num(c.c, 1.0);
        def_num(c.t_end, 1.0);
        if (c.dt == 0.0) c.dt = 1e-4;
        def_str(c.space, "trig:d=10");
        def_str(c.grid, "equi:auto");
        def_str(c.ref_kind, "analytic");
    } else {
        throw ParseError("unknown experiment '" + e + "'");
    }
    def_num(c.a2, std::isnan(c.a) ? 0.0 : c.a);
    def_num(c.eps2, std::isnan(c.eps) ? 0.0 : c.eps);
    def_num(c.c, 1.0);
}

namespace {

struct Sampler {
    ExperimentReport* rep;
    int samples;
    double t_end;
    int next = 0;

    // records at most once per call; sample times stay strictly increasing
    void maybe_record(double t, const std::function<void(double)>& rec) {
        const double tol = 1e-12 * std::max(t_end, 1.0);
        if (next > samples || t < t_end * next / samples - tol) return;
        rec(t);
        while (next <= samples && t >= t_end * next / samples - tol) ++next;
    }
};

double mass_scale(const BlockMesh& mesh, const Eigen::VectorXd& u0) {
    return std::sqrt(mesh.domain.length() * mesh_energy(mesh, u0)) + 1e-300;
}

long step_count(double t_end, double dt) {
    return std::max<long>(1, static_cast<long>(std::ceil(t_end / dt - 1e-12)));
}

// shared 1D driver for the advection-diffusion style experiments
ExperimentReport run_advdiff_1d_family(const RunConfig& cfg, Boundary bc,
                                       DirichletData g,
                                       const std::function<double(double)>& u0,
                                       const std::function<double(double, double)>& exact) {
    const FsbpOperatorSet op = construct_operator(cfg.space, cfg.grid);
    const BlockMesh mesh =
        make_block_mesh(op, {cfg.x_min, cfg.x_max}, cfg.blocks);
    const SatCoefficients sats =
        make_sat_coefficients(cfg.a, cfg.eps, cfg.sigma1R, cfg.sigma2R);

    Eigen::VectorXd u(mesh.total());
    for (int i = 0; i < mesh.total(); ++i) u[i] = u0(mesh.nodes[i]);

    double dt = cfg.dt > 0
                    ? cfg.dt
                    : cfl_time_step(cfg.a, cfg.eps, mesh.min_spacing, cfg.cfl);
    const long steps = step_count(cfg.t_end, dt);
    dt = cfg.t_end / steps;

    ExperimentReport rep;
    rep.experiment = cfg.experiment;
    rep.x = mesh.nodes;
    rep.dt = dt;
    rep.steps = steps;
    rep.per_sample_errors = static_cast<bool>(exact);

    Eigen::VectorXd pw(mesh.total());
    for (int b = 0; b < mesh.blocks; ++b)
        pw.segment(b * mesh.n, mesh.n) = mesh.op.p;

    const double m0 = mesh_mass(mesh, u);
    const double mscale = std::max(std::abs(m0), mass_scale(mesh, u));
    double max_drift = 0.0;
    double prev_energy = mesh_energy(mesh, u);
    bool energy_ok = true;
    const double transient = 0.01 * cfg.t_end;

    auto record = [&](double t) {
        rep.times.push_back(t);
        rep.mass.push_back(mesh_mass(mesh, u));
        rep.energy.push_back(mesh_energy(mesh, u));
        if (exact) {
            Eigen::VectorXd ref(mesh.total());
            for (int i = 0; i < mesh.total(); ++i) ref[i] = exact(mesh.nodes[i], t);
            rep.sample_errors.push_back(relative_errors(u, ref, pw));
        }
    };

    Sampler sampler{&rep, cfg.samples, cfg.t_end};
    sampler.maybe_record(0.0, record);

    RhsFn rhs = [&](const Eigen::VectorXd& v, double, Eigen::VectorXd& out) {
        advdiff_rhs_1d(mesh, sats, v, out, bc, g);
    };
    Ssprk33Scratch scratch;
    double t = 0.0;
    for (long k = 0; k < steps; ++k) {
        ssprk33_step(rhs, u, t, dt, scratch);
        t = (k + 1) * dt;
        ensure_finite(u, t, k);
        max_drift = std::max(max_drift, std::abs(mesh_mass(mesh, u) - m0));
        const double en = mesh_energy(mesh, u);
        if (t > transient && en > prev_energy * (1 + 1e-12) && cfg.a == 0.0)
            energy_ok = false;
        prev_energy = en;
        sampler.maybe_record(t, record);
    }

    rep.final_u = u;
    rep.mass_drift = max_drift / mscale;
    rep.energy_nonincreasing_after_transient = energy_ok;
    if (exact) {
        Eigen::VectorXd ref(mesh.total());
        for (int i = 0; i < mesh.total(); ++i)
            ref[i] = exact(mesh.nodes[i], cfg.t_end);
        rep.final_errors = relative_errors(u, ref, pw);
    }
    return rep;
}

ExperimentReport run_advdiff_2d(const RunConfig& cfg) {
    const FsbpOperatorSet op = construct_operator(cfg.space, cfg.grid);
    BlockMesh mx = make_block_mesh(op, {cfg.x_min, cfg.x_max}, cfg.blocks);
    BlockMesh my = mx;
    Advdiff2d system(mx, my, cfg.a, cfg.a2, cfg.eps, cfg.eps2, cfg.sigma1R,
                     cfg.sigma2R);
    const int nx = system.points_x(), ny = system.points_y();

    auto u0 = [](double x, double y) {
        return std::exp(-200.0 * ((x - 0.25) * (x - 0.25) +
                                  (y - 0.25) * (y - 0.25)));
    };
    Eigen::VectorXd u(static_cast<Eigen::Index>(nx) * ny);
    for (int r = 0; r < ny; ++r)
        for (int c = 0; c < nx; ++c)
            u[static_cast<Eigen::Index>(r) * nx + c] =
                u0(system.mesh_x().nodes[c], system.mesh_y().nodes[r]);

    const double lam = std::max(std::abs(cfg.a), std::abs(cfg.a2));
    const double epsm = std::max(cfg.eps, cfg.eps2);
    double dt = cfg.dt > 0 ? cfg.dt
                           : cfl_time_step(lam, epsm,
                                           system.mesh_x().min_spacing, cfg.cfl,
                                           2);
    const long steps = step_count(cfg.t_end, dt);
    dt = cfg.t_end / steps;

    ExperimentReport rep;
    rep.experiment = cfg.experiment;
    rep.x = system.mesh_x().nodes;
    rep.y = system.mesh_y().nodes;
    rep.dt = dt;
    rep.steps = steps;

    const double side = cfg.x_max - cfg.x_min;
    const double m0 = system.mass(u);
    const double mscale =
        std::max(std::abs(m0),
                 std::sqrt(system.energy(u) * side * side) + 1e-300);
    double max_drift = 0.0;

    auto record = [&](double t) {
        rep.times.push_back(t);
        rep.mass.push_back(system.mass(u));
        rep.energy.push_back(system.energy(u));
    };
    Sampler sampler{&rep, cfg.samples, cfg.t_end};
    sampler.maybe_record(0.0, record);

    RhsFn rhs = [&](const Eigen::VectorXd& v, double, Eigen::VectorXd& out) {
        system.apply(v, out);
    };
    Ssprk33Scratch scratch;
    double t = 0.0;
    for (long k = 0; k < steps; ++k) {
        ssprk33_step(rhs, u, t, dt, scratch);
        t = (k + 1) * dt;
        ensure_finite(u, t, k);
        max_drift = std::max(max_drift, std::abs(system.mass(u) - m0));
        sampler.maybe_record(t, record);
    }

    rep.final_u = u;
    rep.mass_drift = max_drift / mscale;

    if (cfg.ref_kind == "fine") {
        RunConfig rcfg = cfg;
        rcfg.space = "poly:d=2";
        rcfg.grid = "lobatto:3";
        rcfg.blocks = cfg.ref_blocks;
        rcfg.ref_kind = "none";
        rcfg.samples = 1;
        const ExperimentReport ref_rep = run_advdiff_2d(rcfg);
        // evaluate the reference on this run's tensor grid
        const FsbpOperatorSet rop = construct_operator(rcfg.space, rcfg.grid);
        const BlockMesh rmesh =
            make_block_mesh(rop, {cfg.x_min, cfg.x_max}, rcfg.blocks);
        const int rn = rmesh.total();
        // interpolate rows (x), then columns (y)
        Eigen::MatrixXd ref_grid =
            Eigen::Map<const Eigen::MatrixXd>(ref_rep.final_u.data(), rn, rn);
        // ref_grid(cix, riy) column-major map of row-major data: entry (c, r)
        Eigen::MatrixXd halfway(nx, rn);
        for (int r = 0; r < rn; ++r)
            halfway.col(r) = interp_block_field(rmesh, ref_grid.col(r), rep.x);
        Eigen::MatrixXd refq(nx, ny);
        for (int c = 0; c < nx; ++c) {
            const Eigen::VectorXd row = halfway.row(c).transpose();
            refq.row(c) = interp_block_field(rmesh, row, rep.y).transpose();
        }
        Eigen::VectorXd ref_flat(static_cast<Eigen::Index>(nx) * ny);
        for (int r = 0; r < ny; ++r)
            for (int c = 0; c < nx; ++c)
                ref_flat[static_cast<Eigen::Index>(r) * nx + c] = refq(c, r);

        Eigen::VectorXd pw(static_cast<Eigen::Index>(nx) * ny);
        for (int r = 0; r < ny; ++r)
            for (int c = 0; c < nx; ++c)
                pw[static_cast<Eigen::Index>(r) * nx + c] =
                    system.mesh_y().op.p[r % system.mesh_y().n] *
                    system.mesh_x().op.p[c % system.mesh_x().n];
        rep.final_errors = relative_errors(u, ref_flat, pw);
    }
    return rep;
}

Eigen::VectorXd burgers_initial(const BlockMesh& mesh) {
    Eigen::VectorXd u(mesh.total());
    for (int i = 0; i < mesh.total(); ++i) {
        const double x = mesh.nodes[i];
        u[i] = (x < 0.5) ? 1.0 + 2.0 * x : 2.0 * x - 1.0;
    }
    return u;
}

ExperimentReport run_burgers_scheme(const RunConfig& cfg) {
    const FsbpOperatorSet op = construct_operator(cfg.space, cfg.grid);
    const BlockMesh mesh =
        make_block_mesh(op, {cfg.x_min, cfg.x_max}, cfg.blocks);
    Eigen::VectorXd u = burgers_initial(mesh);

    const double lam = u.cwiseAbs().maxCoeff() + 1.0;
    double dt = cfg.dt > 0
                    ? cfg.dt
                    : cfl_time_step(lam, cfg.eps, mesh.min_spacing, cfg.cfl);
    const long steps = step_count(cfg.t_end, dt);
    dt = cfg.t_end / steps;

    ExperimentReport rep;
    rep.experiment = cfg.experiment;
    rep.x = mesh.nodes;
    rep.dt = dt;
    rep.steps = steps;

    const double m0 = mesh_mass(mesh, u);
    const double mscale = std::max(std::abs(m0), mass_scale(mesh, u));
    double max_drift = 0.0;
    double prev_energy = mesh_energy(mesh, u);
    bool energy_ok = true;
    const double transient = 0.01;

    auto record = [&](double t) {
        rep.times.push_back(t);
        rep.mass.push_back(mesh_mass(mesh, u));
        rep.energy.push_back(mesh_energy(mesh, u));
    };
    Sampler sampler{&rep, cfg.samples, cfg.t_end};
    sampler.maybe_record(0.0, record);

    RhsFn rhs = [&](const Eigen::VectorXd& v, double, Eigen::VectorXd& out) {
        burgers_rhs(mesh, cfg.eps, v, out);
    };
    Ssprk33Scratch scratch;
    double t = 0.0;
    for (long k = 0; k < steps; ++k) {
        ssprk33_step(rhs, u, t, dt, scratch);
        t = (k + 1) * dt;
        ensure_finite(u, t, k);
        max_drift = std::max(max_drift, std::abs(mesh_mass(mesh, u) - m0));
        const double en = mesh_energy(mesh, u);
        if (t > transient && en > prev_energy * (1 + 1e-12)) energy_ok = false;
        prev_energy = en;
        sampler.maybe_record(t, record);
    }

    rep.final_u = u;
    rep.mass_drift = max_drift / mscale;
    rep.energy_nonincreasing_after_transient = energy_ok;
    return rep;
}

// fine polynomial reference for Burgers, cached to a file keyed by (eps, I)
Eigen::VectorXd burgers_reference(const RunConfig& cfg, BlockMesh& ref_mesh) {
    RunConfig rcfg = cfg;
    rcfg.space = "poly:d=2";
    rcfg.grid = "lobatto:3";
    rcfg.blocks = cfg.ref_blocks;
    rcfg.ref_kind = "none";
    rcfg.samples = 1;
    rcfg.dt = 0.0;

    const FsbpOperatorSet rop = construct_operator(rcfg.space, rcfg.grid);
    ref_mesh = make_block_mesh(rop, {cfg.x_min, cfg.x_max}, rcfg.blocks);

    std::string cache = cfg.ref_cache;
    if (!cache.empty() && std::filesystem::exists(cache)) {
        std::ifstream is(cache);
        std::string header;
        std::getline(is, header);
        char expect[128];
        std::snprintf(expect, sizeof expect, "burgers-ref eps=%.17g I=%d t=%.17g",
                      cfg.eps, cfg.ref_blocks, cfg.t_end);
        if (header == expect) {
            Eigen::VectorXd u(ref_mesh.total());
            for (int i = 0; i < ref_mesh.total(); ++i) {
                double x;
                if (!(is >> x >> u[i]))
                    throw ParseError("truncated burgers reference cache " + cache);
            }
            return u;
        }
    }

    const ExperimentReport rep = run_burgers_scheme(rcfg);
    if (!cache.empty()) {
        std::ofstream os(cache);
        char header[128];
        std::snprintf(header, sizeof header, "burgers-ref eps=%.17g I=%d t=%.17g",
                      cfg.eps, cfg.ref_blocks, cfg.t_end);
        os << header << '\n';
        for (int i = 0; i < ref_mesh.total(); ++i)
            os << format_full(ref_mesh.nodes[i]) << ' '
               << format_full(rep.final_u[i]) << '\n';
    }
    return rep.final_u;
}

ExperimentReport run_burgers(const RunConfig& cfg) {
    ExperimentReport rep = run_burgers_scheme(cfg);
    if (cfg.ref_kind == "fine") {
        BlockMesh ref_mesh;
        const Eigen::VectorXd uref_nodes = burgers_reference(cfg, ref_mesh);
        const Eigen::VectorXd ref = interp_block_field(ref_mesh, uref_nodes, rep.x);
        const FsbpOperatorSet op = construct_operator(cfg.space, cfg.grid);
        const BlockMesh mesh =
            make_block_mesh(op, {cfg.x_min, cfg.x_max}, cfg.blocks);
        Eigen::VectorXd pw(mesh.total());
        for (int b = 0; b < mesh.blocks; ++b)
            pw.segment(b * mesh.n, mesh.n) = mesh.op.p;
        rep.final_errors = relative_errors(rep.final_u, ref, pw);
    }
    return rep;
}

struct WaveOperator {
    Eigen::MatrixXd d2;
    Eigen::VectorXd x;
    Eigen::VectorXd p;
    Eigen::MatrixXd d1;  // empty for FD operators
};

WaveOperator make_wave_operator(const RunConfig& cfg) {
    WaveOperator w;
    const Interval dom{cfg.x_min, cfg.x_max};
    if (cfg.space.rfind("fd", 0) == 0) {
        // "fd:order=2" on the unique points of the nominal boundary-inclusive
        // grid: N points including both endpoints -> N-1 periodic points
        int order = 2;
        const auto eq = cfg.space.find("order=");
        if (eq != std::string::npos) order = std::stoi(cfg.space.substr(eq + 6));
        const auto colon = cfg.grid.find(':');
        if (colon == std::string::npos || cfg.grid.substr(colon + 1) == "auto")
            throw ParseError("fd wave operator needs an explicit grid size");
        const int n_nominal = std::stoi(cfg.grid.substr(colon + 1));
        const int m = n_nominal - 1;
        w.d2 = periodic_fd_operator(fd_second_derivative_stencil(order), m, dom);
        const double dx = dom.length() / m;
        w.x = Eigen::VectorXd::LinSpaced(m, dom.left, dom.right - dx);
        w.p = Eigen::VectorXd::Constant(m, dx);
    } else {
        FsbpOperatorSet set = construct_operator(cfg.space, cfg.grid);
        if (std::abs(set.element.left - dom.left) > 1e-14 ||
            std::abs(set.element.right - dom.right) > 1e-14)
            set = map_to_block(set, dom);
        w.d2 = set.D2;
        w.x = set.grid;
        w.p = set.p;
        w.d1 = set.D1;
    }
    return w;
}

ExperimentReport run_wave(const RunConfig& cfg) {
    const WaveOperator wop = make_wave_operator(cfg);
    const int n = static_cast<int>(wop.x.size());
    const double c = cfg.c;

    Eigen::VectorXd u(n), v(n);
    for (int i = 0; i < n; ++i) {
        u[i] = wave_exact(cfg.wave_ic, cfg.wave_k, wop.x[i], 0.0, c);
        v[i] = wave_exact_velocity(cfg.wave_ic, cfg.wave_k, wop.x[i], 0.0, c);
    }

    double dt = cfg.dt;
    if (dt <= 0) {
        const double dx = wop.x[1] - wop.x[0];
        dt = cfl_time_step(M_PI * c, 0.0, dx, cfg.cfl);
    }
    const long steps = step_count(cfg.t_end, dt);
    dt = cfg.t_end / steps;

    ExperimentReport rep;
    rep.experiment = cfg.experiment;
    rep.x = wop.x;
    rep.dt = dt;
    rep.steps = steps;
    rep.per_sample_errors = true;

    auto wave_energy = [&](const Eigen::VectorXd& uu, const Eigen::VectorXd& vv) {
        const double kin = vv.cwiseProduct(vv).dot(wop.p);
        const double pot = -c * c * uu.dot(wop.p.asDiagonal() * (wop.d2 * uu));
        return 0.5 * (kin + pot);
    };
    auto exact_now = [&](double t) {
        Eigen::VectorXd r(n);
        for (int i = 0; i < n; ++i)
            r[i] = wave_exact(cfg.wave_ic, cfg.wave_k, wop.x[i], t, c);
        return r;
    };

    const double m0 = u.dot(wop.p);
    const double mscale =
        std::max(std::abs(m0),
                 std::sqrt((cfg.x_max - cfg.x_min) *
                           u.cwiseProduct(u).dot(wop.p)) + 1e-300);
    double max_drift = 0.0;

    auto record = [&](double t) {
        rep.times.push_back(t);
        rep.mass.push_back(u.dot(wop.p));
        rep.energy.push_back(wave_energy(u, v));
        rep.sample_errors.push_back(relative_errors(u, exact_now(t), wop.p));
    };
    Sampler sampler{&rep, cfg.samples, cfg.t_end};
    sampler.maybe_record(0.0, record);

    Eigen::VectorXd state(2 * n);
    state << u, v;
    RhsFn rhs = [&](const Eigen::VectorXd& s, double, Eigen::VectorXd& out) {
        out.resize(2 * n);
        Eigen::VectorXd du(n), dv(n);
        const Eigen::VectorXd su = s.head(n), sv = s.tail(n);
        wave_rhs(wop.d2, c, su, sv, du, dv);
        out << du, dv;
    };
    Ssprk33Scratch scratch;
    double t = 0.0;
    for (long k = 0; k < steps; ++k) {
        ssprk33_step(rhs, state, t, dt, scratch);
        t = (k + 1) * dt;
        ensure_finite(state, t, k);
        u = state.head(n);
        v = state.tail(n);
        max_drift = std::max(max_drift, std::abs(u.dot(wop.p) - m0));
        sampler.maybe_record(t, record);
    }

    rep.final_u = u;
    rep.mass_drift = max_drift / mscale;
    rep.final_errors = relative_errors(u, exact_now(cfg.t_end), wop.p);
    return rep;
}

}  // namespace

ExperimentReport run_experiment(const std::string& name, const RunConfig& cfg_in) {
    RunConfig cfg = cfg_in;
    cfg.experiment = name;
    apply_experiment_defaults(cfg);

    if (name == "advdiff-1d-single" || name == "advdiff-1d-multi") {
        const bool single = name == "advdiff-1d-single";
        const double a = cfg.a, eps = cfg.eps;
        auto exact = [single, a, eps](double x, double t) {
            return single ? advdiff_exact_single(x, t, a, eps)
                          : advdiff_exact_multi(x, t, a, eps);
        };
        auto u0 = [&](double x) { return exact(x, 0.0); };
        return run_advdiff_1d_family(cfg, Boundary::Periodic, {}, u0, exact);
    }
    if (name == "boundary-layer") {
        const double eps = cfg.eps;
        auto u0 = [](double x) { return 2.0 * x; };
        auto exact = [eps](double x, double) {
            return boundary_layer_steady(x, eps);
        };
        return run_advdiff_1d_family(cfg, Boundary::Dirichlet, {0.0, 1.0}, u0,
                                     exact);
    }
    if (name == "advdiff-2d") return run_advdiff_2d(cfg);
    if (name == "burgers") return run_burgers(cfg);
    if (name == "wave") return run_wave(cfg);
    throw ParseError("unknown experiment '" + name + "'");
}

void write_report_csv(const std::string& path, const ExperimentReport& rep) {
    std::ofstream os(path);
    if (!os) throw Error("cannot write report " + path);
    os << "t,mass,energy";
    if (rep.per_sample_errors) os << ",err_1,err_2,err_inf,err_P";
    os << '\n';
    for (std::size_t i = 0; i < rep.times.size(); ++i) {
        os << format_full(rep.times[i]) << ',' << format_full(rep.mass[i]) << ','
           << format_full(rep.energy[i]);
        if (rep.per_sample_errors) {
            const auto& e = rep.sample_errors[i];
            os << ',' << format_full(e.n1) << ',' << format_full(e.n2) << ','
               << format_full(e.ninf) << ',' << format_full(e.np);
        }
        os << '\n';
    }
}

void write_snapshot_csv(const std::string& path, const ExperimentReport& rep) {
    std::ofstream os(path);
    if (!os) throw Error("cannot write snapshot " + path);
    if (rep.y.size() == 0) {
        os << "x,u\n";
        for (Eigen::Index i = 0; i < rep.x.size(); ++i)
            os << format_full(rep.x[i]) << ',' << format_full(rep.final_u[i])
               << '\n';
    } else {
        os << "x,y,u\n";
        const Eigen::Index nx = rep.x.size();
        for (Eigen::Index r = 0; r < rep.y.size(); ++r)
            for (Eigen::Index c = 0; c < nx; ++c)
                os << format_full(rep.x[c]) << ',' << format_full(rep.y[r]) << ','
                   << format_full(rep.final_u[r * nx + c]) << '\n';
    }
}

}  // namespace fsbp
