#include <CLI11.hpp>
#include <array>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <omp.h>

#include "fsbp/experiments.hpp"
#include "fsbp/opio.hpp"
#include "fsbp/timeint.hpp"

namespace {

constexpr int kExitConstruction = 2;
constexpr int kExitParse = 3;
constexpr int kExitDivergence = 4;

void print_verify(const fsbp::FsbpOperatorSet& set) {
    using std::cout;
    const int n = set.size();
    cout << "operator: space=" << set.space_tag << " N=" << n << " on ["
         << set.element.left << ", " << set.element.right << "]\n";
    cout << "SBP identity |Q+Q^T-B|_max = " << set.sbp_identity_residual()
         << '\n';
    cout << "min diag(P) = " << set.p.minCoeff() << '\n';

    bool ok = set.sbp_identity_residual() <= 1e-12 && set.p.minCoeff() > 0;
    if (set.exactness_space.dim() > 0) {
        const double r1 = fsbp::verify_exactness(set, set.exactness_space, 1);
        const double r1n =
            fsbp::verify_exactness_relative(set, set.exactness_space, 1);
        cout << "order-1 exactness on F+F': " << r1 << " (relative " << r1n
             << ")\n";
        ok = ok && r1n <= 1e-10;
        if (set.has_d2()) {
            const double r2 = fsbp::verify_exactness(set, set.target_space, 2);
            const double r2n =
                fsbp::verify_exactness_relative(set, set.target_space, 2);
            cout << "order-2 exactness on F: " << r2 << " (relative " << r2n
                 << ")\n";
            ok = ok && r2n <= 1e-8;
        }
    }

    for (int order : {1, 2}) {
        if (order == 2 && !set.has_d2()) continue;
        const auto& M = order == 1 ? set.D1 : set.D2;
        const auto rep = fsbp::nullspace_report(M, set, order);
        cout << "nullspace(D" << order << "): dim " << rep.basis.cols()
             << " expected " << rep.expected_dim << " -> "
             << (rep.verdict == fsbp::NullspaceVerdict::Consistent
                     ? "consistent"
                     : "INCONSISTENT");
        if (rep.extra.size()) {
            cout << "  extra vector [";
            for (Eigen::Index i = 0; i < rep.extra.size(); ++i)
                cout << (i ? ", " : "") << rep.extra[i];
            cout << "]";
        }
        cout << '\n';
        const auto spec = fsbp::spectrum(M);
        cout << "spectrum(D" << order << "): max Re = " << spec.max_real
             << ", max |Im| = " << spec.max_abs_imag << '\n';
    }
    cout << (ok ? "verify: PASS" : "verify: FAIL") << '\n';
    if (!ok) std::exit(1);
}

fsbp::RunConfig load_config(const std::string& path,
                            const std::vector<std::string>& overrides) {
    fsbp::Config cfg = fsbp::Config::from_file(path);
    for (const auto& o : overrides) cfg.apply_override(o);
    return fsbp::parse_run_config(cfg);
}

void print_final_errors(const fsbp::ExperimentReport& rep) {
    std::cout << "steps=" << rep.steps << " dt=" << rep.dt
              << " mass_drift=" << rep.mass_drift << '\n';
    if (!std::isnan(rep.final_errors.n2))
        std::cout << "final relative errors: err_1=" << rep.final_errors.n1
                  << " err_2=" << rep.final_errors.n2
                  << " err_inf=" << rep.final_errors.ninf
                  << " err_P=" << rep.final_errors.np << '\n';
}

void run_solve(const fsbp::RunConfig& rc) {
    fsbp::ExperimentReport rep = fsbp::run_experiment(rc.experiment, rc);
    if (!rc.report_path.empty()) fsbp::write_report_csv(rc.report_path, rep);
    if (!rc.snapshot_path.empty())
        fsbp::write_snapshot_csv(rc.snapshot_path, rep);
    print_final_errors(rep);
}

std::string set_space_alpha(const std::string& spec, double alpha) {
    const auto pos = spec.find("alpha=");
    std::string head = spec;
    std::string tail;
    if (pos != std::string::npos) {
        head = spec.substr(0, pos);
        const auto comma = spec.find(',', pos);
        if (comma != std::string::npos) tail = spec.substr(comma);
    } else {
        head = spec + (spec.find(':') == std::string::npos ? ":" : ",");
    }
    return head + "alpha=" + fsbp::format_full(alpha) + tail;
}

void run_sweep(const fsbp::RunConfig& base, const std::string& out_path) {
    if (base.sweep_axis.empty())
        throw fsbp::ParseError("sweep needs an axis (N | I | dt | alpha)");
    if (base.sweep_values.empty())
        throw fsbp::ParseError("sweep needs [sweep] values in the config");
    const std::string axis = base.sweep_axis;

    std::ofstream os(out_path);
    if (!os) throw fsbp::Error("cannot write " + out_path);
    os << "axis,value,norm,error,order\n";

    const char* norm_names[4] = {"1", "2", "inf", "P"};
    std::array<double, 4> prev{};
    bool have_prev = false;
    double prev_value = 0.0;

    for (const double value : base.sweep_values) {
        fsbp::RunConfig rc = base;
        if (axis == "N") {
            const auto colon = rc.grid.find(':');
            const std::string family =
                colon == std::string::npos ? "equi" : rc.grid.substr(0, colon);
            rc.grid = family + ":" + std::to_string(static_cast<int>(value));
        } else if (axis == "I") {
            rc.blocks = static_cast<int>(value);
        } else if (axis == "dt") {
            rc.dt = value;
        } else if (axis == "alpha") {
            rc.space = set_space_alpha(rc.space, value);
        } else {
            throw fsbp::ParseError("unknown sweep axis '" + axis + "'");
        }

        std::array<double, 4> errs{std::nan(""), std::nan(""), std::nan(""),
                                   std::nan("")};
        try {
            const fsbp::ExperimentReport rep =
                fsbp::run_experiment(rc.experiment, rc);
            errs = {rep.final_errors.n1, rep.final_errors.n2,
                    rep.final_errors.ninf, rep.final_errors.np};
        } catch (const fsbp::DivergenceError&) {
            // recorded as a NaN row; the sweep continues
        }

        for (int k = 0; k < 4; ++k) {
            double order = std::nan("");
            if (have_prev && errs[k] > 0 && prev[k] > 0 && value != prev_value) {
                // error ~ value^{-order} for N/I axes, ~ value^{+order} for dt
                const double ratio = std::log(errs[k] / prev[k]) /
                                     std::log(value / prev_value);
                order = (axis == "dt") ? ratio : -ratio;
            }
            os << axis << ',' << fsbp::format_full(value) << ',' << norm_names[k]
               << ',' << fsbp::format_full(errs[k]) << ','
               << fsbp::format_full(order) << '\n';
        }
        prev = errs;
        prev_value = value;
        have_prev = true;
    }
    std::cout << "wrote " << out_path << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* threads = std::getenv("FSBP_THREADS"))
        omp_set_num_threads(std::max(1, std::atoi(threads)));

    CLI::App app{"function-space SBP operators and FSBP-SAT experiments"};
    app.require_subcommand(1);

    auto* c_construct =
        app.add_subcommand("construct", "build operators and write them to a file");
    std::string space, grid = "equi:auto", out = "operator.txt";
    c_construct->add_option("--space", space, "space spec, e.g. poly:d=2")
        ->required();
    c_construct->add_option("--grid", grid, "grid spec: lobatto:N | equi:N | equi:auto");
    c_construct->add_option("--out", out, "output operator file");

    auto* c_verify = app.add_subcommand("verify", "check an operator file");
    std::string verify_path;
    c_verify->add_option("file", verify_path, "operator file")->required();

    auto* c_solve = app.add_subcommand("solve", "run an experiment from a config");
    std::string solve_cfg;
    std::vector<std::string> overrides;
    c_solve->add_option("config", solve_cfg, "config file")->required();
    c_solve->add_option("--set", overrides, "override section.key=value");

    auto* c_sweep = app.add_subcommand("sweep", "sweep one axis of a config");
    std::string sweep_cfg, sweep_axis, sweep_out = "sweep.csv";
    std::vector<std::string> sweep_overrides;
    c_sweep->add_option("config", sweep_cfg, "config file")->required();
    c_sweep->add_option("--axis", sweep_axis, "N | I | dt | alpha");
    c_sweep->add_option("--out", sweep_out, "sweep CSV path");
    c_sweep->add_option("--set", sweep_overrides, "override section.key=value");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*c_construct) {
            fsbp::FsbpOperatorSet set = fsbp::construct_operator(space, grid);
            fsbp::save_operator(out, set);
            std::cout << "wrote " << out << " (N=" << set.size() << ")\n";
            std::cout << "SBP identity residual: "
                      << set.sbp_identity_residual() << '\n';
            std::cout << "order-1 exactness: "
                      << fsbp::verify_exactness(set, set.exactness_space, 1)
                      << '\n';
            std::cout << "order-2 exactness: "
                      << fsbp::verify_exactness(set, set.target_space, 2)
                      << '\n';
        } else if (*c_verify) {
            print_verify(fsbp::load_operator(verify_path));
        } else if (*c_solve) {
            run_solve(load_config(solve_cfg, overrides));
        } else if (*c_sweep) {
            fsbp::RunConfig rc = load_config(sweep_cfg, sweep_overrides);
            if (!sweep_axis.empty()) rc.sweep_axis = sweep_axis;
            run_sweep(rc, sweep_out);
        }
    } catch (const fsbp::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kExitParse;
    } catch (const fsbp::DivergenceError& e) {
        std::cerr << "divergence: " << e.what()
                  << " (last finite time " << e.last_finite_time << ")\n";
        return kExitDivergence;
    } catch (const fsbp::ConstructionError& e) {
        std::cerr << "construction error: " << e.what() << '\n';
        return kExitConstruction;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
