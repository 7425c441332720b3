#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "fsbp/types.hpp"

namespace fsbp {

/// Flat key/value text config with [section] headers. '#' starts a comment.
class Config {
  public:
    static Config from_file(const std::string& path);
    static Config from_string(const std::string& text);

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key,
                    const std::string& fallback) const;
    double get_num(const std::string& section, const std::string& key,
                   double fallback) const;
    int get_int(const std::string& section, const std::string& key,
                int fallback) const;
    std::vector<double> get_list(const std::string& section,
                                 const std::string& key) const;

    void set(const std::string& section, const std::string& key,
             const std::string& value);
    /// Applies "section.key=value" override strings (CLI flags).
    void apply_override(const std::string& spec);

  private:
    std::map<std::string, std::map<std::string, std::string>> data_;
};

/// Everything one experiment run needs. NaN / empty / -1 fields mean
/// "use the experiment's default".
struct RunConfig {
    std::string experiment;
    std::string space;  // "poly:d=2" etc.; wave also accepts "fd:order=2"
    std::string grid;   // "lobatto:3" | "equi:5" | "equi:auto"

    double x_min = std::nan(""), x_max = std::nan("");
    int blocks = -1;
    int dims = -1;

    double a = std::nan(""), a2 = std::nan("");
    double eps = std::nan(""), eps2 = std::nan("");
    double c = std::nan("");

    double sigma1R = 0.0;
    double sigma2R = std::nan("");

    double t_end = std::nan("");
    double dt = 0.0;  // 0 selects the scaling rule
    double cfl = 0.4;
    int samples = 100;

    std::string wave_ic = "f1";
    double wave_k = 1.0;

    std::string ref_kind;  // "analytic" | "fine" | "none"
    int ref_blocks = -1;
    std::string ref_cache;

    std::string report_path;
    std::string snapshot_path;

    std::string sweep_axis;
    std::vector<double> sweep_values;

    unsigned seed = 42;
};

RunConfig parse_run_config(const Config& cfg);

/// Fills every unset field with the canonical defaults of cfg.experiment.
void apply_experiment_defaults(RunConfig& cfg);

}  // namespace fsbp
