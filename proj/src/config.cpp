#include "fsbp/config.hpp"

#include <fstream>
#include <sstream>

namespace fsbp {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

Config Config::from_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ParseError("cannot open config file " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return from_string(ss.str());
}

Config Config::from_string(const std::string& text) {
    Config cfg;
    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ParseError("config line " + std::to_string(lineno) +
                                 ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("config line " + std::to_string(lineno) +
                             ": expected key = value");
        cfg.data_[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return cfg;
}

bool Config::has(const std::string& section, const std::string& key) const {
    const auto s = data_.find(section);
    return s != data_.end() && s->second.count(key) > 0;
}

std::string Config::get(const std::string& section, const std::string& key,
                        const std::string& fallback) const {
    const auto s = data_.find(section);
    if (s == data_.end()) return fallback;
    const auto k = s->second.find(key);
    return k == s->second.end() ? fallback : k->second;
}

double Config::get_num(const std::string& section, const std::string& key,
                       double fallback) const {
    if (!has(section, key)) return fallback;
    const std::string v = get(section, key, "");
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ParseError("config: [" + section + "] " + key + " = '" + v +
                         "' is not a number");
    }
}

int Config::get_int(const std::string& section, const std::string& key,
                    int fallback) const {
    const double v = get_num(section, key, fallback);
    return static_cast<int>(v);
}

std::vector<double> Config::get_list(const std::string& section,
                                     const std::string& key) const {
    std::vector<double> out;
    std::istringstream is(get(section, key, ""));
    double v;
    while (is >> v) out.push_back(v);
    return out;
}

void Config::set(const std::string& section, const std::string& key,
                 const std::string& value) {
    data_[section][key] = value;
}

void Config::apply_override(const std::string& spec) {
    const auto dot = spec.find('.');
    const auto eq = spec.find('=');
    if (dot == std::string::npos || eq == std::string::npos || dot > eq)
        throw ParseError("override must look like section.key=value: " + spec);
    set(spec.substr(0, dot), spec.substr(dot + 1, eq - dot - 1),
        spec.substr(eq + 1));
}

RunConfig parse_run_config(const Config& cfg) {
    RunConfig rc;
    rc.experiment = cfg.get("experiment", "name", "");
    if (rc.experiment.empty())
        throw ParseError("config: [experiment] name is required");

    rc.space = cfg.get("space", "spec", "");
    if (rc.space.empty() && cfg.has("space", "kind")) {
        std::string spec = cfg.get("space", "kind", "");
        std::string params;
        if (cfg.has("space", "d")) params += "d=" + cfg.get("space", "d", "");
        if (cfg.has("space", "alpha")) {
            if (!params.empty()) params += ",";
            params += "alpha=" + cfg.get("space", "alpha", "");
        }
        if (cfg.has("space", "order")) params += "order=" + cfg.get("space", "order", "");
        rc.space = params.empty() ? spec : spec + ":" + params;
    }
    rc.grid = cfg.get("grid", "family", "");
    if (!rc.grid.empty())
        rc.grid += ":" + cfg.get("grid", "n", "auto");

    rc.x_min = cfg.get_num("mesh", "x_min", rc.x_min);
    rc.x_max = cfg.get_num("mesh", "x_max", rc.x_max);
    rc.blocks = cfg.get_int("mesh", "blocks", rc.blocks);
    rc.dims = cfg.get_int("mesh", "dims", rc.dims);

    rc.a = cfg.get_num("physics", "a", rc.a);
    rc.a2 = cfg.get_num("physics", "a2", rc.a2);
    rc.eps = cfg.get_num("physics", "eps", rc.eps);
    rc.eps2 = cfg.get_num("physics", "eps2", rc.eps2);
    rc.c = cfg.get_num("physics", "c", rc.c);

    rc.sigma1R = cfg.get_num("sat", "sigma1R", rc.sigma1R);
    rc.sigma2R = cfg.get_num("sat", "sigma2R", rc.sigma2R);

    rc.t_end = cfg.get_num("time", "t_end", rc.t_end);
    rc.dt = cfg.get_num("time", "dt", rc.dt);
    rc.cfl = cfg.get_num("time", "cfl", rc.cfl);
    rc.samples = cfg.get_int("time", "samples", rc.samples);

    rc.wave_ic = cfg.get("wave", "ic", rc.wave_ic);
    rc.wave_k = cfg.get_num("wave", "k", rc.wave_k);

    rc.ref_kind = cfg.get("reference", "kind", rc.ref_kind);
    rc.ref_blocks = cfg.get_int("reference", "blocks", rc.ref_blocks);
    rc.ref_cache = cfg.get("reference", "cache", rc.ref_cache);

    rc.report_path = cfg.get("output", "report", rc.report_path);
    rc.snapshot_path = cfg.get("output", "snapshot", rc.snapshot_path);

    rc.sweep_axis = cfg.get("sweep", "axis", rc.sweep_axis);
    rc.sweep_values = cfg.get_list("sweep", "values");

    rc.seed = static_cast<unsigned>(cfg.get_num("rng", "seed", rc.seed));
    return rc;
}

}  // namespace fsbp
