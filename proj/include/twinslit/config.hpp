#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "twinslit/detection.hpp"
#include "twinslit/errors.hpp"
#include "twinslit/integrator.hpp"
#include "twinslit/params.hpp"
#include "twinslit/sampler.hpp"

namespace twinslit {

// Everything one run needs; defaults describe the shipped example geometry.
struct RunConfig {
    ExperimentParams params;
    SamplerSpec sampler;
    IntegratorSettings integrator;
    std::int64_t n_pairs = 10000;
    int workers = 1;
    std::string out_dir = "out";

    double hist_lo = -2.5;
    double hist_hi = 2.5;
    int hist_nbins = 100;

    double joint_lo = -30.0;
    double joint_hi = 30.0;
    int joint_nbins = 40;

    FilterSide selective_side = FilterSide::upper;
    int trajectory_n = 5;

    void validate() const {
        params.validate();
        sampler.validate(params);
        if (n_pairs < 1) throw std::invalid_argument("run.n_pairs must be >= 1");
        if (workers < 1) throw std::invalid_argument("run.workers must be >= 1");
        if (!(hist_hi > hist_lo) || hist_nbins < 2) throw std::invalid_argument("bad hist geometry");
        if (!(joint_hi > joint_lo) || joint_nbins < 2) throw std::invalid_argument("bad joint geometry");
        if (trajectory_n < 1) throw std::invalid_argument("trajectory.n must be >= 1");
        if (!(integrator.tol_rel > 0.0) || !(integrator.tol_abs > 0.0) ||
            !(integrator.dt_init > 0.0) || integrator.max_steps < 1)
            throw std::invalid_argument("bad integrator settings");
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline double to_double(int line, const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigParseError(line, key, "expected a number, got '" + v + "'");
    }
}

inline long long to_int(int line, const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        long long x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigParseError(line, key, "expected an integer, got '" + v + "'");
    }
}

}  // namespace detail

// Flat key/value format: `section.key = value`, '#' comments, blank lines ok.
inline void apply_config_line(RunConfig& c, int line, const std::string& key,
                              const std::string& value) {
    using detail::to_double;
    using detail::to_int;
    auto bad_value = [&](const std::string& what) { throw ConfigParseError(line, key, what); };

    if (key == "params.hbar") c.params.hbar = to_double(line, key, value);
    else if (key == "params.mass") c.params.mass = to_double(line, key, value);
    else if (key == "params.sigma0") c.params.sigma0 = to_double(line, key, value);
    else if (key == "params.slit_y") c.params.slit_y = to_double(line, key, value);
    else if (key == "params.slit_x") c.params.slit_x = to_double(line, key, value);
    else if (key == "params.kx") c.params.kx = to_double(line, key, value);
    else if (key == "params.ky") c.params.ky = to_double(line, key, value);
    else if (key == "params.amp") c.params.amp = to_double(line, key, value);
    else if (key == "params.screen_dist") c.params.screen_dist = to_double(line, key, value);
    else if (key == "params.statistics") {
        if (value == "bosonic") c.params.statistics = Statistics::bosonic;
        else if (value == "fermionic") c.params.statistics = Statistics::fermionic;
        else bad_value("expected bosonic or fermionic");
    } else if (key == "sampler.mode") {
        if (value == "pinned_com") c.sampler.mode = SamplerMode::pinned_com;
        else if (value == "spread_com") c.sampler.mode = SamplerMode::spread_com;
        else if (value == "unconstrained") c.sampler.mode = SamplerMode::unconstrained;
        else bad_value("expected pinned_com, spread_com or unconstrained");
    } else if (key == "sampler.y0_mean") c.sampler.y0_mean = to_double(line, key, value);
    else if (key == "sampler.y0_sigma") c.sampler.y0_sigma = to_double(line, key, value);
    else if (key == "sampler.seed") c.sampler.seed = static_cast<std::uint64_t>(to_int(line, key, value));
    else if (key == "sampler.max_rejects") c.sampler.max_rejects = static_cast<long>(to_int(line, key, value));
    else if (key == "integrator.scheme") {
        if (value == "rk45_adaptive") c.integrator.scheme = Scheme::rk45_adaptive;
        else if (value == "rk4_fixed") c.integrator.scheme = Scheme::rk4_fixed;
        else bad_value("expected rk45_adaptive or rk4_fixed");
    } else if (key == "integrator.dt_init") c.integrator.dt_init = to_double(line, key, value);
    else if (key == "integrator.tol_rel") c.integrator.tol_rel = to_double(line, key, value);
    else if (key == "integrator.tol_abs") c.integrator.tol_abs = to_double(line, key, value);
    else if (key == "integrator.max_steps") c.integrator.max_steps = static_cast<long>(to_int(line, key, value));
    else if (key == "run.n_pairs") c.n_pairs = to_int(line, key, value);
    else if (key == "run.workers") c.workers = static_cast<int>(to_int(line, key, value));
    else if (key == "run.out") c.out_dir = value;
    else if (key == "hist.lo") c.hist_lo = to_double(line, key, value);
    else if (key == "hist.hi") c.hist_hi = to_double(line, key, value);
    else if (key == "hist.nbins") c.hist_nbins = static_cast<int>(to_int(line, key, value));
    else if (key == "joint.lo") c.joint_lo = to_double(line, key, value);
    else if (key == "joint.hi") c.joint_hi = to_double(line, key, value);
    else if (key == "joint.nbins") c.joint_nbins = static_cast<int>(to_int(line, key, value));
    else if (key == "selective.side") {
        if (value == "upper") c.selective_side = FilterSide::upper;
        else if (value == "lower") c.selective_side = FilterSide::lower;
        else bad_value("expected upper or lower");
    } else if (key == "trajectory.n") c.trajectory_n = static_cast<int>(to_int(line, key, value));
    else throw ConfigParseError(line, key, "unknown key");
}

inline RunConfig parse_config(std::istream& in) {
    RunConfig c;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::string s = detail::trim(raw);
        if (s.empty()) continue;
        size_t eq = s.find('=');
        if (eq == std::string::npos) throw ConfigParseError(line, s, "expected key = value");
        std::string key = detail::trim(s.substr(0, eq));
        std::string value = detail::trim(s.substr(eq + 1));
        if (key.empty()) throw ConfigParseError(line, key, "empty key");
        apply_config_line(c, line, key, value);
    }
    return c;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigParseError(0, path, "cannot open config file");
    return parse_config(in);
}

}  // namespace twinslit
