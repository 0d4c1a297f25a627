#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "twinslit/config.hpp"
#include "twinslit/detection.hpp"
#include "twinslit/histogram.hpp"

namespace twinslit {

using ordered_json = nlohmann::ordered_json;

inline constexpr int report_format_version = 1;

// Shortest round-trip decimal representation; byte-stable across runs.
inline std::string fmt(double x) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    if (ec != std::errc()) throw std::runtime_error("number formatting failed");
    return std::string(buf, end);
}

namespace detail {

inline std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

}  // namespace detail

inline void write_events_csv(const std::filesystem::path& path,
                             const std::vector<DetectionEvent>& events) {
    auto out = detail::open_out(path);
    out << "pair_id,y_s1,y_s2,t_arrive\n";
    for (const auto& e : events)
        out << e.pair_id << ',' << fmt(e.y_s1) << ',' << fmt(e.y_s2) << ',' << fmt(e.t_arrive)
            << '\n';
}

inline void write_hist_csv(const std::filesystem::path& path, const Histogram& h) {
    auto out = detail::open_out(path);
    out << "bin_lo,bin_hi,count\n";
    double bw = h.bin_width();
    for (int i = 0; i < h.nbins; ++i)
        out << fmt(h.lo + i * bw) << ',' << fmt(h.lo + (i + 1) * bw) << ',' << h.counts[i] << '\n';
    out << "# total=" << h.total << " underflow=" << h.underflow << " overflow=" << h.overflow
        << '\n';
}

// Joint grid: BQM counts and SQM cell probabilities side by side. Either
// column may be absent (empty vector) depending on the subcommand.
inline void write_joint_csv(const std::filesystem::path& path, double lo, double hi, int n,
                            const std::vector<std::int64_t>& bqm_counts,
                            const std::vector<double>& sqm_probs) {
    auto out = detail::open_out(path);
    out << "i,j,y1_lo,y1_hi,y2_lo,y2_hi,bqm_count,sqm_prob\n";
    double w = (hi - lo) / n;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            size_t idx = static_cast<size_t>(i) * n + j;
            out << i << ',' << j << ',' << fmt(lo + i * w) << ',' << fmt(lo + (i + 1) * w) << ','
                << fmt(lo + j * w) << ',' << fmt(lo + (j + 1) * w) << ','
                << (bqm_counts.empty() ? 0 : bqm_counts[idx]) << ','
                << fmt(sqm_probs.empty() ? 0.0 : sqm_probs[idx]) << '\n';
        }
    }
}

// Resolved configuration for embedding in reports. Execution-only settings
// (worker count, output directory) are deliberately left out so outputs stay
// byte-identical whenever the physics is identical.
inline ordered_json config_json(const RunConfig& c) {
    ordered_json j;
    j["params"]["hbar"] = c.params.hbar;
    j["params"]["mass"] = c.params.mass;
    j["params"]["sigma0"] = c.params.sigma0;
    j["params"]["slit_y"] = c.params.slit_y;
    j["params"]["slit_x"] = c.params.slit_x;
    j["params"]["kx"] = c.params.kx;
    j["params"]["ky"] = c.params.ky;
    j["params"]["amp"] = c.params.amp;
    j["params"]["statistics"] =
        c.params.statistics == Statistics::bosonic ? "bosonic" : "fermionic";
    j["params"]["screen_dist"] = c.params.screen_dist;
    j["sampler"]["mode"] = c.sampler.mode == SamplerMode::pinned_com      ? "pinned_com"
                           : c.sampler.mode == SamplerMode::spread_com    ? "spread_com"
                                                                          : "unconstrained";
    j["sampler"]["y0_mean"] = c.sampler.y0_mean;
    j["sampler"]["y0_sigma"] = c.sampler.y0_sigma;
    j["sampler"]["seed"] = c.sampler.seed;
    j["sampler"]["max_rejects"] = c.sampler.max_rejects;
    j["integrator"]["scheme"] =
        c.integrator.scheme == Scheme::rk45_adaptive ? "rk45_adaptive" : "rk4_fixed";
    j["integrator"]["dt_init"] = c.integrator.dt_init;
    j["integrator"]["tol_rel"] = c.integrator.tol_rel;
    j["integrator"]["tol_abs"] = c.integrator.tol_abs;
    j["integrator"]["max_steps"] = c.integrator.max_steps;
    j["run"]["n_pairs"] = c.n_pairs;
    j["hist"]["lo"] = c.hist_lo;
    j["hist"]["hi"] = c.hist_hi;
    j["hist"]["nbins"] = c.hist_nbins;
    j["joint"]["lo"] = c.joint_lo;
    j["joint"]["hi"] = c.joint_hi;
    j["joint"]["nbins"] = c.joint_nbins;
    j["selective"]["side"] = c.selective_side == FilterSide::upper ? "upper" : "lower";
    j["trajectory"]["n"] = c.trajectory_n;
    return j;
}

inline ordered_json report_skeleton(const RunConfig& c, const std::string& subcommand) {
    ordered_json j;
    j["format_version"] = report_format_version;
    j["subcommand"] = subcommand;
    j["config"] = config_json(c);
    return j;
}

inline void write_report(const std::filesystem::path& path, const ordered_json& j) {
    auto out = detail::open_out(path);
    out << j.dump(2) << '\n';
}

}  // namespace twinslit
