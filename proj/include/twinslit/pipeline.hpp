#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "twinslit/config.hpp"
#include "twinslit/detection.hpp"
#include "twinslit/quantum_potential.hpp"
#include "twinslit/report.hpp"
#include "twinslit/stats.hpp"

namespace twinslit {

namespace detail {

inline std::filesystem::path ensure_out_dir(const RunConfig& cfg) {
    std::filesystem::path dir(cfg.out_dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline Histogram fill_histogram(const RunConfig& cfg, const std::vector<DetectionEvent>& events,
                                bool s1) {
    Histogram h(cfg.hist_lo, cfg.hist_hi, cfg.hist_nbins);
    for (const auto& e : events) h.fill(s1 ? e.y_s1 : e.y_s2);
    return h;
}

inline ordered_json ensemble_stats_json(const EnsembleResult& res) {
    ordered_json j;
    j["requested"] = res.requested;
    j["events"] = static_cast<std::int64_t>(res.events.size());
    j["node_aborted"] = res.node_aborted;
    j["step_limited"] = res.step_limited;
    j["sampler_failed"] = res.sampler_failed;
    j["sampler_acceptance_rate"] = res.acceptance_rate;
    double com = 0.0, abs_com = 0.0;
    for (const auto& e : res.events) {
        double c = 0.5 * (e.y_s1 + e.y_s2);
        com += c;
        abs_com += std::abs(c);
    }
    if (!res.events.empty()) {
        com /= res.events.size();
        abs_com /= res.events.size();
    }
    j["mean_com"] = com;
    j["mean_abs_com"] = abs_com;
    return j;
}

}  // namespace detail

inline ordered_json run_ensemble(const RunConfig& cfg) {
    cfg.validate();
    auto dir = detail::ensure_out_dir(cfg);
    EnsembleResult res = bqm_ensemble(cfg.params, cfg.sampler, cfg.n_pairs, cfg.integrator,
                                      cfg.workers);
    write_events_csv(dir / "events.csv", res.events);
    write_hist_csv(dir / "hist_s1.csv", detail::fill_histogram(cfg, res.events, true));
    write_hist_csv(dir / "hist_s2.csv", detail::fill_histogram(cfg, res.events, false));

    ordered_json rep = report_skeleton(cfg, "ensemble");
    rep["results"] = detail::ensemble_stats_json(res);
    write_report(dir / "report.json", rep);
    return rep;
}

inline ordered_json run_sqm_joint(const RunConfig& cfg) {
    cfg.validate();
    auto dir = detail::ensure_out_dir(cfg);
    ScreenSlice slice(cfg.params, cfg.params.arrival_time());
    std::vector<double> grid = sqm_joint_grid(slice, cfg.joint_lo, cfg.joint_hi, cfg.joint_nbins);
    write_joint_csv(dir / "joint_grid.csv", cfg.joint_lo, cfg.joint_hi, cfg.joint_nbins, {}, grid);

    double grid_mass = 0.0;
    for (double g : grid) grid_mass += g;
    double w = slice.window();

    ordered_json rep = report_skeleton(cfg, "sqm-joint");
    rep["results"]["arrival_time"] = slice.time();
    rep["results"]["slice_norm"] = slice.norm();
    rep["results"]["grid_probability_mass"] = grid_mass;
    rep["results"]["window_probability_mass"] = slice.region_probability(-w, w, -w, w, 1e-9);
    rep["results"]["same_side_probability"] = slice.same_side_probability();
    write_report(dir / "report.json", rep);
    return rep;
}

inline ordered_json run_selective(const RunConfig& cfg) {
    cfg.validate();
    auto dir = detail::ensure_out_dir(cfg);
    EnsembleResult res = bqm_ensemble(cfg.params, cfg.sampler, cfg.n_pairs, cfg.integrator,
                                      cfg.workers);
    SelectiveFilter filter{cfg.selective_side};
    SelectionResult sel = apply_selective_detection(res.events, filter);

    write_events_csv(dir / "events.csv", res.events);
    write_hist_csv(dir / "hist_s1.csv", detail::fill_histogram(cfg, res.events, true));
    Histogram h2 = detail::fill_histogram(cfg, sel.kept, false);
    write_hist_csv(dir / "hist_s2.csv", h2);

    bool upper = cfg.selective_side == FilterSide::upper;
    std::int64_t opposite = 0;
    for (const auto& e : sel.kept)
        if (upper ? e.y_s2 < 0.0 : e.y_s2 > 0.0) ++opposite;

    ScreenSlice slice(cfg.params, cfg.params.arrival_time());
    DensityProfile cond =
        sqm_conditional_s2_density(slice, filter, cfg.hist_lo, cfg.hist_hi, cfg.hist_nbins);
    {
        auto out = detail::open_out(dir / "sqm_conditional_s2.csv");
        out << "bin_lo,bin_hi,density\n";
        double bw = cond.bin_width();
        for (int i = 0; i < cond.nbins; ++i)
            out << fmt(cond.lo + i * bw) << ',' << fmt(cond.lo + (i + 1) * bw) << ','
                << fmt(cond.values[i]) << '\n';
    }
    double w = slice.window();
    double side_mass = slice.side_mass(cfg.selective_side);
    double same_side_cond = (upper ? slice.region_probability(0.0, w, 0.0, w)
                                   : slice.region_probability(-w, 0.0, -w, 0.0)) /
                            side_mass;

    ordered_json rep = report_skeleton(cfg, "selective");
    rep["results"] = detail::ensemble_stats_json(res);
    rep["results"]["kept"] = static_cast<std::int64_t>(sel.kept.size());
    rep["results"]["ties_dropped"] = sel.ties;
    rep["results"]["kept_opposite_side"] = opposite;
    rep["results"]["bqm_same_side_fraction"] =
        sel.kept.empty() ? 0.0 : 1.0 - double(opposite) / double(sel.kept.size());
    rep["results"]["sqm_s1_side_mass"] = side_mass;
    rep["results"]["sqm_conditional_same_side_mass"] = same_side_cond;
    rep["results"]["fringe_formula_spacing"] = fringe_formula(cfg.params, slice.time());

    ordered_json fringe_json;
    try {
        FringeAnalysis fr = fringe_spacing(h2);
        fringe_json["mean_spacing"] = fr.mean_spacing;
        fringe_json["peak_positions"] = fr.peak_positions;
        rep["results"]["fringes"] = fringe_json;
        write_report(dir / "report.json", rep);
    } catch (const NoFringesDetected&) {
        rep["results"]["fringes"] = nullptr;
        write_report(dir / "report.json", rep);
        throw;
    }
    return rep;
}

inline ordered_json run_compare(const RunConfig& cfg) {
    cfg.validate();
    auto dir = detail::ensure_out_dir(cfg);
    EnsembleResult res = bqm_ensemble(cfg.params, cfg.sampler, cfg.n_pairs, cfg.integrator,
                                      cfg.workers);
    write_events_csv(dir / "events.csv", res.events);
    Histogram h1 = detail::fill_histogram(cfg, res.events, true);
    write_hist_csv(dir / "hist_s1.csv", h1);
    write_hist_csv(dir / "hist_s2.csv", detail::fill_histogram(cfg, res.events, false));

    ScreenSlice slice(cfg.params, cfg.params.arrival_time());
    std::vector<double> sqm_grid = sqm_joint_grid(slice, cfg.joint_lo, cfg.joint_hi,
                                                  cfg.joint_nbins);

    int n = cfg.joint_nbins;
    double glo = cfg.joint_lo, ghi = cfg.joint_hi;
    double gw = (ghi - glo) / n;
    std::vector<std::int64_t> bqm_grid(static_cast<size_t>(n) * n, 0);
    std::int64_t in_grid = 0, bqm_same_side = 0;
    for (const auto& e : res.events) {
        if (e.y_s1 * e.y_s2 > 0.0) ++bqm_same_side;
        if (e.y_s1 < glo || e.y_s1 >= ghi || e.y_s2 < glo || e.y_s2 >= ghi) continue;
        int i = std::min(n - 1, static_cast<int>((e.y_s1 - glo) / gw));
        int j = std::min(n - 1, static_cast<int>((e.y_s2 - glo) / gw));
        ++bqm_grid[static_cast<size_t>(i) * n + j];
        ++in_grid;
    }
    write_joint_csv(dir / "joint_grid.csv", glo, ghi, n, bqm_grid, sqm_grid);

    std::vector<double> bqm_weights(bqm_grid.begin(), bqm_grid.end());
    double tv = tv_distance(bqm_weights, sqm_grid);

    // marginal goodness of fit on the S1 histogram, out-of-range mass pooled
    double w = slice.window();
    std::vector<double> observed, expected;
    double covered = 0.0;
    double bw = h1.bin_width();
    for (int i = 0; i < h1.nbins; ++i) {
        double pb = slice.region_probability(h1.lo + i * bw, h1.lo + (i + 1) * bw, -w, w, 1e-12);
        observed.push_back(static_cast<double>(h1.counts[i]));
        expected.push_back(pb * static_cast<double>(res.events.size()));
        covered += pb;
    }
    observed.push_back(static_cast<double>(h1.underflow + h1.overflow));
    expected.push_back(std::max(0.0, 1.0 - covered) * static_cast<double>(res.events.size()));
    Chi2Result chi2 = chi2_test(observed, expected);

    ordered_json rep = report_skeleton(cfg, "compare");
    rep["results"] = detail::ensemble_stats_json(res);
    rep["results"]["joint_tv_distance"] = tv;
    rep["results"]["events_in_grid"] = in_grid;
    rep["results"]["marginal_chi2"]["statistic"] = chi2.statistic;
    rep["results"]["marginal_chi2"]["dof"] = chi2.dof;
    rep["results"]["marginal_chi2"]["p_value"] = chi2.p_value;
    rep["results"]["bqm_same_side_events"] = bqm_same_side;
    rep["results"]["sqm_same_side_probability"] = slice.same_side_probability();
    write_report(dir / "report.json", rep);
    return rep;
}

inline ordered_json run_trajectory(const RunConfig& cfg) {
    cfg.validate();
    auto dir = detail::ensure_out_dir(cfg);
    PairSampler sampler(cfg.params, cfg.sampler, 0.0);
    double t_end = cfg.params.arrival_time();

    auto traj_out = detail::open_out(dir / "trajectories.csv");
    traj_out << "pair_id,t,x1,y1,x2,y2,vy1,vy2\n";
    auto qcm_out = detail::open_out(dir / "qcm_curve.csv");
    qcm_out << "pair_id,t,com,q_cm,force_cm\n";

    ordered_json finals = ordered_json::array();
    for (int i = 0; i < cfg.trajectory_n; ++i) {
        PairConfiguration start = sampler.sample(i);
        Trajectory traj = integrate_pair(cfg.params, start, t_end, cfg.integrator);
        for (size_t k = 0; k < traj.samples.size(); ++k) {
            const auto& s = traj.samples[k];
            const auto& v = traj.velocities[k];
            traj_out << i << ',' << fmt(s.t) << ',' << fmt(s.x1) << ',' << fmt(s.y1) << ','
                     << fmt(s.x2) << ',' << fmt(s.y2) << ',' << fmt(v.vy1) << ',' << fmt(v.vy2)
                     << '\n';
            double com = 0.5 * (s.y1 + s.y2);
            qcm_out << i << ',' << fmt(s.t) << ',' << fmt(com) << ','
                    << fmt(q_cm(cfg.params, traj.y0, s.t)) << ','
                    << fmt(quantum_force_cm(cfg.params, traj.y0, s.t)) << '\n';
        }
        const auto& last = traj.samples.back();
        ordered_json f;
        f["pair_id"] = i;
        f["y0"] = traj.y0;
        f["y_s1"] = last.y1;
        f["y_s2"] = last.y2;
        f["steps"] = static_cast<std::int64_t>(traj.samples.size()) - 1;
        finals.push_back(f);
    }

    ordered_json rep = report_skeleton(cfg, "trajectory");
    rep["results"]["arrival_time"] = t_end;
    rep["results"]["pairs"] = finals;
    write_report(dir / "report.json", rep);
    return rep;
}

}  // namespace twinslit
