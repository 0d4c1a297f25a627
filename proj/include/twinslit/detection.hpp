#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "twinslit/errors.hpp"
#include "twinslit/guidance.hpp"
#include "twinslit/histogram.hpp"
#include "twinslit/integrator.hpp"
#include "twinslit/parallel.hpp"
#include "twinslit/params.hpp"
#include "twinslit/quadrature.hpp"
#include "twinslit/sampler.hpp"
#include "twinslit/wavefunction.hpp"

namespace twinslit {

struct DetectionEvent {
    double y_s1 = 0.0;
    double y_s2 = 0.0;
    double t_arrive = 0.0;
    std::int64_t pair_id = -1;
};

enum class FilterSide { upper, lower };

struct SelectiveFilter {
    FilterSide keep_side_s1 = FilterSide::upper;
};

// Normalized |psi|^2 on a fixed-time slice with both x at their ballistic
// positions; all screen-side quadrature lives here.
class ScreenSlice {
  public:
    ScreenSlice(const ExperimentParams& params, double t) : p_(params), t_(t) {
        auto [x1, x2] = ballistic_x(p_, t);
        x1_ = x1;
        x2_ = x2;
        norm_ = normalize(p_, x1_, x2_, t_);
        window_ = slice_window(p_, t_);
    }

    double density(double y1, double y2) const {
        TermEval ev = evaluate_terms(p_, {x1_, y1, x2_, y2, t_});
        return norm_ * norm_ * std::exp(2.0 * ev.offset) * std::norm(ev.sum);
    }

    double window() const { return window_; }
    double norm() const { return norm_; }
    double time() const { return t_; }
    const ExperimentParams& params() const { return p_; }

    // initial panel count resolving the fringe oscillation; a panel wider than
    // half a fringe can alias it and fool the local error estimate
    int quad_panels(double a, double b) const {
        double fringe = std::numbers::pi * p_.hbar * t_ / (p_.slit_y * p_.mass);
        if (!(fringe > 0.0)) return 16;
        double n = std::ceil((b - a) / (0.5 * fringe));
        return std::clamp(static_cast<int>(n), 16, 256);
    }

    // probability mass of the rectangle [a1,b1] x [a2,b2]
    double region_probability(double a1, double b1, double a2, double b2,
                              double abs_tol = 1e-10) const {
        return adaptive_simpson_2d([&](double y1, double y2) { return density(y1, y2); },
                                   a1, b1, a2, b2, abs_tol, quad_panels(a1, b1),
                                   quad_panels(a2, b2));
    }

    // probability of simultaneous detection in delta-sized cells at (yM, yN)
    double joint_probability(double yM, double yN, double delta) const {
        return region_probability(yM, yM + delta, yN, yN + delta);
    }

    double marginal_s1(double y1, double abs_tol = 1e-11) const {
        return adaptive_simpson([&](double y2) { return density(y1, y2); },
                                -window_, window_, abs_tol,
                                std::max(32, quad_panels(-window_, window_)));
    }

    double same_side_probability() const {
        return region_probability(0.0, window_, 0.0, window_) +
               region_probability(-window_, 0.0, -window_, 0.0);
    }

    double side_mass(FilterSide side) const {
        return side == FilterSide::upper ? region_probability(0.0, window_, -window_, window_)
                                         : region_probability(-window_, 0.0, -window_, window_);
    }

  private:
    ExperimentParams p_;
    double t_;
    double x1_, x2_;
    double norm_;
    double window_;
};

// Cell probabilities of the joint density on an n x n grid, row-major in
// (i: y1 bin, j: y2 bin).
inline std::vector<double> sqm_joint_grid(const ScreenSlice& slice, double lo, double hi, int n) {
    std::vector<double> grid(static_cast<size_t>(n) * n, 0.0);
    double w = (hi - lo) / n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            grid[static_cast<size_t>(i) * n + j] =
                slice.region_probability(lo + i * w, lo + (i + 1) * w, lo + j * w, lo + (j + 1) * w);
    return grid;
}

// A binned density curve (values, not counts).
struct DensityProfile {
    double lo = 0.0;
    double hi = 1.0;
    int nbins = 2;
    std::vector<double> values;

    double bin_width() const { return (hi - lo) / nbins; }
    double bin_center(int i) const { return lo + (i + 0.5) * bin_width(); }
};

// Conditional density of y2 given that y1 landed on the filter side.
inline DensityProfile sqm_conditional_s2_density(const ScreenSlice& slice,
                                                 const SelectiveFilter& filter,
                                                 double lo, double hi, int nbins) {
    double w = slice.window();
    double a1 = filter.keep_side_s1 == FilterSide::upper ? 0.0 : -w;
    double b1 = filter.keep_side_s1 == FilterSide::upper ? w : 0.0;
    double side = slice.region_probability(a1, b1, -w, w);
    if (!(side > 0.0)) throw QuadratureFailure("conditioning side has no probability mass");

    DensityProfile prof{lo, hi, nbins, std::vector<double>(nbins, 0.0)};
    double bw = prof.bin_width();
    for (int j = 0; j < nbins; ++j) {
        double mass = slice.region_probability(a1, b1, lo + j * bw, lo + (j + 1) * bw, 1e-12);
        prof.values[j] = mass / (side * bw);
    }
    return prof;
}

struct EnsembleResult {
    std::vector<DetectionEvent> events;
    std::int64_t requested = 0;
    std::int64_t node_aborted = 0;
    std::int64_t step_limited = 0;
    std::int64_t sampler_failed = 0;
    double acceptance_rate = 0.0;
};

// Full BQM Monte Carlo: Born-rule initial conditions integrated to the common
// ballistic arrival time. Event i depends only on (seed, i), so results are
// identical for any worker count; failed pairs are counted, never silently
// dropped.
inline EnsembleResult bqm_ensemble(const ExperimentParams& p, const SamplerSpec& spec,
                                   std::int64_t n_pairs, const IntegratorSettings& settings,
                                   int workers = 1) {
    PairSampler sampler(p, spec, 0.0);
    double t_arrive = p.arrival_time();

    enum class Tag : char { ok, node, steps, sampler };
    std::vector<DetectionEvent> slots(n_pairs);
    std::vector<Tag> tags(n_pairs, Tag::ok);

    parallel_for(n_pairs, workers, [&](std::int64_t i) {
        try {
            PairConfiguration start = sampler.sample(i);
            Trajectory traj = integrate_pair(p, start, t_arrive, settings);
            const PairConfiguration& last = traj.samples.back();
            slots[i] = {last.y1, last.y2, t_arrive, i};
        } catch (const NodeEncounter&) {
            tags[i] = Tag::node;
        } catch (const StepLimitExceeded&) {
            tags[i] = Tag::steps;
        } catch (const RejectionOverflow&) {
            tags[i] = Tag::sampler;
        }
    });

    EnsembleResult res;
    res.requested = n_pairs;
    res.acceptance_rate = sampler.acceptance_rate();
    res.events.reserve(n_pairs);
    for (std::int64_t i = 0; i < n_pairs; ++i) {
        switch (tags[i]) {
            case Tag::ok: res.events.push_back(slots[i]); break;
            case Tag::node: ++res.node_aborted; break;
            case Tag::steps: ++res.step_limited; break;
            case Tag::sampler: ++res.sampler_failed; break;
        }
    }
    return res;
}

struct SelectionResult {
    std::vector<DetectionEvent> kept;
    std::int64_t ties = 0;
};

// Keep events whose S1 hit lies strictly on the filter side; axis ties are
// dropped and counted.
inline SelectionResult apply_selective_detection(const std::vector<DetectionEvent>& events,
                                                 const SelectiveFilter& filter) {
    SelectionResult r;
    for (const auto& e : events) {
        if (e.y_s1 == 0.0) {
            ++r.ties;
        } else if ((filter.keep_side_s1 == FilterSide::upper) == (e.y_s1 > 0.0)) {
            r.kept.push_back(e);
        }
    }
    return r;
}

struct FringeAnalysis {
    double mean_spacing = 0.0;
    std::vector<double> peak_positions;
};

// Expected spacing between neighboring interference maxima.
inline double fringe_formula(const ExperimentParams& p, double t) {
    return std::numbers::pi * p.hbar * t / (p.slit_y * p.mass);
}

namespace detail {

inline FringeAnalysis fringes_from_values(const std::vector<double>& v, double lo, double bw,
                                          double prominence_frac) {
    int n = static_cast<int>(v.size());
    double vmax = 0.0;
    for (double x : v) vmax = std::max(vmax, x);
    FringeAnalysis out;
    for (int i = 1; i + 1 < n; ++i) {
        if (!(v[i] > v[i - 1] && v[i] > v[i + 1])) continue;
        // prominence: drop to the lowest saddle before higher terrain or edge
        double left_min = v[i], right_min = v[i];
        for (int j = i - 1; j >= 0 && v[j] < v[i]; --j) left_min = std::min(left_min, v[j]);
        for (int j = i + 1; j < n && v[j] < v[i]; ++j) right_min = std::min(right_min, v[j]);
        double prominence = v[i] - std::max(left_min, right_min);
        if (prominence < prominence_frac * vmax) continue;
        double denom = v[i - 1] - 2.0 * v[i] + v[i + 1];
        double shift = denom != 0.0 ? 0.5 * (v[i - 1] - v[i + 1]) / denom : 0.0;
        out.peak_positions.push_back(lo + (i + 0.5 + shift) * bw);
    }
    if (out.peak_positions.size() < 2) throw NoFringesDetected();
    out.mean_spacing = (out.peak_positions.back() - out.peak_positions.front()) /
                       (out.peak_positions.size() - 1);
    return out;
}

}  // namespace detail

inline FringeAnalysis fringe_spacing(const Histogram& h, double prominence_frac = 0.05) {
    std::vector<double> v(h.counts.begin(), h.counts.end());
    return detail::fringes_from_values(v, h.lo, h.bin_width(), prominence_frac);
}

inline FringeAnalysis fringe_spacing(const DensityProfile& prof, double prominence_frac = 0.05) {
    return detail::fringes_from_values(prof.values, prof.lo, prof.bin_width(), prominence_frac);
}

}  // namespace twinslit
