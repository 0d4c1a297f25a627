#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>

#include "twinslit/errors.hpp"
#include "twinslit/guidance.hpp"
#include "twinslit/params.hpp"
#include "twinslit/rng.hpp"
#include "twinslit/wavefunction.hpp"

namespace twinslit {

enum class SamplerMode { pinned_com, spread_com, unconstrained };

struct SamplerSpec {
    SamplerMode mode = SamplerMode::pinned_com;
    double y0_mean = 0.0;
    double y0_sigma = 0.0;
    std::uint64_t seed = 12345;
    long max_rejects = 100000;

    void validate(const ExperimentParams& p) const {
        if (y0_sigma < 0.0) throw std::invalid_argument("sampler: y0_sigma must be >= 0");
        if (mode == SamplerMode::spread_com && !(y0_sigma < p.sigma0))
            throw std::invalid_argument("sampler: spread_com needs y0_sigma < sigma0");
        if (max_rejects < 1) throw std::invalid_argument("sampler: max_rejects must be >= 1");
    }
};

// Rejection sampler for initial pair positions on the t0 slice. Sample i is a
// pure function of (seed, i): workers may draw any index ranges concurrently.
class PairSampler {
  public:
    PairSampler(const ExperimentParams& params, const SamplerSpec& spec, double t0 = 0.0)
        : p_(params), spec_(spec), t0_(t0) {
        spec_.validate(p_);
        auto [x1, x2] = ballistic_x(p_, t0_);
        x1_ = x1;
        x2_ = x2;
        double w = slice_window(p_, t0_);
        if (spec_.mode == SamplerMode::unconstrained) {
            half_ = w;
            scan_envelope_joint();
        } else {
            half_ = w + 2.0 * (std::abs(spec_.y0_mean) + 6.0 * spec_.y0_sigma);
            scan_envelope_line();
        }
    }

    PairConfiguration sample(std::int64_t index) const {
        PhiloxStream rng(spec_.seed, static_cast<std::uint64_t>(index));
        double y0 = spec_.y0_mean;
        if (spec_.mode == SamplerMode::spread_com) y0 += spec_.y0_sigma * rng.normal();

        for (long k = 0; k < spec_.max_rejects; ++k) {
            attempts_.fetch_add(1, std::memory_order_relaxed);
            double y1 = rng.uniform(-half_, half_);
            double y2;
            double logp;
            if (spec_.mode == SamplerMode::unconstrained) {
                y2 = rng.uniform(-half_, half_);
                logp = log_density(y1, y2);
            } else {
                y2 = 2.0 * y0 - y1;
                logp = log_density(y1, y2);
            }
            if (logp > log_envelope_)
                throw EnvelopeViolation(std::exp(logp - log_envelope_));
            if (std::log(rng.uniform()) <= logp - log_envelope_) {
                accepts_.fetch_add(1, std::memory_order_relaxed);
                return {x1_, y1, x2_, y2, t0_};
            }
        }
        throw RejectionOverflow(spec_.max_rejects, acceptance_rate());
    }

    double acceptance_rate() const {
        std::int64_t a = attempts_.load(std::memory_order_relaxed);
        return a > 0 ? double(accepts_.load(std::memory_order_relaxed)) / double(a) : 0.0;
    }

    // log of the unnormalized joint density |psi|^2 on the slice
    double log_density(double y1, double y2) const {
        TermEval ev = evaluate_terms(p_, {x1_, y1, x2_, y2, t0_});
        if (ev.is_node()) return -std::numeric_limits<double>::infinity();
        return 2.0 * ev.log_modulus();
    }

    double proposal_half_width() const { return half_; }

  private:
    void scan_envelope_line() {
        const int n = 4096;
        double best = -std::numeric_limits<double>::infinity();
        double spread = 6.0 * spec_.y0_sigma;
        for (double y0 : {spec_.y0_mean - spread, spec_.y0_mean, spec_.y0_mean + spread}) {
            for (int i = 0; i <= n; ++i) {
                double y1 = -half_ + 2.0 * half_ * i / n;
                best = std::max(best, log_density(y1, 2.0 * y0 - y1));
            }
            if (spec_.y0_sigma == 0.0) break;
        }
        log_envelope_ = best + std::log(spec_.mode == SamplerMode::spread_com ? 4.0 : 1.5);
    }

    void scan_envelope_joint() {
        const int n = 256;
        double best = -std::numeric_limits<double>::infinity();
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j)
                best = std::max(best, log_density(-half_ + 2.0 * half_ * i / n,
                                                  -half_ + 2.0 * half_ * j / n));
        log_envelope_ = best + std::log(2.0);
    }

    ExperimentParams p_;
    SamplerSpec spec_;
    double t0_;
    double x1_ = 0.0, x2_ = 0.0;
    double half_ = 0.0;
    double log_envelope_ = 0.0;
    mutable std::atomic<std::int64_t> attempts_{0};
    mutable std::atomic<std::int64_t> accepts_{0};
};

}  // namespace twinslit
