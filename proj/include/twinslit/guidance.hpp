#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "twinslit/errors.hpp"
#include "twinslit/params.hpp"
#include "twinslit/wavefunction.hpp"

namespace twinslit {

struct VelocityPair {
    double vy1 = 0.0;
    double vy2 = 0.0;
};

struct Trajectory {
    std::vector<PairConfiguration> samples;
    std::vector<VelocityPair> velocities;  // one per sample; NaN if unavailable
    double y0 = 0.0;                       // initial center-of-mass ordinate
};

// Closed-form transverse velocities from the term-wise log-derivatives.
inline VelocityPair velocity_y(const ExperimentParams& p, const PairConfiguration& c) {
    TermEval ev = evaluate_terms(p, c);
    if (ev.is_node()) throw NodeSingularity(std::abs(ev.sum), ev.abs_sum);

    std::array<ComplexAmplitude, 4> f1 = {
        slit_wave_dy_log(p, Slit::A, c.y1, c.t), slit_wave_dy_log(p, Slit::Bprime, c.y1, c.t),
        slit_wave_dy_log(p, Slit::B, c.y1, c.t), slit_wave_dy_log(p, Slit::Aprime, c.y1, c.t)};
    std::array<ComplexAmplitude, 4> f2 = {
        slit_wave_dy_log(p, Slit::Bprime, c.y2, c.t), slit_wave_dy_log(p, Slit::A, c.y2, c.t),
        slit_wave_dy_log(p, Slit::Aprime, c.y2, c.t), slit_wave_dy_log(p, Slit::B, c.y2, c.t)};

    ComplexAmplitude num1{}, num2{};
    for (int i = 0; i < 4; ++i) {
        num1 += ev.term[i] * f1[i];
        num2 += ev.term[i] * f2[i];
    }
    double scale = p.hbar / p.mass;
    return {scale * std::imag(num1 / ev.sum), scale * std::imag(num2 / ev.sum)};
}

namespace detail {

inline double stencil_phase(const ExperimentParams& p, const PairConfiguration& c) {
    TermEval ev = evaluate_terms(p, c);
    if (ev.is_node()) throw NodeSingularity(std::abs(ev.sum), ev.abs_sum);
    return std::arg(ev.sum);  // the exp(offset) prefactor is real positive
}

inline double phase_delta(double from, double to) {
    double d = to - from;
    while (d > std::numbers::pi) d -= 2.0 * std::numbers::pi;
    while (d < -std::numbers::pi) d += 2.0 * std::numbers::pi;
    if (std::abs(d) > 0.5 * std::numbers::pi) throw PhaseUnwrapFailure(d);
    return d;
}

}  // namespace detail

// Finite-difference oracle: central differences on the unwrapped phase.
inline VelocityPair velocity_via_phase(const ExperimentParams& p, const PairConfiguration& c,
                                       double h) {
    double phi0 = detail::stencil_phase(p, c);
    auto grad = [&](PairConfiguration plus, PairConfiguration minus) {
        double dp = detail::phase_delta(phi0, detail::stencil_phase(p, plus));
        double dm = detail::phase_delta(detail::stencil_phase(p, minus), phi0);
        return (dp + dm) / (2.0 * h);
    };
    PairConfiguration y1p = c, y1m = c, y2p = c, y2m = c;
    y1p.y1 += h;
    y1m.y1 -= h;
    y2p.y2 += h;
    y2m.y2 -= h;
    double scale = p.hbar / p.mass;
    return {scale * grad(y1p, y1m), scale * grad(y2p, y2m)};
}

inline double com_velocity(const ExperimentParams& p, const PairConfiguration& c) {
    VelocityPair v = velocity_y(p, c);
    return 0.5 * (v.vy1 + v.vy2);
}

// Exact center-of-mass velocity field: a^2 t y / (1 + a^2 t^2), a = spread rate.
inline double com_velocity_closed(const ExperimentParams& p, double y, double t) {
    double a = p.spread_rate();
    return a * a * t * y / (1.0 + a * a * t * t);
}

inline double com_path(const ExperimentParams& p, double y0, double t) {
    double at = p.spread_rate() * t;
    return y0 * std::sqrt(1.0 + at * at);
}

// Plane-wave x-motion: particle 1 rightward from +d, particle 2 leftward from -d.
inline std::pair<double, double> ballistic_x(const ExperimentParams& p, double t) {
    double x = p.slit_x + p.group_velocity_x() * t;
    return {x, -x};
}

}  // namespace twinslit
