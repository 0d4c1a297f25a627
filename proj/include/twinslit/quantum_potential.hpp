#pragma once

#include <cmath>

#include "twinslit/errors.hpp"
#include "twinslit/params.hpp"
#include "twinslit/wavefunction.hpp"

namespace twinslit {

struct PotentialSample {
    double q = 0.0;
    double force_y = 0.0;
    PairConfiguration location;
};

// Effective quantum potential of the center-of-mass coordinate, closed form.
inline double q_cm(const ExperimentParams& p, double y0, double t) {
    double a = p.spread_rate();
    return 0.5 * p.mass * y0 * y0 * a * a / (1.0 + a * a * t * t);
}

// Quantum force on the center of mass, equal to m times the second time
// derivative of the spreading path.
inline double quantum_force_cm(const ExperimentParams& p, double y0, double t) {
    double a = p.spread_rate();
    double g = 1.0 + a * a * t * t;
    return p.mass * y0 * a * a / (g * std::sqrt(g));
}

// General quantum potential -(hbar^2/2m) Lap R / R with the Laplacian over all
// four coordinates, by central differences on any log-modulus field. Working
// on the modulus relative to the center point keeps large log-offsets out of
// the arithmetic.
template <class LogR>
double q_numeric_field(const ExperimentParams& p, const LogR& log_r, const PairConfiguration& c,
                       double h) {
    double l0 = log_r(c);
    auto rel_modulus = [&](const PairConfiguration& at) { return std::exp(log_r(at) - l0); };
    auto second_diff = [&](double PairConfiguration::* coord) {
        PairConfiguration plus = c, minus = c;
        plus.*coord += h;
        minus.*coord -= h;
        return (rel_modulus(plus) - 2.0 + rel_modulus(minus)) / (h * h);
    };
    double lap = second_diff(&PairConfiguration::x1) + second_diff(&PairConfiguration::y1) +
                 second_diff(&PairConfiguration::x2) + second_diff(&PairConfiguration::y2);
    return -p.hbar * p.hbar / (2.0 * p.mass) * lap;
}

inline double q_numeric(const ExperimentParams& p, const PairConfiguration& c, double h) {
    auto log_r = [&](const PairConfiguration& at) {
        TermEval ev = evaluate_terms(p, at);
        if (ev.is_node()) throw NodeSingularity(std::abs(ev.sum), ev.abs_sum);
        return ev.log_modulus();
    };
    return q_numeric_field(p, log_r, c, h);
}

inline double q_numeric(const ExperimentParams& p, const PairConfiguration& c) {
    return q_numeric(p, c, p.sigma0 / 200.0);
}

}  // namespace twinslit
