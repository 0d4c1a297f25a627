#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "twinslit/errors.hpp"
#include "twinslit/params.hpp"
#include "twinslit/quadrature.hpp"

namespace twinslit {

using ComplexAmplitude = std::complex<double>;

enum class Slit { A, B, Aprime, Bprime };

// Relative cancellation floor below which the superposition is treated as a node.
inline constexpr double node_floor_rel = 1e-12;

// +1 for the upper-slit packets (centered +Y, drifting up), -1 for the lower ones.
inline double slit_y_sign(Slit s) {
    return (s == Slit::A || s == Slit::Aprime) ? +1.0 : -1.0;
}

// +1 for the right-moving packets emerging at x=+d, -1 for the left-moving at x=-d.
inline double slit_x_sign(Slit s) {
    return (s == Slit::A || s == Slit::B) ? +1.0 : -1.0;
}

// Complex packet width sigma0 (1 + i hbar t / 2 m sigma0^2).
inline ComplexAmplitude sigma_t(const ExperimentParams& p, double t) {
    return {p.sigma0, p.sigma0 * p.spread_rate() * t};
}

// Plane wave feeding the slits: a exp(i[kx(x1-x2)+ky(y1-y2)]) exp(-iEt/hbar).
inline ComplexAmplitude incident_wave(const ExperimentParams& p, const PairConfiguration& c) {
    double phase = p.kx * (c.x1 - c.x2) + p.ky * (c.y1 - c.y2) - p.total_energy() * c.t / p.hbar;
    return std::polar(p.amp, phase);
}

// log of the single-slit Gaussian packet at (x, y, t).
inline ComplexAmplitude slit_wave_log(const ExperimentParams& p, Slit s,
                                      double x, double y, double t) {
    double sy = slit_y_sign(s);
    double xs = slit_x_sign(s);
    ComplexAmplitude st = sigma_t(p, t);
    double uy = p.group_velocity_y();
    double arg = sy * y - p.slit_y - uy * t;
    ComplexAmplitude log_amp = std::log(ComplexAmplitude(p.amp)) -
                               0.25 * std::log(2.0 * std::numbers::pi * st * st) -
                               arg * arg / (4.0 * p.sigma0 * st);
    double phase = xs * p.kx * (x - xs * p.slit_x) +
                   p.ky * (sy * y - p.slit_y - 0.5 * uy * t) -
                   p.energy_x() * t / p.hbar;
    return log_amp + ComplexAmplitude(0.0, phase);
}

inline ComplexAmplitude slit_wave(const ExperimentParams& p, Slit s,
                                  double x, double y, double t) {
    return std::exp(slit_wave_log(p, s, x, y, t));
}

// d/dy of slit_wave_log; x-independent.
inline ComplexAmplitude slit_wave_dy_log(const ExperimentParams& p, Slit s,
                                         double y, double t) {
    double sy = slit_y_sign(s);
    ComplexAmplitude st = sigma_t(p, t);
    double arg = sy * y - p.slit_y - p.group_velocity_y() * t;
    return -sy * arg / (2.0 * p.sigma0 * st) + ComplexAmplitude(0.0, p.ky * sy);
}

// The four product terms of the entangled superposition, evaluated in scaled
// form: term_i = sign_i * exp(L_i - offset), with offset = max Re L_i so the
// largest term has unit magnitude.
struct TermEval {
    std::array<ComplexAmplitude, 4> term{};  // sign already applied
    double offset = 0.0;                     // log-magnitude shift
    ComplexAmplitude sum{};                  // sum of scaled signed terms
    double abs_sum = 0.0;                    // sum of scaled magnitudes

    bool is_node() const { return std::abs(sum) <= node_floor_rel * abs_sum; }
    // log |psi_unnormalized|
    double log_modulus() const { return offset + std::log(std::abs(sum)); }
};

inline TermEval evaluate_terms(const ExperimentParams& p, const PairConfiguration& c) {
    double stat = statistics_sign(p.statistics);
    std::array<ComplexAmplitude, 4> L = {
        slit_wave_log(p, Slit::A, c.x1, c.y1, c.t) + slit_wave_log(p, Slit::Bprime, c.x2, c.y2, c.t),
        slit_wave_log(p, Slit::A, c.x2, c.y2, c.t) + slit_wave_log(p, Slit::Bprime, c.x1, c.y1, c.t),
        slit_wave_log(p, Slit::B, c.x1, c.y1, c.t) + slit_wave_log(p, Slit::Aprime, c.x2, c.y2, c.t),
        slit_wave_log(p, Slit::B, c.x2, c.y2, c.t) + slit_wave_log(p, Slit::Aprime, c.x1, c.y1, c.t)};
    std::array<double, 4> sign = {1.0, stat, 1.0, stat};

    TermEval ev;
    ev.offset = L[0].real();
    for (int i = 1; i < 4; ++i) ev.offset = std::max(ev.offset, L[i].real());
    for (int i = 0; i < 4; ++i) {
        ComplexAmplitude scaled = std::exp(L[i] - ev.offset);
        ev.term[i] = sign[i] * scaled;
        ev.sum += ev.term[i];
        ev.abs_sum += std::abs(scaled);
    }
    return ev;
}

// Entangled two-particle wavefunction; norm defaults to 1 when not yet computed.
inline ComplexAmplitude total_wavefunction(const ExperimentParams& p, const PairConfiguration& c,
                                           double norm = 1.0) {
    TermEval ev = evaluate_terms(p, c);
    return norm * std::exp(ev.offset) * ev.sum;
}

// Half-width of the y-integration window on a time-t slice: packet centers
// plus eight complex-width moduli of tail.
inline double slice_window(const ExperimentParams& p, double t) {
    return p.slit_y + p.group_velocity_y() * t + 8.0 * std::abs(sigma_t(p, t));
}

// Normalization constant for the (x1, x2, t) slice: N such that the joint
// |N psi|^2 integrates to one over the window.
inline double normalize(const ExperimentParams& p, double x1, double x2, double t) {
    double w = slice_window(p, t);
    auto density = [&](double y1, double y2) {
        TermEval ev = evaluate_terms(p, {x1, y1, x2, y2, t});
        return std::exp(2.0 * ev.offset) * std::norm(ev.sum);
    };
    // coarse scale estimate to anchor the absolute tolerance
    const int n0 = 128;
    double h = 2.0 * w / n0;
    double crude = 0.0;
    for (int i = 0; i < n0; ++i)
        for (int j = 0; j < n0; ++j)
            crude += density(-w + (i + 0.5) * h, -w + (j + 0.5) * h);
    crude *= h * h;
    if (!(crude > 0.0)) throw QuadratureFailure("slice density vanishes over the window");

    double integral = adaptive_simpson_2d(density, -w, w, -w, w, 1e-9 * crude, 32);
    if (!(integral > 0.0) || !std::isfinite(integral))
        throw QuadratureFailure("slice norm integral is not finite and positive");
    return 1.0 / std::sqrt(integral);
}

}  // namespace twinslit
