#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "twinslit/errors.hpp"
#include "twinslit/guidance.hpp"
#include "twinslit/params.hpp"

namespace twinslit {

enum class Scheme { rk4_fixed, rk45_adaptive };

struct IntegratorSettings {
    double dt_init = 1e-3;
    double tol_rel = 1e-9;
    double tol_abs = 1e-12;
    long max_steps = 1000000;
    Scheme scheme = Scheme::rk45_adaptive;
};

namespace detail {

using State = std::array<double, 2>;  // (y1, y2)

inline State field(const ExperimentParams& p, double t, const State& y) {
    auto [x1, x2] = ballistic_x(p, std::max(t, 0.0));
    VelocityPair v = velocity_y(p, {x1, y[0], x2, y[1], std::max(t, 0.0)});
    return {v.vy1, v.vy2};
}

// Dormand-Prince 5(4) coefficients.
struct Dopri {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                            e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                            e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
};

}  // namespace detail

// Advance one pair under the transverse guidance field with ballistic x.
// Nodes trigger step halving; a step that cannot shrink further aborts the
// pair with NodeEncounter.
inline Trajectory integrate_pair(const ExperimentParams& p, const PairConfiguration& initial,
                                 double t_end, const IntegratorSettings& s) {
    using detail::State;
    double t = initial.t;
    State y = {initial.y1, initial.y2};
    Trajectory traj;
    traj.y0 = 0.5 * (y[0] + y[1]);

    auto record = [&](double tt, const State& yy, const State& vv) {
        auto [x1, x2] = ballistic_x(p, tt);
        traj.samples.push_back({x1, yy[0], x2, yy[1], tt});
        traj.velocities.push_back({vv[0], vv[1]});
    };

    const double dt_min = 1e-14 * std::max(1.0, t_end);
    double dt = std::min(s.dt_init, t_end - t);
    long steps = 0;

    if (s.scheme == Scheme::rk4_fixed) {
        long n = std::max(1L, (long)std::ceil((t_end - t) / s.dt_init));
        double h = (t_end - t) / n;
        for (long i = 0; i < n; ++i) {
            if (++steps > s.max_steps) throw StepLimitExceeded(s.max_steps);
            State k1, k2, k3, k4;
            try {
                k1 = detail::field(p, t, y);
                k2 = detail::field(p, t + 0.5 * h, {y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]});
                k3 = detail::field(p, t + 0.5 * h, {y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]});
                k4 = detail::field(p, t + h, {y[0] + h * k3[0], y[1] + h * k3[1]});
            } catch (const NodeSingularity&) {
                throw NodeEncounter(t, y[0], y[1]);
            }
            record(t, y, k1);
            for (int j = 0; j < 2; ++j)
                y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
            t = initial.t + (i + 1) * h;
        }
        t = t_end;
        State vend{std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
        try {
            vend = detail::field(p, t, y);
        } catch (const NodeSingularity&) {
        }
        record(t, y, vend);
        return traj;
    }

    using D = detail::Dopri;
    while (t < t_end) {
        if (++steps > s.max_steps) throw StepLimitExceeded(s.max_steps);
        dt = std::min(dt, t_end - t);
        State k1, k2, k3, k4, k5, k6, k7, ynew;
        bool node_hit = false;
        double err = 0.0;
        try {
            k1 = detail::field(p, t, y);
            auto at = [&](double c, auto... terms) {
                State z = y;
                ((z[0] += dt * terms.first * terms.second[0],
                  z[1] += dt * terms.first * terms.second[1]),
                 ...);
                return detail::field(p, t + c * dt, z);
            };
            k2 = at(D::c2, std::pair{D::a21, k1});
            k3 = at(D::c3, std::pair{D::a31, k1}, std::pair{D::a32, k2});
            k4 = at(D::c4, std::pair{D::a41, k1}, std::pair{D::a42, k2}, std::pair{D::a43, k3});
            k5 = at(D::c5, std::pair{D::a51, k1}, std::pair{D::a52, k2}, std::pair{D::a53, k3},
                    std::pair{D::a54, k4});
            k6 = at(1.0, std::pair{D::a61, k1}, std::pair{D::a62, k2}, std::pair{D::a63, k3},
                    std::pair{D::a64, k4}, std::pair{D::a65, k5});
            for (int j = 0; j < 2; ++j)
                ynew[j] = y[j] + dt * (D::b1 * k1[j] + D::b3 * k3[j] + D::b4 * k4[j] +
                                       D::b5 * k5[j] + D::b6 * k6[j]);
            k7 = detail::field(p, t + dt, ynew);
            for (int j = 0; j < 2; ++j) {
                double e = dt * (D::e1 * k1[j] + D::e3 * k3[j] + D::e4 * k4[j] + D::e5 * k5[j] +
                                 D::e6 * k6[j] + D::e7 * k7[j]);
                double sc = s.tol_abs + s.tol_rel * std::max(std::abs(y[j]), std::abs(ynew[j]));
                err = std::max(err, std::abs(e) / sc);
            }
        } catch (const NodeSingularity&) {
            node_hit = true;
        }
        if (node_hit || err > 1.0) {
            double shrink = node_hit ? 0.5 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 0.9);
            dt *= shrink;
            if (dt < dt_min) throw NodeEncounter(t, y[0], y[1]);
            continue;
        }
        record(t, y, k1);
        y = ynew;
        t += dt;
        double grow = (err > 0.0) ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0) : 5.0;
        dt *= grow;
    }
    State vend{std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
    try {
        vend = detail::field(p, t_end, y);
    } catch (const NodeSingularity&) {
    }
    record(t_end, y, vend);
    return traj;
}

}  // namespace twinslit
