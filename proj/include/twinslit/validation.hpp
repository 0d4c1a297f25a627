#pragma once

#include <cmath>
#include <complex>
#include <cstdio>
#include <string>
#include <vector>

#include "twinslit/detection.hpp"
#include "twinslit/guidance.hpp"
#include "twinslit/integrator.hpp"
#include "twinslit/quantum_potential.hpp"
#include "twinslit/rng.hpp"
#include "twinslit/sampler.hpp"
#include "twinslit/wavefunction.hpp"

namespace twinslit {

struct ValidationReport {
    std::vector<std::string> lines;
    int failed = 0;

    void check(const std::string& name, bool ok, const std::string& detail = "") {
        lines.push_back(std::string(ok ? "PASS " : "FAIL ") + name +
                        (detail.empty() ? "" : " (" + detail + ")"));
        if (!ok) ++failed;
    }
};

namespace detail {

// Random nonsingular configuration inside the populated region of the slice.
inline PairConfiguration random_config(const ExperimentParams& p, PhiloxStream& rng) {
    double yr = p.slit_y + 2.0 * p.sigma0;
    double tmax = p.arrival_time();
    for (int tries = 0; tries < 100; ++tries) {
        PairConfiguration c{rng.uniform(-p.screen_dist, p.screen_dist),
                            rng.uniform(-yr, yr),
                            rng.uniform(-p.screen_dist, p.screen_dist),
                            rng.uniform(-yr, yr),
                            rng.uniform(0.0, tmax)};
        TermEval ev = evaluate_terms(p, c);
        if (std::abs(ev.sum) > 1e-6 * ev.abs_sum) return c;
    }
    return {0.1, 0.2, -0.1, -0.3, 0.0};
}

inline std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

}  // namespace detail

// Fast invariant suite behind the `validate` subcommand.
inline ValidationReport run_validation(ExperimentParams p) {
    ValidationReport rep;
    p.validate();
    double vscale = p.hbar / p.mass * (p.ky + 1.0 / p.sigma0);

    for (Statistics st : {Statistics::bosonic, Statistics::fermionic}) {
        ExperimentParams q = p;
        q.statistics = st;
        double stat = statistics_sign(st);
        PhiloxStream rng(2024, st == Statistics::bosonic ? 0 : 1);
        double worst_exchange = 0.0, worst_reflect = 0.0, worst_anti = 0.0;
        for (int i = 0; i < 200; ++i) {
            PairConfiguration c = detail::random_config(q, rng);
            ComplexAmplitude psi = total_wavefunction(q, c);
            ComplexAmplitude swapped = total_wavefunction(q, {c.x2, c.y2, c.x1, c.y1, c.t});
            worst_exchange = std::max(worst_exchange, std::abs(psi - stat * swapped) / std::abs(psi));
            ComplexAmplitude mirrored = total_wavefunction(q, {c.x1, -c.y1, c.x2, -c.y2, c.t});
            worst_reflect = std::max(worst_reflect, std::abs(psi - mirrored) / std::abs(psi));
            VelocityPair v = velocity_y(q, c);
            VelocityPair vm = velocity_y(q, {c.x1, -c.y1, c.x2, -c.y2, c.t});
            double scale = std::max({std::abs(v.vy1), std::abs(v.vy2), vscale});
            worst_anti = std::max(worst_anti, std::abs(v.vy1 + vm.vy1) / scale);
            worst_anti = std::max(worst_anti, std::abs(v.vy2 + vm.vy2) / scale);
        }
        std::string tag = st == Statistics::bosonic ? "bosonic" : "fermionic";
        rep.check("exchange symmetry (" + tag + ")", worst_exchange <= 1e-12,
                  "worst " + detail::sci(worst_exchange));
        rep.check("reflection symmetry (" + tag + ")", worst_reflect <= 1e-12,
                  "worst " + detail::sci(worst_reflect));
        rep.check("velocity antisymmetry (" + tag + ")", worst_anti <= 1e-12,
                  "worst " + detail::sci(worst_anti));
    }

    {
        PhiloxStream rng(7, 0);
        double worst = 0.0;
        double h = 1e-5 * p.sigma0;
        for (int i = 0; i < 20; ++i) {
            PairConfiguration c = detail::random_config(p, rng);
            VelocityPair v = velocity_y(p, c);
            VelocityPair f = velocity_via_phase(p, c, h);
            double scale = std::max({std::abs(v.vy1), std::abs(v.vy2), 1e-3 * vscale});
            worst = std::max(worst, std::abs(v.vy1 - f.vy1) / scale);
            worst = std::max(worst, std::abs(v.vy2 - f.vy2) / scale);
        }
        rep.check("guidance law vs phase-gradient oracle", worst <= 1e-6,
                  "worst " + detail::sci(worst));
    }

    {
        PhiloxStream rng(8, 0);
        double worst = 0.0;
        for (int i = 0; i < 50; ++i) {
            PairConfiguration c = detail::random_config(p, rng);
            double com = com_velocity(p, c);
            double closed = com_velocity_closed(p, 0.5 * (c.y1 + c.y2), c.t);
            worst = std::max(worst, std::abs(com - closed) / std::max(std::abs(closed), 1e-3 * vscale));
        }
        rep.check("center-of-mass velocity closed form", worst <= 1e-9,
                  "worst " + detail::sci(worst));
    }

    {
        double tmax = p.arrival_time();
        double dt = 1e-4 * std::max(tmax, p.sigma0 * p.sigma0 * p.mass / p.hbar);
        double worst = 0.0, worst_zero = 0.0;
        for (double y0 : {0.3 * p.sigma0, p.sigma0}) {
            for (double t : {0.1 * tmax, 0.5 * tmax, tmax}) {
                double acc = (com_path(p, y0, t + dt) - 2.0 * com_path(p, y0, t) +
                              com_path(p, y0, t - dt)) / (dt * dt);
                double force = quantum_force_cm(p, y0, t);
                worst = std::max(worst, std::abs(p.mass * acc - force) / std::abs(force));
                worst_zero = std::max(worst_zero, std::abs(q_cm(p, 0.0, t)));
            }
        }
        rep.check("quantum force equals m d2/dt2 of spreading path", worst <= 1e-6,
                  "worst " + detail::sci(worst));
        rep.check("center-of-mass quantum potential vanishes at y0=0", worst_zero == 0.0);
    }

    {
        IntegratorSettings s;
        double t_end = p.arrival_time();
        Trajectory mirror = integrate_pair(p, {p.slit_x, 0.5 * p.sigma0, -p.slit_x,
                                               -0.5 * p.sigma0, 0.0}, t_end, s);
        double worst_com = 0.0;
        bool sign_ok = true;
        for (const auto& c : mirror.samples) {
            worst_com = std::max(worst_com, std::abs(0.5 * (c.y1 + c.y2)));
            if (c.y1 <= 0.0 || c.y2 >= 0.0) sign_ok = false;
        }
        rep.check("pinned pair stays mirror-symmetric", worst_com <= 1e-8 * p.sigma0,
                  "worst com " + detail::sci(worst_com));
        rep.check("no axis crossing for mirror pair", sign_ok);

        Trajectory off = integrate_pair(p, {p.slit_x, 0.3 * p.sigma0, -p.slit_x,
                                            1.1 * p.sigma0, 0.0}, t_end, s);
        double worst_path = 0.0;
        for (const auto& c : off.samples) {
            double expect = com_path(p, off.y0, c.t);
            worst_path = std::max(worst_path, std::abs(0.5 * (c.y1 + c.y2) - expect));
        }
        rep.check("integrated center of mass follows spreading law",
                  worst_path <= 1e-6 * std::abs(off.y0), "worst " + detail::sci(worst_path));
    }

    {
        SamplerSpec spec;
        spec.seed = 99;
        PairSampler a(p, spec, 0.0), b(p, spec, 0.0);
        PairConfiguration sa = a.sample(7), sb = b.sample(7);
        rep.check("sampler stream is deterministic",
                  sa.y1 == sb.y1 && sa.y2 == sb.y2 && sa.y1 + sa.y2 == 0.0);
    }

    {
        ScreenSlice slice(p, p.arrival_time());
        double w = slice.window();
        double mass = slice.region_probability(-w, w, -w, w, 1e-9);
        rep.check("screen slice density integrates to one", std::abs(mass - 1.0) <= 1e-6,
                  "mass " + detail::sci(mass));
    }

    return rep;
}

}  // namespace twinslit
