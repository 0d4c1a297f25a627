#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "twinslit/guidance.hpp"
#include "twinslit/quantum_potential.hpp"
#include "twinslit/wavefunction.hpp"

using namespace twinslit;
using Catch::Approx;

namespace {

ExperimentParams small_params() {
    ExperimentParams p;
    p.sigma0 = 1.0;
    p.slit_y = 1.0;
    p.slit_x = 5.0;
    p.kx = 8.0;
    p.ky = 0.7;
    p.screen_dist = 10.0;
    return p;
}

}  // namespace

TEST_CASE("center-of-mass quantum potential closed form") {
    ExperimentParams p = small_params();
    for (double t : {0.0, 0.4, 2.0, 50.0}) CHECK(q_cm(p, 0.0, t) == 0.0);

    ExperimentParams q = small_params();
    q.hbar = 2.0;  // spread rate 1
    CHECK(q_cm(q, 1.0, 0.0) == Approx(0.5).epsilon(1e-15));

    SECTION("decays monotonically to zero in t") {
        double prev = q_cm(p, 1.0, 0.0);
        for (double t = 0.25; t <= 100.0; t += 0.25) {
            double v = q_cm(p, 1.0, t);
            REQUIRE(v < prev);
            prev = v;
        }
        CHECK(prev < 1e-3 * q_cm(p, 1.0, 0.0));
    }
}

TEST_CASE("quantum force identities") {
    ExperimentParams p = small_params();
    CHECK(quantum_force_cm(p, 0.0, 0.7) == 0.0);

    SECTION("equals m times the second time-derivative of the spreading path") {
        double dt = 5e-3;
        for (double y0 : {0.3, 1.0, 2.5}) {
            for (double t : {0.3, 1.0, 2.7}) {
                // five-point second difference keeps truncation below the tolerance
                double acc = (-com_path(p, y0, t - 2 * dt) + 16.0 * com_path(p, y0, t - dt) -
                              30.0 * com_path(p, y0, t) + 16.0 * com_path(p, y0, t + dt) -
                              com_path(p, y0, t + 2 * dt)) /
                             (12.0 * dt * dt);
                double force = quantum_force_cm(p, y0, t);
                REQUIRE(std::abs(p.mass * acc - force) <= 1e-8 * std::abs(force));
            }
        }
    }

    SECTION("both closed forms agree at the path point") {
        double a = p.spread_rate();
        for (double y0 : {0.4, 1.3}) {
            for (double t : {0.2, 1.5, 4.0}) {
                double y = com_path(p, y0, t);
                double alt = p.mass * std::pow(y0, 4) / (y * y * y) * a * a;
                REQUIRE(quantum_force_cm(p, y0, t) == Approx(alt).epsilon(1e-14));
            }
        }
    }

    SECTION("force is minus the slope of the potential along the path") {
        // as a function of y at fixed trajectory parameter y0, the effective
        // potential is m y0^4 a^2 / (2 y^2)
        double a = p.spread_rate();
        for (double y0 : {0.5, 1.2}) {
            for (double t : {0.4, 1.8}) {
                double y = com_path(p, y0, t);
                double h = 1e-5 * y;
                auto pot = [&](double yy) {
                    return 0.5 * p.mass * std::pow(y0, 4) * a * a / (yy * yy);
                };
                double slope = (pot(y + h) - pot(y - h)) / (2.0 * h);
                REQUIRE(std::abs(quantum_force_cm(p, y0, t) + slope) <=
                        1e-8 * std::abs(slope));
            }
        }
    }

    SECTION("potential plus kinetic energy of the spreading path is conserved") {
        double a = p.spread_rate();
        for (double y0 : {0.4, 1.7}) {
            double e0 = 0.5 * p.mass * y0 * y0 * a * a;
            for (double t : {0.0, 0.6, 2.2, 7.0}) {
                double at2 = a * a * t * t;
                double speed = y0 * a * a * t / std::sqrt(1.0 + at2);
                double e = q_cm(p, y0, t) + 0.5 * p.mass * speed * speed;
                REQUIRE(e == Approx(e0).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("finite-difference quantum potential") {
    ExperimentParams p = small_params();

    auto q_single_closed = [&](const PairConfiguration& c) {
        double s2 = std::norm(sigma_t(p, c.t));
        double beta = 1.0 / (4.0 * s2);
        double a1 = c.y1 - p.slit_y - p.group_velocity_y() * c.t;   // packet A argument
        double a2 = -c.y2 - p.slit_y - p.group_velocity_y() * c.t;  // packet B' argument
        double lap = (4.0 * beta * beta * a1 * a1 - 2.0 * beta) +
                     (4.0 * beta * beta * a2 * a2 - 2.0 * beta);
        return -p.hbar * p.hbar / (2.0 * p.mass) * lap;
    };

    SECTION("single product term matches the analytic Gaussian form") {
        // the same pipeline applied to a lone A(1)B'(2) product, whose modulus
        // is a pure two-Gaussian surface with a known Laplacian
        auto log_r = [&](const PairConfiguration& c) {
            return (slit_wave_log(p, Slit::A, c.x1, c.y1, c.t) +
                    slit_wave_log(p, Slit::Bprime, c.x2, c.y2, c.t))
                .real();
        };
        for (double t : {0.0, 0.3}) {
            PairConfiguration c{p.slit_x, p.slit_y + 0.3, -p.slit_x, -p.slit_y + 0.2, t};
            double qn = q_numeric_field(p, log_r, c, p.sigma0 / 200.0);
            REQUIRE(qn == Approx(q_single_closed(c)).epsilon(1e-4));
        }
    }

    SECTION("Richardson: halving h quarters the self-discrepancy") {
        PairConfiguration c{p.slit_x, p.slit_y + 0.4, -p.slit_x, -p.slit_y - 0.3, 0.2};
        double q1 = q_numeric(p, c, 4e-3);
        double q2 = q_numeric(p, c, 2e-3);
        double q3 = q_numeric(p, c, 1e-3);
        double ratio = (q1 - q2) / (q2 - q3);
        CHECK(ratio > 3.0);
        CHECK(ratio < 5.0);
    }

    SECTION("symmetric under y-reflection of both particles") {
        ExperimentParams q = small_params();
        for (double t : {0.1, 0.5}) {
            PairConfiguration c{3.0, 0.8, -3.0, -1.3, t};
            double a = q_numeric(q, c);
            double b = q_numeric(q, {c.x1, -c.y1, c.x2, -c.y2, c.t});
            REQUIRE(std::abs(a - b) <= 1e-12 * std::abs(a));
        }
    }

    SECTION("nodes are refused") {
        ExperimentParams q = small_params();
        q.statistics = Statistics::fermionic;
        CHECK_THROWS_AS(q_numeric(q, {1.3, 0.4, 1.3, 0.4, 0.2}), NodeSingularity);
    }
}
