#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace twinslit {

enum class Statistics { bosonic, fermionic };

inline double statistics_sign(Statistics s) {
    return s == Statistics::bosonic ? +1.0 : -1.0;
}

// All physical constants and geometry of the two-double-slit arrangement.
// Natural units hbar = m = 1 by default; everything is overridable.
struct ExperimentParams {
    double hbar = 1.0;
    double mass = 1.0;
    double sigma0 = 1.0;       // slit half-width
    double slit_y = 0.5;       // slit center offset from the x-axis
    double slit_x = 8.0;       // slit plane distance from the source
    double kx = 100.0;
    double ky = 6.25;
    double amp = 1.0;
    Statistics statistics = Statistics::bosonic;
    double screen_dist = 12.0;  // screen |x| position

    // Group velocities of the emerging packets.
    double group_velocity_x() const { return hbar * kx / mass; }
    double group_velocity_y() const { return hbar * ky / mass; }

    // Total energy of the incident two-particle plane wave.
    double total_energy() const { return hbar * hbar * (kx * kx + ky * ky) / mass; }

    // Per-particle kinetic energy of the x-motion.
    double energy_x() const { return 0.5 * mass * group_velocity_x() * group_velocity_x(); }

    double de_broglie_wavelength() const { return 2.0 * std::numbers::pi / kx; }

    // Packet spreading rate hbar/(2 m sigma0^2); sigma_t = sigma0 (1 + i t spread_rate).
    double spread_rate() const { return hbar / (2.0 * mass * sigma0 * sigma0); }

    // Ballistic screen-crossing time (screen_dist - slit_x)/u_x.
    double arrival_time() const { return (screen_dist - slit_x) / group_velocity_x(); }

    void validate() const {
        auto fail = [](const std::string& msg) { throw std::invalid_argument("params: " + msg); };
        if (!(hbar > 0.0)) fail("hbar must be > 0");
        if (!(mass > 0.0)) fail("mass must be > 0");
        if (!(sigma0 > 0.0)) fail("sigma0 must be > 0");
        if (!(slit_y > 0.0)) fail("slit_y must be > 0");
        if (!(slit_x >= 0.0)) fail("slit_x must be >= 0");
        if (!(kx > 0.0)) fail("kx must be > 0");
        if (!(ky >= 0.0)) fail("ky must be >= 0");
        if (!(amp > 0.0)) fail("amp must be > 0");
        if (!(screen_dist > slit_x)) fail("screen_dist must exceed slit_x");
    }
};

// Four-coordinate state of a particle pair at a moment in time.
struct PairConfiguration {
    double x1 = 0.0;
    double y1 = 0.0;
    double x2 = 0.0;
    double y2 = 0.0;
    double t = 0.0;
};

}  // namespace twinslit
