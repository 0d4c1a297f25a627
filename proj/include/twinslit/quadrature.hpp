#pragma once

#include <cmath>
#include <functional>
#include <limits>

#include "twinslit/errors.hpp"

namespace twinslit {

namespace detail {

template <class F>
double adaptive_simpson_rec(const F& f, double a, double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
    if (depth <= 0) throw QuadratureFailure("adaptive Simpson depth exhausted");
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double h6 = (b - a) / 12.0;
    double left = h6 * (fa + 4.0 * flm + fm);
    double right = h6 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    // roundoff floor: below eps * panel mass no further refinement can help
    double floor_tol = std::numeric_limits<double>::epsilon() * (std::abs(left) + std::abs(right));
    if (std::abs(delta) <= 15.0 * std::max(tol, floor_tol)) return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson on [a,b] with absolute tolerance. The interval is pre-split
// into init_panels segments so oscillatory integrands cannot fool the first
// error estimate.
template <class F>
double adaptive_simpson(const F& f, double a, double b, double abs_tol,
                        int init_panels = 16, int max_depth = 48) {
    if (!(b > a)) return 0.0;
    double total = 0.0;
    double w = (b - a) / init_panels;
    double tol = abs_tol / init_panels;
    for (int i = 0; i < init_panels; ++i) {
        double pa = a + i * w;
        double pb = (i + 1 == init_panels) ? b : pa + w;
        double pm = 0.5 * (pa + pb);
        double fa = f(pa), fm = f(pm), fb = f(pb);
        double whole = (pb - pa) / 6.0 * (fa + 4.0 * fm + fb);
        total += detail::adaptive_simpson_rec(f, pa, pb, fa, fm, fb, whole, tol, max_depth);
    }
    return total;
}

// Nested 2-D version over [ax,bx] x [ay,by]; f(x, y). Panel counts may differ
// per axis so a narrow strip does not inherit the long axis' oscillation count.
template <class F>
double adaptive_simpson_2d(const F& f, double ax, double bx, double ay, double by,
                           double abs_tol, int init_panels_x = 16, int init_panels_y = -1,
                           int max_depth = 48) {
    if (init_panels_y < 1) init_panels_y = init_panels_x;
    // keep the inner budget well under the outer one: the inner quadrature
    // error acts as noise the outer refinement could otherwise chase forever
    double inner_tol = 0.1 * abs_tol / std::max(by - ay, 1e-300);
    auto inner = [&](double y) {
        return adaptive_simpson([&](double x) { return f(x, y); }, ax, bx, inner_tol,
                                init_panels_x, max_depth);
    };
    return adaptive_simpson(inner, ay, by, 0.9 * abs_tol, init_panels_y, max_depth);
}

}  // namespace twinslit
