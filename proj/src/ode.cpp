#include "parmod/ode.hpp"

#include <algorithm>
#include <cmath>

namespace parmod {

namespace {

// Dormand-Prince 5(4) tableau.
const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
const double a21 = 1.0 / 5;
const double a31 = 3.0 / 40, a32 = 9.0 / 40;
const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
             a54 = -212.0 / 729;
const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
             a64 = 49.0 / 176, a65 = -5103.0 / 18656;
const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
             b5 = -2187.0 / 6784, b6 = 11.0 / 84;
const double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695, e4 = 393.0 / 640,
             e5 = -92097.0 / 339200, e6 = 187.0 / 2100, e7 = 1.0 / 40;

} // namespace

cplx integrate_ode(const OdeRhs& f, double t0, double t1, cplx y0, const OdeOptions& opts) {
    if (t0 == t1) return y0;
    const double dir = t1 > t0 ? 1.0 : -1.0;
    double t = t0;
    cplx y = y0;
    double h = std::min(std::abs(opts.initial_step), std::abs(t1 - t0)) * dir;
    cplx k1 = f(t, y);
    std::size_t steps = 0;
    while (dir * (t1 - t) > 0.0) {
        if (++steps > opts.max_steps) throw NoConvergence("ODE step budget exhausted");
        if (dir * (t + h - t1) > 0.0) h = t1 - t;
        const cplx k2 = f(t + c2 * h, y + h * (a21 * k1));
        const cplx k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
        const cplx k4 = f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const cplx k5 = f(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const cplx k6 = f(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const cplx y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const cplx k7 = f(t + h, y5);
        const cplx y4 = y + h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const double sc = opts.abs_tol + opts.rel_tol * std::max(std::abs(y), std::abs(y5));
        const double err = std::abs(y5 - y4) / sc;
        if (err <= 1.0) {
            t += h;
            y = y5;
            k1 = k7; // FSAL
            if (!is_finite(y)) throw NoConvergence("ODE state became non-finite");
        }
        double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
        fac = std::clamp(fac, 0.2, 5.0);
        h *= fac;
        if (std::abs(h) < 1e-15 * std::max(1.0, std::abs(t)))
            throw NoConvergence("ODE step size underflow");
    }
    return y;
}

} // namespace parmod
