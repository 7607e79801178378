#include "parmod/model_chart.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace parmod {

namespace {

const double newton_tol = 1e-13;
const int newton_max_iter = 50;

// coth(w) without overflow for large |Re w|.
cplx coth_c(cplx w) {
    if (w.real() > 350.0) return 1.0 + 2.0 * std::exp(-2.0 * w);
    if (w.real() < -350.0) return -1.0 - 2.0 * std::exp(2.0 * w);
    const cplx e = expm1_c(2.0 * w);
    if (e == cplx(0.0, 0.0)) throw OnSingularity("coth: pole");
    return 1.0 + 2.0 / e;
}

// Residual reduced modulo the ambiguity of the principal-value chart. The
// two logs in chart_q are cut along different curves, so a principal value
// can differ from an analytic branch by k (pi i / sqrt(eps)) + m (pi i a)
// independently; the monodromy lattice j alpha0 + l alpha_inf is the index-2
// subgroup with k + m even, and reducing only by it strands the Newton
// iteration one half-step away whenever exactly one cut was crossed.
cplx reduce_mod_monodromy(cplx resid, const SectorPoint& eps, cplx a) {
    cplx best = resid;
    if (eps.zero()) {
        if (a == cplx(0.0, 0.0)) return resid;
        const cplx p = TWO_PI * I * a;
        for (int j = -3; j <= 3; ++j) {
            const cplx cand = resid - double(j) * p;
            if (std::abs(cand) < std::abs(best)) best = cand;
        }
        return best;
    }
    const cplx s = eps.sqrt_eps();
    const cplx v1 = PI * I / s;
    const cplx v2 = PI * I * a;
    for (int k = -3; k <= 3; ++k) {
        const cplx part = resid - double(k) * v1;
        if (a == cplx(0.0, 0.0)) {
            if (std::abs(part) < std::abs(best)) best = part;
            continue;
        }
        for (int m = -3; m <= 3; ++m) {
            const cplx cand = part - double(m) * v2;
            if (std::abs(cand) < std::abs(best)) best = cand;
        }
    }
    return best;
}

} // namespace

Periods periods_of(const SectorPoint& eps, cplx a) {
    if (eps.zero()) throw DomainError("periods_of: eps = 0");
    const cplx s = eps.sqrt_eps();
    Periods p;
    p.mu0 = -2.0 * s / (1.0 - a * s);
    p.mu_inf = 2.0 * s / (1.0 + a * s);
    p.alpha0 = TWO_PI * I / p.mu0;
    p.alpha_inf = -TWO_PI * I / p.mu_inf;
    p.hole_spacing = PI * I / s;
    p.C_bar = LogComplex::from_log(-TWO_PI * I * p.alpha0);
    p.C_tilde = LogComplex::from_log(TWO_PI * I * p.alpha_inf);
    p.beta_mult = LogComplex::from_log(-4.0 * PI * PI * a);
    return p;
}

StripSpec strips_for(const SectorPoint& eps, double Y0, double margin) {
    StripSpec s;
    s.Y0 = Y0;
    s.margin = margin;
    if (!eps.zero()) {
        const double arg_sqrt = eps.theta / 2.0;
        s.theta = 0.5 * (PI / 2.0 + arg_sqrt);
        s.slope = -std::tan(s.theta);
        s.vertical_height = std::abs(PI / std::sqrt(eps.r)) / 4.0;
        s.half_width = std::min(0.4, 1.0 / (2.0 * std::max(eps.r, 1e-6)));
    } else {
        s.theta = PI / 4.0;
        s.slope = -1.0;
        s.vertical_height = 0.0;
    }
    return s;
}

cplx chart_p(cplx z, const SectorPoint& eps) {
    checked(z, "chart_p input");
    if (eps.zero()) {
        if (z == cplx(0.0, 0.0)) throw OnSingularity("chart_p: z = 0 at eps = 0");
        return -1.0 / z;
    }
    const cplx s = eps.sqrt_eps();
    const cplx num = z - s, den = z + s;
    if (num == cplx(0.0, 0.0) || den == cplx(0.0, 0.0))
        throw OnSingularity("chart_p: z at a singular point");
    return std::log(num / den) / (2.0 * s);
}

cplx chart_p_inverse(cplx Z, const SectorPoint& eps) {
    checked(Z, "chart_p_inverse input");
    if (eps.zero()) {
        if (Z == cplx(0.0, 0.0)) throw OnSingularity("chart_p_inverse: Z = 0 at eps = 0");
        return -1.0 / Z;
    }
    const cplx s = eps.sqrt_eps();
    return checked(-s * coth_c(s * Z), "chart_p_inverse");
}

cplx chart_q(cplx z, const SectorPoint& eps, cplx a) {
    if (eps.zero()) {
        if (z == cplx(0.0, 0.0)) throw OnSingularity("chart_q: z = 0 at eps = 0");
        return -1.0 / z + a * std::log(z);
    }
    const cplx base = chart_p(z, eps);
    if (a == cplx(0.0, 0.0)) return base;
    return base + 0.5 * a * std::log(z * z - eps.value());
}

cplx chart_q_derivative(cplx z, const SectorPoint& eps, cplx a) {
    const cplx d = z * z - eps.value();
    if (d == cplx(0.0, 0.0)) throw OnSingularity("chart_q_derivative: singular point");
    return (1.0 + a * z) / d;
}

cplx chart_q_near(cplx z, const SectorPoint& eps, cplx a, cplx near) {
    const cplx w = chart_q(z, eps, a);
    return near + reduce_mod_monodromy(w - near, eps, a);
}

cplx chart_q_inverse(cplx W, const SectorPoint& eps, cplx a) {
    cplx z = chart_p_inverse(W, eps);
    if (a == cplx(0.0, 0.0)) return chart_q_inverse(W, eps, a, z);
    // The p-only seed ignores the a log term, which can exceed half a
    // principal-branch jump and then lands the Newton on a sibling preimage.
    // Re-seed through the a part until the principal value itself matches.
    auto a_part = [&](cplx w) {
        return eps.zero() ? a * std::log(w) : 0.5 * a * std::log(w * w - eps.value());
    };
    for (int round = 0; round < 5; ++round) {
        const cplx seed = chart_p_inverse(W - a_part(z), eps);
        z = chart_q_inverse(W, eps, a, seed);
        const double attainable =
            1e-14 * std::max(1.0, std::abs(z)) * std::abs(chart_q_derivative(z, eps, a));
        if (std::abs(chart_q(z, eps, a) - W) <
            10.0 * (newton_tol * std::max(1.0, std::abs(W)) + attainable))
            return z;
    }
    return z; // W has no principal preimage nearby: nearest-branch point
}

cplx chart_q_inverse(cplx W, const SectorPoint& eps, cplx a, cplx seed) {
    checked(W, "chart_q_inverse input");
    cplx z = seed;
    const cplx s = eps.sqrt_eps();
    for (int it = 0; it < newton_max_iter; ++it) {
        const cplx resid = reduce_mod_monodromy(chart_q(z, eps, a) - W, eps, a);
        const cplx dq = chart_q_derivative(z, eps, a);
        // chart_q evaluates z - sqrt(eps) by subtraction, so close to a
        // singularity the residual cannot resolve below |q'(z)| ulp(z): the
        // iterate is then already correct to machine precision in z.
        const double attainable = 1e-14 * std::max(1.0, std::abs(z)) * std::abs(dq);
        if (std::abs(resid) < newton_tol * std::max(1.0, std::abs(W)) + attainable) return z;
        cplx step = -resid / dq;
        // Never step past the chart singularities.
        const double guard =
            eps.zero() ? 0.5 * std::abs(z) : 0.5 * std::min(std::abs(z - s), std::abs(z + s));
        if (guard > 0.0 && std::abs(step) > guard) step *= guard / std::abs(step);
        z += step;
        if (!is_finite(z)) throw NewtonDiverged("chart_q_inverse: iterate non-finite");
    }
    throw NewtonDiverged("chart_q_inverse: no convergence in 50 iterations");
}

cplx model_flow(cplx t, cplx z, const SectorPoint& eps, cplx a) {
    checked(z, "model_flow input");
    if (t == cplx(0.0, 0.0)) return z;
    if (eps.zero()) {
        if (z == cplx(0.0, 0.0)) return z;
        const cplx W = chart_q(z, eps, a) + t;
        const cplx seed = chart_p_inverse(chart_p(z, eps) + t, eps);
        return chart_q_inverse(W, eps, a, seed);
    }
    const cplx s = eps.sqrt_eps();
    const double scale = std::max(1.0, std::abs(z));
    if (std::abs(z - s) < 1e-14 * scale) return s;
    if (std::abs(z + s) < 1e-14 * scale) return -s;
    const cplx W = chart_q(z, eps, a) + t;
    const cplx seed = chart_p_inverse(chart_p(z, eps) + t, eps);
    return chart_q_inverse(W, eps, a, seed);
}

} // namespace parmod
