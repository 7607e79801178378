#include "parmod/prepare.hpp"

#include <cmath>
#include <utility>

#include "parmod/elementary_maps.hpp"
#include "parmod/errors.hpp"

namespace parmod {

namespace {

constexpr double root_tol = 1e-14;
constexpr int newton_max_iter = 60;

cplx cauchy_derivative(const std::function<cplx(cplx)>& f, cplx z, double radius) {
    return taylor_from_evaluator(f, z, radius, 2)[1];
}

// Damped Newton iteration on fn, derivative by Cauchy integrals.
cplx polish_root(const std::function<cplx(cplx)>& fn, cplx z, double deriv_radius,
                 const char* where) {
    cplx v = fn(z);
    for (int it = 0; it < newton_max_iter; ++it) {
        const double scale = std::max(1.0, std::abs(z));
        if (std::abs(v) < root_tol * scale) return z;
        const cplx dv = cauchy_derivative(fn, z, deriv_radius);
        if (!std::isfinite(std::abs(dv)) || std::abs(dv) < 1e-300)
            throw NoRoot(std::string(where) + ": vanishing derivative in Newton step");
        cplx step = -v / dv;
        for (int damp = 0; damp < 6; ++damp) {
            const cplx cand = z + step;
            const cplx vc = fn(cand);
            if (std::abs(vc) < std::abs(v) || damp == 5) {
                z = cand;
                v = vc;
                break;
            }
            step *= 0.5;
        }
    }
    if (std::abs(v) < 1e-11 * std::max(1.0, std::abs(z))) return z;
    throw NoRoot(std::string(where) + ": Newton iteration did not converge");
}

struct RootPair {
    cplx r1, r2;    // fixed points (unordered)
    bool parabolic; // coincident to tolerance
};

RootPair locate_fixed_points(const std::function<cplx(cplx)>& g, const PrepareOptions& opt) {
    // Quadratic model from the first Taylor coefficients around 0.
    const double R = opt.root_radius;
    const auto t = taylor_from_evaluator(g, 0.0, R, 6);
    const cplx g0 = t[0], g1 = t[1], g2 = t[2];
    double gscale = 0.0; // size of g on the sampling circle
    for (std::size_t k = 0; k <= t.degree(); ++k)
        gscale = std::max(gscale, std::abs(t[k]) * std::pow(R, double(k)));
    if (std::abs(g2) * R * R < 1e-8 * std::max(1e-30, gscale) || gscale == 0.0)
        throw NotGeneric("locate_fixed_points: quadratic part of f - id degenerates");

    const cplx disc = g1 * g1 - 4.0 * g0 * g2;
    // Taylor coefficients carry rounding noise of order u * gscale / R^k, so
    // the discriminant is only trusted above the propagated floor.
    const double disc_noise =
        1e-13 * gscale *
        (2.0 * std::abs(g1) / R + 4.0 * std::abs(g2) + 4.0 * std::abs(g0) / (R * R));
    const double sep_scale = std::max(std::abs(g1), std::abs(g2) * R);
    const double disc_tol =
        std::max(disc_noise, std::pow(opt.parabolic_tol * std::max(1.0, sep_scale), 2));
    if (std::abs(disc) < disc_tol) {
        // Double root: polish on g'.
        auto gp = [&](cplx z) { return cauchy_derivative(g, z, 0.02); };
        cplx z0 = -g1 / (2.0 * g2);
        z0 = polish_root(gp, z0, 0.02, "locate_fixed_points(double)");
        if (std::abs(g(z0)) > 1e-10 * std::max(1.0, std::abs(z0)))
            throw NoRoot("locate_fixed_points: double-root candidate does not annihilate f - id");
        return {z0, z0, true};
    }

    const cplx sq = std::sqrt(disc);
    cplx s1 = (-g1 + sq) / (2.0 * g2);
    cplx s2 = (-g1 - sq) / (2.0 * g2);
    // Differentiation circles must stay clear of the companion root: after
    // deflation it is a pole.
    const double dr = std::max(1e-9, 0.25 * std::abs(s1 - s2));
    s1 = polish_root(g, s1, dr, "locate_fixed_points");
    // Deflate the first root so the second Newton run cannot collapse onto it.
    auto gd = [&](cplx z) { return g(z) / (z - s1); };
    s2 = polish_root(gd, s2, dr, "locate_fixed_points(deflated)");
    if (std::abs(s1 - s2) < opt.parabolic_tol * std::max(1.0, std::abs(s1)))
        return {s1, s1, true};
    return {s1, s2, false};
}

double principal_arg(cplx w) { return std::arg(w); }

} // namespace

GermFamily family_from_coeffs(std::vector<std::vector<cplx>> c) {
    const std::size_t J = c.size();
    std::size_t K = 0;
    for (const auto& row : c) K = std::max(K, row.size());
    if (J < 7 || K < 4) // degrees J >= 6 in z, K >= 3 in eta
        throw TruncationTooCoarse("family_from_coeffs: need degree >= 6 in z and >= 3 in eta");
    GermFamily g;
    g.J = J - 1;
    g.K = K - 1;
    g.name = "series";
    g.eval = [c = std::move(c)](cplx z, cplx eta) {
        cplx acc = 0.0;
        for (std::size_t j = c.size(); j-- > 0;) {
            cplx row = 0.0;
            for (std::size_t k = c[j].size(); k-- > 0;) row = row * eta + c[j][k];
            acc = acc * z + row;
        }
        return acc;
    };
    return g;
}

GermFamily model_family(cplx a) {
    GermFamily g;
    g.z_radius = 1e6; // closed form, no trust-region constraint
    g.name = "model";
    g.eval = [a](cplx z, cplx eta) {
        const SectorPoint eps =
            (eta == cplx(0.0)) ? SectorPoint{0.0, 0.0, 0.25, PI / 3.0}
                               : sector_point(std::abs(eta), principal_arg(eta));
        return model_flow(1.0, z, eps, a);
    };
    return g;
}

GermFamily quadratic_family() {
    GermFamily g;
    g.z_radius = 3.0;
    g.name = "quadratic";
    g.eval = [](cplx z, cplx eta) { return z + z * z - eta; };
    return g;
}

cplx formal_invariant(const Multipliers& m) {
    if (m.mu0 == cplx(0.0) || m.mu_inf == cplx(0.0))
        throw ZeroLog("formal_invariant: vanishing multiplier logarithm (parabolic point)");
    return 1.0 / m.mu0 + 1.0 / m.mu_inf;
}

Multipliers multipliers_from_cond(const SectorPoint& eps, cplx a) {
    const cplx s = eps.sqrt_eps();
    Multipliers m;
    m.mu0 = -2.0 * s / (1.0 - a * s);
    m.mu_inf = 2.0 * s / (1.0 + a * s);
    m.lambda0 = std::exp(m.mu0);
    m.lambda_inf = std::exp(m.mu_inf);
    return m;
}

PreparedFamily prepare_family(const GermFamily& g, cplx eta, const PrepareOptions& opt0) {
    if (!g.eval) throw InconsistentInput("prepare_family: family has no evaluator");
    // Keep every sampling circle inside the germ's stated trust region.
    PrepareOptions opt = opt0;
    opt.root_radius = std::min(opt.root_radius, 0.45 * g.z_radius);
    opt.taylor_radius = std::min(opt.taylor_radius, 0.75 * g.z_radius);
    // Copy the evaluator: closures built here outlive this call via out.map.
    auto f = [eval = g.eval, eta](cplx z) { return eval(z, eta); };
    auto fid = [&f](cplx z) { return f(z) - z; };

    const RootPair roots = locate_fixed_points(fid, opt);
    PreparedFamily out;
    out.name = g.name;

    if (roots.parabolic) {
        const cplx z0 = roots.r1;
        auto f1 = [f, z0](cplx z) { return f(z + z0) - z0; };
        const auto t = taylor_from_evaluator([&](cplx z) { return f1(z) - z; }, 0.0,
                                             opt.taylor_radius, 18);
        if (std::abs(t[2]) < 1e-8)
            throw NotGeneric("prepare_family: vanishing quadratic part at the parabolic point");
        const cplx c = 1.0 / t[2];
        out.map = [f1, c](cplx z) { return f1(c * z) / c; };
        out.eps = SectorPoint{0.0, 0.0, 0.25, PI / 3.0};
        out.shift = z0;
        out.scale = c;
        out.b_param = 0.0;
        // Multipliers are parabolic: lambda = 1, mu = 0 (defaults).
        // Formal invariant from the normalized cubic coefficient: a = 1 - c3.
        // t holds f1 - id, so fs is the prepared germ minus the identity:
        // rescaling z -> cz multiplies coefficient k by c^{k-1} and the
        // identity part is unchanged.
        PowerSeries fs(std::vector<cplx>(t.degree() + 1, 0.0));
        for (std::size_t k = 0; k <= t.degree(); ++k) fs.set(k, t[k] * pow_int(c, int(k) - 1));
        out.a = 1.0 - fs[3];
        auto d1 = fs.divide_by_z2_minus(0.0); // (f - id) = z^2 * U
        auto d2 = d1.quotient.divide_by_z2_minus(0.0);
        out.beta_bar = d2.r0 - 1.0;
        out.A_bar = d2.r1;
        out.Q_bar = d2.quotient;
        out.z_radius = std::max(1e-3, (g.z_radius - std::abs(z0)) / std::abs(c));
        return out;
    }

    // Two simple fixed points: translate to the midpoint, measure multipliers.
    const cplx mid = 0.5 * (roots.r1 + roots.r2);
    auto f1 = [f, mid](cplx z) { return f(z + mid) - mid; };
    const cplx r1 = roots.r1 - mid, r2 = roots.r2 - mid; // r2 = -r1
    const double mrad = std::max(
        1e-3, std::min(0.35 * std::abs(r1 - r2), 0.5 * (g.z_radius - std::abs(mid))));
    const cplx lam1 = cauchy_derivative(f1, r1, mrad);
    const cplx lam2 = cauchy_derivative(f1, r2, mrad);
    const cplx mu1 = std::log(lam1), mu2 = std::log(lam2);
    if (mu1 == cplx(0.0) || mu2 == cplx(0.0))
        throw NotGeneric("prepare_family: parabolic multiplier at a simple fixed point");

    // Assignment: which fixed point carries the 0-end label. The canonical
    // root satisfies 1/sqrt(eps) = 1/mu_inf - 1/mu0; the principal sheet is
    // the assignment with arg(eps) in (-pi, pi].
    const cplx T1 = 1.0 / mu1 - 1.0 / mu2; // infinity-end at r1
    const double theta1 = 2.0 * principal_arg(1.0 / T1);
    const bool first_principal = (theta1 > -PI && theta1 <= PI);
    const bool use_first = (opt.turns == 0) ? first_principal : !first_principal;

    const cplx T = use_first ? T1 : -T1;
    const cplx r_inf = use_first ? r1 : r2; // root labeled +sqrt(eps)
    const cplx sqe = 1.0 / T;
    double theta = 2.0 * principal_arg(sqe);
    if (opt.turns == 1) {
        // Same sqrt, presented on the once-turned sheet.
        if (theta <= -PI + 1e-14) theta += 4.0 * PI;
    }
    // theta for turns=0 lies in (-pi, pi]; for turns=1 the flipped assignment
    // lands it in (pi, 3pi] after adding 2 pi to the principal representative.
    if (opt.turns == 1 && theta <= PI) theta += 2.0 * PI;

    // Dilation from the secant solve of 1/sqrt(eps_dilated(b)) = T with
    // c(b) = c0 (1 + b); the equation is affine in b, so two iterations land
    // on the exact solution.
    const auto tser = taylor_from_evaluator([&](cplx z) { return f1(z) - z; }, 0.0,
                                            opt.taylor_radius, 18);
    const cplx h0 = tser[2]; // leading coefficient of (f1 - z)/(z^2 - r^2) at 0
    if (std::abs(h0) < 1e-10)
        throw NotGeneric("prepare_family: vanishing quadratic part");
    const cplx c0 = 1.0 / h0;
    auto mismatch = [&](cplx b) { return c0 * (1.0 + b) / r_inf - T; };
    cplx b_lo = 0.0, b_hi = 0.25;
    cplx v_lo = mismatch(b_lo), v_hi = mismatch(b_hi);
    cplx b = b_lo;
    for (int it = 0; it < 8; ++it) {
        if (v_hi == v_lo) break;
        b = b_hi - v_hi * (b_hi - b_lo) / (v_hi - v_lo);
        const cplx vb = mismatch(b);
        b_lo = b_hi;
        v_lo = v_hi;
        b_hi = b;
        v_hi = vb;
        if (std::abs(vb) < 1e-15 * std::max(1.0, std::abs(T))) break;
    }
    const cplx c = c0 * (1.0 + b);

    out.map = [f1, c](cplx z) { return f1(c * z) / c; };
    out.eps = SectorPoint{std::norm(sqe), theta, 0.25, PI / 3.0};
    out.shift = mid;
    out.scale = c;
    out.b_param = b;
    out.mult.lambda_inf = use_first ? lam1 : lam2;
    out.mult.lambda0 = use_first ? lam2 : lam1;
    out.mult.mu_inf = use_first ? mu1 : mu2;
    out.mult.mu0 = use_first ? mu2 : mu1;
    out.a = formal_invariant(out.mult);
    out.z_radius = std::max(1e-3, (g.z_radius - std::abs(mid)) / std::abs(c));

    // Prepared-form data: divide f - id by (z^2 - eps) twice. tser holds
    // f1 - id, so the c^{k-1} rescale already gives the prepared f - id.
    PowerSeries fs(std::vector<cplx>(tser.degree() + 1, 0.0));
    for (std::size_t k = 0; k <= tser.degree(); ++k)
        fs.set(k, tser[k] * pow_int(c, int(k) - 1));
    const cplx eps_c = sqe * sqe;
    auto d1 = fs.divide_by_z2_minus(eps_c);
    auto d2 = d1.quotient.divide_by_z2_minus(eps_c);
    out.beta_bar = d2.r0 - 1.0;
    out.A_bar = d2.r1;
    out.Q_bar = d2.quotient;
    return out;
}

} // namespace parmod
