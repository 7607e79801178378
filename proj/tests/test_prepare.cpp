#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "parmod/prepare.hpp"

using namespace parmod;

namespace {

// Residual of the prepared form f(z) - z - (z^2 - eps)(1 + beta + A z + ...)
// at the fixed points only: they must sit exactly at +-sqrt(eps).
double fixed_point_residual(const PreparedFamily& p) {
    const cplx se = p.eps.sqrt_eps();
    return std::max(std::abs(p.map(se) - se), std::abs(p.map(-se) + se));
}

} // namespace

TEST_CASE("prepared model family recovers its own invariants") {
    for (cplx a : {cplx(0.0, 0.0), cplx(0.3, 0.1)}) {
        const GermFamily g = model_family(a);
        const PreparedFamily p = prepare_family(g, cplx(0.04, 0.01));

        CHECK(fixed_point_residual(p) < 1e-11);
        CHECK(rel_diff(p.a, a, 1.0) < 1e-8);

        // Multiplier condition defining the canonical parameter:
        // 1/sqrt(eps) = 1/mu_inf - 1/mu0.
        const cplx lhs = 1.0 / p.eps.sqrt_eps();
        const cplx rhs = 1.0 / p.mult.mu_inf - 1.0 / p.mult.mu0;
        CHECK(rel_diff(lhs, rhs) < 1e-12);

        // Multipliers are exp(mu) at the respective points.
        const cplx se = p.eps.sqrt_eps();
        const double h = 1e-6;
        const cplx der_inf = (p.map(se + h) - p.map(se - h)) / (2.0 * h);
        CHECK(rel_diff(der_inf, p.mult.lambda_inf) < 1e-7);
    }
}

TEST_CASE("preparation is idempotent") {
    const PreparedFamily p = prepare_family(model_family(cplx(0.2, 0.0)), 0.03);
    GermFamily again;
    again.eval = [map = p.map](cplx z, cplx) { return map(z); };
    again.z_radius = p.z_radius;
    again.name = "already-prepared";
    const PreparedFamily q = prepare_family(again, 0.0);

    CHECK(std::abs(q.shift) < 1e-9);
    CHECK(std::abs(q.scale - 1.0) < 1e-8);
    CHECK(rel_diff(q.eps.value(), p.eps.value()) < 1e-8);
}

TEST_CASE("the covering turn flips the square-root branch") {
    const GermFamily g = model_family(0.0);
    PrepareOptions opt;
    opt.turns = 0;
    const PreparedFamily bar = prepare_family(g, 0.04, opt);
    opt.turns = 1;
    const PreparedFamily tilde = prepare_family(g, 0.04, opt);

    CHECK(bar.eps.on_bar_sheet());
    CHECK(tilde.eps.on_tilde_sheet());
    CHECK(rel_diff(tilde.eps.sqrt_eps(), -bar.eps.sqrt_eps()) < 1e-10);
    CHECK(rel_diff(tilde.eps.value(), bar.eps.value()) < 1e-10);
    // Swapping the roots hands the 0-end the log the infinity-end had:
    // mu0(eps~) = -2 sqrt(eps~)/(1 - a sqrt(eps~)) = +mu_inf(eps^).
    CHECK(rel_diff(tilde.mult.mu0, bar.mult.mu_inf) < 1e-8);
}

TEST_CASE("parabolic member is detected and carries the series invariant") {
    // Base germ of the model family: a(0) equals the field coefficient.
    const cplx a0(0.35, -0.2);
    const PreparedFamily p = prepare_family(model_family(a0), 0.0);
    CHECK(p.eps.zero());
    CHECK(std::abs(p.beta_bar) < 1e-9);
    CHECK(rel_diff(p.a, a0, 1.0) < 1e-7);

    // Quadratic family z + z^2 - eta has no cubic term, so a = 1 - c3 = 1.
    const PreparedFamily q = prepare_family(quadratic_family(), 0.0);
    CHECK(q.eps.zero());
    CHECK(rel_diff(q.a, cplx(1.0, 0.0)) < 1e-7);
}

TEST_CASE("quadratic family prepares across a parameter disk") {
    for (cplx eta : {cplx(0.02, 0.0), cplx(-0.01, 0.015), cplx(0.0, -0.02)}) {
        const PreparedFamily p = prepare_family(quadratic_family(), eta);
        CHECK(fixed_point_residual(p) < 1e-11);
        // The prepared quadratic part is exactly monic: map(z) - z has leading
        // coefficient 1 on (z^2 - eps).
        CHECK(std::abs(p.beta_bar) < 0.2);
    }
}

TEST_CASE("series input validates its truncation orders") {
    std::vector<std::vector<cplx>> tiny(3, std::vector<cplx>(2, 0.0));
    CHECK_THROWS_AS(family_from_coeffs(tiny), TruncationTooCoarse);

    // A legitimate table: f_eta(z) = z + z^2 - eta written as coefficients.
    std::vector<std::vector<cplx>> c(7, std::vector<cplx>(4, 0.0));
    c[1][0] = 1.0; // z
    c[2][0] = 1.0; // z^2
    c[0][1] = -1.0; // -eta
    const GermFamily g = family_from_coeffs(c);
    const PreparedFamily p = prepare_family(g, 0.02);
    const PreparedFamily q = prepare_family(quadratic_family(), 0.02);
    CHECK(rel_diff(p.eps.value(), q.eps.value()) < 1e-10);
}

TEST_CASE("sampling radii are clamped into the germ trust region") {
    GermFamily g = quadratic_family();
    g.z_radius = 0.2; // much smaller than the default sampling radii
    const PreparedFamily p = prepare_family(g, 0.005);
    CHECK(fixed_point_residual(p) < 1e-10);
}

TEST_CASE("degenerate quadratic part is rejected") {
    GermFamily g;
    g.eval = [](cplx z, cplx) { return z + z * z * z * z; };
    g.name = "quartic";
    CHECK_THROWS_AS(prepare_family(g, 0.0), NotGeneric);
}
