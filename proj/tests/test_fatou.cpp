#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "parmod/fatou.hpp"

using namespace parmod;

namespace {

double max_mode(const std::map<int, cplx>& modes) {
    double m = 0.0;
    for (const auto& [n, v] : modes) m = std::max(m, std::abs(v));
    return m;
}

// phi(z) = z + lam z^2 and its exact inverse branch tangent to the identity.
struct Conjugator {
    cplx lam;
    cplx fwd(cplx z) const { return z + lam * z * z; }
    cplx bwd(cplx w) const {
        return (std::sqrt(1.0 + 4.0 * lam * w) - 1.0) / (2.0 * lam);
    }
};

} // namespace

TEST_CASE("Fourier extraction recovers planted modes exactly") {
    const double Y = 1.3, x0 = 0.21;
    const int M = 64;
    // Plant coefficients whose contents on the sampling line are comparable,
    // the regime a series convergent beyond the line actually produces there.
    const std::map<int, cplx> contents = {{-2, cplx(0.3, -0.1)}, {-1, cplx(-0.05, 0.4)},
                                          {0, cplx(1.0, 2.0)},   {1, cplx(0.02, 0.03)}};
    std::map<int, cplx> planted;
    for (const auto& [n, r] : contents) planted[n] = r * std::exp(TWO_PI * double(n) * Y);
    std::vector<cplx> g(M);
    for (int k = 0; k < M; ++k) {
        const cplx V = x0 + double(k) / M + I * Y;
        cplx s = 0.0;
        for (const auto& [n, c] : planted) s += c * std::exp(TWO_PI * I * double(n) * V);
        g[k] = s;
    }
    const auto rec = fourier_coefficients(g, x0, Y, -4, 4, 1e-13);
    for (const auto& [n, c] : planted) {
        REQUIRE(rec.count(n) == 1);
        CHECK(rel_diff(rec.at(n), c) < 1e-11);
    }
    // Unplanted modes come back at noise level or are dropped entirely.
    for (const auto& [n, c] : rec)
        if (!planted.count(n)) CHECK(std::abs(c) < 1e-10);
}

TEST_CASE("aliasing guard fires when the extreme mode carries real mass") {
    const double Y = 0.0, x0 = 0.0;
    const int M = 32;
    std::vector<cplx> g(M);
    for (int k = 0; k < M; ++k) {
        const cplx V = x0 + double(k) / M;
        g[k] = std::exp(TWO_PI * I * 15.0 * V); // right at the band edge
    }
    CHECK_THROWS_AS(fourier_coefficients(g, x0, Y, -15, 15, 1e-13), AliasingDetected);
}

TEST_CASE("prepared model steps by exactly one in its own time chart") {
    const PreparedFamily p = prepare_family(model_family(cplx(0.25, 0.1)), 0.04);
    for (cplx W : {cplx(0.0, 2.0), cplx(3.0, 4.0), cplx(-2.0, 2.5)}) {
        CHECK(std::abs(chart_germ_step(p, W) - (W + 1.0)) < 1e-9);
    }
}

TEST_CASE("model family horn maps are trivial across the covering sector") {
    // The time-one map of the model field has identity transition maps, so
    // every Fourier mode and the infinity-end constant deviation must vanish
    // to measurement accuracy.
    const std::vector<SectorPoint> pts = {
        sector_point(0.04, 0.0), sector_point(0.02, PI / 2.0),
        sector_point(0.01, 3.0 * PI / 2.0)};
    for (cplx a : {cplx(0.0, 0.0), cplx(0.3, 0.1)}) {
        const GermFamily g = model_family(a);
        for (const SectorPoint& pt : pts) {
            const PreparedFamily p = prepare_family(g, pt.value());
            const HornMapPair h = horn_maps(p);
            CHECK(max_mode(h.b) < 1e-6);
            CHECK(max_mode(h.c) < 1e-6);
            CHECK(std::abs(h.const_inf_dev) < 1e-6);
            CHECK(rel_diff(h.a, a, 1.0) < 1e-6);
        }
    }
}

TEST_CASE("return map multipliers match the period formula") {
    const GermFamily g = model_family(0.0);
    const PreparedFamily p = prepare_family(g, 0.09);
    const HornMapPair h = horn_maps(p);
    const ReturnMaps rm = return_maps(h, p.eps, p.mult.mu0, p.mult.mu_inf);

    const cplx expect0 = 4.0 * PI * PI / p.mult.mu0;
    const cplx expect_inf = 4.0 * PI * PI / p.mult.mu_inf;
    CHECK(rel_diff(rm.log_mult0, expect0) < 1e-6);
    CHECK(rel_diff(rm.log_mult_inf, expect_inf) < 1e-6);
    // Hard value: mu0 = -2 sqrt(0.09) = -0.6.
    CHECK(std::abs(rm.log_mult0 - cplx(-65.79736267392906, 0.0)) < 1e-4);

    // Outside the overlap sheets the return dynamics has no hyperbolic end.
    CHECK_THROWS_AS(return_maps(h, sector_point(0.09, PI), p.mult.mu0, p.mult.mu_inf),
                    NotGlutsyukSector);
}

TEST_CASE("horn data is invariant under analytic conjugation of the family") {
    const GermFamily quad = quadratic_family();
    const Conjugator phi{cplx(0.08, 0.03)};
    GermFamily conj;
    conj.eval = [phi, quad](cplx z, cplx eta) {
        return phi.bwd(quad.eval(phi.fwd(z), eta));
    };
    conj.z_radius = 0.4;
    conj.name = "conjugated-quadratic";

    const cplx eta(0.05, 0.0);
    const HornMapPair h1 = horn_maps(prepare_family(quad, eta));
    const HornMapPair h2 = horn_maps(prepare_family(conj, eta));

    CHECK(rel_diff(h1.a, h2.a, 1.0) < 1e-6);
    for (const auto& [n, v] : h1.b) {
        const cplx other = h2.b.count(n) ? h2.b.at(n) : 0.0;
        CHECK(std::abs(v - other) < 1e-6);
    }
    for (const auto& [n, v] : h1.c) {
        const cplx other = h2.c.count(n) ? h2.c.at(n) : 0.0;
        CHECK(std::abs(v - other) < 1e-6);
    }
    CHECK(std::abs(h1.const_inf_dev - h2.const_inf_dev) < 1e-6);
}

TEST_CASE("horn data does not depend on the admissible sampling line") {
    const GermFamily quad = quadratic_family();
    const PreparedFamily p = prepare_family(quad, cplx(0.05, 0.0));

    FatouOptions low, high;
    low.y_floor = 1.0;
    high.y_floor = 1.6;
    const HornMapPair h1 = horn_maps(p, low);
    const HornMapPair h2 = horn_maps(p, high);

    CHECK(std::abs(h1.Y0 - h2.Y0) > 0.1); // the lines really differ
    CHECK(rel_diff(h1.a, h2.a, 1.0) < 1e-7);
    for (const auto& [n, v] : h1.b) {
        const cplx other = h2.b.count(n) ? h2.b.at(n) : 0.0;
        CHECK(std::abs(v - other) < 1e-7);
    }
    for (const auto& [n, v] : h1.c) {
        const cplx other = h2.c.count(n) ? h2.c.at(n) : 0.0;
        CHECK(std::abs(v - other) < 1e-7);
    }
}

TEST_CASE("parabolic member yields classical horn maps through extrapolation") {
    const PreparedFamily p = prepare_family(quadratic_family(), 0.0);
    REQUIRE(p.eps.zero());
    const HornMapPair h = horn_maps(p);
    CHECK(h.residual < 1e-6);
    CHECK(rel_diff(h.a, cplx(1.0, 0.0), 1.0) < 1e-6);
    // The attracting-side Fatou coordinate conjugates the germ to W + 1.
    FatouCoord att(p, Side::Attracting);
    const cplx W(0.3, 2.1);
    const cplx lhs = att(chart_germ_step(p, W));
    CHECK(std::abs(lhs - (att(W) + 1.0)) < 1e-8);
}
