#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "parmod/special_functions.hpp"

using namespace parmod;

TEST_CASE("Gamma reproduces classical exact values") {
    CHECK(rel_diff(gamma_fn(1.0), cplx(1.0, 0.0)) < 1e-14);
    CHECK(rel_diff(gamma_fn(5.0), cplx(24.0, 0.0)) < 1e-13);
    CHECK(rel_diff(gamma_fn(0.5), cplx(std::sqrt(PI), 0.0)) < 1e-13);
    CHECK(rel_diff(gamma_fn(1.5), cplx(0.5 * std::sqrt(PI), 0.0)) < 1e-13);
    // |Gamma(i)|^2 = pi / sinh(pi).
    const double g = std::abs(gamma_fn(I));
    CHECK(g * g == doctest::Approx(PI / std::sinh(PI)).epsilon(1e-12));
}

TEST_CASE("Gamma satisfies recurrence and reflection on random samples") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> re(-6.0, 6.0), im(-6.0, 6.0);
    int checked_n = 0;
    while (checked_n < 100) {
        const cplx z(re(rng), im(rng));
        // Stay away from poles of any factor.
        if (std::abs(z.imag()) < 0.05 || std::abs(std::sin(PI * z)) < 0.05) continue;
        CHECK(rel_diff(gamma_fn(z + 1.0), z * gamma_fn(z)) < 1e-11);
        CHECK(rel_diff(gamma_fn(z) * gamma_fn(1.0 - z), PI / std::sin(PI * z)) < 1e-10);
        ++checked_n;
    }
    CHECK_THROWS_AS(gamma_fn(cplx(0.0, 0.0)), PoleError);
    CHECK_THROWS_AS(gamma_fn(cplx(-3.0, 0.0)), PoleError);
}

TEST_CASE("reciprocal Gamma is entire and vanishes at the poles") {
    CHECK(std::abs(recip_gamma(cplx(0.0, 0.0))) < 1e-13);
    CHECK(std::abs(recip_gamma(cplx(-2.0, 0.0))) < 1e-12);
    CHECK(rel_diff(recip_gamma(cplx(0.5, 0.0)), cplx(1.0 / std::sqrt(PI), 0.0)) < 1e-13);
    // Consistency with gamma_fn off the poles.
    const cplx z(1.3, -0.8);
    CHECK(rel_diff(recip_gamma(z) * gamma_fn(z), cplx(1.0, 0.0)) < 1e-12);
}

TEST_CASE("2F1 reproduces elementary closed forms") {
    CHECK(rel_diff(hyp2f1(cplx(0.3, 0.1), cplx(1.7, 0.0), cplx(0.9, 0.0), 0.0),
                   cplx(1.0, 0.0)) < 1e-15);

    // 2F1(1, 1; 2; z) = -log(1-z)/z.
    const cplx z1(0.35, 0.2);
    CHECK(rel_diff(hyp2f1(1.0, 1.0, 2.0, z1), -std::log(1.0 - z1) / z1) < 1e-12);

    // 2F1(a, b; b; z) = (1-z)^{-a}.
    const cplx a(0.7, -0.3), z2(-0.6, 0.25);
    CHECK(rel_diff(hyp2f1(a, 1.9, 1.9, z2), std::pow(1.0 - z2, -a)) < 1e-12);

    // asin(z) = z * 2F1(1/2, 1/2; 3/2; z^2).
    const cplx z3(0.4, 0.1);
    CHECK(rel_diff(z3 * hyp2f1(0.5, 0.5, 1.5, z3 * z3), std::asin(z3)) < 1e-12);
}

TEST_CASE("2F1 satisfies the Euler transformation across the argument range") {
    std::mt19937 rng(37);
    std::uniform_real_distribution<double> u(-0.8, 0.8);
    int done = 0;
    while (done < 40) {
        const cplx a(u(rng), u(rng)), b(u(rng), u(rng));
        const cplx c = cplx(1.2, 0.0) + cplx(u(rng), u(rng));
        const cplx z(u(rng), u(rng));
        if (std::abs(z) > 0.75 || std::abs(1.0 - z) < 0.2) continue;
        // Connection exponents near integers are rejected by design; skip.
        const cplx cab = c - a - b;
        if (std::abs(cab - std::round(cab.real())) < 0.1 && std::abs(cab.imag()) < 0.1)
            continue;
        const cplx lhs = hyp2f1(a, b, c, z);
        const cplx rhs = std::pow(1.0 - z, c - a - b) * hyp2f1(c - a, c - b, c, z);
        CHECK(rel_diff(lhs, rhs) < 1e-10);
        ++done;
    }
}

TEST_CASE("2F1 handles moderately large argument through the connection formulas") {
    // Oracle: Gauss evaluated by the z/(z-1) Pfaff map onto a small argument,
    // computed here directly from the series.
    const cplx a(0.25, 0.0), b(0.85, 0.0), c(1.4, 0.0);
    const cplx z(-3.0, 0.4); // |z| > 1, but |z/(z-1)| < 1
    const cplx w = z / (z - 1.0);
    cplx term(1.0, 0.0), sum(1.0, 0.0);
    for (int k = 0; k < 200; ++k) {
        const double dk = double(k);
        term *= (a + dk) * (c - b + dk) / ((c + dk) * (dk + 1.0)) * w;
        sum += term;
    }
    const cplx oracle = std::pow(1.0 - z, -a) * sum;
    CHECK(rel_diff(hyp2f1(a, b, c, z), oracle) < 1e-11);
}
