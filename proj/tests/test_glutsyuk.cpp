#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "parmod/glutsyuk.hpp"
#include "parmod/riccati.hpp"

using namespace parmod;

namespace {

// Synthetic transition data at a desk-checkable parameter scale: |eps| = 9
// keeps both sheet multipliers within double range so every identity can be
// verified in plain arithmetic.
const MoebiusModulus kModulus{cplx(0.4, 0.1), cplx(0.3, -0.2), 1, 1, cplx(0.05, 0.0)};
const SectorPoint kBarPoint = sector_point(9.0, 0.1);

double eq_residual_0(const SheetMaps& sm, cplx W) {
    const cplx a0 = sm.alpha0();
    const cplx inner = (sm.sheet() == Sheet::Tilde) ? sm.psi0(W + a0) : sm.psi0(W) + a0;
    return std::abs(sm.h0(inner) - (sm.h0(W) + a0));
}

double eq_residual_inf(const SheetMaps& sm, cplx W) {
    const cplx a0 = sm.alpha0();
    const cplx inner =
        (sm.sheet() == Sheet::Tilde) ? sm.psi_inf(W + a0) : sm.psi_inf(W) + a0;
    return std::abs(sm.h_inf(inner) - (sm.h_inf(W) + sm.alpha_inf()));
}

} // namespace

TEST_CASE("sheet detection follows the covering point") {
    const HornMapPair horn = moebius_horn_pair(kModulus);
    CHECK(SheetMaps(horn, kBarPoint).sheet() == Sheet::Bar);
    CHECK(SheetMaps(horn, kBarPoint.turned()).sheet() == Sheet::Tilde);
    CHECK_THROWS_AS(SheetMaps(horn, sector_point(9.0, PI)), NotGlutsyukSector);
}

TEST_CASE("conjugators satisfy their functional equations on both sheets") {
    const HornMapPair horn = moebius_horn_pair(kModulus);
    const SheetMaps bar(horn, kBarPoint);
    const SheetMaps tilde(horn, kBarPoint.turned());

    double worst = 0.0;
    for (int j = 0; j < 100; ++j) {
        const double x = double(j) / 100.0;
        const double y = 1.0 + double(j) / 99.0;
        // 0-end equations live where the 0-modes decay (Im W negative).
        worst = std::max(worst, eq_residual_0(bar, cplx(x, -y)));
        worst = std::max(worst, eq_residual_0(tilde, cplx(x, -y)));
        // infinity-end equations live on the opposite side.
        worst = std::max(worst, eq_residual_inf(bar, cplx(x, y)));
        worst = std::max(worst, eq_residual_inf(tilde, cplx(x, y)));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("conjugator inverses are two-sided") {
    const HornMapPair horn = moebius_horn_pair(kModulus);
    const SheetMaps bar(horn, kBarPoint);
    for (cplx W : {cplx(0.2, -1.4), cplx(0.7, -2.0)}) {
        CHECK(std::abs(bar.h0_inv(bar.h0(W)) - W) < 1e-10);
    }
    for (cplx W : {cplx(0.2, 1.4), cplx(0.7, 2.0)}) {
        CHECK(std::abs(bar.h_inf_inv(bar.h_inf(W)) - W) < 1e-10);
    }
    for (cplx W : {cplx(0.4, -1.7), cplx(0.1, 1.9)}) {
        CHECK(std::abs(bar.K0_inv(bar.K0(W)) - W) < 1e-10);
        CHECK(std::abs(bar.Kinf_inv(bar.Kinf(W)) - W) < 1e-10);
    }
}

TEST_CASE("telescoping conjugator agrees with the Koenigs linearizer") {
    const HornMapPair horn = moebius_horn_pair(kModulus);
    const SheetMaps bar(horn, kBarPoint);
    const SheetMaps tilde(horn, kBarPoint.turned());

    // Bar sheet: the 0-end gate return germ contracts with multiplier C_bar.
    const cplx C_bar = bar.periods().C_bar.value();
    auto bar_germ = [&bar](cplx w) {
        return std::exp(-TWO_PI * I * bar.K0(std::log(w) / (-TWO_PI * I)));
    };
    // Tilde sheet: the same end expands; linearize the inverse branch.
    const cplx C_tilde_inv = tilde.periods().C_tilde.pow_int(-1).value();
    auto tilde_germ = [&tilde](cplx w) {
        return std::exp(-TWO_PI * I * tilde.K0_inv(std::log(w) / (-TWO_PI * I)));
    };

    double worst = 0.0;
    for (int j = 0; j < 5; ++j) {
        const cplx W(0.13 + 0.2 * j, -1.1 - 0.15 * j);
        const cplx w = std::exp(-TWO_PI * I * W);
        const cplx via_series_bar = std::exp(-TWO_PI * I * bar.h0(W));
        const cplx via_koenigs_bar = koenigs_linearize(bar_germ, 0.0, C_bar, w);
        worst = std::max(worst, rel_diff(via_series_bar, via_koenigs_bar));

        const cplx via_series_tilde = std::exp(-TWO_PI * I * tilde.h0(W));
        const cplx via_koenigs_tilde = koenigs_linearize(tilde_germ, 0.0, C_tilde_inv, w);
        worst = std::max(worst, rel_diff(via_series_tilde, via_koenigs_tilde));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("koenigs_linearize validates its multiplier") {
    auto g = [](cplx w) { return 0.5 * w + 0.1 * w * w; };
    const cplx phi = koenigs_linearize(g, 0.0, 0.5, 0.05);
    CHECK(std::abs(phi) > 0.0);
    CHECK_THROWS_AS(koenigs_linearize(g, 0.0, cplx(1.0, 0.0), 0.05), NonHyperbolic);
}

TEST_CASE("matching sheet moduli pass the compatibility test") {
    const HornMapPair horn = moebius_horn_pair(kModulus);
    const SheetMaps bar(horn, kBarPoint);
    const SheetMaps tilde(horn, kBarPoint.turned());
    const CompatReport rep = compatibility_check(bar, tilde);
    CHECK(rep.compatible);
    CHECK(rep.residual < 1e-9);
    CHECK(rel_diff(rep.D, TWO_PI * I * kModulus.a, 1.0) < 1e-12);
    CHECK(std::abs(rep.gamma) < 1e-6);
}

TEST_CASE("mismatched transition data fails the compatibility test loudly") {
    MoebiusModulus other = kModulus;
    other.A *= 1.3; // breaks the cross-sheet scaling invariant
    const SheetMaps bar(moebius_horn_pair(kModulus), kBarPoint);
    const SheetMaps tilde(moebius_horn_pair(other), kBarPoint.turned());
    const CompatReport rep = compatibility_check(bar, tilde);
    CHECK(!rep.compatible);
    CHECK(rep.residual > 10.0 * rep.tol);
}

TEST_CASE("flatness regression accepts the true decay law and rejects others") {
    const double A_true = 2.0 * PI * PI, logB = 1.1;
    std::vector<FlatnessSample> good, slow, silent;
    for (double eps : {0.02, 0.01, 0.005, 0.0025, 0.00125}) {
        const double se = std::sqrt(eps);
        const double logC = -2.0 * PI * PI / se;
        good.push_back({se, logB - A_true / se, logC});
        slow.push_back({se, logB - 0.4 * A_true / se, logC});
        silent.push_back({se, -40.0, logC});
    }
    const FlatnessFit f_good = flatness_fit(good, -1e12);
    CHECK(f_good.r2 > 0.999);
    CHECK(f_good.in_window);
    CHECK(!f_good.vacuous);
    CHECK(f_good.A_fit == doctest::Approx(A_true).epsilon(1e-9));

    const FlatnessFit f_slow = flatness_fit(slow, -1e12);
    CHECK(!f_slow.in_window);

    const FlatnessFit f_silent = flatness_fit(silent); // default noise floor
    CHECK(f_silent.vacuous);
}
