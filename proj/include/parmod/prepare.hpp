#pragma once

#include <functional>
#include <string>
#include <vector>

#include "parmod/model_chart.hpp"
#include "parmod/power_series.hpp"

namespace parmod {

// An analytic family of germs f_eta(z), given as a black-box evaluator. The
// base germ must be parabolic: f_0(0) = 0, f_0'(0) = 1, with nonzero quadratic
// part after preparation.
struct GermFamily {
    std::function<cplx(cplx, cplx)> eval; // (z, eta) -> f_eta(z)
    double z_radius = 0.6;                // trust region in z
    std::size_t J = 12, K = 6;            // truncation orders for series input
    std::string name = "custom";
};

// f_eta(z) = sum_{j,k} c[j][k] z^j eta^k. Requires J >= 6, K >= 3
// (TruncationTooCoarse otherwise).
GermFamily family_from_coeffs(std::vector<std::vector<cplx>> c);

// Time-one map of (z^2 - eta)/(1 + a z) d/dz; exact via the model charts.
GermFamily model_family(cplx a);

// f_eta(z) = z + z^2 - eta.
GermFamily quadratic_family();

struct Multipliers {
    cplx lambda0{1.0, 0.0};   // multiplier at the 0-end fixed point (-sqrt(eps))
    cplx lambda_inf{1.0, 0.0}; // at +sqrt(eps)
    cplx mu0{};                // principal logs
    cplx mu_inf{};
};

// a = 1/mu0 + 1/mu_inf. Throws ZeroLog when a multiplier equals 1.
cplx formal_invariant(const Multipliers& m);

// Forward evaluation of the multiplier constraint: mu0 = -2 sqrt(eps)/(1 - a
// sqrt(eps)), mu_inf = 2 sqrt(eps)/(1 + a sqrt(eps)).
Multipliers multipliers_from_cond(const SectorPoint& eps, cplx a);

// A family member brought to prepared form
//   f(z) = z + (z^2 - eps)(1 + beta_bar + A_bar z + (z^2 - eps) Q_bar(z)),
// with fixed points exactly at +-sqrt(eps) for the canonical eps defined by
// 1/sqrt(eps) = 1/mu_inf - 1/mu0.
struct PreparedFamily {
    std::function<cplx(cplx)> map; // the prepared germ
    SectorPoint eps;               // canonical parameter; zero() in the parabolic case
    Multipliers mult;
    cplx a{};                      // formal invariant (series route when eps = 0)
    cplx shift{}, scale{1.0, 0.0}; // original z = scale * z_new + shift
    cplx b_param{};                // dilation parameter from the secant solve
    cplx beta_bar{}, A_bar{};
    PowerSeries Q_bar;
    double z_radius = 0.5;
    std::string name;
};

struct PrepareOptions {
    int turns = 0;             // 0: principal sheet; 1: eps-hat e^{2 pi i}
    double root_radius = 0.35; // Taylor radius for the fixed-point search
    double taylor_radius = 0.3;
    double parabolic_tol = 1e-9; // roots closer than this are treated as double
};

// Locate the two fixed points (damped Newton with deflation), translate them
// symmetric, dilate so they sit at +-sqrt(eps) for the canonical eps solved
// from the multiplier equation (secant on the dilation parameter), and expose
// the prepared-form data. Throws NotGeneric when the quadratic part
// degenerates, NoRoot when root finding fails.
PreparedFamily prepare_family(const GermFamily& g, cplx eta, const PrepareOptions& opt = {});

} // namespace parmod
