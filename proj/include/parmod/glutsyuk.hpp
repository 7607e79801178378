#pragma once

#include <functional>
#include <map>
#include <vector>

#include "parmod/fatou.hpp"
#include "parmod/model_chart.hpp"

namespace parmod {

enum class Sheet { Bar, Tilde };

// Conjugators between the gate return dynamics and the model translations on
// one sheet of the parameter square root. The four functional equations are
//
//   bar sheet:   h0 o (psi0 o T_a0) = T_a0 o h0
//                hinf o (psi_inf o T_a0) = T_ainf o hinf
//   tilde sheet: h0 o (T_a0 o psi0) = T_a0 o h0
//                hinf o (T_a0 o psi_inf) = T_ainf o hinf
//
// with a0, ainf the sheet's own translation periods. Each conjugator is
// id + telescoping series of the horn deviation iterated toward the end where
// the deviation decays: 0-maps accumulate downward, infinity-maps upward.
class SheetMaps {
public:
    SheetMaps(const HornMapPair& horn, const SectorPoint& eps);

    Sheet sheet() const { return sheet_; }
    cplx alpha0() const { return alpha0_; }
    cplx alpha_inf() const { return alpha_inf_; }
    cplx a() const { return a_; }
    const Periods& periods() const { return per_; }

    cplx psi0(cplx W) const;     // measured horn map at the 0-end
    cplx psi_inf(cplx W) const;  // measured horn map at the infinity-end

    cplx K0(cplx W) const;       // gate return lift at the 0-end
    cplx K0_inv(cplx W) const;
    cplx Kinf(cplx W) const;     // gate return lift at the infinity-end
    cplx Kinf_inv(cplx W) const;

    cplx h0(cplx W) const;       // conjugator normalized to id at the 0-end
    cplx h0_inv(cplx W) const;
    cplx h_inf(cplx W) const;    // conjugator normalized to id at the infinity-end
    cplx h_inf_inv(cplx W) const;

    // Transition between the two normalizations through this sheet's gate,
    // oriented for the compatibility condition: hinf o h0^{-1} on the tilde
    // sheet, h0 o hinf^{-1} on the bar sheet.
    cplx modulus(cplx W) const;

private:
    cplx lambda0(cplx W) const;   // horn deviation feeding the 0-conjugator
    cplx lambda_inf(cplx W) const; // deviation feeding the infinity-conjugator

    Sheet sheet_;
    cplx alpha0_, alpha_inf_, a_;
    Periods per_;
    std::map<int, cplx> b_, c_;
};

struct HMapSet {
    SheetMaps bar;
    SheetMaps tilde;
};

// Koenigs linearizer of a hyperbolic germ: phi(u) = lim g^n(u) / lambda^n with
// phi'(fixed) = 1, computed by the ratio-stabilized product. Requires
// |multiplier| < 1 (pass the inverse branch for a repelling point); throws
// NonHyperbolic near the unit circle and OrbitEscape if iterates leave the
// basin scale.
cplx koenigs_linearize(const std::function<cplx(cplx)>& g, cplx fixed, cplx multiplier,
                       cplx u, double tol = 1e-13, std::size_t n_max = 4000);

struct CompatOptions {
    int n_samples = 24;     // fit points on the real segment
    double span = 1.0;      // sample window width
    double tol = 1e-6;      // residual acceptance threshold
    bool gamma_fit = true;  // free-(D, D') refit for the gamma diagnostic
};

struct CompatReport {
    cplx D;          // pinned to 2 pi i a
    cplx Dprime;     // fitted companion shift
    cplx gamma;      // free-fit deviation of D from 2 pi i a
    double residual; // sup mismatch over the fit points
    double tol;
    bool compatible;
};

// Test of the transition compatibility between the two sheets: fit
// tilde_modulus = T_D o bar_modulus o T_D' with D pinned at 2 pi i a, report
// the sup-norm residual of the fit.
CompatReport compatibility_check(const SheetMaps& bar, const SheetMaps& tilde,
                                 const CompatOptions& opt = {});

struct FlatnessSample {
    double sqrt_eps_abs; // |sqrt(eps)| of the sample
    double log_dev;      // log of the measured transition deviation
    double log_C_abs;    // exact log |C| of the contracting end multiplier
};

struct FlatnessFit {
    double A_fit;    // fitted decay rate: dev ~ B exp(-A / |sqrt(eps)|)
    double logB_fit;
    double r2;       // regression coefficient of determination
    double A_lo, A_hi; // admissible window derived from the exact multiplier
    bool in_window;
    bool vacuous;    // all samples below the noise floor
};

// Linear regression of log_dev against -1/|sqrt(eps)|, with the admissible
// decay-rate window anchored to the exact multiplier logs.
FlatnessFit flatness_fit(const std::vector<FlatnessSample>& samples,
                         double noise_log = -34.5);

} // namespace parmod
