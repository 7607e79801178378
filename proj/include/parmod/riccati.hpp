#pragma once

#include <cstddef>
#include <vector>

#include "parmod/fatou.hpp"
#include "parmod/glutsyuk.hpp"
#include "parmod/power_series.hpp"
#include "parmod/prepare.hpp"

namespace parmod {

// Moebius-case transition data: psi0 = m_{A,n}, psi_inf = L_beta o T_{B,n'},
// with the scaling equivalence (A, B) ~ (A k, B / k) when n = n'.
struct MoebiusModulus {
    cplx A;
    cplx B;
    int n = 1;
    int nprime = 1;
    cplx a{};

    LogComplex beta_mult() const { return LogComplex::from_log(-4.0 * PI * PI * a); }
};

// Power series of m_{A,n}(w) = w (1 + A w^n)^{-1/n} up to the given degree.
PowerSeries moebius_series(cplx A, int n, std::size_t degree);

// Lifted horn modes of a Moebius modulus: b_{-nk} = (-1)^{k+1} A^k / (2 pi i n k),
// c_{n'k} = (-1)^k B^k / (2 pi i n' k), truncated at the coefficient floor.
HornMapPair moebius_horn_pair(const MoebiusModulus& m, int k_max = 24,
                              double floor = 1e-18);

// Least-deviation Moebius form fitted to measured horn modes; the residual is
// the sup over stored modes of the misfit against the fitted (A, B).
struct MoebiusFit {
    MoebiusModulus m;
    double residual;
};
MoebiusFit fit_moebius(const HornMapPair& h, int n = 1, int nprime = 1);

// Closed-form Glutsyuk conjugators of a Moebius modulus, as Moebius data:
// h^0 = m_{d, n} and h^inf = T_{e, n'} on each sheet, plus the transition
// constants F^n, G^n. All stored in log space since the tilde multiplier is
// exponentially large.
struct HClosedForms {
    LogComplex d_tilde, e_tilde;
    LogComplex d_bar, e_bar;
    LogComplex Fn, Gn;
};

// `sheet` states on which overlap sheet the Periods argument was computed, so
// the contracting/expanding multipliers can be assigned to the right ends.
HClosedForms closed_form_h(const MoebiusModulus& m, const Periods& per, Sheet sheet);

// Compatibility constants of a pair of sheet moduli: F^n, G^n by the closed
// formulas, the scaling invariant AB, its mismatch across the sheets, and the
// relative defect of F^n G^n - 1 - 2 AB C_tilde^{-n}.
struct CompatConstants {
    LogComplex Fn, Gn;
    cplx AB;
    double ab_mismatch;
    double asym_ratio;
};
CompatConstants compat_constants(const MoebiusModulus& m_bar,
                                 const MoebiusModulus& m_tilde, const Periods& per);

// Canonical representative of the (A(eps), B(eps)) equivalence class under
// (A, B) -> (A k, B / k):
//   tag 1: A = eps^NA, B = eps^NB B1 with B1(0) != 0
//   tag 2: A == 0, B = eps^NB
//   tag 3: B == 0, A = eps^NA
//   tag 4: A == B == 0
struct CanonicalRep {
    int tag;
    int NA, NB; // -1 for an identically vanishing germ
    PowerSeries A_norm, B_norm;
    PowerSeries scale; // germ k applied to A
};
CanonicalRep canonical_representative(const PowerSeries& A, const PowerSeries& B);

// Hypergeometric moduli of the Riccati unfolding: n = n' = 1,
// A = 2 pi i / (Gamma(1-alpha) Gamma(1-beta)),
// B = -2 pi i e^{pi i a} / (Gamma(alpha) Gamma(beta)), a = 1 - alpha - beta.
MoebiusModulus gamma_modulus(cplx alpha, cplx beta);

// The degenerate-parameter route with d -> 0:
// A = d / (Gamma(a + bbar d) Gamma(1 - bbar d)),
// B = -2 pi i e^{pi i a} / (Gamma(1 - a - bbar d) Gamma(bbar d) d).
MoebiusModulus gamma_modulus_degenerate(cplx a, cplx beta_bar, cplx d);

// Riccati vector field x' = x^2 - eps, y' = c (x^2 - eps) + y (1 + a x) + d y^2;
// the holonomy transversal is the circle |y| = y0.
struct RiccatiSystem {
    cplx c{};
    cplx a{};
    cplx d{};
    double y0 = 0.3;
};

// The two-parameter normal form with c = alpha beta, a = 1 - alpha - beta, d = 1.
RiccatiSystem riccati3_system(cplx alpha, cplx beta);

// One positively oriented turn of the holonomy along |y| = y0, starting and
// ending on the x-transversal. PathSingularity when the field denominator
// degenerates on the path.
cplx holonomy_once(const RiccatiSystem& sys, cplx eps, cplx x0, double tol = 1e-12);

// The holonomy germ packaged as a (single-parameter) germ family through its
// Taylor series at x = 0, sampled on |x| = radius. The evaluator accepts only
// eta equal to the eps the series was built at.
GermFamily holonomy_family(const RiccatiSystem& sys, cplx eps, double radius = 0.145,
                           std::size_t count = 120);

// Exponentially small deviation between the two sheet presentations of a
// Moebius modulus along an eps ray, computed exactly in log space from the
// compatibility constants: the sheets' canonical scalings differ by the
// factor (beta F)^n = 1 + O(C_bar^n), so dev = |A| |beta^n F^n - 1| at the
// zero end and |B| |beta^n F^n - 1| at the infinity end. Requires A, B != 0.
std::vector<FlatnessSample> riccati_flatness_samples(const MoebiusModulus& m,
                                                     const std::vector<double>& eps_values,
                                                     double arg_eps, bool infinity_end);

// Unique tangent-to-identity solution of h(g(w)) = C h(w) for g = psi o L_C
// type data with g'(0) = C, degree by degree.
PowerSeries koenigs_conjugation(const PowerSeries& g, cplx C, std::size_t degree);

// Degree-by-degree solution of the self-compatibility equation
//   h o L_{F/C} o h o L_{C beta} = L_{1/C} o h o L_{F C beta} o h
// for h = w + sum b_j w^j, with F^{s-1} = ((C beta)^{1-s} - 1)/(C^{1-s} - 1)
// at the first active order s, checked against the conjugacy solution of the
// same horn map. beta = 1 switches to the commutator form whose degree-j term
// determines b_{j-1} (and forces b_3 = b_2^2).
struct RecursionResult {
    PowerSeries h;      // the equation solution
    bool consistent;    // matches the conjugacy solution within tol
    double max_mismatch;
    int s;              // first active order (0 when psi0 = id)
    cplx F;
    bool beta_one_branch;
};
RecursionResult unique_h_recursion(const PowerSeries& psi0, cplx beta_mult, cplx C_bar,
                                   std::size_t degree = 12, double tol = 1e-9);

} // namespace parmod
