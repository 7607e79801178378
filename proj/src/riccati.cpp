#include "parmod/riccati.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "parmod/elementary_maps.hpp"
#include "parmod/errors.hpp"
#include "parmod/ode.hpp"
#include "parmod/special_functions.hpp"

namespace parmod {

namespace {

// Log-space image of a plain complex number, with an explicit sentinel for
// zero so products and quotients by nonzero factors stay well defined.
const double kLogZero = -1e300;

LogComplex lc_of(cplx v) {
    if (v == 0.0) return LogComplex::from_log(kLogZero);
    return LogComplex::from_value(v);
}

bool lc_is_zero(const LogComplex& x) { return x.lg.real() < -1e250; }

// 1 - X in log space, guarding the resonant denominators X^n = 1.
LogComplex one_minus_checked(const LogComplex& x, const char* where) {
    if (lc_is_zero(x)) return LogComplex::one();
    if (std::abs(x.lg) < 1e-10)
        throw DegenerateDenominator(std::string(where) +
                                    ": multiplier power is unit, 1 - C^n degenerates");
    return x.one_minus();
}

// h(c w): coefficient-wise rescaling of the argument.
PowerSeries scale_inner(const PowerSeries& h, cplx c) {
    PowerSeries out = h;
    cplx ck = 1.0;
    for (std::size_t k = 0; k <= h.degree(); ++k) {
        out.set(k, h[k] * ck);
        ck *= c;
    }
    return out;
}

int series_order(const PowerSeries& s) {
    const double scale = s.max_abs();
    if (scale == 0.0) return -1;
    static const double clear_rel = 1e-8;
    static const double noise_rel = 1e-13;
    for (std::size_t k = 0; k <= s.degree(); ++k) {
        const double r = std::abs(s[k]) / scale;
        if (r > clear_rel) return int(k);
        if (r > noise_rel)
            throw OrderUndetectable(
                "canonical_representative: leading coefficient sits between the noise "
                "floor and the detection threshold");
    }
    return -1; // unreachable: the max element itself clears the threshold
}

PowerSeries shifted_down(const PowerSeries& s, int k) {
    std::vector<cplx> c;
    for (std::size_t j = std::size_t(k); j <= s.degree(); ++j) c.push_back(s[j]);
    if (c.empty()) c.push_back(0.0);
    return PowerSeries(std::move(c));
}

PowerSeries monomial(std::size_t k, std::size_t degree) {
    std::vector<cplx> c(std::max(k, degree) + 1, 0.0);
    c[k] = 1.0;
    return PowerSeries(std::move(c));
}

void check_resonant_invariant(cplx a, const char* where) {
    if (a.imag() != 0.0) return;
    const double r = std::round(a.real());
    if (r != 0.0 && std::abs(a.real() - r) < 1e-12)
        throw IntegerResonance(std::string(where) +
                               ": formal invariant is a nonzero integer");
}

int effective_degree(const cplx& A, const cplx& B, int n, int nprime,
                     const char* where) {
    if (A == 0.0 && B == 0.0) return std::max(n, nprime);
    if (A == 0.0) return nprime;
    if (B == 0.0) return n;
    if (n != nprime)
        throw IncompatibleDegrees(std::string(where) +
                                  ": n != n' with both transition parts active");
    return n;
}

} // namespace

PowerSeries moebius_series(cplx A, int n, std::size_t degree) {
    if (n < 1) throw InconsistentInput("moebius_series: n must be positive");
    std::vector<cplx> c(degree + 1, 0.0);
    if (degree >= 1) c[1] = 1.0;
    // (1 + x)^{-1/n} = sum_k binom(-1/n, k) x^k with x = A w^n.
    cplx binom = 1.0;
    cplx Ak = 1.0;
    const cplx alpha = -1.0 / double(n);
    for (std::size_t k = 1; std::size_t(n) * k + 1 <= degree; ++k) {
        binom *= (alpha - double(k - 1)) / double(k);
        Ak *= A;
        c[std::size_t(n) * k + 1] = binom * Ak;
    }
    return PowerSeries(std::move(c));
}

HornMapPair moebius_horn_pair(const MoebiusModulus& m, int k_max, double floor) {
    HornMapPair h;
    h.a = m.a;
    const cplx den0 = TWO_PI * I * double(m.n);
    const cplx den_inf = TWO_PI * I * double(m.nprime);
    cplx Ak = 1.0, Bk = 1.0;
    for (int k = 1; k <= k_max; ++k) {
        Ak *= m.A;
        Bk *= m.B;
        const double sgn = (k % 2 == 0) ? -1.0 : 1.0;
        const cplx bk = sgn * Ak / (den0 * double(k));
        const cplx ck = -sgn * Bk / (den_inf * double(k));
        if (std::abs(bk) >= floor && m.A != 0.0) h.b[-m.n * k] = bk;
        if (std::abs(ck) >= floor && m.B != 0.0) h.c[m.nprime * k] = ck;
    }
    return h;
}

MoebiusFit fit_moebius(const HornMapPair& h, int n, int nprime) {
    if (n < 1 || nprime < 1)
        throw InconsistentInput("fit_moebius: degrees must be positive");
    MoebiusFit out;
    out.m.n = n;
    out.m.nprime = nprime;
    out.m.a = h.a;

    auto mode = [](const std::map<int, cplx>& mm, int key) {
        auto it = mm.find(key);
        return it == mm.end() ? cplx(0.0) : it->second;
    };
    out.m.A = TWO_PI * I * double(n) * mode(h.b, -n);
    out.m.B = -TWO_PI * I * double(nprime) * mode(h.c, nprime);

    // Sup misfit of every stored mode against the two-parameter model.
    double res = 0.0;
    cplx Ak = 1.0, Bk = 1.0;
    std::map<int, cplx> pred_b, pred_c;
    const int kb = h.b.empty() ? 0 : (-h.b.begin()->first) / n + 1;
    const int kc = h.c.empty() ? 0 : h.c.rbegin()->first / nprime + 1;
    for (int k = 1; k <= std::max(kb, kc); ++k) {
        Ak *= out.m.A;
        Bk *= out.m.B;
        const double sgn = (k % 2 == 0) ? -1.0 : 1.0;
        pred_b[-n * k] = sgn * Ak / (TWO_PI * I * double(n * k));
        pred_c[nprime * k] = -sgn * Bk / (TWO_PI * I * double(nprime * k));
    }
    for (const auto& [key, val] : h.b) res = std::max(res, std::abs(val - mode(pred_b, key)));
    for (const auto& [key, val] : h.c) res = std::max(res, std::abs(val - mode(pred_c, key)));
    out.residual = res;
    return out;
}

HClosedForms closed_form_h(const MoebiusModulus& m, const Periods& per, Sheet sheet) {
    // The Periods fields are labeled after the sheet of the representative
    // they were evaluated at; on the turned sheet the roles are exchanged.
    const LogComplex Cb = (sheet == Sheet::Bar) ? per.C_bar : per.C_tilde;
    const LogComplex Ct = (sheet == Sheet::Bar) ? per.C_tilde : per.C_bar;
    const int n = m.n, np = m.nprime;

    HClosedForms out;
    const LogComplex A = lc_of(m.A), B = lc_of(m.B);
    const LogComplex dt = one_minus_checked(Ct.pow_int(n), "closed_form_h");
    const LogComplex db = one_minus_checked(Cb.pow_int(n), "closed_form_h");
    const LogComplex dtp = one_minus_checked(Ct.pow_int(np), "closed_form_h");
    const LogComplex dbp = one_minus_checked(Cb.pow_int(np), "closed_form_h");

    out.d_tilde = A / dt;
    out.e_tilde = B / dbp;
    out.d_bar = A * Cb.pow_int(n) / db;
    // (C_tilde beta)^{n'} = C_bar^{-n'}.
    out.e_bar = B * Cb.pow_int(-np) / dtp;

    const int ne = effective_degree(m.A, m.B, n, np, "closed_form_h");
    const LogComplex dbe = one_minus_checked(Cb.pow_int(ne), "closed_form_h");
    const LogComplex dte = one_minus_checked(Ct.pow_int(ne), "closed_form_h");
    LogComplex bracket = dbe * dte;
    if (m.A != 0.0 && m.B != 0.0) bracket = bracket.sub(lc_of(m.A * m.B));
    out.Fn = (bracket * Cb.pow_int(ne) / dbe.pow_int(2)).neg();
    out.Gn = (bracket * Cb.pow_int(-ne) / dte.pow_int(2)).neg();

    // Pointwise self-check of the four conjugacies
    //   h~0 o L_{Ct} o psi0   = L_{Ct}      o h~0
    //   hb0 o psi0  o L_{Cb}  = L_{Cb}      o hb0
    //   h~inf o L_{Ct} o psiI = L_{Ct beta} o h~inf
    //   hbinf o psiI o L_{Cb} = L_{Cb beta} o hbinf
    // at desk scales; the exponentially small physical scales skip it.
    const double blg = 4.0 * PI * PI * std::abs(m.a.real());
    const double span =
        std::max({std::abs(Cb.lg.real()), std::abs(Ct.lg.real()), blg}) * std::max(n, np);
    if (span <= 40.0) {
        const cplx cb = Cb.value(), ct = Ct.value();
        const cplx beta = m.beta_mult().value();
        const cplx dt_v = out.d_tilde.value(), db_v = out.d_bar.value();
        const cplx et_v = out.e_tilde.value(), eb_v = out.e_bar.value();
        auto m0 = [](cplx A_, int n_, cplx w) { return apply_map(moebius_map(A_, n_), w); };
        auto tn = [](cplx B_, int n_, cplx w) {
            return apply_map(translation_n_map(B_, n_), w);
        };
        auto nroot = [](double v, int n_) { return std::pow(v, 1.0 / double(n_)); };
        const double r0 = 0.05 /
                          ((1.0 + nroot(std::abs(m.A), n) + nroot(std::abs(dt_v), n) +
                            nroot(std::abs(db_v), n)) *
                           std::max({1.0, std::abs(cb), std::abs(ct)}));
        const double R = 20.0 *
                         (1.0 + nroot(std::abs(m.B), np) + nroot(std::abs(et_v), np) +
                          nroot(std::abs(eb_v), np)) /
                         std::min({1.0, std::abs(cb), std::abs(ct), std::abs(beta),
                                   std::abs(cb * beta), std::abs(ct * beta)});
        static const double conj_tol = 1e-9;
        for (int k = 0; k < 5; ++k) {
            const cplx w0 = r0 * std::exp(I * (0.37 + TWO_PI * double(k) / 5.0));
            const cplx wI = R * std::exp(I * (0.59 + TWO_PI * double(k) / 5.0));
            const cplx pairs[4][2] = {
                {m0(dt_v, n, ct * m0(m.A, n, w0)), ct * m0(dt_v, n, w0)},
                {m0(db_v, n, m0(m.A, n, cb * w0)), cb * m0(db_v, n, w0)},
                {tn(et_v, np, ct * (beta * tn(m.B, np, wI))), ct * beta * tn(et_v, np, wI)},
                {tn(eb_v, np, beta * tn(m.B, np, cb * wI)), cb * beta * tn(eb_v, np, wI)}};
            for (const auto& pr : pairs) {
                const double den = std::max({std::abs(pr[0]), std::abs(pr[1]), 1e-30});
                if (std::abs(pr[0] - pr[1]) > conj_tol * den)
                    throw InvariantViolated(
                        "closed_form_h: conjugacy identity fails at a sample point");
            }
        }
    }
    return out;
}

CompatConstants compat_constants(const MoebiusModulus& m_bar,
                                 const MoebiusModulus& m_tilde, const Periods& per) {
    if (m_bar.n != m_tilde.n || m_bar.nprime != m_tilde.nprime)
        throw IncompatibleDegrees("compat_constants: sheet moduli disagree on (n, n')");
    if ((m_bar.A == 0.0) != (m_tilde.A == 0.0) ||
        (m_bar.B == 0.0) != (m_tilde.B == 0.0))
        throw InconsistentInput(
            "compat_constants: a transition part vanishes on one sheet only");

    CompatConstants out;
    out.AB = m_bar.A * m_bar.B;
    out.ab_mismatch = std::abs(m_bar.A * m_bar.B - m_tilde.A * m_tilde.B);
    const double ab_scale =
        std::max({1.0, std::abs(m_bar.A * m_bar.B), std::abs(m_tilde.A * m_tilde.B)});
    if (out.ab_mismatch > 1e-10 * ab_scale)
        throw InvariantViolated(
            "compat_constants: the scaling invariant A B differs across the sheets");

    const int ne = effective_degree(m_bar.A, m_bar.B, m_bar.n, m_bar.nprime,
                                    "compat_constants");
    // Convention: `per` was evaluated at a principal-sheet representative.
    const LogComplex Cb = per.C_bar, Ct = per.C_tilde;

    if (m_bar.A == 0.0 && m_bar.B == 0.0) {
        out.Fn = LogComplex::one();
        out.Gn = LogComplex::one();
        out.asym_ratio = 0.0;
        return out;
    }

    const LogComplex dbe = one_minus_checked(Cb.pow_int(ne), "compat_constants");
    const LogComplex dte = one_minus_checked(Ct.pow_int(ne), "compat_constants");
    LogComplex bracket = dbe * dte;
    if (m_bar.A != 0.0 && m_bar.B != 0.0)
        bracket = bracket.sub(lc_of(m_bar.A * m_bar.B));

    if (m_bar.A == 0.0) {
        // psi^0 = id: F G = 1 exactly, and the generic F formula survives.
        const LogComplex ratioB = lc_of(m_tilde.B) / lc_of(m_bar.B);
        out.Fn = (ratioB * bracket * Cb.pow_int(ne) / dbe.pow_int(2)).neg();
        out.Gn = LogComplex::one() / out.Fn;
        out.asym_ratio = 0.0;
        return out;
    } else if (m_bar.B == 0.0) {
        const LogComplex ratioA = lc_of(m_tilde.A) / lc_of(m_bar.A);
        out.Gn = (ratioA * bracket * Cb.pow_int(-ne) / dte.pow_int(2)).neg();
        out.Fn = LogComplex::one() / out.Gn;
        out.asym_ratio = 0.0;
        return out;
    } else {
        const LogComplex ratioB = lc_of(m_tilde.B) / lc_of(m_bar.B);
        const LogComplex ratioA = lc_of(m_tilde.A) / lc_of(m_bar.A);
        out.Fn = (ratioB * bracket * Cb.pow_int(ne) / dbe.pow_int(2)).neg();
        out.Gn = (ratioA * bracket * Cb.pow_int(-ne) / dte.pow_int(2)).neg();
    }

    // Relative defect of F^n G^n - 1 - 2 A B C_tilde^{-n}, measured against
    // C_tilde^{-n}; o(1) along eps -> 0 when the pair is compatible. The raw
    // product F^n G^n carries log-space rounding far above the defect scale,
    // so expand the exact identity F G = q (1 - u)^2 with q = (At Bt)/(Ab Bb)
    // and u = Ab Bb / ((1 - C_bar^n)(1 - C_tilde^n)) term by term instead.
    const cplx q = (m_tilde.A * m_tilde.B) / out.AB;
    const cplx q_m1 = (m_tilde.A * m_tilde.B - out.AB) / out.AB;
    const LogComplex ct_inv = Ct.pow_int(-ne);
    const LogComplex cb_pow = Cb.pow_int(ne);
    // q - (1 - C_bar^n)(1 - C_tilde^{-n}), every term individually small.
    const LogComplex N =
        lc_of(q_m1).add(cb_pow).add(ct_inv).sub(cb_pow * ct_inv);
    const LogComplex term2 =
        lc_of(2.0 * out.AB) * ct_inv * N / (dbe * ct_inv.one_minus());
    const LogComplex u = lc_of(out.AB) / (dbe * dte);
    const LogComplex defect = lc_of(q_m1).add(term2).add(lc_of(q) * u.pow_int(2));
    if (lc_is_zero(defect)) {
        out.asym_ratio = 0.0;
    } else {
        out.asym_ratio = std::exp(defect.log_abs() - ct_inv.log_abs());
    }
    return out;
}

CanonicalRep canonical_representative(const PowerSeries& A, const PowerSeries& B) {
    CanonicalRep out;
    out.NA = series_order(A);
    out.NB = series_order(B);
    const std::size_t degA = A.degree(), degB = B.degree();

    if (out.NA < 0 && out.NB < 0) {
        out.tag = 4;
        out.A_norm = PowerSeries::constant(0.0, degA);
        out.B_norm = PowerSeries::constant(0.0, degB);
        out.scale = PowerSeries::constant(1.0, degA);
        return out;
    }
    if (out.NA < 0) {
        // A == 0: pick k = unit part of B, so B k^{-1}... B/k = eps^{NB}.
        out.tag = 2;
        out.A_norm = PowerSeries::constant(0.0, degA);
        out.B_norm = monomial(std::size_t(out.NB), degB);
        out.scale = shifted_down(B, out.NB);
        return out;
    }
    const PowerSeries uA = shifted_down(A, out.NA);
    const PowerSeries k = uA.reciprocal(); // A k = eps^{NA}
    if (out.NB < 0) {
        out.tag = 3;
        out.A_norm = monomial(std::size_t(out.NA), degA);
        out.B_norm = PowerSeries::constant(0.0, degB);
        out.scale = k;
        return out;
    }
    out.tag = 1;
    out.A_norm = monomial(std::size_t(out.NA), degA);
    // B/k = B uA, with its eps^{NB} factor pulled out front.
    out.B_norm = (shifted_down(B, out.NB) * uA) * monomial(std::size_t(out.NB), degB);
    out.scale = k;
    return out;
}

MoebiusModulus gamma_modulus(cplx alpha, cplx beta) {
    const cplx a = 1.0 - alpha - beta;
    check_resonant_invariant(a, "gamma_modulus");
    MoebiusModulus m;
    m.n = 1;
    m.nprime = 1;
    m.a = a;
    m.A = TWO_PI * I * recip_gamma(1.0 - alpha) * recip_gamma(1.0 - beta);
    m.B = -TWO_PI * I * std::exp(I * PI * a) * recip_gamma(alpha) * recip_gamma(beta);
    return m;
}

MoebiusModulus gamma_modulus_degenerate(cplx a, cplx beta_bar, cplx d) {
    check_resonant_invariant(a, "gamma_modulus_degenerate");
    MoebiusModulus m;
    m.n = 1;
    m.nprime = 1;
    m.a = a;
    m.A = d * recip_gamma(a + beta_bar * d) * recip_gamma(1.0 - beta_bar * d);
    // 1/Gamma(z) ~ z at z = 0, so recip_gamma(beta_bar d)/d -> beta_bar.
    const cplx tail = (d == 0.0) ? beta_bar : recip_gamma(beta_bar * d) / d;
    m.B = -TWO_PI * I * std::exp(I * PI * a) * recip_gamma(1.0 - a - beta_bar * d) * tail;
    return m;
}

RiccatiSystem riccati3_system(cplx alpha, cplx beta) {
    RiccatiSystem sys;
    sys.c = alpha * beta;
    sys.a = 1.0 - alpha - beta;
    sys.d = 1.0;
    return sys;
}

cplx holonomy_once(const RiccatiSystem& sys, cplx eps, cplx x0, double tol) {
    const double guard = 0.05 * std::max(sys.y0, 1e-3);
    auto rhs = [&sys, eps, guard](double th, cplx x) -> cplx {
        const cplx y = sys.y0 * std::exp(I * th);
        const cplx p = x * x - eps;
        const cplx den = sys.c * p + y * (1.0 + sys.a * x) + sys.d * y * y;
        if (std::abs(den) < guard)
            throw PathSingularity("holonomy_once: foliation denominator degenerates "
                                  "on the transversal loop");
        return I * y * p / den;
    };
    OdeOptions opt;
    opt.rel_tol = tol;
    opt.abs_tol = 0.1 * tol;
    return integrate_ode(rhs, 0.0, TWO_PI, x0, opt);
}

GermFamily holonomy_family(const RiccatiSystem& sys, cplx eps, double radius,
                           std::size_t count) {
    const PowerSeries t = taylor_from_evaluator(
        [&sys, eps](cplx x) { return holonomy_once(sys, eps, x); }, 0.0, radius, count);

    // The singular points x = +-sqrt(eps) are fixed by the holonomy; check
    // them (and the series constant term) against the integration budget.
    static const double fp_tol = 1e-10;
    const cplx sq = std::sqrt(eps);
    if (std::abs(sq) < 0.5 * radius) {
        for (const cplx fp : {sq, -sq}) {
            const cplx img = holonomy_once(sys, eps, fp);
            if (std::abs(img - fp) > fp_tol)
                throw ToleranceMiss("holonomy_family: singular point is not fixed "
                                    "within the integration budget");
        }
    }
    if (eps == 0.0 && std::abs(t[0]) > fp_tol)
        throw ToleranceMiss("holonomy_family: constant term survives at eps = 0");

    GermFamily g;
    g.z_radius = 0.93 * radius;
    g.J = count - 1;
    g.K = 0;
    g.name = "riccati-holonomy";
    g.eval = [t, eps](cplx z, cplx eta) -> cplx {
        if (std::abs(eta - eps) > 1e-14 * std::max(1.0, std::abs(eps)))
            throw InconsistentInput(
                "holonomy_family: evaluator is bound to the parameter it was built at");
        return t.eval(z);
    };
    return g;
}

std::vector<FlatnessSample> riccati_flatness_samples(const MoebiusModulus& m,
                                                     const std::vector<double>& eps_values,
                                                     double arg_eps, bool infinity_end) {
    if (m.A == 0.0 || m.B == 0.0)
        throw InconsistentInput(
            "riccati_flatness_samples: deviation vanishes identically when a "
            "transition part is zero");
    const int ne = effective_degree(m.A, m.B, m.n, m.nprime, "riccati_flatness_samples");
    const cplx pref = infinity_end ? m.B : m.A;

    std::vector<FlatnessSample> out;
    out.reserve(eps_values.size());
    for (const double r : eps_values) {
        const SectorPoint pt = sector_point(r, arg_eps);
        const Periods per = periods_of(pt, m.a);
        const LogComplex Cb = per.C_bar, Ct = per.C_tilde;
        const LogComplex cbn = Cb.pow_int(ne);
        const LogComplex bpow = per.beta_mult.pow_int(ne);
        const LogComplex dbe = one_minus_checked(cbn, "riccati_flatness_samples");
        const LogComplex dte =
            one_minus_checked(Ct.pow_int(ne), "riccati_flatness_samples");
        // beta^n F^n - 1 = [C^n (1 - beta^n) - u (1 - (beta C)^n)] / (1 - C^n)
        // with u = A B / ((1 - C^n)(1 - Ct^n)); every piece stays tiny.
        const LogComplex t1 = (std::abs(bpow.lg) < 1e-14)
                                  ? LogComplex::from_log(kLogZero)
                                  : cbn * bpow.one_minus();
        const LogComplex u = lc_of(m.A * m.B) / (dbe * dte);
        const LogComplex t2 = u * (bpow * cbn).one_minus();
        const LogComplex dev = lc_of(pref) * t1.sub(t2) / dbe;

        FlatnessSample s;
        s.sqrt_eps_abs = std::abs(pt.sqrt_eps());
        s.log_dev = dev.log_abs();
        s.log_C_abs = Cb.log_abs();
        out.push_back(s);
    }
    return out;
}

PowerSeries koenigs_conjugation(const PowerSeries& g, cplx C, std::size_t degree) {
    if (g.degree() < 1 || g[0] != 0.0)
        throw InconsistentInput("koenigs_conjugation: germ must fix the origin");
    if (rel_diff(g[1], C) > 1e-12)
        throw InconsistentInput("koenigs_conjugation: g'(0) does not match C");
    if (std::abs(std::abs(C) - 1.0) < 1e-8)
        throw NonHyperbolic("koenigs_conjugation: |C| = 1");

    // Pad to the working degree: products truncate to the longer operand, so
    // a short input would otherwise cap every power of g below `degree`.
    std::vector<cplx> gc(degree + 1, 0.0);
    for (std::size_t k = 0; k <= std::min(g.degree(), degree); ++k) gc[k] = g[k];
    const PowerSeries gt{std::move(gc)};
    std::vector<PowerSeries> gpow; // gpow[m-1] = g^m
    gpow.push_back(gt);
    for (std::size_t m = 2; m <= degree; ++m)
        gpow.push_back((gpow.back() * gt).truncated(degree));

    PowerSeries h = PowerSeries::identity(degree);
    for (std::size_t j = 2; j <= degree; ++j) {
        cplx r = gt[j];
        for (std::size_t m = 2; m < j; ++m) r += h[m] * gpow[m - 1][j];
        h.set(j, r / (C - pow_int(C, int(j))));
    }
    return h;
}

namespace {

// Degree-j coefficient of LHS - RHS of the self-compatibility equation for the
// current candidate h (everything truncated at h.degree()).
cplx compat_coeff(const PowerSeries& h, cplx F, cplx C, cplx beta, std::size_t j) {
    const PowerSeries lhs = h.compose(scale_inner(h, C * beta).scaled(F / C));
    const PowerSeries rhs = h.compose(h.scaled(F * C * beta)).scaled(1.0 / C);
    return lhs[j] - rhs[j];
}

// Same for the commutator form used at beta = 1 (F drops out).
cplx commutator_coeff(const PowerSeries& h, cplx C, std::size_t j) {
    const PowerSeries lhs = h.compose(scale_inner(h, C).scaled(1.0 / C));
    const PowerSeries rhs = h.compose(h.scaled(C)).scaled(1.0 / C);
    return lhs[j] - rhs[j];
}

} // namespace

RecursionResult unique_h_recursion(const PowerSeries& psi0, cplx beta_mult, cplx C_bar,
                                   std::size_t degree, double tol) {
    if (std::abs(std::abs(C_bar) - 1.0) < 1e-8)
        throw NonHyperbolic("unique_h_recursion: |C| = 1");
    if (psi0.degree() >= 1 && rel_diff(psi0[1], 1.0) > 1e-12)
        throw InconsistentInput("unique_h_recursion: psi0 must be tangent to identity");

    RecursionResult out;
    out.beta_one_branch = std::abs(beta_mult - 1.0) < 1e-8;

    // First active order of psi0.
    int s = 0;
    {
        const double scale = std::max(1.0, psi0.max_abs());
        for (std::size_t k = 2; k <= psi0.degree(); ++k)
            if (std::abs(psi0[k]) > 1e-14 * scale) {
                s = int(k);
                break;
            }
    }
    out.s = s;
    if (s == 0) {
        out.h = PowerSeries::identity(degree);
        out.consistent = true;
        out.max_mismatch = 0.0;
        out.F = 1.0;
        return out;
    }

    if (std::abs(psi0[0]) > 1e-12)
        throw InconsistentInput("unique_h_recursion: psi0 must fix the origin");

    // Conjugacy route: h_K(psi0(C w)) = C h_K(w).
    std::vector<cplx> gc(degree + 2, 0.0);
    cplx ck = 1.0;
    for (std::size_t k = 0; k <= degree + 1; ++k) {
        gc[k] = psi0[k] * ck;
        ck *= C_bar;
    }
    gc[0] = 0.0;
    gc[1] = C_bar;
    const PowerSeries g{std::move(gc)};
    const PowerSeries h_K = koenigs_conjugation(g, C_bar, degree + 1);

    PowerSeries h;
    if (out.beta_one_branch) {
        if (s != 2)
            throw RegimeError("unique_h_recursion: beta = 1 branch implemented for "
                              "first active order 2 only");
        // Commutator form: the degree-j equation determines b_{j-1}; degrees
        // 2 and 3 are unconstrained, so b_2 is taken from the conjugacy route.
        const std::size_t work = degree + 1;
        h = PowerSeries::identity(work);
        h.set(2, h_K[2]);
        for (std::size_t j = 4; j <= work; ++j) {
            const std::size_t mdeg = j - 1;
            h.set(mdeg, 0.0);
            const cplx e0 = commutator_coeff(h, C_bar, j);
            h.set(mdeg, 1.0);
            const cplx slope = commutator_coeff(h, C_bar, j) - e0;
            if (std::abs(slope) < 1e-14)
                throw PivotVanished("unique_h_recursion: commutator pivot vanished");
            h.set(mdeg, -e0 / slope);
        }
        h = h.truncated(degree);
        out.F = 1.0;
    } else {
        // F at the first active order, principal root.
        const cplx Cb1s = pow_int(C_bar * beta_mult, 1 - s);
        const cplx C1s = pow_int(C_bar, 1 - s);
        const cplx Fs1 = (Cb1s - 1.0) / (C1s - 1.0);
        const cplx F = (s == 2) ? Fs1 : std::exp(std::log(Fs1) / double(s - 1));
        out.F = F;
        const cplx Fb = F * beta_mult;

        h = PowerSeries::identity(degree);
        for (int k = 2; k < s; ++k) h.set(std::size_t(k), 0.0);
        h.set(std::size_t(s), h_K[std::size_t(s)]);

        // The degree-s equation must hold identically once F is fixed.
        const cplx es = compat_coeff(h, F, C_bar, beta_mult, std::size_t(s));
        const double ref = 1.0 + psi0.max_abs() + std::abs(Fb);
        if (std::abs(es) > 1e-8 * ref)
            throw InvariantViolated(
                "unique_h_recursion: first-order equation fails for the computed F");

        for (std::size_t j = std::size_t(s) + 1; j <= degree; ++j) {
            // Analytic pivot of the affine degree-j equation in b_j.
            const cplx cj =
                Fb * (1.0 - pow_int(Fb, int(j) - 1) +
                      pow_int(C_bar * beta_mult, int(j) - 1) * (pow_int(F, int(j) - 1) - 1.0));
            if (std::abs(cj) < 1e-14 * std::max(1.0, std::abs(Fb)))
                throw PivotVanished("unique_h_recursion: recursion pivot vanished");
            const cplx e0 = compat_coeff(h, F, C_bar, beta_mult, j);
            h.set(j, 1.0);
            const cplx slope = compat_coeff(h, F, C_bar, beta_mult, j) - e0;
            if (std::abs(slope + cj) > 1e-7 * (1.0 + std::abs(cj)))
                throw InvariantViolated(
                    "unique_h_recursion: measured pivot disagrees with the closed form");
            h.set(j, e0 / cj);
        }
    }

    // The recursion sees psi0 only through (s, b_s), so its solution must
    // coincide with the one-parameter closed form m_{(1-s) b_s, s-1}.
    const PowerSeries closed =
        moebius_series(double(1 - s) * h_K[std::size_t(s)], s - 1, degree);
    for (std::size_t j = 2; j <= degree; ++j)
        if (std::abs(h[j] - closed[j]) > 1e-10 * std::max(1.0, closed.max_abs()))
            throw InvariantViolated(
                "unique_h_recursion: solution deviates from the closed Moebius form");

    out.h = h;
    double mism = 0.0;
    for (std::size_t j = 2; j <= degree; ++j)
        mism = std::max(mism, std::abs(h[j] - h_K[j]));
    out.max_mismatch = mism;
    out.consistent = mism <= tol;
    return out;
}

} // namespace parmod
