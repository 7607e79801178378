#include "parmod/glutsyuk.hpp"

#include <algorithm>
#include <cmath>

#include "parmod/errors.hpp"

namespace parmod {

namespace {

constexpr std::size_t series_cap = 10000;
constexpr int inv_newton_max = 30;
constexpr double inv_tol = 1e-14;

cplx mode_sum(const std::map<int, cplx>& m, cplx W) {
    cplx acc = 0.0;
    for (const auto& [n, v] : m) acc += v * std::exp(TWO_PI * I * double(n) * W);
    return acc;
}

// Solve map(X) = W by the quasi-Newton fixed-point step X -= map(X) - W,
// valid because every map here is id + small on its working band.
cplx invert_near_identity(const std::function<cplx(cplx)>& map, cplx W, cplx X0) {
    cplx X = X0;
    for (int it = 0; it < inv_newton_max; ++it) {
        const cplx r = map(X) - W;
        if (std::abs(r) < inv_tol * std::max(1.0, std::abs(W))) return X;
        X -= r;
    }
    throw NewtonDiverged("invert_near_identity: iteration stalled");
}

// Telescoping sum of lam along orbits of step (start point included), stopped
// once two consecutive terms fall under the roundoff scale of the sum.
cplx telescope(const std::function<cplx(cplx)>& lam, const std::function<cplx(cplx)>& step,
               cplx W) {
    cplx acc = 0.0;
    cplx X = W;
    int quiet = 0;
    for (std::size_t n = 0; n < series_cap; ++n) {
        const cplx term = lam(X);
        acc += term;
        if (std::abs(term) < 1e-16 * std::max(1.0, std::abs(W + acc))) {
            if (++quiet >= 2) return acc;
        } else {
            quiet = 0;
        }
        X = step(X);
    }
    throw SeriesStall("telescope: conjugator series did not settle");
}

} // namespace

SheetMaps::SheetMaps(const HornMapPair& horn, const SectorPoint& eps) {
    if (eps.on_bar_sheet())
        sheet_ = Sheet::Bar;
    else if (eps.on_tilde_sheet())
        sheet_ = Sheet::Tilde;
    else
        throw NotGlutsyukSector("SheetMaps: parameter lies on neither overlap sheet");
    a_ = horn.a;
    per_ = periods_of(eps, a_);
    alpha0_ = per_.alpha0;
    alpha_inf_ = per_.alpha_inf;
    b_ = horn.b;
    c_ = horn.c;
}

cplx SheetMaps::psi0(cplx W) const { return W + mode_sum(b_, W); }

cplx SheetMaps::psi_inf(cplx W) const {
    return W - TWO_PI * I * a_ + mode_sum(c_, W);
}

cplx SheetMaps::K0(cplx W) const {
    return (sheet_ == Sheet::Tilde) ? psi0(W) + alpha0_ : psi0(W + alpha0_);
}

cplx SheetMaps::Kinf(cplx W) const {
    return (sheet_ == Sheet::Tilde) ? psi_inf(W) + alpha0_ : psi_inf(W + alpha0_);
}

cplx SheetMaps::K0_inv(cplx W) const {
    return invert_near_identity([this](cplx X) { return K0(X); }, W, W - alpha0_);
}

cplx SheetMaps::Kinf_inv(cplx W) const {
    return invert_near_identity([this](cplx X) { return Kinf(X); }, W,
                                W - alpha0_ + TWO_PI * I * a_);
}

cplx SheetMaps::lambda0(cplx W) const {
    return (sheet_ == Sheet::Tilde) ? mode_sum(b_, W) : mode_sum(b_, W + alpha0_);
}

cplx SheetMaps::lambda_inf(cplx W) const {
    // The intrinsic -2 pi i a of psi_inf cancels against alpha0 - alpha_inf;
    // only the oscillating modes survive in the deviation.
    return (sheet_ == Sheet::Tilde) ? mode_sum(c_, W) : mode_sum(c_, W + alpha0_);
}

cplx SheetMaps::h0(cplx W) const {
    auto lam = [this](cplx X) { return lambda0(X); };
    if (sheet_ == Sheet::Tilde) {
        // G - G o K0 = lambda0, iterated down: G = -sum_{n>=1} lambda0 o K0^{-n}.
        auto step = [this](cplx X) { return K0_inv(X); };
        return W - telescope(lam, step, K0_inv(W));
    }
    // Bar sheet: K0 itself moves down: G = sum_{n>=0} lambda0 o K0^n.
    auto step = [this](cplx X) { return K0(X); };
    return W + telescope(lam, step, W);
}

cplx SheetMaps::h_inf(cplx W) const {
    auto lam = [this](cplx X) { return lambda_inf(X); };
    if (sheet_ == Sheet::Tilde) {
        // Kinf moves up, where the infinity deviation decays.
        auto step = [this](cplx X) { return Kinf(X); };
        return W + telescope(lam, step, W);
    }
    auto step = [this](cplx X) { return Kinf_inv(X); };
    return W - telescope(lam, step, Kinf_inv(W));
}

cplx SheetMaps::h0_inv(cplx W) const {
    return invert_near_identity([this](cplx X) { return h0(X); }, W, W);
}

cplx SheetMaps::h_inf_inv(cplx W) const {
    return invert_near_identity([this](cplx X) { return h_inf(X); }, W, W);
}

cplx SheetMaps::modulus(cplx W) const {
    return (sheet_ == Sheet::Tilde) ? h_inf(h0_inv(W)) : h0(h_inf_inv(W));
}

cplx koenigs_linearize(const std::function<cplx(cplx)>& g, cplx fixed, cplx multiplier,
                       cplx u, double tol, std::size_t n_max) {
    const double mod = std::abs(multiplier);
    if (std::abs(mod - 1.0) < 1e-8)
        throw NonHyperbolic("koenigs_linearize: multiplier too close to the unit circle");
    if (mod > 1.0)
        throw DomainError("koenigs_linearize: pass the contracting branch");
    const double escape = 10.0 * std::abs(u - fixed) + 1.0;
    cplx p = u - fixed;
    if (p == cplx(0.0)) return 0.0;
    cplx x = u;
    int quiet = 0;
    for (std::size_t n = 0; n < n_max; ++n) {
        const cplx x1 = g(x);
        const cplx d1 = x1 - fixed;
        if (std::abs(d1) > escape)
            throw OrbitEscape("koenigs_linearize: orbit left the linearization scale");
        const cplx p1 = p * (d1 / ((x - fixed) * multiplier));
        if (std::abs(p1 - p) < tol * std::max(1e-300, std::abs(p1))) {
            if (++quiet >= 2) return p1;
        } else {
            quiet = 0;
        }
        p = p1;
        x = x1;
    }
    throw NoConvergence("koenigs_linearize: ratio product did not settle");
}

namespace {

// Nelder-Mead simplex minimization, adequate for the low-dimensional smooth
// fits done here.
std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                std::vector<double> x0, double step, int iters) {
    const std::size_t d = x0.size();
    std::vector<std::vector<double>> pts(d + 1, x0);
    for (std::size_t i = 0; i < d; ++i) pts[i + 1][i] += step;
    std::vector<double> val(d + 1);
    for (std::size_t i = 0; i <= d; ++i) val[i] = f(pts[i]);
    for (int it = 0; it < iters; ++it) {
        std::size_t lo = 0, hi = 0;
        for (std::size_t i = 1; i <= d; ++i) {
            if (val[i] < val[lo]) lo = i;
            if (val[i] > val[hi]) hi = i;
        }
        std::size_t hi2 = (hi == 0) ? 1 : 0;
        for (std::size_t i = 0; i <= d; ++i)
            if (i != hi && val[i] > val[hi2]) hi2 = i;
        if (val[hi] - val[lo] < 1e-15 * (1.0 + std::abs(val[lo]))) break;
        std::vector<double> cen(d, 0.0);
        for (std::size_t i = 0; i <= d; ++i)
            if (i != hi)
                for (std::size_t k = 0; k < d; ++k) cen[k] += pts[i][k] / double(d);
        auto blend = [&](double t) {
            std::vector<double> p(d);
            for (std::size_t k = 0; k < d; ++k) p[k] = cen[k] + t * (pts[hi][k] - cen[k]);
            return p;
        };
        auto refl = blend(-1.0);
        double fr = f(refl);
        if (fr < val[lo]) {
            auto exp2 = blend(-2.0);
            double fe = f(exp2);
            if (fe < fr) {
                pts[hi] = exp2;
                val[hi] = fe;
            } else {
                pts[hi] = refl;
                val[hi] = fr;
            }
        } else if (fr < val[hi2]) {
            pts[hi] = refl;
            val[hi] = fr;
        } else {
            auto con = blend(0.5);
            double fc = f(con);
            if (fc < val[hi]) {
                pts[hi] = con;
                val[hi] = fc;
            } else {
                for (std::size_t i = 0; i <= d; ++i) {
                    if (i == lo) continue;
                    for (std::size_t k = 0; k < d; ++k)
                        pts[i][k] = 0.5 * (pts[i][k] + pts[lo][k]);
                    val[i] = f(pts[i]);
                }
            }
        }
    }
    std::size_t lo = 0;
    for (std::size_t i = 1; i <= d; ++i)
        if (val[i] < val[lo]) lo = i;
    return pts[lo];
}

} // namespace

CompatReport compatibility_check(const SheetMaps& bar, const SheetMaps& tilde,
                                 const CompatOptions& opt) {
    if (bar.sheet() != Sheet::Bar || tilde.sheet() != Sheet::Tilde)
        throw InconsistentInput("compatibility_check: sheet roles are swapped");
    const int m = std::max(4, opt.n_samples);
    std::vector<cplx> W(m), lhs(m);
    for (int j = 0; j < m; ++j) {
        W[j] = cplx(-0.5 * opt.span + opt.span * double(j) / double(m - 1), 0.0);
        lhs[j] = tilde.modulus(W[j]);
    }
    const cplx D = TWO_PI * I * tilde.a();
    auto sup_mismatch = [&](cplx Dv, cplx Dp) {
        double worst = 0.0;
        for (int j = 0; j < m; ++j)
            worst = std::max(worst, std::abs(lhs[j] - Dv - bar.modulus(W[j] + Dp)));
        return worst;
    };
    // Constant-matching initial guess for the companion shift.
    cplx Dp0 = 0.0;
    for (int j = 0; j < m; ++j) Dp0 += lhs[j] - D - bar.modulus(W[j]);
    Dp0 /= double(m);
    auto obj2 = [&](const std::vector<double>& x) { return sup_mismatch(D, cplx(x[0], x[1])); };
    auto best2 = nelder_mead(obj2, {Dp0.real(), Dp0.imag()}, 1e-3, 200);
    const cplx Dp(best2[0], best2[1]);
    const double res = sup_mismatch(D, Dp);

    cplx gamma = 0.0;
    if (opt.gamma_fit) {
        auto obj4 = [&](const std::vector<double>& x) {
            return sup_mismatch(cplx(x[0], x[1]), cplx(x[2], x[3]));
        };
        auto best4 = nelder_mead(obj4, {D.real(), D.imag(), Dp.real(), Dp.imag()}, 1e-4, 200);
        gamma = cplx(best4[0], best4[1]) - D;
    }

    CompatReport rep;
    rep.D = D;
    rep.Dprime = Dp;
    rep.gamma = gamma;
    rep.residual = res;
    rep.tol = opt.tol;
    rep.compatible = res <= opt.tol;
    return rep;
}

FlatnessFit flatness_fit(const std::vector<FlatnessSample>& samples, double noise_log) {
    if (samples.size() < 3)
        throw InconsistentInput("flatness_fit: need at least three samples");
    FlatnessFit fit{};
    fit.vacuous = true;
    for (const auto& s : samples)
        if (s.log_dev > noise_log) fit.vacuous = false;

    // Regression of log_dev on x = 1/|sqrt(eps)|: log_dev = logB - A x.
    const double n = double(samples.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (const auto& s : samples) {
        const double x = 1.0 / s.sqrt_eps_abs;
        const double y = s.log_dev;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    const double det = n * sxx - sx * sx;
    if (std::abs(det) < 1e-14)
        throw FitDiverged("flatness_fit: degenerate abscissa spread");
    const double slope = (n * sxy - sx * sy) / det;
    fit.A_fit = -slope;
    fit.logB_fit = (sy - slope * sx) / n;
    double ss_res = 0.0, ss_tot = 0.0;
    const double ybar = sy / n;
    for (const auto& s : samples) {
        const double x = 1.0 / s.sqrt_eps_abs;
        const double pred = fit.logB_fit + slope * x;
        ss_res += (s.log_dev - pred) * (s.log_dev - pred);
        ss_tot += (s.log_dev - ybar) * (s.log_dev - ybar);
    }
    fit.r2 = (ss_tot > 0.0) ? 1.0 - ss_res / ss_tot : 0.0;

    // Admissible window from the exact contracting multiplier: the deviation
    // scale is |C|^gamma with gamma in (0, 1/2] of a full period, so the rate
    // sits below -|sqrt(eps)| log|C| with at most a half-period slack.
    double a_pred = 0.0;
    for (const auto& s : samples) a_pred += -s.sqrt_eps_abs * s.log_C_abs;
    a_pred /= n;
    fit.A_lo = 0.8 * (a_pred - PI);
    fit.A_hi = 1.2 * a_pred;
    fit.in_window = fit.A_fit >= fit.A_lo && fit.A_fit <= fit.A_hi;
    return fit;
}

} // namespace parmod
