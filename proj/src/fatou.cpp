#include "parmod/fatou.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "parmod/errors.hpp"

namespace parmod {

namespace {

constexpr int transit_newton_max = 16;
constexpr int backward_secant_max = 40;

// Chart increment W(z2) - W(z1) along one orbit step, computed without large
// intermediate values. Valid when the step stays clear of the singular points;
// the principal log1p branch is correct because a single step moves W by about
// one, far less than the monodromy lattice spacing.
cplx stable_dW(cplx z1, cplx z2, const SectorPoint& eps, cplx a) {
    const cplx dz = z2 - z1;
    if (eps.zero()) {
        cplx out = dz / (z1 * z2);
        if (a != cplx(0.0)) out += a * log1p_c(dz / z1);
        return out;
    }
    const cplx s = eps.sqrt_eps();
    const cplx xp = 2.0 * s * dz / ((z2 + s) * (z1 - s));
    cplx out = log1p_c(xp) / (2.0 * s);
    if (a != cplx(0.0)) out += 0.5 * a * log1p_c(dz * (z2 + z1) / (z1 * z1 - s * s));
    return out;
}

struct OrbitLimit {
    cplx value;
    double err;
};

// One backward step: solve f.map(x) = z by secant iterations seeded from the
// first-order reversal.
cplx backward_step(const PreparedFamily& f, cplx z) {
    const double scale = std::max(1.0, std::abs(z));
    cplx x0 = 2.0 * z - f.map(z);
    cplx r0 = f.map(x0) - z;
    if (std::abs(r0) < 1e-15 * scale) return x0;
    cplx x1 = x0 - r0;
    cplx best_x = x0;
    double best_r = std::abs(r0);
    int flat = 0;
    for (int it = 0; it < backward_secant_max; ++it) {
        const cplx r1 = f.map(x1) - z;
        const double ar = std::abs(r1);
        if (ar < 1e-15 * scale) return x1;
        if (ar < best_r) {
            best_r = ar;
            best_x = x1;
            flat = 0;
        } else if (++flat >= 3 && best_r < 1e-11 * scale) {
            return best_x; // residual pinned at the map's own evaluation noise
        }
        const cplx denom = r1 - r0;
        if (denom == cplx(0.0)) break;
        const cplx x2 = x1 - r1 * (x1 - x0) / denom;
        x0 = x1;
        r0 = r1;
        x1 = x2;
        if (!std::isfinite(std::abs(x1)))
            throw NoConvergence("backward_step: secant iteration diverged");
    }
    if (best_r < 1e-11 * scale) return best_x;
    throw NoConvergence("backward_step: inverse orbit step did not converge");
}

// Richardson extrapolation of snapshots (N_j, s_j) in powers of 1/N.
OrbitLimit richardson(const std::vector<double>& N, const std::vector<cplx>& s) {
    const std::size_t m = N.size();
    std::vector<cplx> row(s);
    std::vector<double> x(m);
    for (std::size_t j = 0; j < m; ++j) x[j] = 1.0 / N[j];
    cplx best = row.back();
    double err = std::abs(m >= 2 ? row[m - 1] - row[m - 2] : row[0]);
    for (std::size_t k = 1; k < m; ++k) {
        for (std::size_t j = 0; j + k < m; ++j)
            row[j] = (x[j] * row[j + 1] - x[j + k] * row[j]) / (x[j] - x[j + k]);
        const cplx cand = row[m - 1 - k];
        const double delta = std::abs(cand - best);
        if (k >= 2 && delta > 2.0 * err && err > 0.0) break; // table started diverging
        err = delta;
        best = cand;
    }
    return {best, err};
}

// Iterated Aitken acceleration of consecutive partial sums. Each pass removes
// the dominant geometric mode of the tail; the pass count is capped because
// every pass trades one power of the decay ratio against amplified rounding
// noise.
cplx aitken_limit(std::vector<cplx> s) {
    for (int stage = 0; stage < 4 && s.size() >= 3; ++stage) {
        std::vector<cplx> t(s.size() - 2);
        for (std::size_t j = 0; j + 2 < s.size(); ++j) {
            const cplx d1 = s[j + 1] - s[j];
            const cplx d2 = s[j + 2] - s[j + 1];
            const cplx den = d2 - d1;
            t[j] = (std::abs(den) <= 1e-14 * (std::abs(d1) + std::abs(d2)))
                       ? s[j + 2]
                       : s[j + 2] - d2 * d2 / den;
        }
        s.swap(t);
    }
    return s.back();
}

OrbitLimit orbit_limit(const PreparedFamily& f, cplx z, cplx W, Side side,
                       const FatouOptions& opt) {
    const double drift = (side == Side::Attracting) ? 1.0 : -1.0;
    cplx acc = 0.0; // Phi(W) - W accumulated
    if (!f.eps.zero()) {
        // The raw partial sums converge like the multiplier power lambda^n, but
        // the chart increment near a fixed point only carries |q'| ulp(z) of
        // precision per step, so the plain sum bottoms out far above tol.
        // Accelerate with iterated Aitken and keep the best extrapolant: the
        // difference of consecutive extrapolants first shrinks (truncation)
        // and then grows again once rounding noise dominates the window.
        constexpr std::size_t win = 12;
        std::vector<cplx> window;
        window.reserve(win);
        int stall = 0;
        bool have_prev = false, have_best = false;
        cplx prevE = 0.0, bestE = 0.0;
        double best_d = 0.0;
        std::size_t best_n = 0;
        for (std::size_t n = 1; n <= opt.n_max; ++n) {
            const cplx z2 = (side == Side::Attracting) ? f.map(z) : backward_step(f, z);
            if (std::abs(z2) > f.z_radius)
                throw StripViolation("orbit_limit: orbit left the germ trust region");
            const cplx inc = stable_dW(z, z2, f.eps, f.a) - drift;
            acc += inc;
            z = z2;
            const double sc = std::max(1.0, std::abs(W + acc));
            if (std::abs(inc) < 1e-15 * sc) {
                if (++stall >= 3) return {W + acc, std::abs(inc)};
            } else {
                stall = 0;
            }
            if (window.size() == win) window.erase(window.begin());
            window.push_back(acc);
            if (window.size() < win) continue;
            const cplx E = aitken_limit(window);
            if (!std::isfinite(std::abs(E))) continue;
            if (have_prev) {
                const double d = std::abs(E - prevE);
                if (d < opt.tol * sc) return {W + E, d};
                if (!have_best || d < best_d) {
                    have_best = true;
                    best_d = d;
                    bestE = E;
                    best_n = n;
                } else if (n > best_n + 24) {
                    break; // extrapolants stopped improving: rounding floor hit
                }
            }
            prevE = E;
            have_prev = true;
        }
        if (have_best && best_d < opt.hard_fail) return {W + bestE, best_d};
        throw NoConvergence("orbit_limit: no geometric convergence within the orbit cap");
    }
    // Parabolic regime: polynomially convergent tail, extrapolated in 1/N.
    std::vector<double> Ns;
    std::vector<cplx> snaps;
    std::size_t next_snap = 256;
    bool have_best = false;
    OrbitLimit best{W, 0.0};
    for (std::size_t n = 1; n <= opt.n_max; ++n) {
        const cplx z2 = (side == Side::Attracting) ? f.map(z) : backward_step(f, z);
        if (std::abs(z2) > f.z_radius)
            throw StripViolation("orbit_limit: orbit left the germ trust region");
        acc += stable_dW(z, z2, f.eps, f.a) - drift;
        z = z2;
        if (n == next_snap) {
            Ns.push_back(double(n));
            snaps.push_back(W + acc);
            if (Ns.size() > 7) {
                Ns.erase(Ns.begin());
                snaps.erase(snaps.begin());
            }
            if (Ns.size() >= 4) {
                const OrbitLimit lim = richardson(Ns, snaps);
                if (lim.err < opt.tol * std::max(1.0, std::abs(lim.value))) return lim;
                if (!have_best || lim.err < best.err) {
                    have_best = true;
                    best = lim;
                } else if (lim.err > 8.0 * best.err) {
                    break; // orbit noise (which grows with N) overtook the table
                }
            }
            next_snap *= 2;
        }
    }
    if (have_best && best.err < opt.hard_fail) return best;
    throw NoConvergence("orbit_limit: parabolic extrapolation did not reach tolerance");
}

// Principal-branch preimage of a chart label. With a log part in the chart a
// plain Newton solve can settle on a neighbouring sheet at moderate |Im W|,
// so anchor the branch at a model-dominated label deep toward one end and
// track it back one unit at a time.
cplx pinned_point(const PreparedFamily& f, cplx W, Side side) {
    if (f.a == cplx(0.0)) return chart_q_inverse(W, f.eps, f.a);
    const double drift = (side == Side::Attracting) ? 1.0 : -1.0;
    const double need = 6.0 * (1.0 + std::abs(f.a));
    const double K = std::max(0.0, std::ceil(need - drift * W.real()));
    cplx z = chart_q_inverse(W + drift * K, f.eps, f.a);
    for (double j = K; j >= 1.0; j -= 1.0)
        z = chart_q_inverse(W + drift * (j - 1.0), f.eps, f.a, z);
    return z;
}

cplx pinned_point(const PreparedFamily& f, cplx W) {
    return pinned_point(f, W, (W.real() >= 0.0) ? Side::Attracting : Side::Repelling);
}

} // namespace

FatouCoord::FatouCoord(const PreparedFamily& f, Side side, const FatouOptions& opt)
    : f_(&f), side_(side), opt_(opt) {}

cplx FatouCoord::value_at(cplx z, cplx W) const {
    const OrbitLimit lim = orbit_limit(*f_, z, W, side_, opt_);
    err_ = std::max(err_, lim.err);
    return lim.value;
}

cplx FatouCoord::operator()(cplx W) const {
    // A mid-strip label can have its principal preimage outside the basin of
    // this side even though the coordinate continues there; the functional
    // equation moves the evaluation toward the end until the orbit is safe.
    const double drift = (side_ == Side::Attracting) ? 1.0 : -1.0;
    const int m_cap = 4 + int(6.0 * (1.0 + std::abs(f_->a)));
    for (int m = 0;; ++m) {
        const cplx Wm = W + drift * double(m);
        try {
            return value_at(pinned_point(*f_, Wm, side_), Wm) - drift * double(m);
        } catch (const StripViolation&) {
            if (m >= m_cap) throw;
        }
    }
}

std::pair<cplx, cplx> FatouCoord::inverse_point(cplx V) const {
    cplx W = V;
    cplx z = pinned_point(*f_, W, side_);
    cplx best_z = z, best_W = W;
    double best_r = std::numeric_limits<double>::infinity();
    for (int it = 0; it < transit_newton_max; ++it) {
        const cplx r = value_at(z, W) - V;
        const double ar = std::abs(r);
        if (ar < best_r) {
            best_r = ar;
            best_z = z;
            best_W = W;
        }
        if (ar < 1e-12 * std::max(1.0, std::abs(V))) return {z, W};
        W -= r; // Phi' = 1 + o(1) on the working band
        z = chart_q_inverse(W, f_->eps, f_->a, z);
    }
    // The coordinate itself is only known to its orbit-limit error, so the
    // residual plateaus there; accept the plateau, fail on genuine divergence.
    if (best_r < 1e-8 * std::max(1.0, std::abs(V))) return {best_z, best_W};
    throw NewtonDiverged("FatouCoord::inverse: quasi-Newton did not converge");
}

cplx FatouCoord::inverse(cplx V) const { return inverse_point(V).second; }

cplx chart_germ_step(const PreparedFamily& f, cplx W) {
    const cplx z = pinned_point(f, W);
    return W + stable_dW(z, f.map(z), f.eps, f.a);
}

cplx HornMapPair::psi0_dev(cplx W) const {
    cplx acc = const0;
    for (const auto& [n, bn] : b) acc += bn * std::exp(TWO_PI * I * double(n) * W);
    return acc;
}

cplx HornMapPair::psi_inf_dev(cplx W) const {
    cplx acc = -TWO_PI * I * a + const_inf_dev;
    for (const auto& [n, cn] : c) acc += cn * std::exp(TWO_PI * I * double(n) * W);
    return acc;
}

cplx HornMapPair::psi0(cplx W) const { return W + psi0_dev(W); }
cplx HornMapPair::psi_inf(cplx W) const { return W + psi_inf_dev(W); }

std::map<int, cplx> fourier_coefficients(const std::vector<cplx>& g, double x0, double Y,
                                         int n_lo, int n_hi, double noise_floor) {
    const std::size_t M = g.size();
    // Work with the raw line contents first: the unit-modulus kernel keeps the
    // quadrature conditioned, and a content below the noise floor is genuinely
    // empty. Only surviving contents are rescaled by e^{2 pi n Y}; amplifying
    // first would promote quadrature noise into huge spurious coefficients.
    std::map<int, cplx> content;
    double peak = 0.0;
    for (int n = n_lo; n <= n_hi; ++n) {
        cplx acc = 0.0;
        for (std::size_t k = 0; k < M; ++k) {
            const double X = x0 + double(k) / double(M);
            acc += g[k] * std::exp(-TWO_PI * I * double(n) * X);
        }
        acc /= double(M);
        if (std::abs(acc) < noise_floor) acc = 0.0;
        peak = std::max(peak, std::abs(acc));
        content[n] = acc;
    }
    // Decay consistency at the most oscillatory modes kept.
    for (int n : {n_lo, n_hi}) {
        if (n == 0) continue;
        const double tail = std::abs(content[n]);
        if (tail > 10.0 * noise_floor && tail > 0.2 * peak && peak > 0.0)
            throw AliasingDetected("fourier_coefficients: extreme mode has not decayed");
    }
    std::map<int, cplx> out;
    for (const auto& [n, r] : content)
        out[n] = (r == cplx(0.0)) ? cplx(0.0) : r * std::exp(TWO_PI * double(n) * Y);
    return out;
}

HornMapPair horn_maps(const PreparedFamily& f, const FatouOptions& opt) {
    FatouOptions o = opt;
    const double zr = std::min(f.z_radius, 3.0);
    const double x0 = (o.x0 != 0.0) ? o.x0 : -(1.0 / (0.6 * zr) + 1.2);
    // A transit orbit from the line |Im W| = Y crosses the mid-strip, where
    // the level curve peaks near |z| = 1/Y, so lines shallower than the trust
    // region cannot carry admissible samples.
    o.y_floor = std::max(o.y_floor, 1.05 / (0.6 * zr));
    o.y_cap = std::max(o.y_cap, o.y_floor + 4.0);

    // Pre-check: the chart germ must be translation-like near the anchor end.
    for (int sgn : {-1, +1}) {
        for (int k = 0; k < 5; ++k) {
            const cplx W(x0 + k / 4.0, sgn * (o.y_floor + o.margin));
            if (std::abs(chart_germ_step(f, W) - W - 1.0) > 0.25)
                throw StripViolation("horn_maps: germ is not translation-like on the strip");
        }
    }

    const int M = o.oversample * o.n_modes;
    double Y0 = o.y_floor;
    int alias_retries = 0;

    for (;;) {
        const double Yl = Y0 + o.margin;
        // Fresh coordinates per attempt so the recorded orbit-limit errors
        // reflect the line actually kept.
        const FatouCoord phi_att(f, Side::Attracting, o);
        const FatouCoord phi_rep(f, Side::Repelling, o);
        try {
            std::vector<cplx> g_low(M), g_up(M);
            double sup_low = 0.0, sup_up = 0.0;
            for (int sgn : {-1, +1}) {
                auto& g = (sgn < 0) ? g_low : g_up;
                double& sup = (sgn < 0) ? sup_low : sup_up;
                cplx z_seed = 0.0;
                bool have_seed = false;
                for (int k = 0; k < M; ++k) {
                    const cplx V(x0 + double(k) / M, sgn * Yl);
                    cplx W = V;
                    cplx z = have_seed ? chart_q_inverse(W, f.eps, f.a, z_seed)
                                       : pinned_point(f, W, Side::Repelling);
                    // Invert the repelling coordinate at this sample. The
                    // residual plateaus at the orbit-limit noise of the
                    // coordinate itself.
                    cplx best_z = z, best_W = W;
                    double best_r = std::numeric_limits<double>::infinity();
                    bool ok = false;
                    for (int it = 0; it < transit_newton_max; ++it) {
                        const cplx r = phi_rep.value_at(z, W) - V;
                        const double ar = std::abs(r);
                        if (ar < best_r) {
                            best_r = ar;
                            best_z = z;
                            best_W = W;
                        }
                        if (ar < 1e-12 * std::max(1.0, std::abs(V))) {
                            ok = true;
                            break;
                        }
                        W -= r;
                        z = chart_q_inverse(W, f.eps, f.a, z);
                    }
                    if (!ok) {
                        if (best_r > 1e-8 * std::max(1.0, std::abs(V)))
                            throw NewtonDiverged("horn_maps: transit inversion stalled");
                        z = best_z;
                        W = best_W;
                    }
                    z_seed = z;
                    have_seed = true;
                    g[k] = phi_att.value_at(z, W) - V;
                    sup = std::max(sup, std::abs(g[k]));
                }
            }

            // An admissible line sits where the oscillating part of the
            // transit deviation has already decayed; the constant part is the
            // normalization shift between the ends and does not decay.
            double osc = 0.0;
            for (const auto* g : {&g_low, &g_up}) {
                cplx mean = 0.0;
                for (const cplx& v : *g) mean += v;
                mean /= double(M);
                for (const cplx& v : *g) osc = std::max(osc, std::abs(v - mean));
            }
            if (osc > 1e-3) {
                if (Y0 + 0.5 + o.margin > o.y_cap + 1e-9)
                    throw InsufficientOverlap(
                        "horn_maps: transit deviation does not decay within the band");
                Y0 += 0.5;
                continue;
            }

            // Contents below the measurement noise of the transit samples
            // carry no information; anything kept here is later amplified
            // exponentially.
            const double res_noise = 6.0 * (phi_att.last_error() + phi_rep.last_error()) /
                                     std::sqrt(double(M));
            const double floor_low =
                std::max(o.noise_floor * std::max(1.0, sup_low), res_noise);
            const double floor_up =
                std::max(o.noise_floor * std::max(1.0, sup_up), res_noise);
            auto low = fourier_coefficients(g_low, x0, -Yl, -o.n_modes, 1, floor_low);
            auto up = fourier_coefficients(g_up, x0, +Yl, -1, o.n_modes, floor_up);

            HornMapPair h;
            h.a = f.a;
            h.Y0 = Y0;
            h.margin = o.margin;
            const cplx b0 = low[0];
            for (int n = -o.n_modes; n <= -1; ++n)
                if (low[n] != cplx(0.0)) h.b[n] = low[n];
            for (int n = 1; n <= o.n_modes; ++n)
                if (up[n] != cplx(0.0)) h.c[n] = up[n];
            h.const0 = 0.0;
            // Both coordinates ride the same principal chart, where the model
            // transit is the identity; the upper minus lower constant is then
            // the shift-invariant deviation from the model value -2 pi i a,
            // which psi_inf restores explicitly.
            h.const_inf_dev = up[0] - b0;
            h.M0 = sup_low;
            h.Minf = sup_up;
            h.residual = std::max(phi_att.last_error(), phi_rep.last_error());
            if (h.residual > o.hard_fail)
                throw NoConvergence("horn_maps: orbit-limit residual above the hard cap");
            return h;
        } catch (const AliasingDetected&) {
            if (++alias_retries > 2) throw;
            Y0 += 0.5;
        } catch (const StripViolation&) {
            // A shallow line admits transit orbits that wander outside the
            // trust region (or the attracting basin) mid-crossing; deepen.
            if (Y0 + 0.75 + o.margin > o.y_cap + 1e-9) throw;
            Y0 += 0.75;
        } catch (const NewtonDiverged&) {
            if (Y0 + 0.75 + o.margin > o.y_cap + 1e-9) throw;
            Y0 += 0.75;
        } catch (const NoConvergence&) {
            if (Y0 + 0.75 + o.margin > o.y_cap + 1e-9) throw;
            Y0 += 0.75;
        }
    }
}

ReturnMaps return_maps(const HornMapPair& h, const SectorPoint& eps, cplx mu0, cplx mu_inf,
                       double delta) {
    const double th = eps.theta;
    const bool glutsyuk = (std::abs(th) < delta) || (std::abs(th - TWO_PI) < delta);
    if (eps.zero() || !glutsyuk)
        throw NotGlutsyukSector("return_maps: parameter is not in a Glutsyuk sheet");
    const cplx alpha0 = TWO_PI * I / mu0;
    const cplx alpha_inf = -TWO_PI * I / mu_inf;
    ReturnMaps r;
    r.log_mult0 = -TWO_PI * I * (alpha0 + h.const0);
    r.log_mult_inf = TWO_PI * I * alpha_inf - TWO_PI * I * h.const_inf_dev;
    return r;
}

} // namespace parmod
