#include "parmod/special_functions.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace parmod {

namespace {

// Lanczos approximation, g = 7, 9 coefficients.
const double lanczos_g = 7.0;
const std::array<double, 9> lanczos_c = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

bool near_nonpositive_integer(cplx z, double tol) {
    const double r = std::round(z.real());
    return r <= 0.5 && std::abs(z - cplx(r, 0.0)) < tol;
}

cplx gamma_positive_half(cplx z) {
    // Valid for Re z >= 0.5.
    z -= 1.0;
    cplx x(lanczos_c[0], 0.0);
    for (std::size_t i = 1; i < lanczos_c.size(); ++i)
        x += lanczos_c[i] / (z + static_cast<double>(i));
    const cplx t = z + lanczos_g + 0.5;
    return std::sqrt(TWO_PI) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

cplx pochhammer_term(cplx base, int k) { return base + static_cast<double>(k); }

// Direct series, |z| safely inside the unit disk. Returns the sum or throws
// NoConvergence if 2000 terms fail to settle.
cplx hyp2f1_series(cplx a, cplx b, cplx c, cplx z) {
    cplx sum(1.0, 0.0);
    cplx term(1.0, 0.0);
    for (int k = 0; k < 2000; ++k) {
        if (near_nonpositive_integer(pochhammer_term(c, k), 1e-14))
            throw PoleError("hyp2f1: lower parameter hits a nonpositive integer");
        term *= pochhammer_term(a, k) * pochhammer_term(b, k) /
                (pochhammer_term(c, k) * static_cast<double>(k + 1)) * z;
        sum += term;
        if (std::abs(term) <= 1e-18 * std::max(1.0, std::abs(sum))) return sum;
    }
    throw NoConvergence("hyp2f1: series did not settle");
}

} // namespace

cplx gamma_fn(cplx z) {
    checked(z, "gamma_fn input");
    if (near_nonpositive_integer(z, 1e-14))
        throw PoleError("gamma_fn: pole at nonpositive integer");
    if (z.real() >= 0.5) return checked(gamma_positive_half(z), "gamma_fn");
    // Reflection: Gamma(z) = pi / (sin(pi z) Gamma(1 - z)).
    const cplx s = std::sin(PI * z);
    if (s == cplx(0.0, 0.0)) throw PoleError("gamma_fn: pole at nonpositive integer");
    return checked(PI / (s * gamma_positive_half(cplx(1.0, 0.0) - z)), "gamma_fn");
}

cplx recip_gamma(cplx z) {
    checked(z, "recip_gamma input");
    if (z.real() >= 0.5) return cplx(1.0, 0.0) / gamma_positive_half(z);
    return std::sin(PI * z) * gamma_positive_half(cplx(1.0, 0.0) - z) / PI;
}

cplx hyp2f1(cplx a, cplx b, cplx c, cplx z) {
    checked(z, "hyp2f1 input");
    // Terminating series (a or b a nonpositive integer) works for any z.
    const bool poly_a = near_nonpositive_integer(a, 1e-14);
    const bool poly_b = near_nonpositive_integer(b, 1e-14);
    if (near_nonpositive_integer(c, 1e-14)) {
        const double ca = std::round(a.real());
        const double cb = std::round(b.real());
        const double cc = std::round(c.real());
        const bool terminates_first = (poly_a && ca > cc) || (poly_b && cb > cc);
        if (!terminates_first) throw PoleError("hyp2f1: c is a nonpositive integer");
    }
    if (z == cplx(0.0, 0.0)) return cplx(1.0, 0.0);
    if (poly_a || poly_b) return hyp2f1_series(a, b, c, z);

    const double r_direct = std::abs(z);
    if (r_direct <= 0.5) return hyp2f1_series(a, b, c, z);

    const cplx one(1.0, 0.0);
    const double r_pfaff = std::abs(z / (z - one));
    const double r_recip = std::abs(one - z);
    const double best = std::min({r_direct, r_pfaff, r_recip});
    if (best > 0.8) throw NoConvergence("hyp2f1: no transformation reaches a convergent region");

    if (best == r_direct) return hyp2f1_series(a, b, c, z);
    if (best == r_pfaff) {
        // 2F1(a,b;c;z) = (1-z)^{-a} 2F1(a, c-b; c; z/(z-1)).
        return std::pow(one - z, -a) * hyp2f1_series(a, c - b, c, z / (z - one));
    }
    // Connection formula at 1 - z; degenerate when c - a - b is an integer.
    const cplx s = c - a - b;
    if (near_nonpositive_integer(s, 1e-8) || near_nonpositive_integer(-s, 1e-8) ||
        std::abs(s) < 1e-8)
        throw NoConvergence("hyp2f1: c-a-b too close to an integer for the 1-z formula");
    const cplx w = one - z;
    const cplx t1 = gamma_fn(c) * gamma_fn(s) * recip_gamma(c - a) * recip_gamma(c - b) *
                    hyp2f1_series(a, b, one - s, w);
    const cplx t2 = gamma_fn(c) * gamma_fn(-s) * recip_gamma(a) * recip_gamma(b) *
                    std::pow(w, s) * hyp2f1_series(c - a, c - b, one + s, w);
    return checked(t1 + t2, "hyp2f1");
}

} // namespace parmod
