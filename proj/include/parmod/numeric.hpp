#pragma once

#include <cmath>
#include <complex>
#include <limits>

#include "parmod/errors.hpp"

namespace parmod {

using cplx = std::complex<double>;

constexpr double PI = 3.141592653589793238462643383279502884;
constexpr double TWO_PI = 2.0 * PI;
inline const cplx I{0.0, 1.0};

inline bool is_finite(const cplx& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// Guard applied at public API boundaries: no NaN/Inf escapes silently.
inline cplx checked(const cplx& z, const char* where) {
    if (!is_finite(z)) throw DomainError(std::string(where) + " produced a non-finite value");
    return z;
}

/// log(1+z), accurate for small |z|.
inline cplx log1p_c(const cplx& z) {
    if (std::abs(z) > 1e-4) return std::log(1.0 + z);
    // 7-term alternating series; |z| <= 1e-4 makes the tail < 1e-32.
    cplx s = 0.0, p = z;
    for (int k = 1; k <= 7; ++k) {
        s += p / double(k) * ((k % 2) ? 1.0 : -1.0);
        p *= z;
    }
    return s;
}

/// exp(z)-1, accurate for small |z|.
inline cplx expm1_c(const cplx& z) {
    if (std::abs(z) > 1e-4) return std::exp(z) - 1.0;
    cplx s = 0.0, p = z;
    double fact = 1.0;
    for (int k = 1; k <= 7; ++k) {
        fact *= k;
        s += p / fact;
        p *= z;
    }
    return s;
}

/// Distance of w from the branch-cut ray {t*exp(i*cut_arg) : t >= 0} used for
/// cut-proximity checks. Cuts default to the negative real axis (cut_arg = pi).
inline double cut_distance(const cplx& w, double cut_arg) {
    const cplx dir = std::exp(I * cut_arg);
    const cplx u = w * std::conj(dir); // rotate the ray onto R+
    if (u.real() <= 0.0) return std::abs(w);
    return std::abs(u.imag());
}

/// Complex number carried as its logarithm: value = exp(log). Exact
/// representation for quantities like exp(-2*pi^2/sqrt(eps)) that underflow or
/// overflow doubles. Multiplication and powers are exact in log space;
/// addition uses log1p on the exponent gap.
struct LogComplex {
    cplx lg; // value = exp(lg); Im(lg) is the (unreduced) argument

    static LogComplex from_log(const cplx& l) { return LogComplex{l}; }
    static LogComplex from_value(const cplx& v) {
        if (v == 0.0) throw ZeroLog("LogComplex of zero");
        return LogComplex{std::log(v)};
    }
    static LogComplex one() { return LogComplex{cplx(0.0, 0.0)}; }

    double log_abs() const { return lg.real(); }
    bool representable() const { return std::abs(lg.real()) < 700.0; }
    cplx value() const {
        if (lg.real() < -745.0) return 0.0;
        if (lg.real() > 709.0) throw DomainError("LogComplex value overflows double");
        return std::exp(lg);
    }

    LogComplex operator*(const LogComplex& o) const { return LogComplex{lg + o.lg}; }
    LogComplex operator/(const LogComplex& o) const { return LogComplex{lg - o.lg}; }
    LogComplex pow_int(int n) const { return LogComplex{lg * double(n)}; }
    LogComplex neg() const { return LogComplex{lg + cplx(0.0, PI)}; }

    /// this + other, staying in log space. Requires the larger term nonzero.
    LogComplex add(const LogComplex& o) const {
        const LogComplex *big = this, *small = &o;
        if (o.lg.real() > lg.real()) { big = &o; small = this; }
        const cplx gap = small->lg - big->lg; // Re(gap) <= 0
        if (gap.real() < -745.0) return *big;
        const cplx corr = log1p_c(std::exp(gap));
        return LogComplex{big->lg + corr};
    }
    LogComplex sub(const LogComplex& o) const { return add(o.neg()); }

    /// log(1 - value()), value exponentially small or large both fine.
    LogComplex one_minus() const { return LogComplex::one().sub(*this); }
};

/// Relative difference |a-b| / max(|a|, |b|, floor).
inline double rel_diff(const cplx& a, const cplx& b, double floor = 1e-30) {
    const double scale = std::max({std::abs(a), std::abs(b), floor});
    return std::abs(a - b) / scale;
}

} // namespace parmod
