#pragma once

#include <functional>
#include <vector>

#include "parmod/numeric.hpp"

namespace parmod {

/// Truncated complex power series sum_{k=0}^{n} c[k] z^k. Dense coefficient
/// vector; all binary operations truncate to the shorter working degree of the
/// involved operands unless stated otherwise.
class PowerSeries {
public:
    PowerSeries() = default;
    explicit PowerSeries(std::vector<cplx> coeffs) : c_(std::move(coeffs)) {}
    static PowerSeries identity(std::size_t degree); // z
    static PowerSeries constant(cplx value, std::size_t degree);

    std::size_t degree() const { return c_.empty() ? 0 : c_.size() - 1; }
    const std::vector<cplx>& coeffs() const { return c_; }
    cplx operator[](std::size_t k) const { return k < c_.size() ? c_[k] : cplx(0.0); }
    void set(std::size_t k, cplx v);

    cplx eval(cplx z) const; // Horner
    PowerSeries truncated(std::size_t degree) const;

    PowerSeries operator+(const PowerSeries& o) const;
    PowerSeries operator-(const PowerSeries& o) const;
    PowerSeries operator*(const PowerSeries& o) const; // truncated to max degree
    PowerSeries scaled(cplx s) const;

    /// this(o(z)); o must have o[0] == 0.
    PowerSeries compose(const PowerSeries& o) const;
    /// Compositional inverse; requires c0 == 0, c1 != 0.
    PowerSeries inverse() const;
    /// Multiplicative reciprocal 1/this; requires c0 != 0.
    PowerSeries reciprocal() const;

    /// Divide by the polynomial (z^2 - eps): this = (z^2-eps)*Q + (r0 + r1 z).
    /// Returns Q and the linear remainder.
    struct QuotRem;
    QuotRem divide_by_z2_minus(cplx eps) const;

    /// max |c_k| over k.
    double max_abs() const;

private:
    std::vector<cplx> c_;
};

struct PowerSeries::QuotRem {
    PowerSeries quotient;
    cplx r0, r1;
};

/// Taylor coefficients of f at `center` up to order `count-1`, by trapezoid
/// quadrature of the Cauchy integral on the circle of given radius. The sample
/// count is max(64, 4*count); error is O(integration noise) + geometric
/// aliasing from radius vs. convergence radius.
PowerSeries taylor_from_evaluator(const std::function<cplx(cplx)>& f, cplx center,
                                  double radius, std::size_t count);

} // namespace parmod
