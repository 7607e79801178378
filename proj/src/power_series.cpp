#include "parmod/power_series.hpp"

#include <algorithm>

namespace parmod {

PowerSeries PowerSeries::identity(std::size_t degree) {
    std::vector<cplx> c(degree + 1, 0.0);
    if (degree >= 1) c[1] = 1.0;
    return PowerSeries(std::move(c));
}

PowerSeries PowerSeries::constant(cplx value, std::size_t degree) {
    std::vector<cplx> c(degree + 1, 0.0);
    c[0] = value;
    return PowerSeries(std::move(c));
}

void PowerSeries::set(std::size_t k, cplx v) {
    if (k >= c_.size()) c_.resize(k + 1, 0.0);
    c_[k] = v;
}

cplx PowerSeries::eval(cplx z) const {
    cplx acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
    return acc;
}

PowerSeries PowerSeries::truncated(std::size_t degree) const {
    std::vector<cplx> c(degree + 1, 0.0);
    for (std::size_t k = 0; k <= degree && k < c_.size(); ++k) c[k] = c_[k];
    return PowerSeries(std::move(c));
}

PowerSeries PowerSeries::operator+(const PowerSeries& o) const {
    std::vector<cplx> c(std::max(c_.size(), o.c_.size()), 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = (*this)[k] + o[k];
    return PowerSeries(std::move(c));
}

PowerSeries PowerSeries::operator-(const PowerSeries& o) const {
    std::vector<cplx> c(std::max(c_.size(), o.c_.size()), 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = (*this)[k] - o[k];
    return PowerSeries(std::move(c));
}

PowerSeries PowerSeries::operator*(const PowerSeries& o) const {
    const std::size_t deg = std::max(degree(), o.degree());
    std::vector<cplx> c(deg + 1, 0.0);
    for (std::size_t i = 0; i < c_.size() && i <= deg; ++i) {
        if (c_[i] == 0.0) continue;
        for (std::size_t j = 0; j < o.c_.size() && i + j <= deg; ++j)
            c[i + j] += c_[i] * o.c_[j];
    }
    return PowerSeries(std::move(c));
}

PowerSeries PowerSeries::scaled(cplx s) const {
    std::vector<cplx> c(c_);
    for (auto& v : c) v *= s;
    return PowerSeries(std::move(c));
}

PowerSeries PowerSeries::compose(const PowerSeries& o) const {
    if (std::abs(o[0]) != 0.0) throw DomainError("series composition needs o(0)=0");
    const std::size_t deg = std::max(degree(), o.degree());
    PowerSeries acc = PowerSeries::constant(0.0, deg);
    // Horner in the outer series.
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        acc = acc * o;
        acc.set(0, acc[0] + *it);
    }
    return acc.truncated(deg);
}

PowerSeries PowerSeries::inverse() const {
    if (std::abs((*this)[0]) != 0.0 || (*this)[1] == 0.0)
        throw DomainError("series inverse needs c0=0, c1!=0");
    const std::size_t deg = degree();
    // Solve g(f(z)) = z degree by degree.
    PowerSeries g = PowerSeries::constant(0.0, deg);
    g.set(1, 1.0 / (*this)[1]);
    for (std::size_t k = 2; k <= deg; ++k) {
        // coefficient of z^k in g(f) with current g (g_k = 0 so far)
        const PowerSeries comp = g.compose(truncated(deg));
        const cplx resid = (k == 1 ? cplx(1.0) : cplx(0.0)) - comp[k];
        // g_k enters linearly with factor c1^k
        cplx c1k = 1.0;
        for (std::size_t i = 0; i < k; ++i) c1k *= (*this)[1];
        g.set(k, resid / c1k);
    }
    return g;
}

PowerSeries PowerSeries::reciprocal() const {
    if ((*this)[0] == 0.0) throw DomainError("series reciprocal needs c0!=0");
    const std::size_t deg = degree();
    std::vector<cplx> r(deg + 1, 0.0);
    r[0] = 1.0 / c_[0];
    for (std::size_t k = 1; k <= deg; ++k) {
        cplx s = 0.0;
        for (std::size_t j = 1; j <= k && j < c_.size(); ++j) s += c_[j] * r[k - j];
        r[k] = -s / c_[0];
    }
    return PowerSeries(std::move(r));
}

PowerSeries::QuotRem PowerSeries::divide_by_z2_minus(cplx eps) const {
    // P(z) = (z^2 - eps) Q(z) + r1 z + r0, solved from the top degree down.
    const std::size_t deg = degree();
    std::vector<cplx> q(deg + 1, 0.0);
    std::vector<cplx> rem(c_);
    rem.resize(deg + 1, 0.0);
    for (std::size_t k = deg; k >= 2; --k) {
        const cplx qc = rem[k];
        q[k - 2] = qc;
        rem[k] = 0.0;
        rem[k - 2] += qc * eps;
    }
    return QuotRem{PowerSeries(std::move(q)).truncated(deg >= 2 ? deg - 2 : 0), rem[0], rem[1]};
}

double PowerSeries::max_abs() const {
    double m = 0.0;
    for (const auto& v : c_) m = std::max(m, std::abs(v));
    return m;
}

PowerSeries taylor_from_evaluator(const std::function<cplx(cplx)>& f, cplx center,
                                  double radius, std::size_t count) {
    const std::size_t M = std::max<std::size_t>(64, 4 * count);
    std::vector<cplx> samples(M);
    for (std::size_t j = 0; j < M; ++j) {
        const double th = TWO_PI * double(j) / double(M);
        samples[j] = f(center + radius * std::exp(I * th));
    }
    std::vector<cplx> c(count, 0.0);
    for (std::size_t k = 0; k < count; ++k) {
        cplx s = 0.0;
        for (std::size_t j = 0; j < M; ++j) {
            const double th = TWO_PI * double(j) / double(M);
            s += samples[j] * std::exp(-I * (double(k) * th));
        }
        double rk = std::pow(radius, double(k));
        c[k] = s / (double(M) * rk);
    }
    return PowerSeries(std::move(c));
}

} // namespace parmod
