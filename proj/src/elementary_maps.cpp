#include "parmod/elementary_maps.hpp"

#include <algorithm>
#include <cmath>

namespace parmod {

namespace {

const double cut_tol = 1e-14;

void require_cut_clear(cplx u, double cut_arg, const char* where) {
    if (cut_distance(u, cut_arg) < cut_tol * std::abs(u))
        throw BranchCutHit(std::string(where) + ": argument on the branch cut");
}

// (1 + x)^{1/n} on the branch continuous at x = 0. The cut sits where 1 + x
// crosses the ray arg = cut_arg (shifted so the default is x <= -1).
cplx root_one_plus(cplx x, int n, double cut_arg, const char* where) {
    const cplx u = cplx(1.0, 0.0) + x;
    if (u == cplx(0.0, 0.0)) throw DomainError(std::string(where) + ": root argument vanishes");
    require_cut_clear(u, cut_arg, where);
    cplx lg;
    if (cut_arg == PI && std::abs(x) < 0.5)
        lg = log1p_c(x);
    else
        lg = log_cut(u, cut_arg);
    return std::exp(lg / static_cast<double>(n));
}

} // namespace

ElementaryMap linear_map(cplx c) { return {MapKind::Linear, c, 1, PI}; }
ElementaryMap translation_map(cplx b) { return {MapKind::Translation, b, 1, PI}; }

ElementaryMap moebius_map(cplx a, int n) {
    if (n < 1) throw DomainError("moebius_map: branch order must be >= 1");
    return {MapKind::MoebiusN, a, n, PI};
}

ElementaryMap translation_n_map(cplx b, int n) {
    if (n < 1) throw DomainError("translation_n_map: branch order must be >= 1");
    return {MapKind::TranslationN, b, n, PI};
}

ElementaryMap exp2pi_map() { return {MapKind::Exp2Pi, cplx(0.0, 0.0), 1, PI}; }
ElementaryMap log2pi_map() { return {MapKind::Log2Pi, cplx(0.0, 0.0), 1, PI}; }

cplx pow_int(cplx w, int n) {
    if (n < 0) return cplx(1.0, 0.0) / pow_int(w, -n);
    cplx acc(1.0, 0.0);
    cplx base = w;
    while (n > 0) {
        if (n & 1) acc *= base;
        base *= base;
        n >>= 1;
    }
    return acc;
}

cplx log_cut(cplx w, double cut_arg) {
    if (w == cplx(0.0, 0.0)) throw DomainError("log_cut: log of zero");
    double arg = std::arg(w);
    // Shift the principal argument into (cut_arg - 2*pi, cut_arg].
    while (arg > cut_arg) arg -= TWO_PI;
    while (arg <= cut_arg - TWO_PI) arg += TWO_PI;
    return cplx(std::log(std::abs(w)), arg);
}

cplx apply_map(const ElementaryMap& m, cplx w) {
    checked(w, "apply_map input");
    cplx out;
    switch (m.kind) {
    case MapKind::Linear:
        out = m.param * w;
        break;
    case MapKind::Translation:
        out = w + m.param;
        break;
    case MapKind::MoebiusN:
        out = w / root_one_plus(m.param * pow_int(w, m.n), m.n, m.cut_arg, "moebius");
        break;
    case MapKind::TranslationN: {
        if (w == cplx(0.0, 0.0)) {
            if (m.param == cplx(0.0, 0.0)) return w;
            require_cut_clear(m.param, m.cut_arg, "translation_n");
            out = std::exp(log_cut(m.param, m.cut_arg) / static_cast<double>(m.n));
        } else {
            out = w * root_one_plus(m.param / pow_int(w, m.n), m.n, m.cut_arg, "translation_n");
        }
        break;
    }
    case MapKind::Exp2Pi:
        out = std::exp(-TWO_PI * I * w);
        break;
    case MapKind::Log2Pi:
        if (w == cplx(0.0, 0.0)) throw DomainError("log2pi: log of zero");
        require_cut_clear(w, m.cut_arg, "log2pi");
        out = -log_cut(w, m.cut_arg) / (TWO_PI * I);
        break;
    }
    return checked(out, "apply_map result");
}

ElementaryMap inverse_map(const ElementaryMap& m) {
    switch (m.kind) {
    case MapKind::Linear:
        if (m.param == cplx(0.0, 0.0)) throw DomainError("inverse_map: linear map with C = 0");
        return {MapKind::Linear, cplx(1.0, 0.0) / m.param, 1, m.cut_arg};
    case MapKind::Translation:
        return {MapKind::Translation, -m.param, 1, m.cut_arg};
    case MapKind::MoebiusN:
        return {MapKind::MoebiusN, -m.param, m.n, m.cut_arg};
    case MapKind::TranslationN:
        return {MapKind::TranslationN, -m.param, m.n, m.cut_arg};
    case MapKind::Exp2Pi:
        return {MapKind::Log2Pi, cplx(0.0, 0.0), 1, m.cut_arg};
    case MapKind::Log2Pi:
        return {MapKind::Exp2Pi, cplx(0.0, 0.0), 1, m.cut_arg};
    }
    throw DomainError("inverse_map: unknown kind");
}

double verify_moebius_algebra(cplx A, cplx Ap, cplx B, cplx Bp, cplx C, int n,
                              const std::vector<cplx>& samples) {
    const cplx Cn = pow_int(C, n);
    const ElementaryMap LC = linear_map(C);
    const ElementaryMap mA = moebius_map(A, n);
    const ElementaryMap mAp = moebius_map(Ap, n);
    const ElementaryMap mACn = moebius_map(A * Cn, n);
    const ElementaryMap mSum = moebius_map(A + Ap, n);
    const ElementaryMap tB = translation_n_map(B, n);
    const ElementaryMap tBp = translation_n_map(Bp, n);
    const ElementaryMap tBCn = translation_n_map(B / Cn, n);
    const ElementaryMap tSum = translation_n_map(B + Bp, n);

    double worst = 0.0;
    for (cplx w : samples) {
        const cplx lw = apply_map(LC, w);
        worst = std::max(worst, std::abs(apply_map(mA, lw) - apply_map(LC, apply_map(mACn, w))));
        worst = std::max(worst, std::abs(apply_map(tB, lw) - apply_map(LC, apply_map(tBCn, w))));
        worst = std::max(worst, std::abs(apply_map(mA, apply_map(mAp, w)) - apply_map(mSum, w)));
        worst = std::max(worst, std::abs(apply_map(tB, apply_map(tBp, w)) - apply_map(tSum, w)));
    }
    return worst;
}

} // namespace parmod
