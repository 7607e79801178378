#pragma once

#include <vector>

#include "parmod/errors.hpp"
#include "parmod/numeric.hpp"

namespace parmod {

// Elementary changes of coordinate used throughout the library.
//
//   Linear C        w -> C w
//   Translation B   W -> W + B
//   MoebiusN (A,n)  w -> w / (1 + A w^n)^{1/n}     germ at 0, identity for A=0
//   TranslationN    w -> (w^n + B)^{1/n}           germ at infinity, identity for B=0
//   Exp2Pi          W -> exp(-2 pi i W)
//   Log2Pi          w -> -Ln(w) / (2 pi i)
//
// All n-th roots use the branch continuous in the parameter, (1+x)^{1/n} =
// exp(log1p(x)/n), so MoebiusN and TranslationN are tangent to the identity at
// their base point. The logarithm branch cut may be rotated away from the
// negative reals via cut_arg when a caller tracks a family across the default
// cut.

enum class MapKind { Linear, Translation, MoebiusN, TranslationN, Exp2Pi, Log2Pi };

struct ElementaryMap {
    MapKind kind = MapKind::Linear;
    cplx param = cplx(1.0, 0.0);
    int n = 1;
    double cut_arg = PI;
};

ElementaryMap linear_map(cplx c);
ElementaryMap translation_map(cplx b);
ElementaryMap moebius_map(cplx a, int n = 1);
ElementaryMap translation_n_map(cplx b, int n = 1);
ElementaryMap exp2pi_map();
ElementaryMap log2pi_map();

// Evaluate m at w.
// Throws BranchCutHit when a root/log argument falls on the configured cut,
// DomainError when a denominator vanishes, the input is non-finite, or the
// result overflows.
cplx apply_map(const ElementaryMap& m, cplx w);

// w^n by repeated squaring (exact for n = 0, 1).
cplx pow_int(cplx w, int n);

// Logarithm with the branch cut along the ray arg = cut_arg; coincides with
// the principal determination for cut_arg = pi. The argument is chosen in
// (cut_arg - 2*pi, cut_arg].
cplx log_cut(cplx w, double cut_arg);

// Inverse within the same six families: L_{1/C}, T_{-B}, m_{-A,n}, T_{-B,n},
// and Exp2Pi <-> Log2Pi. Throws DomainError for Linear with C = 0.
ElementaryMap inverse_map(const ElementaryMap& m);

// Worst pointwise deviation over `samples` of the four composition identities
//   m_{A,n} . L_C = L_C . m_{A C^n, n}
//   T_{B,n} . L_C = L_C . T_{B / C^n, n}
//   m_{A,n} . m_{A',n} = m_{A+A', n}
//   T_{B,n} . T_{B',n} = T_{B+B', n}
// Samples must avoid the branch cuts of every map involved.
double verify_moebius_algebra(cplx A, cplx Ap, cplx B, cplx Bp, cplx C, int n,
                              const std::vector<cplx>& samples);

} // namespace parmod
