#pragma once

#include "parmod/errors.hpp"
#include "parmod/numeric.hpp"

namespace parmod {

// Euler Gamma on the complex plane, relative accuracy about 1e-13 for
// |z| <= 20, Re z >= -10. Throws PoleError at the nonpositive integers.
cplx gamma_fn(cplx z);

// 1/Gamma, entire; evaluates to 0 at the poles of Gamma.
cplx recip_gamma(cplx z);

// Gauss hypergeometric 2F1(a, b; c; z). Direct series for small |z|, then the
// z/(z-1) and 1-z transformations, whichever yields the smallest transformed
// argument. Throws PoleError when c is a nonpositive integer (unless the
// series terminates first), NoConvergence when no transformation applies or
// when c-a-b is too close to an integer for the 1-z connection formula.
cplx hyp2f1(cplx a, cplx b, cplx c, cplx z);

} // namespace parmod
