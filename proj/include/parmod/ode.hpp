#pragma once

#include <functional>

#include "parmod/numeric.hpp"

namespace parmod {

/// Right-hand side of a scalar complex ODE dy/dt = f(t, y), t real.
using OdeRhs = std::function<cplx(double, cplx)>;

struct OdeOptions {
    double rel_tol = 1e-12;
    double abs_tol = 1e-13;
    double initial_step = 1e-3;
    std::size_t max_steps = 2000000;
};

/// Integrate dy/dt = f(t,y) from t0 to t1 with the Dormand-Prince 5(4)
/// embedded pair and adaptive step control. Throws NoConvergence if the step
/// count budget is exhausted or the step size underflows.
cplx integrate_ode(const OdeRhs& f, double t0, double t1, cplx y0,
                   const OdeOptions& opts = {});

} // namespace parmod
