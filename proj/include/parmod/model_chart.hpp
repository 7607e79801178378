#pragma once

#include "parmod/errors.hpp"
#include "parmod/numeric.hpp"

namespace parmod {

// A parameter value on the universal covering of the punctured disk:
// eps = r e^{i theta} with theta unreduced. The square root is taken with
// arg sqrt(eps) = theta/2, so turning theta by 2*pi flips the root.
struct SectorPoint {
    double r = 0.0;
    double theta = 0.0;
    double rho = 0.25;       // sector radius bound
    double delta = PI / 3.0; // sector angular margin

    cplx value() const { return r * std::exp(I * theta); }
    cplx sqrt_eps() const { return std::sqrt(r) * std::exp(I * (theta / 2.0)); }
    bool zero() const { return r == 0.0; }
    bool in_sector() const { return r < rho && theta > -delta && theta < TWO_PI + delta; }
    // Glutsyuk overlap sheets: the principal sheet and the turned sheet.
    bool on_bar_sheet() const { return r > 0.0 && std::abs(theta) < delta; }
    bool on_tilde_sheet() const { return r > 0.0 && std::abs(theta - TWO_PI) < delta; }
    SectorPoint turned() const { return {r, theta + TWO_PI, rho, delta}; }
};

inline SectorPoint sector_point(double r, double theta) { return {r, theta, 0.25, PI / 3.0}; }

// Periods of the model vector field and the derived Glutsyuk constants, all
// exponential quantities carried in log form (|C| passes 1e-100 already for
// moderate eps).
struct Periods {
    cplx alpha0;       // 2*pi*i / mu0
    cplx alpha_inf;    // -2*pi*i / mu_inf = alpha0 - 2*pi*i*a
    cplx hole_spacing; // pi*i / sqrt(eps)
    cplx mu0;          // -2 sqrt(eps) / (1 - a sqrt(eps))
    cplx mu_inf;       // 2 sqrt(eps) / (1 + a sqrt(eps))
    LogComplex C_bar;   // exp(-2 pi i alpha0): exponentially small on the bar sheet
    LogComplex C_tilde; // exp(+2 pi i alpha_inf): the turned sheet's C, exponentially large
    LogComplex beta_mult; // exp(-4 pi^2 a)
};

// Throws DomainError at eps = 0 (periods degenerate).
Periods periods_of(const SectorPoint& eps, cplx a);

// Slanted-strip geometry for the Fatou translation domains.
struct StripSpec {
    double Y0 = 5.0;     // horizontal cutoff for the Fourier lines
    double margin = 0.25;
    double theta = 0.0;  // slant angle, 0.5*(pi/2 + arg sqrt(eps))
    double slope = 0.0;  // -tan(theta)
    double half_width = 0.4;
    double along_holes_factor = 1.5;
    double vertical_height = 0.0; // |hole spacing| / 4
};

StripSpec strips_for(const SectorPoint& eps, double Y0, double margin);

// Chart p: Z = (1/2 sqrt(eps)) Log((z - sqrt(eps))/(z + sqrt(eps))), and
// Z = -1/z at eps = 0. Principal determination; the dynamical code tracks
// branches through chart_q_near instead of a cut error. Throws OnSingularity
// at z = +-sqrt(eps) (or z = 0 when eps = 0).
cplx chart_p(cplx z, const SectorPoint& eps);

// Inverse of chart_p: z = -sqrt(eps) coth(sqrt(eps) Z), or -1/Z at eps = 0.
// Entire in Z apart from poles; no branch ambiguity.
cplx chart_p_inverse(cplx Z, const SectorPoint& eps);

// Chart q = time coordinate of the field (z^2-eps)/(1+az) d/dz:
//   W = chart_p(z) + (a/2) Log(z^2 - eps)          (eps != 0)
//   W = -1/z + a Log z                              (eps = 0)
// Principal determination.
cplx chart_q(cplx z, const SectorPoint& eps, cplx a);

// dW/dz = (1 + a z)/(z^2 - eps).
cplx chart_q_derivative(cplx z, const SectorPoint& eps, cplx a);

// The branch of chart_q at z closest to `near`: the principal value corrected
// by k*(pi i/sqrt(eps)) + m*(pi i a), the jumps of the two principal logs
// (j*2*pi*i*a at eps = 0). Used to keep lifts continuous along orbits.
cplx chart_q_near(cplx z, const SectorPoint& eps, cplx a, cplx near);

// Newton inverse of chart_q, seeded from chart_p_inverse(W) unless a seed is
// supplied. The residual is reduced modulo the monodromy lattice so that any
// branch of W is accepted. Throws NewtonDiverged after 50 iterations.
cplx chart_q_inverse(cplx W, const SectorPoint& eps, cplx a);
cplx chart_q_inverse(cplx W, const SectorPoint& eps, cplx a, cplx seed);

// Exact flow of the model field: z -> q^{-1}(q(z) + t). Fixes +-sqrt(eps).
cplx model_flow(cplx t, cplx z, const SectorPoint& eps, cplx a);

} // namespace parmod
