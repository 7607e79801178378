#pragma once

#include <map>
#include <vector>

#include "parmod/prepare.hpp"

namespace parmod {

struct FatouOptions {
    double tol = 1e-11;            // orbit-limit accuracy target
    double hard_fail = 1e-5;       // residual above this throws NoConvergence
    std::size_t n_max = 1000000;   // orbit length cap
    int n_modes = 16;              // Fourier modes kept per side
    int oversample = 4;            // samples per line = oversample * n_modes
    double margin = 0.25;          // line sits at Y0 + margin
    double y_floor = 1.0;          // adaptive Y0 search window
    double y_cap = 3.0;
    double x0 = 0.0;               // 0: choose from the germ trust region
    double noise_floor = 1e-11;    // coefficients below are zeroed
};

enum class Side { Attracting, Repelling };

// Orbit-limit Fatou coordinate of a prepared germ, expressed in the lifted
// q-chart: Phi(W) = lim (W_n - n) along forward orbits (attracting side) or
// lim (W_n + n) along backward orbits (repelling side). Normalized so that
// Phi - id -> 0 at its own end.
class FatouCoord {
public:
    FatouCoord(const PreparedFamily& f, Side side, const FatouOptions& opt = {});

    cplx operator()(cplx W) const;                 // chart lift pinned from the p-chart
    cplx value_at(cplx z, cplx W) const;           // explicit (point, lift) pair
    cplx inverse(cplx V) const;                    // solve Phi(W) = V
    std::pair<cplx, cplx> inverse_point(cplx V) const; // (z, W) with Phi = V

    Side side() const { return side_; }
    double last_error() const { return err_; }     // extrapolation error estimate

private:
    const PreparedFamily* f_;
    Side side_;
    FatouOptions opt_;
    mutable double err_ = 0.0;
};

// The prepared germ conjugated into the q-chart: F(W) = W(f(z_W)) lifted
// continuously next to W + 1.
cplx chart_germ_step(const PreparedFamily& f, cplx W);

struct HornMapPair {
    std::map<int, cplx> b;   // modes n <= -1 of Psi0 - id
    std::map<int, cplx> c;   // modes n >= +1 of Psi_inf - id
    cplx a{};                // measured formal invariant
    double Y0 = 1.0;
    double margin = 0.25;
    double M0 = 0.0, Minf = 0.0; // fitted decay amplitudes
    cplx const0{};              // residual constant of Psi0 (zero post-normalization)
    cplx const_inf_dev{};       // deviation of the Psi_inf constant from -2 pi i a
    double residual = 0.0;      // orbit-limit/transit residual estimate

    cplx psi0(cplx W) const;     // W + sum b_n e^{2 pi i n W}
    cplx psi_inf(cplx W) const;  // W - 2 pi i a + const_inf_dev + sum c_n e^{2 pi i n W}
    cplx psi0_dev(cplx W) const;
    cplx psi_inf_dev(cplx W) const;
};

// Transit map Phi_att o Phi_rep^{-1} sampled on one line per cylinder end,
// Fourier-analyzed, and normalized so the Psi0 constant vanishes. The Psi_inf
// constant then carries the intrinsic shift -2 pi i a; its measured deviation
// is recorded in const_inf_dev.
HornMapPair horn_maps(const PreparedFamily& f, const FatouOptions& opt = {});

// Fourier modes n in [n_lo, n_hi] of samples g_k given at V_k = x0 + k/M + i Y,
// k = 0..M-1. Throws AliasingDetected when the extreme modes fail the decay
// consistency check and exceed the noise floor.
std::map<int, cplx> fourier_coefficients(const std::vector<cplx>& g, double x0, double Y,
                                         int n_lo, int n_hi, double noise_floor);

struct ReturnMaps {
    cplx log_mult0;   // log k0'(0)   = 4 pi^2 / mu0
    cplx log_mult_inf; // log kinf'(inf) = 4 pi^2 / mu_inf
};

// Renormalized return map multipliers at the two sphere ends, from the horn
// data and the alpha-periods. Requires a Glutsyuk-sector parameter
// (NotGlutsyukSector otherwise).
ReturnMaps return_maps(const HornMapPair& h, const SectorPoint& eps, cplx mu0, cplx mu_inf,
                       double delta = PI / 3.0);

} // namespace parmod
