#pragma once

// Construction of the holomorphic surface parametrization from an Eulerian
// graph profile, plus the regularity-transfer diagnostics relating the two
// parametrizations.
//
// Given eta(x) periodic with period L, we seek mean-horizontal W with
// Im W(alpha) = eta(alpha + Re W(alpha)) by the damped fixed point
//     rho_{m+1} = (1 - theta) rho_m + theta * eta(alpha + H rho_m),
// with Re W = H rho. The converged W carries a purely imaginary mean: the
// vertical level of the curve in the conformal parametrization is an output,
// not a gauge choice.

#include "wavecf/fields.hpp"

namespace wavecf {

struct ConformalBuild {
    HoloField surface;   // W
    int iterations = 0;
    double defect = 0.0;      // sup |Im W - eta(alpha + Re W)|
    double min_jacobian = 0.0;  // check_conformal minimum on the output
};

struct ConformalBuildOptions {
    double tol = 1e-12;
    int max_iter = 200;
    double damping = 1.0;  // 0 < theta <= 1
};

// eta: samples of the profile on the uniform x grid (period = grid period).
// Throws NoConvergence when the defect stalls above tol, NotAGraph when the
// input slope rules a graph out. Never returns a field violating the defect
// bound.
ConformalBuild build_conformal(const RealField& eta, const ConformalBuildOptions& opt = {});

struct RegularityTransferReport {
    // Defect of the exact parametrization-transfer identity
    //     eta_x/(1+eta_x^2) = Im(W_alpha/(1+W_alpha)) * Re(1+W_alpha)
    // evaluated on the alpha grid (both sides are sin(theta)cos(theta) for
    // theta = arg(1+W_alpha)).
    double identity_sup_diff = 0.0;
    // Defect of the same relation without the conformal stretch factor
    // Re(1+W_alpha). That form is exact only where the stretch is 1; its
    // defect is O(slope^2) and is reported for reference.
    double unstretched_sup_diff = 0.0;
    double eta_x_besov = 0.0;     // ||eta_x||_{B^{1/2}} on the x grid
    double slope_besov = 0.0;     // ||W_alpha||_{B^{1/2}} on the alpha grid
    double besov_ratio = 1.0;     // slope_besov / eta_x_besov (1 when both vanish)
    double trace_relation_sup = 0.0;  // sup |Re Y - H Im Y| for Y = W_alpha/(1+W_alpha)
};

// Evaluates both sides of eta_x/(1+eta_x^2) = Im(W_alpha/(1+W_alpha)) on the
// conformal grid (the Eulerian side via trigonometric evaluation at x(alpha)).
RegularityTransferReport regularity_transfer_report(const RealField& eta, const HoloField& w);

}  // namespace wavecf
