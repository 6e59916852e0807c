#pragma once

// Steady-wave residual operators in holomorphic variables and the
// Newton-Krylov continuation machinery on top of them.
//
// The primal unknown everywhere is the real trace rho = Im W (holomorphy is
// structural: W = H rho + i rho), reduced to its cosine band when the even
// symmetry of the sought branch is exploited. Jacobian action is forward
// finite differencing of the residual; the Krylov solves are GMRES
// preconditioned by the constant-coefficient symbol of the linearization.
// The mean (Bernoulli) mode of each residual is not an equation: on the
// torus it is absorbed by the gauge freedom of the potential, and its
// magnitude is reported as a diagnostic instead.

#include <string>
#include <vector>

#include "wavecf/fields.hpp"

namespace wavecf {

enum class Formulation {
    combined_scalar,    // g Im W - sigma theta_alpha/|1+W_a| - c^2/2 (1 - 1/J)
    babenko_gravity,    // gW - gP[conj(W) W_a - W W_a] - i c^2 W_a
    bab_g_projected,    // gW - P[i V W_a], V = c^2 + i g (W - conj W)
    babenko_capillary,  // P applied to the multiplied capillary form
    soliton_system,     // the traveling (W, Q) pair equations
};

// The multiplied capillary form carries c^2/2 in the dispersion-consistent
// normalization; `paper` switches to the printed c^2 factor.
enum class CapillaryConvention { canonical, paper };

enum class SolveConstraint {
    fixed_speed,      // c given; rho is the whole unknown
    fixed_amplitude,  // cosine amplitude of a chosen mode pinned; c unknown
    fixed_steepness,  // (rho(0) - rho(L/2))/L pinned; c unknown
};

struct TravelingProblem {
    SpectralGrid grid{256, kTwoPi};
    PhysParams params{};  // params.c is the speed for fixed_speed problems
    Formulation formulation = Formulation::combined_scalar;
    CapillaryConvention convention = CapillaryConvention::canonical;
    SolveConstraint constraint = SolveConstraint::fixed_amplitude;
    double constraint_value = 1e-4;
    int constraint_mode = 1;   // harmonic pinned by fixed_amplitude
    bool even_symmetry = true;
    double delta = 0.1;        // conformal floor inside residual evaluation
    double tol_rms = 1e-11;    // converged iff residual L2 < tol_rms * sqrt(n)
    int max_newton = 40;
    int max_krylov = 250;
    double fd_step = 1e-7;

    double newton_tol() const { return tol_rms * std::sqrt(double(grid.size())); }
};

// ---- residual operators ------------------------------------------------------

// Real scalar steady equation g Im W - sigma theta_a/|1+W_a| - c^2/2 (1-1/J);
// its c^2/2 factor comes from the dynamical system and does not toggle with
// the capillary convention. Throws ConformalDegenerate / BranchCut /
// RealityViolation per the contracts. The imaginary residue of the complex
// assembly is returned through *imag_residue when requested.
RealField residual_combined(const HoloField& w, const PhysParams& p, double delta = 1e-9,
                            double* imag_residue = nullptr);

ComplexField residual_babenko_gravity(const HoloField& w, const PhysParams& p);
ComplexField residual_bab_g(const HoloField& w, const PhysParams& p);

// Self-contained capillary equation for the slope field (W_alpha).
ComplexField residual_capillary(const ComplexField& slope, const PhysParams& p,
                                CapillaryConvention conv = CapillaryConvention::canonical,
                                double delta = 1e-9);

struct SolitonResidual {
    ComplexField first;   // -c W_a + F (1 + W_a)
    ComplexField second;  // -c Q_a + F Q_a - i g W + P[|Q_a|^2/J] + capillary part
    double constraint_gap = 0.0;  // ||Q_a - c W_a|| / scale (vanishes with `first`)
};
SolitonResidual residual_soliton_system(const WaveState& s, const PhysParams& p,
                                        double delta = 1e-9);

// ---- solver -----------------------------------------------------------------------

struct CrestReport {
    double h_max = 0.0;        // max Im W
    double h0 = 0.0;           // c^2 / (2g)
    double theta = 0.0;        // fitted crest angle from the spectral tail
    double exponential_rate = 0.0;  // fitted e^{-mu k} rate
    bool window_ok = false;    // theta in (pi/2, pi)
    bool smooth = false;       // decay dominated by the exponential factor
    bool reliable = false;     // fit window spans >= 2 decades in k
};

struct SolveReport {
    bool converged = false;
    std::string failure;  // "", "max_iterations", "line_search", "conformal_degenerate"
    HoloField surface;    // W
    HoloField potential;  // Q = cW (or the solved Q for the soliton system)
    double c = 0.0;
    double c_squared = 0.0;
    double residual_l2 = 0.0;   // mean-free residual field, quadrature L2
    double residual_sup = 0.0;
    double mean_residual = 0.0;  // zero-mode (Bernoulli) part, diagnostic
    int newton_iterations = 0;
    double steepness_value = 0.0;
    double energy = 0.0;
    double momentum_value = 0.0;
};

// guess_c is ignored for fixed_speed problems (params.c is used).
// Throws ConformalDegenerate if the guess itself violates the delta floor;
// failures inside the iteration are reported, not thrown.
SolveReport newton_solve(const TravelingProblem& problem, const HoloField& guess,
                         double guess_c);

struct ContinuationSettings {
    double start = 1e-3;
    double step = 1e-3;
    double target = 1e-2;
    int max_steps = 400;
    double delta_min = 0.05;  // stop when the conformal margin dips below
};

// Steps the constraint parameter from start toward target, reusing (and
// linearly extrapolating) previous solutions as guesses. Failed steps halve
// the increment; the branch so far is always returned.
std::vector<SolveReport> continuation_run(TravelingProblem problem,
                                          const ContinuationSettings& settings);

// Gravity-wave crest diagnostics. h_max/h0 are always computed; the tail fit
// throws FitUnreliable in strict mode when the usable window is too short.
CrestReport crest_diagnostics(const SolveReport& report, const PhysParams& p,
                              bool strict = false);

}  // namespace wavecf
