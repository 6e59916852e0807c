#pragma once

// Time integration of the fully nonlinear holomorphic system and of its
// differentiated (good-variable) form, with conserved-quantity monitoring.
//
// The right sides are re-projected onto mean-free holomorphic fields after
// assembly; the discarded mass (positive modes plus the mean drift that the
// torus zero-mode convention removes) is accounted as leakage rather than
// silently dropped.

#include "wavecf/fields.hpp"

namespace wavecf {

struct RhsFull {
    HoloField surface_t;    // W_t = -F (1 + W_alpha)
    HoloField potential_t;  // Q_t
    double leakage = 0.0;     // positive-mode mass removed (holomorphy defect)
    double mean_drift = 0.0;  // zero-mode gauge removed by the torus convention
};

// Throws ConformalDegenerate below the delta floor.
RhsFull rhs_full(const WaveState& s, const PhysParams& p, double delta = 1e-9);

struct RhsDiff {
    HoloField slope_t;     // time derivative of W_alpha
    HoloField velocity_t;  // time derivative of R
    RealField advection;   // b = 2 Re P[Q_alpha / J]
    RealField freq_shift;  // a = i (conj-P[conj(R) R_alpha] - P[R conj(R_alpha)])
    ComplexField source_m; // M, the first printed form
    double m_form_gap = 0.0;  // sup difference of the two printed forms of M
    double leakage = 0.0;
    double mean_drift = 0.0;
};

// Assembles b, a and M, asserting that b and a are real to 1e-10 relative
// (RealityViolation otherwise) and that the two printed forms of M agree to
// 1e-10 relative.
RhsDiff rhs_diff(const DiffState& d, const PhysParams& p);

struct EvolveOptions {
    int sample_every = 1;       // trace cadence in steps
    bool filter = true;         // 36th-order exponential high-mode filter
    double blowup_factor = 1e3; // abort when sup|W| or sup|Q| exceeds
                                // blowup_factor * (initial + 1)
    double delta = 1e-6;        // conformal floor during the run
    // default-step fraction of the linear RK4 imaginary-axis limit; the
    // stiffest-mode bound ignores nonlinear advection, so stay well inside
    double cfl_safety = 0.25;
};

struct TraceSample {
    double t = 0.0;
    double energy = 0.0;
    double momentum = 0.0;
    double leakage = 0.0;     // cumulative holomorphy leakage
    double mean_drift = 0.0;  // cumulative zero-mode gauge drift rate mass
    double min_jacobian = 0.0;
    double sup_surface = 0.0;
    double sup_potential = 0.0;
};

struct EvolutionTrace {
    std::vector<TraceSample> samples;
    WaveState final_state;
    double total_leakage = 0.0;

    EvolutionTrace(WaveState s) : final_state(std::move(s)) {}
};

// Largest stable step for the stiffest retained linear mode (omega_max dt
// bounded by the RK4 imaginary-axis stability limit times cfl_safety).
double max_stable_dt(const SpectralGrid& g, const PhysParams& p, double cfl_safety = 0.5);

// Classical RK4; holomorphy re-enforced after every stage. Throws
// BlowupDetected / ConformalDegenerate; the trace built so far is lost in
// that case by design (the CLI reports the abort).
EvolutionTrace evolve(const WaveState& s0, const PhysParams& p, double dt, int steps,
                      const EvolveOptions& opt = {});

}  // namespace wavecf
