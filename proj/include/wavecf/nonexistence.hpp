#pragma once

// Numerical realization of the nonexistence machinery: cutoff-commutator
// decay scans, the Coifman-Meyer ratio, the chi_r multiplier identity with
// its off-solution correction term, the capillary log-transform equation,
// and solitary-wave search sweeps with a gravity-capillary positive control.

#include <cstdint>
#include <string>
#include <vector>

#include "wavecf/traveling.hpp"

namespace wavecf {

struct DecayRow {
    double r = 0.0;
    double norm = 0.0;       // ||[P, chi_r] W_alpha||_L2
    double scaled = 0.0;     // r * norm
    double rise_part = 0.0;  // contribution near the alpha = 0 transition
    double fall_part = 0.0;  // contribution near the alpha = L/2 transition
};

// Scan rows for each requested scale; requires max(r) <= L/100 so the ripple
// of the two transitions stays negligible.
std::vector<DecayRow> commutator_decay_scan(const HoloField& w, const std::vector<double>& r_list,
                                            const CutoffFamily& cutoffs = CutoffFamily{});

// r ||[P, chi_r] W_alpha|| / ||W||; throws std::invalid_argument on W = 0.
double coifman_meyer_ratio(const HoloField& w, double r,
                           const CutoffFamily& cutoffs = CutoffFamily{});

struct MultiplierIdentity {
    double lhs = 0.0;         // g * integral chi_r' |W|^2
    double rhs = 0.0;         // -2 Re integral conj([P,chi_r] W_a) (i V W_a)
    double correction = 0.0;  // 2 Re integral chi_r conj(W_a) rho, rho = residual_bab_g
    double defect = 0.0;      // |lhs - rhs + correction|
};

// The identity lhs = rhs - correction holds for every holomorphic W, not just
// solutions: it is the paper's multiplication by chi_r conj(W_alpha) with the
// self-adjointness of P, keeping the residual term instead of dropping it.
// Requires sigma = 0.
MultiplierIdentity multiplier_identity_check(const HoloField& w, const PhysParams& p, double r,
                                             const CutoffFamily& cutoffs = CutoffFamily{});

// sigma H(U_alpha) - c^2 sinh U with U = Re log(1 + slope) (canonical
// normalization); the paper-printed variant is H(U_alpha) - 2 c^2 sinh U.
// Requires g = 0 and a trackable branch of the logarithm.
RealField capillary_log_residual(const ComplexField& slope, const PhysParams& p,
                                 CapillaryConvention conv = CapillaryConvention::canonical,
                                 double delta = 1e-9);

// ---- solitary-wave sweeps ---------------------------------------------------------

enum class SweepMode { gravity, capillary, gravity_capillary };

enum class SweepOutcome { converged_to_zero, converged_nontrivial, stagnated };

const char* to_string(SweepMode m);
const char* to_string(SweepOutcome o);

struct SweepRun {
    std::string mode;
    double c = 0.0;
    std::string guess_id;
    double period = 0.0;
    int n_points = 0;
    SweepOutcome outcome = SweepOutcome::stagnated;
    bool localized = false;   // tail mass below 1% of the peak
    double residual = 0.0;    // best residual reached
    double amplitude = 0.0;   // sup |Im W| of the final iterate
    int iters = 0;
    double wall_time = 0.0;   // seconds; excluded from determinism guarantees
    HoloField surface;        // final iterate (converged or not)
};

struct SweepConfig {
    SweepMode mode = SweepMode::gravity;
    std::vector<double> c_values;   // speeds to probe
    double g = 1.0;
    double sigma = 0.0;
    double period = 400.0;
    int n_points = 8192;
    std::vector<double> widths{5.0, 10.0, 20.0};  // Gaussian bump widths
    double bump_amplitude = 0.08;
    double delta = 0.05;
    double tol_rms = 1e-11;
    int max_newton = 30;
    int max_krylov = 250;
    std::uint64_t seed = 0;   // reserved for randomized guess families
    int threads = 1;
    // gravity_capillary control: continuation ladder down from near the
    // phase-speed minimum, chaining converged solutions as guesses
    std::vector<double> chain_fractions{0.999, 0.997, 0.995, 0.993, 0.99};
};

// Default speed grids per the declared experiment (see README): gravity and
// capillary probe c in {0.5, 1, 2}; gravity_capillary targets 0.99 c_min.
SweepConfig default_sweep(SweepMode mode);

struct SweepReport {
    std::vector<SweepRun> runs;  // sorted by (c, guess_id)
    int converged_nontrivial_localized = 0;
};

SweepReport solitary_sweep(const SweepConfig& config);

// minimum of the linear phase speed c(k)^2 = g/k + sigma k; c_min^2 = 2 sqrt(g sigma)
double cmin_squared(double g, double sigma);

}  // namespace wavecf
