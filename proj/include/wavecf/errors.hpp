#pragma once

#include <stdexcept>
#include <string>

namespace wavecf {

// Numerical failure modes. Callers of solver/driver routines are expected to
// catch these and turn them into report entries or exit codes; low-level
// spectral ops throw only on caller contract violations.

struct GridMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// |1 + W_alpha| (or |1 + slope|) fell below the configured delta somewhere.
struct ConformalDegenerate : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// x(alpha) = alpha + Re W is not strictly increasing; no Eulerian graph.
struct NotAGraph : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Continuous argument / logarithm branch could not be tracked along the grid.
struct BranchCut : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A quantity that must be real came out with too large an imaginary part.
struct RealityViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Positive-mode content above the holomorphy tolerance.
struct HolomorphyViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Fixed-point or iterative scheme stalled above its tolerance.
struct NoConvergence : std::runtime_error {
    NoConvergence(const std::string& what, int iterations_, double defect_)
        : std::runtime_error(what), iterations(iterations_), defect(defect_) {}
    int iterations;
    double defect;
};

// Time integration left the admissible region (sup-norm bound or NaN).
struct BlowupDetected : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Spectral tail too short or too noisy to fit a crest exponent.
struct FitUnreliable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace wavecf
