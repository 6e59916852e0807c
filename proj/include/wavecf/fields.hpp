#pragma once

// Holomorphic state types and the operations on them: the (W, Q) pair, the
// differentiated good variables (W_alpha, Q_alpha/(1+W_alpha)), conserved
// quantities, Eulerian trace extraction, and conformal-validity checks.
//
// A HoloField is the boundary trace of a function holomorphic and bounded in
// the lower half plane: Fourier support in the non-positive modes. Solver
// states are additionally mean-free (the torus surrogate of decay at
// infinity); the conformal builder is the one producer that legitimately
// returns a purely imaginary mean (the vertical level of the input curve).

#include <complex>
#include <vector>

#include "wavecf/spectral.hpp"

namespace wavecf {

struct PhysParams {
    double g = 1.0;      // gravity
    double sigma = 0.0;  // surface tension coefficient
    double c = 0.0;      // wave / frame speed

    void require_solvable() const {
        if (g == 0.0 && sigma == 0.0)
            throw std::invalid_argument("PhysParams: g and sigma cannot both vanish");
        if (g < 0.0 || sigma < 0.0)
            throw std::invalid_argument("PhysParams: g and sigma must be nonnegative");
    }
};

class HoloField {
  public:
    static constexpr double default_tau = 1e-10;

    HoloField() = default;

    // w = H(rho) + i rho: holomorphic by construction. mean(w) = i mean(rho).
    static HoloField from_imag_trace(const RealField& rho);

    // Zero the positive modes of f; removed L2 mass is reported in *leakage.
    static HoloField project(const ComplexField& f, double* leakage = nullptr);

    // Accept f only if its positive-mode mass is <= tau * (||f|| + floor);
    // throws HolomorphyViolation otherwise. Positive modes are then zeroed.
    static HoloField checked(const ComplexField& f, double tau = default_tau);

    const ComplexField& field() const { return f_; }
    const SpectralGrid& grid() const { return f_.grid; }
    int size() const { return f_.size(); }

    RealField imag_trace() const { return imag_part(f_); }
    RealField real_trace() const { return real_part(f_); }
    cplx mean_value() const { return mean(f_); }
    double norm_l2() const { return l2_norm(f_); }

    // L2 mass sitting at strictly positive modes (diagnostic; ~0 by invariant)
    static double positive_mode_mass(const ComplexField& f);

    HoloField derivative_field() const;  // exact closure of the class

  private:
    explicit HoloField(ComplexField f) : f_(std::move(f)) {}
    ComplexField f_;
};

// The evolving pair: surface W = Z - alpha and complex potential trace Q.
// Both mean-free holomorphic on a shared grid.
struct WaveState {
    WaveState(HoloField surface_, HoloField potential_, double mean_tol = 1e-8);

    HoloField surface;    // W
    HoloField potential;  // Q

    const SpectralGrid& grid() const { return surface.grid(); }
};

// Differentiated variables: slope = W_alpha, velocity = Q_alpha/(1+W_alpha).
struct DiffState {
    HoloField slope;     // W_alpha
    HoloField velocity;  // R
    double delta = 0.1;  // enforced lower bound on |1 + slope|

    const SpectralGrid& grid() const { return slope.grid(); }

    // Y = slope / (1 + slope), re-projected holomorphic.
    HoloField slope_ratio(double* leakage = nullptr) const;
};

struct DiffConversionReport {
    double velocity_leakage = 0.0;  // positive-mode mass removed from R
    double min_jacobian = 0.0;      // min |1 + W_alpha| encountered
};

// (W, Q) -> (W_alpha, Q_alpha / (1 + W_alpha)).
// Throws ConformalDegenerate when |1 + W_alpha| < delta anywhere, and
// HolomorphyViolation when the quotient leaks above the holomorphy tolerance
// instead of silently projecting the violation away.
DiffState to_diff(const WaveState& s, double delta = 0.1, DiffConversionReport* report = nullptr,
                  double tau = HoloField::default_tau);

// Inverse reconstruction (antiderivatives, zero means).
WaveState from_diff(const DiffState& d);

// Energy: integral of Im(Q conj(Q_alpha)) + 2 sigma (J^{1/2} - 1 - Re W_alpha)
//         + g (|W|^2 - Re(conj(W)^2 W_alpha)).
double hamiltonian(const WaveState& s, const PhysParams& p);

// Momentum: i * integral of (conj(Q) W_alpha - Q conj(W_alpha)); real up to
// 1e-12 relative (asserted).
double momentum(const WaveState& s);

struct ConformalReport {
    double min_jacobian_abs = 0.0;  // min |1 + W_alpha|
    double min_jacobian_re = 0.0;   // min (1 + Re W_alpha)
    bool pass = false;
};

// Both minima over collocation points; pass iff both >= delta.
ConformalReport check_conformal(const HoloField& w, double delta = 0.1);

// peak-to-trough elevation over the period length
double steepness(const HoloField& w);

// Eulerian trace x(alpha) = alpha + Re W, eta = Im W, with resampling of eta
// onto a uniform x grid by Newton inversion of the (strictly monotone)
// parametrization using trigonometric evaluation of W.
struct EulerianTrace {
    std::vector<double> x;    // x(alpha_m), strictly increasing
    std::vector<double> eta;  // Im W(alpha_m)
    SpectralGrid grid;

    EulerianTrace(const SpectralGrid& g) : grid(g) {}

    struct Resampled {
        std::vector<double> x;      // uniform x grid, spacing L/m
        std::vector<double> alpha;  // alpha(x_j): conformal preimages
        std::vector<double> eta;    // eta(x_j)
    };
    Resampled resample_uniform(int m_points) const;

  private:
    friend EulerianTrace eulerian_trace(const HoloField&);
    std::vector<cplx> w_coef;  // for trigonometric evaluation
};

// Throws NotAGraph when x(alpha) is not strictly increasing.
EulerianTrace eulerian_trace(const HoloField& w);

// Evaluate a periodic field at an arbitrary point by direct summation of its
// (nonnegligible) Fourier modes.
cplx trig_eval(const SpectralGrid& g, const std::vector<cplx>& coef, double alpha);

// Shift a holomorphic field by s: W(. - s), exact in coefficient space.
HoloField translate(const HoloField& w, double s);

}  // namespace wavecf
