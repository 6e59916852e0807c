#pragma once

// Periodic Fourier calculus on the collocation grid: transforms, derivative,
// Hilbert transform, holomorphic projector P = (I - iH)/2, dealiased products,
// dyadic blocks, the l^1-summed half-derivative Besov norm, and the slowly
// varying cutoff family with its projector commutator.
//
// Conventions, fixed once here and relied on everywhere else:
//   * forward transform  c_j = (1/n) sum_m f(a_m) e^{-i k_j a_m},
//     inverse            f(a_m) = sum_j c_j e^{+i k_j a_m};
//   * H multiplies mode j by -i sign(j) and kills the mean, so that for a
//     boundary trace of a function holomorphic below the axis Re f = H Im f;
//   * P keeps strictly negative modes, halves the mean, kills positive modes;
//   * derivative multiplies by i k_j with the unpaired Nyquist slot zeroed;
//   * products are truncated by the 2/3 rule (|j| <= n/3) unless asked not to.

#include <vector>

#include "wavecf/field.hpp"

namespace wavecf {

enum class Dealias { on, off };

// ---- transforms -----------------------------------------------------------

// Coefficients in FFT slot order (see SpectralGrid::mode). Plans are cached
// per grid size behind an internal mutex; callers need no locking.
std::vector<cplx> spectrum(const ComplexField& f);
std::vector<cplx> spectrum(const RealField& f);
ComplexField from_spectrum(const SpectralGrid& g, const std::vector<cplx>& coef);
// Inverse transform of a Hermitian-symmetric spectrum; imaginary residue is
// discarded (it is at rounding level when the symmetry holds).
RealField real_from_spectrum(const SpectralGrid& g, const std::vector<cplx>& coef);

// L2 norm computed from coefficients (Parseval); equals l2_norm(f) to rounding.
double spectral_l2_norm(const ComplexField& f);
double spectral_l2_norm(const RealField& f);

// ---- multiplier operators --------------------------------------------------

ComplexField derivative(const ComplexField& f);
RealField derivative(const RealField& f);

ComplexField hilbert(const ComplexField& f);
RealField hilbert(const RealField& f);

ComplexField project_holo(const ComplexField& f);       // P = (I - iH)/2
ComplexField project_antiholo(const ComplexField& f);   // conj(P(conj .))
ComplexField project_holo(const RealField& f);

// Antiderivative with zero mean; the input mean must vanish (throws otherwise).
ComplexField antiderivative(const ComplexField& f, double mean_tol = 1e-10);

// ---- products --------------------------------------------------------------

ComplexField product(const ComplexField& a, const ComplexField& b, Dealias d = Dealias::on);
RealField product(const RealField& a, const RealField& b, Dealias d = Dealias::on);
ComplexField product(const RealField& a, const ComplexField& b, Dealias d = Dealias::on);

// Pointwise quotient, then re-truncated to the dealiased band.
ComplexField quotient(const ComplexField& a, const ComplexField& b, Dealias d = Dealias::on);

// Zero all modes with |j| > n/3 (no-op on band-limited fields).
ComplexField dealias(const ComplexField& f);
RealField dealias(const RealField& f);

// Zero-padded resampling onto a grid refined by an integer factor, and the
// spectral restriction back. Used for alias-safe evaluation of non-polynomial
// pointwise expressions (|.|-quotients).
ComplexField refine(const ComplexField& f, int factor);
ComplexField restrict_to(const ComplexField& fine, const SpectralGrid& coarse);

// ---- Littlewood-Paley ------------------------------------------------------

// Sharp dyadic block: keep modes with 2^k <= |wavenumber| < 2^{k+1}.
ComplexField dyadic_block(const ComplexField& f, int k);
RealField dyadic_block(const RealField& f, int k);

// Index range [k_min, k_max] of blocks representable on this grid (nonempty
// wavenumber ladder); the infrared end is 2*pi/L, recorded rather than
// extrapolated.
std::pair<int, int> dyadic_range(const SpectralGrid& g);

// sum_k 2^{k/2} ||P_k f||_L2 over nonempty blocks.
double besov_half_norm(const ComplexField& f);
double besov_half_norm(const RealField& f);

// ---- slowly varying cutoffs -------------------------------------------------

// chi_r on the torus: a smooth rise 0 -> 1 of width r centered at alpha = 0
// and the mirrored descent centered at alpha = L/2. The base profile is the
// C^3 polynomial step s^4 (35 - 84 s + 70 s^2 - 20 s^3) on [0, 1], for which
// sup |chi'| = 35/16.
struct CutoffFamily {
    // sup |d/dalpha chi_r| = derivative_constant() / r
    static double derivative_constant() { return 35.0 / 16.0; }

    static double base(double s);        // the profile on [0,1], clamped outside
    static double base_derivative(double s);

    RealField sample(const SpectralGrid& g, double r) const;
    RealField sample_derivative(const SpectralGrid& g, double r) const;

    // largest admissible scale: the two transitions must stay separated
    static double max_scale(const SpectralGrid& g) { return g.period() / 8.0; }
};

// [P, chi_r] d/dalpha w  =  P(chi_r w') - chi_r P(w').
// Products are exact (no dealiasing): the diagnostics built on top of this
// rely on grid-exact self-adjointness identities.
ComplexField commutator_p_cutoff(const ComplexField& w, double r,
                                 const CutoffFamily& cutoffs = CutoffFamily{});

// ---- random test fields ------------------------------------------------------

// Holomorphic field with modes -1 .. -kmax, |c_k| = amplitude * k^{-decay},
// uniformly random phases. Used by seeded diagnostics and tests.
ComplexField random_holo_field(const SpectralGrid& g, class Rng& rng, int kmax,
                               double amplitude = 1.0, double decay = 2.0);

}  // namespace wavecf
