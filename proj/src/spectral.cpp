#include "wavecf/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "wavecf/rng.hpp"

namespace wavecf {

namespace {

// One out-of-place c2c plan pair per grid size, FFTW_ESTIMATE | FFTW_UNALIGNED
// so the plans can execute on whatever buffers callers hand us. The FFTW
// planner is not thread-safe; execution on distinct buffers is.
struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

PlanPair& plans_for(int n) {
    static std::mutex mu;
    static std::map<int, PlanPair> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<cplx> a(n), b(n);
    PlanPair p;
    p.fwd = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(a.data()),
                             reinterpret_cast<fftw_complex*>(b.data()), FFTW_FORWARD,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
    p.bwd = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(a.data()),
                             reinterpret_cast<fftw_complex*>(b.data()), FFTW_BACKWARD,
                             FFTW_ESTIMATE | FFTW_UNALIGNED);
    return cache.emplace(n, p).first->second;
}

std::vector<cplx> run_plan(fftw_plan plan, std::vector<cplx> in) {
    std::vector<cplx> out(in.size());
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

}  // namespace

std::vector<cplx> spectrum(const ComplexField& f) {
    auto out = run_plan(plans_for(f.size()).fwd, f.v);
    const double scale = 1.0 / f.size();
    for (cplx& c : out) c *= scale;
    return out;
}

std::vector<cplx> spectrum(const RealField& f) { return spectrum(to_complex(f)); }

ComplexField from_spectrum(const SpectralGrid& g, const std::vector<cplx>& coef) {
    if (static_cast<int>(coef.size()) != g.size())
        throw std::invalid_argument("from_spectrum: coefficient count != grid size");
    return ComplexField(g, run_plan(plans_for(g.size()).bwd, coef));
}

RealField real_from_spectrum(const SpectralGrid& g, const std::vector<cplx>& coef) {
    return real_part(from_spectrum(g, coef));
}

double spectral_l2_norm(const ComplexField& f) {
    double s = 0.0;
    for (cplx c : spectrum(f)) s += std::norm(c);
    return std::sqrt(s * f.grid.period());
}

double spectral_l2_norm(const RealField& f) { return spectral_l2_norm(to_complex(f)); }

// ---- multiplier operators --------------------------------------------------

namespace {

template <typename Fn>
ComplexField apply_multiplier(const ComplexField& f, Fn&& mult) {
    auto coef = spectrum(f);
    const int n = f.size();
    for (int m = 0; m < n; ++m) coef[m] *= mult(f.grid.mode(m), f.grid.wavenumber(m));
    return from_spectrum(f.grid, coef);
}

}  // namespace

ComplexField derivative(const ComplexField& f) {
    const int n = f.size();
    return apply_multiplier(f, [n](int j, double k) -> cplx {
        if (j == -n / 2) return 0.0;  // unpaired Nyquist slot
        return cplx(0.0, k);
    });
}

RealField derivative(const RealField& f) {
    // Hermitian symmetry is preserved (Nyquist zeroed), so the result is real.
    return real_part(derivative(to_complex(f)));
}

ComplexField hilbert(const ComplexField& f) {
    return apply_multiplier(f, [](int j, double) -> cplx {
        if (j == 0) return 0.0;
        return j > 0 ? cplx(0.0, -1.0) : cplx(0.0, 1.0);
    });
}

RealField hilbert(const RealField& f) {
    // For a real field the +-Nyquist pair folds onto the sine mode, which
    // vanishes at the collocation points, so annihilating the slot is the
    // symmetric interpretation and keeps the output real.
    const int n = f.size();
    auto g = apply_multiplier(to_complex(f), [n](int j, double) -> cplx {
        if (j == 0 || j == -n / 2) return 0.0;
        return j > 0 ? cplx(0.0, -1.0) : cplx(0.0, 1.0);
    });
    return real_part(g);
}

ComplexField project_holo(const ComplexField& f) {
    return apply_multiplier(f, [](int j, double) -> cplx {
        if (j < 0) return 1.0;
        if (j == 0) return 0.5;
        return 0.0;
    });
}

ComplexField project_antiholo(const ComplexField& f) {
    return apply_multiplier(f, [](int j, double) -> cplx {
        if (j > 0) return 1.0;
        if (j == 0) return 0.5;
        return 0.0;
    });
}

ComplexField project_holo(const RealField& f) { return project_holo(to_complex(f)); }

ComplexField antiderivative(const ComplexField& f, double mean_tol) {
    auto coef = spectrum(f);
    const int n = f.size();
    double norm = spectral_l2_norm(f);
    if (std::abs(coef[0]) > mean_tol * (norm + 1.0))
        throw std::invalid_argument("antiderivative: field has a nonzero mean");
    coef[0] = 0.0;
    for (int m = 1; m < n; ++m) {
        if (f.grid.mode(m) == -n / 2) {
            coef[m] = 0.0;
            continue;
        }
        coef[m] /= cplx(0.0, f.grid.wavenumber(m));
    }
    return from_spectrum(f.grid, coef);
}

// ---- products ----------------------------------------------------------------

ComplexField dealias(const ComplexField& f) {
    auto coef = spectrum(f);
    const int cut = f.grid.dealias_limit();
    for (int m = 0; m < f.size(); ++m)
        if (std::abs(f.grid.mode(m)) > cut) coef[m] = 0.0;
    return from_spectrum(f.grid, coef);
}

RealField dealias(const RealField& f) { return real_part(dealias(to_complex(f))); }

ComplexField refine(const ComplexField& f, int factor) {
    if (factor < 1) throw std::invalid_argument("refine: factor must be >= 1");
    if (factor == 1) return f;
    const int n = f.size();
    SpectralGrid fine(n * factor, f.grid.period());
    auto coef = spectrum(f);
    std::vector<cplx> out(fine.size(), 0.0);
    for (int m = 0; m < n; ++m) {
        int j = f.grid.mode(m);
        out[j >= 0 ? j : j + fine.size()] = coef[m];
    }
    return from_spectrum(fine, out);
}

ComplexField restrict_to(const ComplexField& fine, const SpectralGrid& coarse) {
    if (fine.grid.period() != coarse.period())
        throw GridMismatch("restrict_to: periods differ");
    if (fine.size() < coarse.size())
        throw std::invalid_argument("restrict_to: target grid is finer than the source");
    auto coef = spectrum(fine);
    std::vector<cplx> out(coarse.size(), 0.0);
    const int half = coarse.size() / 2;
    for (int j = -half; j < half; ++j)
        out[j >= 0 ? j : j + coarse.size()] = coef[j >= 0 ? j : j + fine.size()];
    return from_spectrum(coarse, out);
}

ComplexField product(const ComplexField& a, const ComplexField& b, Dealias d) {
    require_same_grid(a.grid, b.grid, "product");
    ComplexField out(a.grid);
    for (int m = 0; m < a.size(); ++m) out.v[m] = a.v[m] * b.v[m];
    return d == Dealias::on ? dealias(out) : out;
}

RealField product(const RealField& a, const RealField& b, Dealias d) {
    require_same_grid(a.grid, b.grid, "product");
    RealField out(a.grid);
    for (int m = 0; m < a.size(); ++m) out.v[m] = a.v[m] * b.v[m];
    return d == Dealias::on ? dealias(out) : out;
}

ComplexField product(const RealField& a, const ComplexField& b, Dealias d) {
    require_same_grid(a.grid, b.grid, "product");
    ComplexField out(b.grid);
    for (int m = 0; m < b.size(); ++m) out.v[m] = a.v[m] * b.v[m];
    return d == Dealias::on ? dealias(out) : out;
}

ComplexField quotient(const ComplexField& a, const ComplexField& b, Dealias d) {
    require_same_grid(a.grid, b.grid, "quotient");
    ComplexField out(a.grid);
    for (int m = 0; m < a.size(); ++m) out.v[m] = a.v[m] / b.v[m];
    return d == Dealias::on ? dealias(out) : out;
}

// ---- Littlewood-Paley ----------------------------------------------------------

namespace {

// floor(log2 |kappa|); exact for the powers of two the blocks are cut at.
int block_of(double kappa) { return std::ilogb(std::abs(kappa)); }

}  // namespace

ComplexField dyadic_block(const ComplexField& f, int k) {
    auto coef = spectrum(f);
    for (int m = 0; m < f.size(); ++m) {
        int j = f.grid.mode(m);
        if (j == 0 || block_of(f.grid.wavenumber(m)) != k) coef[m] = 0.0;
    }
    return from_spectrum(f.grid, coef);
}

RealField dyadic_block(const RealField& f, int k) {
    return real_part(dyadic_block(to_complex(f), k));
}

std::pair<int, int> dyadic_range(const SpectralGrid& g) {
    double k_min = kTwoPi / g.period();
    double k_max = kTwoPi * (g.size() / 2) / g.period();
    return {block_of(k_min), block_of(k_max)};
}

double besov_half_norm(const ComplexField& f) {
    auto coef = spectrum(f);
    auto [k_lo, k_hi] = dyadic_range(f.grid);
    std::vector<double> mass(k_hi - k_lo + 1, 0.0);
    for (int m = 0; m < f.size(); ++m) {
        int j = f.grid.mode(m);
        if (j == 0) continue;
        mass[block_of(f.grid.wavenumber(m)) - k_lo] += std::norm(coef[m]);
    }
    double total = 0.0;
    for (int k = k_lo; k <= k_hi; ++k) {
        double block_l2 = std::sqrt(mass[k - k_lo] * f.grid.period());
        total += std::exp2(0.5 * k) * block_l2;
    }
    return total;
}

double besov_half_norm(const RealField& f) { return besov_half_norm(to_complex(f)); }

// ---- cutoffs --------------------------------------------------------------------

double CutoffFamily::base(double s) {
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    return s * s * s * s * (35.0 + s * (-84.0 + s * (70.0 - 20.0 * s)));
}

double CutoffFamily::base_derivative(double s) {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    double u = s * (1.0 - s);
    return 140.0 * u * u * u;
}

namespace {

// Signed distance of alpha to the nearest representative of center (mod L).
double periodic_offset(double alpha, double center, double L) {
    double d = alpha - center;
    d -= L * std::round(d / L);
    return d;
}

}  // namespace

RealField CutoffFamily::sample(const SpectralGrid& g, double r) const {
    if (!(r > 0.0) || r > max_scale(g))
        throw std::invalid_argument("CutoffFamily: scale must satisfy 0 < r <= L/8");
    RealField out(g);
    const double L = g.period();
    for (int m = 0; m < g.size(); ++m) {
        double a = g.point(m);
        double d0 = periodic_offset(a, 0.0, L);
        // rise through alpha = 0, mirrored fall through alpha = L/2; the two
        // formulas agree (plateau) where they meet at |d0| = L/4
        if (std::abs(d0) <= L / 4.0) {
            out.v[m] = base(d0 / r + 0.5);
        } else {
            double dh = periodic_offset(a, L / 2.0, L);
            out.v[m] = base(-dh / r + 0.5);
        }
    }
    return out;
}

RealField CutoffFamily::sample_derivative(const SpectralGrid& g, double r) const {
    if (!(r > 0.0) || r > max_scale(g))
        throw std::invalid_argument("CutoffFamily: scale must satisfy 0 < r <= L/8");
    RealField out(g);
    const double L = g.period();
    for (int m = 0; m < g.size(); ++m) {
        double a = g.point(m);
        double d0 = periodic_offset(a, 0.0, L);
        if (std::abs(d0) <= L / 4.0) {
            out.v[m] = base_derivative(d0 / r + 0.5) / r;
        } else {
            double dh = periodic_offset(a, L / 2.0, L);
            out.v[m] = -base_derivative(-dh / r + 0.5) / r;
        }
    }
    return out;
}

ComplexField commutator_p_cutoff(const ComplexField& w, double r, const CutoffFamily& cutoffs) {
    if (r > CutoffFamily::max_scale(w.grid))
        throw std::invalid_argument("commutator_p_cutoff: r too large for the grid period");
    RealField chi = cutoffs.sample(w.grid, r);
    ComplexField wa = derivative(w);
    ComplexField lhs = project_holo(product(chi, wa, Dealias::off));
    ComplexField rhs = product(chi, project_holo(wa), Dealias::off);
    return lhs - rhs;
}

// ---- random fields ----------------------------------------------------------------

ComplexField random_holo_field(const SpectralGrid& g, Rng& rng, int kmax, double amplitude,
                               double decay) {
    if (kmax >= g.size() / 2) throw std::invalid_argument("random_holo_field: kmax too large");
    std::vector<cplx> coef(g.size(), 0.0);
    for (int k = 1; k <= kmax; ++k) {
        double mag = amplitude * std::pow(static_cast<double>(k), -decay);
        double phase = rng.uniform(0.0, kTwoPi);
        coef[g.size() - k] = mag * cplx(std::cos(phase), std::sin(phase));
    }
    return from_spectrum(g, coef);
}

}  // namespace wavecf
