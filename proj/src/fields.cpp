#include "wavecf/fields.hpp"

#include <algorithm>
#include <cmath>

namespace wavecf {

// ---- HoloField ----------------------------------------------------------------

HoloField HoloField::from_imag_trace(const RealField& rho) {
    RealField re = hilbert(rho);
    ComplexField f(rho.grid);
    for (int m = 0; m < rho.size(); ++m) f.v[m] = cplx(re.v[m], rho.v[m]);
    return HoloField(std::move(f));
}

double HoloField::positive_mode_mass(const ComplexField& f) {
    auto coef = spectrum(f);
    double s = 0.0;
    for (int m = 0; m < f.size(); ++m)
        if (f.grid.mode(m) > 0) s += std::norm(coef[m]);
    return std::sqrt(s * f.grid.period());
}

HoloField HoloField::project(const ComplexField& f, double* leakage) {
    auto coef = spectrum(f);
    double removed = 0.0;
    for (int m = 0; m < f.size(); ++m) {
        if (f.grid.mode(m) > 0) {
            removed += std::norm(coef[m]);
            coef[m] = 0.0;
        }
    }
    if (leakage) *leakage = std::sqrt(removed * f.grid.period());
    return HoloField(from_spectrum(f.grid, coef));
}

HoloField HoloField::checked(const ComplexField& f, double tau) {
    double leak = 0.0;
    HoloField h = project(f, &leak);
    if (leak > tau * (l2_norm(f) + 1e-300))
        throw HolomorphyViolation("positive-mode mass " + std::to_string(leak) +
                                  " above holomorphy tolerance");
    return h;
}

HoloField HoloField::derivative_field() const {
    return HoloField(derivative(f_));
}

// ---- states ----------------------------------------------------------------------

WaveState::WaveState(HoloField surface_, HoloField potential_, double mean_tol)
    : surface(std::move(surface_)), potential(std::move(potential_)) {
    require_same_grid(surface.grid(), potential.grid(), "WaveState");
    double scale = surface.norm_l2() + potential.norm_l2() + 1.0;
    if (std::abs(surface.mean_value()) > mean_tol * scale ||
        std::abs(potential.mean_value()) > mean_tol * scale)
        throw HolomorphyViolation("WaveState: solver states must be mean-free");
}

namespace {

ComplexField one_plus(const ComplexField& f) {
    ComplexField out = f;
    for (auto& z : out.v) z += 1.0;
    return out;
}

double min_abs(const ComplexField& f) {
    double m = std::abs(f.v[0]);
    for (const auto& z : f.v) m = std::min(m, std::abs(z));
    return m;
}

}  // namespace

HoloField DiffState::slope_ratio(double* leakage) const {
    ComplexField zp = one_plus(slope.field());
    ComplexField y = quotient(slope.field(), zp);
    return HoloField::project(y, leakage);
}

DiffState to_diff(const WaveState& s, double delta, DiffConversionReport* report, double tau) {
    HoloField wa = s.surface.derivative_field();
    ComplexField zp = one_plus(wa.field());
    double mj = min_abs(zp);
    if (mj < delta)
        throw ConformalDegenerate("to_diff: |1 + W_alpha| = " + std::to_string(mj) +
                                  " below delta = " + std::to_string(delta));

    ComplexField r_raw = quotient(s.potential.derivative_field().field(), zp);
    double leak = 0.0;
    HoloField r = HoloField::project(r_raw, &leak);
    if (leak > tau * (l2_norm(r_raw) + 1e-300))
        throw HolomorphyViolation("to_diff: velocity quotient leaks above tolerance");

    if (report) {
        report->velocity_leakage = leak;
        report->min_jacobian = mj;
    }
    return DiffState{std::move(wa), std::move(r), delta};
}

WaveState from_diff(const DiffState& d) {
    ComplexField w = antiderivative(d.slope.field());
    ComplexField qa = product(d.velocity.field(), one_plus(d.slope.field()));
    ComplexField q = antiderivative(qa);
    return WaveState(HoloField::checked(w), HoloField::checked(q));
}

// ---- conserved quantities -----------------------------------------------------------

double hamiltonian(const WaveState& s, const PhysParams& p) {
    const ComplexField& w = s.surface.field();
    const ComplexField& q = s.potential.field();
    ComplexField wa = derivative(w);
    ComplexField qa = derivative(q);

    RealField density(s.grid());
    for (int m = 0; m < w.size(); ++m) {
        cplx zp = 1.0 + wa.v[m];
        double jac = std::norm(zp);
        double kinetic = std::imag(q.v[m] * std::conj(qa.v[m]));
        double capillary = 2.0 * p.sigma * (std::sqrt(jac) - 1.0 - wa.v[m].real());
        double gravity =
            p.g * (std::norm(w.v[m]) - std::real(std::conj(w.v[m]) * std::conj(w.v[m]) * wa.v[m]));
        density.v[m] = kinetic + capillary + gravity;
    }
    return integrate(density);
}

double momentum(const WaveState& s) {
    const ComplexField& w = s.surface.field();
    const ComplexField& q = s.potential.field();
    ComplexField wa = derivative(w);

    ComplexField density(s.grid());
    for (int m = 0; m < w.size(); ++m)
        density.v[m] = cplx(0.0, 1.0) * (std::conj(q.v[m]) * wa.v[m] - q.v[m] * std::conj(wa.v[m]));
    cplx value = integrate(density);
    double scale = std::abs(value) + 1e-300;
    if (std::abs(value.imag()) > 1e-12 * std::max(scale, 1.0))
        throw RealityViolation("momentum: imaginary residue above 1e-12 relative");
    return value.real();
}

// ---- conformal validity ----------------------------------------------------------------

ConformalReport check_conformal(const HoloField& w, double delta) {
    ComplexField zp = one_plus(derivative(w.field()));
    ConformalReport rep;
    rep.min_jacobian_abs = min_abs(zp);
    rep.min_jacobian_re = zp.v[0].real();
    for (const auto& z : zp.v) rep.min_jacobian_re = std::min(rep.min_jacobian_re, z.real());
    rep.pass = rep.min_jacobian_abs >= delta && rep.min_jacobian_re >= delta;
    return rep;
}

double steepness(const HoloField& w) {
    double lo = w.field().v[0].imag(), hi = lo;
    for (const auto& z : w.field().v) {
        lo = std::min(lo, z.imag());
        hi = std::max(hi, z.imag());
    }
    return (hi - lo) / w.grid().period();
}

// ---- Eulerian trace -----------------------------------------------------------------------

cplx trig_eval(const SpectralGrid& g, const std::vector<cplx>& coef, double alpha) {
    cplx acc = 0.0;
    for (int m = 0; m < g.size(); ++m) {
        if (coef[m] == 0.0) continue;
        double ph = g.wavenumber(m) * alpha;
        acc += coef[m] * cplx(std::cos(ph), std::sin(ph));
    }
    return acc;
}

EulerianTrace eulerian_trace(const HoloField& w) {
    const SpectralGrid& g = w.grid();
    ComplexField wa = derivative(w.field());
    for (const auto& z : wa.v)
        if (1.0 + z.real() <= 0.0)
            throw NotAGraph("eulerian_trace: x(alpha) is not strictly increasing");

    EulerianTrace tr(g);
    tr.x.resize(g.size());
    tr.eta.resize(g.size());
    for (int m = 0; m < g.size(); ++m) {
        tr.x[m] = g.point(m) + w.field().v[m].real();
        tr.eta[m] = w.field().v[m].imag();
    }
    // monotonicity across points (the pointwise slope check above is the
    // continuous version; this guards the sampled sequence)
    for (int m = 0; m + 1 < g.size(); ++m)
        if (tr.x[m + 1] <= tr.x[m]) throw NotAGraph("eulerian_trace: sampled x not monotone");
    tr.w_coef = spectrum(w.field());
    return tr;
}

EulerianTrace::Resampled EulerianTrace::resample_uniform(int m_points) const {
    // Solve x = x_j + Re W(alpha) = ... by Newton on alpha; the map is
    // bi-Lipschitz so plain Newton from the previous solution converges fast.
    Resampled out;
    out.x.resize(m_points);
    out.alpha.resize(m_points);
    out.eta.resize(m_points);

    // derivative coefficients for Newton
    std::vector<cplx> wa_coef = w_coef;
    for (int m = 0; m < grid.size(); ++m) {
        if (grid.mode(m) == -grid.size() / 2) {
            wa_coef[m] = 0.0;
            continue;
        }
        wa_coef[m] *= cplx(0.0, grid.wavenumber(m));
    }

    const double L = grid.period();
    double alpha = 0.0;
    for (int j = 0; j < m_points; ++j) {
        double xt = j * L / m_points + x[0];  // uniform grid anchored at x(0)
        // initial guess: previous alpha plus the uniform increment
        if (j > 0) alpha += L / m_points;
        for (int it = 0; it < 60; ++it) {
            cplx wv = trig_eval(grid, w_coef, alpha);
            double f = alpha + wv.real() - xt;
            double fp = 1.0 + trig_eval(grid, wa_coef, alpha).real();
            double step = f / fp;
            alpha -= step;
            if (std::abs(step) < 1e-14 * (1.0 + std::abs(alpha))) break;
        }
        out.x[j] = xt;
        out.alpha[j] = alpha;
        out.eta[j] = trig_eval(grid, w_coef, alpha).imag();
    }
    return out;
}

HoloField translate(const HoloField& w, double s) {
    auto coef = spectrum(w.field());
    const SpectralGrid& g = w.grid();
    for (int m = 0; m < g.size(); ++m) {
        double ph = -g.wavenumber(m) * s;
        coef[m] *= cplx(std::cos(ph), std::sin(ph));
    }
    return HoloField::checked(from_spectrum(g, coef), 1e-8);
}

}  // namespace wavecf
