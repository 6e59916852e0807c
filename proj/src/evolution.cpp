#include "wavecf/evolution.hpp"

#include <algorithm>
#include <cmath>

namespace wavecf {

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

// Project to holomorphic and remove the mean. Positive-mode mass is genuine
// holomorphy leakage; the removed mean is the zero-mode gauge (the Bernoulli
// drift of the potential and the vertical recentering of the surface), kept
// in separate books.
HoloField settle(const ComplexField& f, double* leak, double* mean_drift) {
    auto coef = spectrum(f);
    if (mean_drift) *mean_drift = std::abs(coef[0]);
    coef[0] = 0.0;
    double mass = 0.0;
    for (int m = 0; m < f.size(); ++m) {
        if (f.grid.mode(m) > 0) {
            mass += std::norm(coef[m]);
            coef[m] = 0.0;
        }
    }
    if (leak) *leak = std::sqrt(mass * f.grid.period());
    return HoloField::project(from_spectrum(f.grid, coef), nullptr);
}

}  // namespace

RhsFull rhs_full(const WaveState& s, const PhysParams& p, double delta) {
    const SpectralGrid& g = s.grid();
    ComplexField wa = derivative(s.surface.field());
    ComplexField qa = derivative(s.potential.field());
    ComplexField zp = one_plus(wa);
    double mj = min_abs(zp);
    if (mj < delta)
        throw ConformalDegenerate("rhs_full: |1 + W_alpha| = " + std::to_string(mj) +
                                  " under the delta floor");

    ComplexField imbalance(g);
    for (int m = 0; m < g.size(); ++m)
        imbalance.v[m] = (qa.v[m] - std::conj(qa.v[m])) / std::norm(zp.v[m]);
    ComplexField f = project_holo(dealias(imbalance));

    ComplexField wt(g);
    {
        ComplexField fzp = product(f, zp);
        for (int m = 0; m < g.size(); ++m) wt.v[m] = -fzp.v[m];
    }

    ComplexField kinetic(g);
    for (int m = 0; m < g.size(); ++m)
        kinetic.v[m] = std::norm(qa.v[m]) / std::norm(zp.v[m]);
    ComplexField pk = project_holo(dealias(kinetic));

    ComplexField fqa = product(f, qa);
    ComplexField qt(g);
    for (int m = 0; m < g.size(); ++m)
        qt.v[m] = -fqa.v[m] + cplx(0.0, p.g) * s.surface.field().v[m] - pk.v[m];

    if (p.sigma != 0.0) {
        ComplexField waa = derivative(wa);
        ComplexField curv(g);
        for (int m = 0; m < g.size(); ++m) {
            double rj = std::sqrt(std::norm(zp.v[m]));
            cplx a = waa.v[m] / (rj * zp.v[m]);
            curv.v[m] = a - std::conj(a);
        }
        ComplexField pc = project_holo(dealias(curv));
        for (int m = 0; m < g.size(); ++m) qt.v[m] -= cplx(0.0, p.sigma) * pc.v[m];
    }

    RhsFull out;
    double leak_w = 0.0, leak_q = 0.0, mu_w = 0.0, mu_q = 0.0;
    out.surface_t = settle(dealias(wt), &leak_w, &mu_w);
    out.potential_t = settle(dealias(qt), &leak_q, &mu_q);
    out.leakage = std::hypot(leak_w, leak_q);
    out.mean_drift = std::hypot(mu_w, mu_q);
    return out;
}

RhsDiff rhs_diff(const DiffState& d, const PhysParams& p) {
    const SpectralGrid& g = d.grid();
    const ComplexField& ww = d.slope.field();
    const ComplexField& r = d.velocity.field();
    ComplexField zp = one_plus(ww);
    double mj = min_abs(zp);
    if (mj < d.delta)
        throw ConformalDegenerate("rhs_diff: |1 + slope| under the delta floor");

    ComplexField wa = derivative(ww);
    ComplexField ra = derivative(r);

    // advection velocity b = 2 Re P[Q_alpha / J]; Q_alpha/J = R/(1 + conj(slope))
    ComplexField b_arg(g);
    for (int m = 0; m < g.size(); ++m) b_arg.v[m] = r.v[m] / std::conj(zp.v[m]);
    ComplexField pb = project_holo(dealias(b_arg));
    ComplexField b_cplx(g);
    for (int m = 0; m < g.size(); ++m) b_cplx.v[m] = pb.v[m] + std::conj(pb.v[m]);

    // frequency shift a = i (conj-P[conj(R) R_alpha] - P[R conj(R_alpha)])
    ComplexField a_arg(g);
    for (int m = 0; m < g.size(); ++m) a_arg.v[m] = r.v[m] * std::conj(ra.v[m]);
    ComplexField pa = project_holo(dealias(a_arg));
    ComplexField a_cplx(g);
    for (int m = 0; m < g.size(); ++m)
        a_cplx.v[m] = cplx(0.0, 1.0) * (std::conj(pa.v[m]) - pa.v[m]);

    double scale_b = sup_norm(b_cplx) + 1.0, worst_b = 0.0;
    double scale_a = sup_norm(a_cplx) + 1.0, worst_a = 0.0;
    for (int m = 0; m < g.size(); ++m) {
        worst_b = std::max(worst_b, std::abs(b_cplx.v[m].imag()));
        worst_a = std::max(worst_a, std::abs(a_cplx.v[m].imag()));
    }
    if (worst_b > 1e-10 * scale_b)
        throw RealityViolation("rhs_diff: advection velocity b not real");
    if (worst_a > 1e-10 * scale_a)
        throw RealityViolation("rhs_diff: frequency shift a not real");
    RealField b = real_part(b_cplx);
    RealField a = real_part(a_cplx);

    // M, first form: R_alpha/(1+conj slope) + conj(R_alpha)/(1+slope) - b_alpha
    RealField b_alpha = derivative(b);
    ComplexField m1(g);
    for (int m = 0; m < g.size(); ++m)
        m1.v[m] = ra.v[m] / std::conj(zp.v[m]) + std::conj(ra.v[m]) / zp.v[m] - b_alpha.v[m];
    m1 = dealias(m1);

    // second form via Y = slope/(1+slope)
    ComplexField y(g);
    for (int m = 0; m < g.size(); ++m) y.v[m] = ww.v[m] / zp.v[m];
    y = dealias(y);
    ComplexField ya = derivative(y);
    ComplexField arg2(g);  // R conj(Y_alpha) - conj(R_alpha) Y; the first
                           // printed term is the conjugate of P applied to it
    for (int m = 0; m < g.size(); ++m)
        arg2.v[m] = r.v[m] * std::conj(ya.v[m]) - std::conj(ra.v[m]) * y.v[m];
    ComplexField p2f = project_holo(dealias(arg2));
    ComplexField m2(g);
    for (int m = 0; m < g.size(); ++m) m2.v[m] = p2f.v[m] + std::conj(p2f.v[m]);

    double gap = 0.0, mscale = sup_norm(m1) + 1.0;
    for (int m = 0; m < g.size(); ++m) gap = std::max(gap, std::abs(m1.v[m] - m2.v[m]));
    if (gap > 1e-10 * mscale)
        throw RealityViolation("rhs_diff: the two forms of M disagree beyond 1e-10");

    // slope_t = -b slope_alpha - (1+slope) R_alpha/(1+conj slope) + (1+slope) M
    ComplexField st(g);
    for (int m = 0; m < g.size(); ++m)
        st.v[m] = -b.v[m] * wa.v[m] - zp.v[m] * ra.v[m] / std::conj(zp.v[m]) +
                  zp.v[m] * m1.v[m];

    // velocity_t = -b R_alpha - i (g + a)/(1+slope) - i sigma /(1+slope) d/da P[...] + i sigma d/da P[conj ...]
    ComplexField vt(g);
    for (int m = 0; m < g.size(); ++m)
        vt.v[m] = -b.v[m] * ra.v[m] -
                  cplx(0.0, 1.0) * (p.g + a.v[m]) / zp.v[m];
    if (p.sigma != 0.0) {
        ComplexField curv(g);
        for (int m = 0; m < g.size(); ++m) {
            double rj = std::sqrt(std::norm(zp.v[m]));
            curv.v[m] = wa.v[m] / (rj * zp.v[m]);
        }
        ComplexField pcurv_a = derivative(project_holo(dealias(curv)));
        ComplexField curv_bar(g);
        for (int m = 0; m < g.size(); ++m) curv_bar.v[m] = std::conj(curv.v[m]);
        ComplexField pcurv_bar_a = derivative(project_holo(dealias(curv_bar)));
        for (int m = 0; m < g.size(); ++m)
            vt.v[m] += -cplx(0.0, p.sigma) * pcurv_a.v[m] / zp.v[m] +
                       cplx(0.0, p.sigma) * pcurv_bar_a.v[m];
    }

    RhsDiff out;
    double leak_s = 0.0, leak_v = 0.0, mu_s = 0.0, mu_v = 0.0;
    out.slope_t = settle(dealias(st), &leak_s, &mu_s);
    out.velocity_t = settle(dealias(vt), &leak_v, &mu_v);
    out.advection = b;
    out.freq_shift = a;
    out.source_m = m1;
    out.m_form_gap = gap;
    out.leakage = std::hypot(leak_s, leak_v);
    out.mean_drift = std::hypot(mu_s, mu_v);
    return out;
}

double max_stable_dt(const SpectralGrid& g, const PhysParams& p, double cfl_safety) {
    double k_max = kTwoPi * (g.size() / 2) / g.period();
    double omega_max = std::sqrt(p.g * k_max + p.sigma * k_max * k_max * k_max);
    const double rk4_imag_limit = 2.82;
    return cfl_safety * rk4_imag_limit / omega_max;
}

namespace {

void apply_filter(ComplexField& f) {
    auto coef = spectrum(f);
    const int half = f.grid.size() / 2;
    for (int m = 0; m < f.size(); ++m) {
        double frac = std::abs(double(f.grid.mode(m))) / half;
        coef[m] *= std::exp(-36.0 * std::pow(frac, 36));
    }
    f = from_spectrum(f.grid, coef);
}

struct Pair {
    ComplexField w, q;
};

}  // namespace

EvolutionTrace evolve(const WaveState& s0, const PhysParams& p, double dt, int steps,
                      const EvolveOptions& opt) {
    if (dt <= 0.0 || steps < 0) throw std::invalid_argument("evolve: bad dt or step count");
    if (dt > max_stable_dt(s0.grid(), p, 1.0))
        throw std::invalid_argument("evolve: dt violates the stiffest-mode stability bound");

    const SpectralGrid& g = s0.grid();
    const double sup0 =
        sup_norm(s0.surface.field()) + sup_norm(s0.potential.field()) + 1.0;
    const double bound = opt.blowup_factor * sup0;

    double leak_total = 0.0, drift_total = 0.0;
    auto deriv = [&](const ComplexField& w, const ComplexField& q) -> Pair {
        WaveState s(HoloField::project(w, nullptr), HoloField::project(q, nullptr), 1e9);
        RhsFull r = rhs_full(s, p, opt.delta);
        drift_total += r.mean_drift * dt / 4.0;  // stagewise gauge accounting
        return {r.surface_t.field(), r.potential_t.field()};
    };

    ComplexField w = s0.surface.field();
    ComplexField q = s0.potential.field();

    EvolutionTrace trace(s0);
    auto sample = [&](double t) {
        WaveState s(HoloField::project(w, nullptr), HoloField::project(q, nullptr), 1e9);
        TraceSample ts;
        ts.t = t;
        ts.energy = hamiltonian(s, p);
        ts.momentum = momentum(s);
        ts.leakage = leak_total;
        ts.mean_drift = drift_total;
        ComplexField wa = derivative(w);
        double mj = std::abs(1.0 + wa.v[0]);
        for (const auto& z : wa.v) mj = std::min(mj, std::abs(1.0 + z));
        ts.min_jacobian = mj;
        ts.sup_surface = sup_norm(w);
        ts.sup_potential = sup_norm(q);
        trace.samples.push_back(ts);
    };

    sample(0.0);
    for (int n = 1; n <= steps; ++n) {
        Pair k1 = deriv(w, q);
        auto shift = [&](const ComplexField& base, const ComplexField& dir, double h) {
            ComplexField out = base;
            for (int m = 0; m < out.size(); ++m) out.v[m] += h * dir.v[m];
            return out;
        };
        Pair k2 = deriv(shift(w, k1.w, 0.5 * dt), shift(q, k1.q, 0.5 * dt));
        Pair k3 = deriv(shift(w, k2.w, 0.5 * dt), shift(q, k2.q, 0.5 * dt));
        Pair k4 = deriv(shift(w, k3.w, dt), shift(q, k3.q, dt));

        for (int m = 0; m < g.size(); ++m) {
            w.v[m] += dt / 6.0 * (k1.w.v[m] + 2.0 * k2.w.v[m] + 2.0 * k3.w.v[m] + k4.w.v[m]);
            q.v[m] += dt / 6.0 * (k1.q.v[m] + 2.0 * k2.q.v[m] + 2.0 * k3.q.v[m] + k4.q.v[m]);
        }

        // holomorphy and the mean-free convention re-enforced each step
        double lw = 0.0, lq = 0.0, mw = 0.0, mq = 0.0;
        ComplexField wsettled = settle(w, &lw, &mw).field();
        ComplexField qsettled = settle(q, &lq, &mq).field();
        w = std::move(wsettled);
        q = std::move(qsettled);
        leak_total += std::hypot(lw, lq);
        if (opt.filter) {
            apply_filter(w);
            apply_filter(q);
        }

        double sw = sup_norm(w), sq = sup_norm(q);
        if (!std::isfinite(sw) || !std::isfinite(sq) || sw + sq > bound)
            throw BlowupDetected("evolve: sup norm left the admissible bound at t = " +
                                 std::to_string(n * dt));

        if (n % opt.sample_every == 0 || n == steps) sample(n * dt);
    }

    trace.final_state = WaveState(HoloField::project(w, nullptr), HoloField::project(q, nullptr));
    trace.total_leakage = leak_total;
    return trace;
}

}  // namespace wavecf
