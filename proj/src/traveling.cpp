#include "wavecf/traveling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wavecf/solvers.hpp"

namespace wavecf {

// ---- shared pieces -----------------------------------------------------------

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

void require_floor(const ComplexField& zp, double delta, const char* where) {
    double m = min_abs(zp);
    if (m < delta)
        throw ConformalDegenerate(std::string(where) + ": |1 + slope| = " + std::to_string(m) +
                                  " under the delta floor");
}

// Continuous argument of a nowhere-vanishing field, unwrapped from alpha = 0.
// A jump above 0.9 pi between neighbors or a nonzero winding over the period
// means the branch cannot be tracked on this grid.
RealField continuous_arg(const ComplexField& zp, const char* where) {
    RealField theta(zp.grid);
    double prev = std::atan2(zp.v[0].imag(), zp.v[0].real());
    theta.v[0] = prev;
    for (int m = 1; m < zp.size(); ++m) {
        double raw = std::atan2(zp.v[m].imag(), zp.v[m].real());
        double d = raw - prev;
        d -= kTwoPi * std::round(d / kTwoPi);
        if (std::abs(d) > 0.9 * M_PI)
            throw BranchCut(std::string(where) + ": argument jump above 0.9 pi between neighbors");
        prev += d;
        theta.v[m] = prev;
    }
    double wrap = std::atan2(zp.v[0].imag(), zp.v[0].real()) - prev;
    wrap -= kTwoPi * std::round(wrap / kTwoPi);
    if (std::abs(prev + wrap - theta.v[0]) > 1e-9)
        throw BranchCut(std::string(where) + ": nonzero winding over the period");
    return theta;
}

}  // namespace

// ---- residual operators ----------------------------------------------------------

RealField residual_combined(const HoloField& w, const PhysParams& p, double delta,
                            double* imag_residue) {
    const SpectralGrid& g = w.grid();
    ComplexField wa = derivative(w.field());
    ComplexField zp = one_plus(wa);
    require_floor(zp, delta, "residual_combined");

    ComplexField assembled(g);

    // gravity part: -i g (W - conj W)/2 = g Im W
    for (int m = 0; m < g.size(); ++m)
        assembled.v[m] = cplx(0.0, -0.5 * p.g) * (w.field().v[m] - std::conj(w.field().v[m]));

    if (p.sigma != 0.0) {
        (void)continuous_arg(zp, "residual_combined");  // branch-cut guard
        // |.|-quotient evaluated on a doubled grid: sampling the unimodular
        // factor on the base grid aliases band-edge content and pollutes the
        // imaginary-residue assertion below
        ComplexField zpf = refine(zp, 2);
        ComplexField uf(zpf.grid);
        for (int m = 0; m < zpf.size(); ++m) uf.v[m] = zpf.v[m] / std::abs(zpf.v[m]);
        ComplexField duf = derivative(uf);
        ComplexField termf(zpf.grid);
        for (int m = 0; m < zpf.size(); ++m)
            termf.v[m] = cplx(0.0, p.sigma) * duf.v[m] / zpf.v[m];
        ComplexField term = restrict_to(termf, g);
        for (int m = 0; m < g.size(); ++m) assembled.v[m] += term.v[m];
    }

    const double c2 = p.c * p.c;
    for (int m = 0; m < g.size(); ++m) {
        double jac = std::norm(zp.v[m]);
        assembled.v[m] -= 0.5 * c2 * (jac - 1.0) / jac;
    }
    assembled = dealias(assembled);

    double residue = 0.0, scale = 0.0;
    for (const auto& z : assembled.v) {
        residue = std::max(residue, std::abs(z.imag()));
        scale = std::max(scale, std::abs(z));
    }
    if (imag_residue) *imag_residue = residue;
    if (residue > 1e-10 * (1.0 + scale))
        throw RealityViolation("residual_combined: imaginary residue above 1e-10");
    return real_part(assembled);
}

ComplexField residual_babenko_gravity(const HoloField& w, const PhysParams& p) {
    if (p.sigma != 0.0)
        throw std::invalid_argument("residual_babenko_gravity: requires sigma = 0");
    ComplexField wa = derivative(w.field());
    ComplexField mixed = product(conj(w.field()), wa) - product(w.field(), wa);
    ComplexField out = project_holo(mixed);
    const double c2 = p.c * p.c;
    for (int m = 0; m < w.size(); ++m)
        out.v[m] = p.g * w.field().v[m] - p.g * out.v[m] - cplx(0.0, c2) * wa.v[m];
    return out;
}

ComplexField residual_bab_g(const HoloField& w, const PhysParams& p) {
    if (p.sigma != 0.0) throw std::invalid_argument("residual_bab_g: requires sigma = 0");
    const SpectralGrid& g = w.grid();
    const double c2 = p.c * p.c;

    // V = c^2 + i g (W - conj W): real by construction, asserted pointwise
    ComplexField vt(g);
    double worst = 0.0, scale = 0.0;
    for (int m = 0; m < g.size(); ++m) {
        vt.v[m] = c2 + cplx(0.0, p.g) * (w.field().v[m] - std::conj(w.field().v[m]));
        worst = std::max(worst, std::abs(vt.v[m].imag()));
        scale = std::max(scale, std::abs(vt.v[m]));
    }
    if (worst > 1e-10 * (1.0 + scale))
        throw RealityViolation("residual_bab_g: transport coefficient V not real");

    ComplexField wa = derivative(w.field());
    ComplexField ivwa(g);
    for (int m = 0; m < g.size(); ++m) ivwa.v[m] = cplx(0.0, 1.0) * vt.v[m] * wa.v[m];
    ComplexField out = project_holo(dealias(ivwa));
    for (int m = 0; m < g.size(); ++m) out.v[m] = p.g * w.field().v[m] - out.v[m];
    return out;
}

ComplexField residual_capillary(const ComplexField& slope, const PhysParams& p,
                                CapillaryConvention conv, double delta) {
    if (p.g != 0.0) throw std::invalid_argument("residual_capillary: requires g = 0");
    const SpectralGrid& g = slope.grid;
    ComplexField zp = one_plus(slope);
    require_floor(zp, delta, "residual_capillary");
    (void)continuous_arg(zp, "residual_capillary");

    // alias-safe unimodular factor (see residual_combined)
    ComplexField zpf = refine(zp, 2);
    ComplexField uf(zpf.grid);
    for (int m = 0; m < zpf.size(); ++m) uf.v[m] = zpf.v[m] / std::abs(zpf.v[m]);
    ComplexField du = restrict_to(derivative(uf), g);

    const double factor = (conv == CapillaryConvention::canonical ? 0.5 : 1.0) * p.c * p.c;
    ComplexField out(g);
    for (int m = 0; m < g.size(); ++m) {
        cplx wb = std::conj(slope.v[m]);
        out.v[m] = cplx(0.0, p.sigma) * du.v[m] - factor * (slope.v[m] + wb / (1.0 + wb));
    }
    return dealias(out);
}

SolitonResidual residual_soliton_system(const WaveState& s, const PhysParams& p, double delta) {
    const SpectralGrid& g = s.grid();
    ComplexField wa = derivative(s.surface.field());
    ComplexField qa = derivative(s.potential.field());
    ComplexField zp = one_plus(wa);
    require_floor(zp, delta, "residual_soliton_system");

    ComplexField imbalance(g);  // (Q_a - conj Q_a)/J
    for (int m = 0; m < g.size(); ++m)
        imbalance.v[m] = (qa.v[m] - std::conj(qa.v[m])) / std::norm(zp.v[m]);
    ComplexField f = project_holo(dealias(imbalance));

    SolitonResidual out{ComplexField(g), ComplexField(g), 0.0};
    ComplexField fzp = product(f, zp);
    for (int m = 0; m < g.size(); ++m) out.first.v[m] = -p.c * wa.v[m] + fzp.v[m];

    ComplexField kinetic(g);  // |Q_a|^2 / J
    for (int m = 0; m < g.size(); ++m)
        kinetic.v[m] = std::norm(qa.v[m]) / std::norm(zp.v[m]);
    ComplexField pk = project_holo(dealias(kinetic));

    ComplexField fqa = product(f, qa);
    for (int m = 0; m < g.size(); ++m)
        out.second.v[m] = -p.c * qa.v[m] + fqa.v[m] - cplx(0.0, p.g) * s.surface.field().v[m] +
                          pk.v[m];

    if (p.sigma != 0.0) {
        ComplexField waa = derivative(wa);
        ComplexField curv(g);
        for (int m = 0; m < g.size(); ++m) {
            double rj = std::sqrt(std::norm(zp.v[m]));
            cplx a = waa.v[m] / (rj * zp.v[m]);
            curv.v[m] = a - std::conj(a);
        }
        ComplexField pc = project_holo(dealias(curv));
        for (int m = 0; m < g.size(); ++m)
            out.second.v[m] += cplx(0.0, p.sigma) * pc.v[m];
    }
    out.first = dealias(out.first);
    out.second = dealias(out.second);

    double gap = 0.0, scale = 1e-300;
    for (int m = 0; m < g.size(); ++m) {
        gap = std::max(gap, std::abs(qa.v[m] - p.c * wa.v[m]));
        scale = std::max(scale, std::abs(qa.v[m]) + std::abs(p.c * wa.v[m]));
    }
    out.constraint_gap = gap / std::max(scale, 1.0);
    return out;
}

// ---- unknown packing -----------------------------------------------------------------

namespace {

struct Layout {
    SpectralGrid grid{256, kTwoPi};
    int K = 0;        // retained harmonics per trace
    bool even = true;
    int traces = 1;   // 2 for the soliton system
    bool has_speed = false;

    int per_trace() const { return even ? K : 2 * K; }
    int dim() const { return traces * per_trace() + (has_speed ? 1 : 0); }
};

RealField trace_from_coeffs(const Layout& lay, const double* x) {
    const SpectralGrid& g = lay.grid;
    std::vector<cplx> coef(g.size(), 0.0);
    for (int k = 1; k <= lay.K; ++k) {
        double b = x[k - 1];
        double s = lay.even ? 0.0 : x[lay.K + k - 1];
        coef[k] = 0.5 * cplx(b, -s);
        coef[g.size() - k] = 0.5 * cplx(b, s);
    }
    return real_from_spectrum(g, coef);
}

void coeffs_from_trace(const Layout& lay, const RealField& f, double* out) {
    auto coef = spectrum(f);
    for (int k = 1; k <= lay.K; ++k) {
        out[k - 1] = 2.0 * coef[k].real();
        if (!lay.even) out[lay.K + k - 1] = -2.0 * coef[k].imag();
    }
}

struct TraceStats {
    double l2 = 0.0;   // quadrature L2 of the mean-free residual fields
    double sup = 0.0;
    double mean = 0.0;  // |zero mode|, the Bernoulli diagnostic
    double gap = 0.0;   // constraint row magnitude
};

// Residual evaluation: unknowns -> equation vector (+ field statistics).
class System {
  public:
    System(const TravelingProblem& pr) : pr_(pr) {
        lay_.grid = pr.grid;
        lay_.K = pr.grid.dealias_limit();
        lay_.even = pr.even_symmetry;
        lay_.traces = pr.formulation == Formulation::soliton_system ? 2 : 1;
        lay_.has_speed = pr.constraint != SolveConstraint::fixed_speed;
    }

    const Layout& layout() const { return lay_; }

    double speed_of(const std::vector<double>& x) const {
        return lay_.has_speed ? x.back() : pr_.params.c;
    }

    HoloField surface_of(const std::vector<double>& x) const {
        return HoloField::from_imag_trace(trace_from_coeffs(lay_, x.data()));
    }

    HoloField potential_of(const std::vector<double>& x, double c) const {
        if (lay_.traces == 2)
            return HoloField::from_imag_trace(trace_from_coeffs(lay_, x.data() + lay_.per_trace()));
        RealField rho = trace_from_coeffs(lay_, x.data());
        for (auto& v : rho.v) v *= c;
        return HoloField::from_imag_trace(rho);
    }

    std::vector<double> residual(const std::vector<double>& x, TraceStats* stats = nullptr) const {
        const double c = speed_of(x);
        PhysParams p = pr_.params;
        p.c = c;

        HoloField w = surface_of(x);
        // The projected (Babenko) forms need the torus Bernoulli gauge: the
        // scalar steady equation holds up to a constant beta, and multiplying
        // by (1 + W_alpha) before projecting smears that constant into the
        // nonzero modes as beta (1 + 2 W_alpha). Subtracting the mean-matched
        // multiple of that field quotients the gauge out; the root set then
        // coincides with the mean-free scalar problem.
        auto gauge_reduced = [&](ComplexField phi) {
            cplx mu = mean(phi);
            ComplexField wa = derivative(w.field());
            for (int m = 0; m < phi.size(); ++m)
                phi.v[m] -= mu * (1.0 + 2.0 * wa.v[m]);
            return phi;
        };
        std::vector<RealField> traces;
        switch (pr_.formulation) {
            case Formulation::combined_scalar:
                traces.push_back(residual_combined(w, p, pr_.delta));
                break;
            case Formulation::babenko_gravity:
                traces.push_back(imag_part(gauge_reduced(residual_babenko_gravity(w, p))));
                break;
            case Formulation::bab_g_projected:
                traces.push_back(imag_part(gauge_reduced(residual_bab_g(w, p))));
                break;
            case Formulation::babenko_capillary: {
                ComplexField res =
                    residual_capillary(derivative(w.field()), p, pr_.convention, pr_.delta);
                traces.push_back(real_part(gauge_reduced(project_holo(res))));
                break;
            }
            case Formulation::soliton_system: {
                WaveState s(w, potential_of(x, c));
                SolitonResidual res = residual_soliton_system(s, p, pr_.delta);
                traces.push_back(real_part(res.first));
                traces.push_back(real_part(res.second));
                break;
            }
        }

        std::vector<double> out(lay_.dim(), 0.0);
        for (int t = 0; t < lay_.traces; ++t)
            coeffs_from_trace(lay_, traces[t], out.data() + t * lay_.per_trace());
        double gap = lay_.has_speed ? constraint_gap(x) : 0.0;
        if (lay_.has_speed) out.back() = gap;

        if (stats) {
            stats->l2 = 0.0;
            stats->sup = 0.0;
            stats->mean = 0.0;
            stats->gap = std::abs(gap);
            for (auto& tr : traces) {
                double mu = mean(tr);
                for (auto& v : tr.v) v -= mu;
                stats->l2 = std::hypot(stats->l2, l2_norm(tr));
                stats->sup = std::max(stats->sup, sup_norm(tr));
                stats->mean = std::max(stats->mean, std::abs(mu));
            }
        }
        return out;
    }

    double constraint_gap(const std::vector<double>& x) const {
        switch (pr_.constraint) {
            case SolveConstraint::fixed_speed:
                return 0.0;
            case SolveConstraint::fixed_amplitude:
                return x[pr_.constraint_mode - 1] - pr_.constraint_value;
            case SolveConstraint::fixed_steepness: {
                // rho(0) - rho(L/2) = sum b_k (1 - (-1)^k)
                double crest = 0.0, trough = 0.0;
                for (int k = 1; k <= lay_.K; ++k) {
                    crest += x[k - 1];
                    trough += (k % 2 == 0 ? x[k - 1] : -x[k - 1]);
                }
                return (crest - trough) / pr_.grid.period() - pr_.constraint_value;
            }
        }
        return 0.0;
    }

    // Constant-coefficient symbol preconditioner (per-mode diagonal, or the
    // 2x2 mode blocks of the linearized soliton system).
    std::vector<double> precondition(const std::vector<double>& r, double c) const {
        std::vector<double> out = r;
        const double c2 = c * c;
        const double eps = 1e-4;

        if (lay_.traces == 1) {
            // cos-mode symbol of the linearization at the flat state
            auto symbol = [&](double kap) -> double {
                switch (pr_.formulation) {
                    case Formulation::combined_scalar:
                        return pr_.params.g + pr_.params.sigma * kap * kap - c2 * kap;
                    case Formulation::babenko_gravity:
                    case Formulation::bab_g_projected:
                        return pr_.params.g - c2 * kap;
                    case Formulation::babenko_capillary: {
                        double fac =
                            pr_.convention == CapillaryConvention::canonical ? 0.5 * c2 : c2;
                        return 0.5 * (pr_.params.sigma * kap * kap - 2.0 * fac * kap);
                    }
                    default:
                        return 1.0;
                }
            };
            double maxabs = 0.0;
            std::vector<double> sym(lay_.K);
            for (int k = 1; k <= lay_.K; ++k) {
                sym[k - 1] = symbol(kTwoPi * k / pr_.grid.period());
                maxabs = std::max(maxabs, std::abs(sym[k - 1]));
            }
            double floor = eps * (maxabs + 1e-30);
            for (int k = 1; k <= lay_.K; ++k) {
                double m = sym[k - 1];
                if (std::abs(m) < floor) m = m >= 0.0 ? floor : -floor;
                out[k - 1] /= m;
                if (!lay_.even) out[lay_.K + k - 1] /= m;
            }
        } else {
            // soliton blocks [[-c kap, kap], [g + sigma kap^2, -c kap]]
            for (int k = 1; k <= lay_.K; ++k) {
                double kap = kTwoPi * k / pr_.grid.period();
                double a11 = -c * kap, a12 = kap;
                double a21 = pr_.params.g + pr_.params.sigma * kap * kap, a22 = -c * kap;
                double det = a11 * a22 - a12 * a21;
                double scale = std::abs(a11) + std::abs(a12) + std::abs(a21) + std::abs(a22);
                if (std::abs(det) < eps * scale * scale + 1e-30)
                    det = (det >= 0.0 ? 1.0 : -1.0) * (eps * scale * scale + 1e-30);
                auto solve2 = [&](double r1, double r2, double& y1, double& y2) {
                    y1 = (a22 * r1 - a12 * r2) / det;
                    y2 = (-a21 * r1 + a11 * r2) / det;
                };
                int off = lay_.per_trace();
                solve2(r[k - 1], r[off + k - 1], out[k - 1], out[off + k - 1]);
                if (!lay_.even)
                    solve2(r[lay_.K + k - 1], r[off + lay_.K + k - 1], out[lay_.K + k - 1],
                           out[off + lay_.K + k - 1]);
            }
        }
        return out;
    }

  private:
    TravelingProblem pr_;
    Layout lay_;
};

double vec_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

// ---- Newton-Krylov ----------------------------------------------------------------------

SolveReport newton_solve(const TravelingProblem& problem, const HoloField& guess, double guess_c) {
    problem.params.require_solvable();
    System sys(problem);
    const Layout& lay = sys.layout();

    // pack the guess; its mean and any content beyond the band are dropped
    std::vector<double> x(lay.dim(), 0.0);
    coeffs_from_trace(lay, guess.imag_trace(), x.data());
    if (lay.traces == 2) {
        RealField rq = guess.imag_trace();
        for (auto& v : rq.v) v *= guess_c;
        coeffs_from_trace(lay, rq, x.data() + lay.per_trace());
    }
    if (lay.has_speed) x.back() = guess_c;

    if (!check_conformal(sys.surface_of(x), problem.delta).pass)
        throw ConformalDegenerate("newton_solve: guess violates the conformal floor");

    SolveReport rep;
    const double tol = problem.newton_tol();

    // the linear constraint row must close along with the field equations
    const double gap_tol = std::max(1e-13, tol);
    auto settled = [&](const TraceStats& st) { return st.l2 < tol && st.gap <= gap_tol; };

    TraceStats stats;
    std::vector<double> r = sys.residual(x, &stats);
    double rnorm = stats.l2;
    double prev_rnorm = rnorm;

    int it = 0;
    for (; it < problem.max_newton && !settled(stats); ++it) {
        const double c_now = sys.speed_of(x);

        // preconditioned Jacobian action by forward differencing
        auto apply = [&](const std::vector<double>& v) {
            double vn = vec_norm(v);
            double h = problem.fd_step * (1.0 + vec_norm(x)) / (vn + 1e-300);
            std::vector<double> xp = x;
            for (std::size_t i = 0; i < xp.size(); ++i) xp[i] += h * v[i];
            std::vector<double> rp = sys.residual(xp);
            std::vector<double> jv(rp.size());
            for (std::size_t i = 0; i < rp.size(); ++i) jv[i] = (rp[i] - r[i]) / h;
            return sys.precondition(jv, c_now);
        };

        std::vector<double> rhs = sys.precondition(r, c_now);
        for (double& v : rhs) v = -v;

        // forcing kept tight: a loose linear solve mixes Jacobian columns of
        // very different scales (the bordered speed column against the field
        // block) and the resulting junk can exceed the nonlinear residual
        double ratio = rnorm / (prev_rnorm + 1e-300);
        double forcing = std::min(1e-2, std::max(1e-6, 0.1 * ratio * ratio));

        double base = vec_norm(r);
        bool accepted = false;
        std::vector<double> xn, rn;
        TraceStats sn;
        for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
            std::vector<double> dx;
            try {
                gmres(apply, rhs, dx, problem.max_krylov, forcing);
            } catch (const ConformalDegenerate&) {
                rep.failure = "conformal_degenerate";
                break;
            } catch (const BranchCut&) {
                rep.failure = "conformal_degenerate";
                break;
            } catch (const RealityViolation&) {
                rep.failure = "assembly_assertion";
                break;
            }

            // backtracking line search on the equation-vector norm
            double lambda = 1.0;
            for (int ls = 0; ls < 12; ++ls, lambda *= 0.5) {
                xn = x;
                for (std::size_t i = 0; i < xn.size(); ++i) xn[i] += lambda * dx[i];
                try {
                    rn = sys.residual(xn, &sn);
                } catch (const ConformalDegenerate&) {
                    continue;
                } catch (const BranchCut&) {
                    continue;
                } catch (const RealityViolation&) {
                    continue;
                }
                if (vec_norm(rn) < (1.0 - 1e-4 * lambda) * base) {
                    accepted = true;
                    break;
                }
            }
            forcing *= 1e-2;  // retry once with a much tighter linear solve
        }
        if (!accepted) {
            if (rep.failure.empty()) rep.failure = "line_search";
            break;
        }
        x = std::move(xn);
        r = std::move(rn);
        prev_rnorm = rnorm;
        rnorm = sn.l2;
        stats = sn;
    }

    rep.newton_iterations = it;
    rep.converged = settled(stats);
    if (!rep.converged && rep.failure.empty()) rep.failure = "max_iterations";

    rep.c = sys.speed_of(x);
    rep.c_squared = rep.c * rep.c;
    rep.surface = sys.surface_of(x);
    rep.potential = sys.potential_of(x, rep.c);
    rep.residual_l2 = stats.l2;
    rep.residual_sup = stats.sup;
    rep.mean_residual = stats.mean;
    rep.steepness_value = steepness(rep.surface);
    WaveState state(rep.surface, rep.potential);
    PhysParams p = problem.params;
    p.c = rep.c;
    rep.energy = hamiltonian(state, p);
    rep.momentum_value = momentum(state);
    return rep;
}

// ---- continuation --------------------------------------------------------------------------

std::vector<SolveReport> continuation_run(TravelingProblem problem,
                                          const ContinuationSettings& settings) {
    std::vector<SolveReport> branch;
    if (problem.constraint == SolveConstraint::fixed_speed)
        throw std::invalid_argument("continuation_run: needs an amplitude or steepness constraint");

    double value = settings.start;
    double step = settings.step * (settings.target >= settings.start ? 1.0 : -1.0);
    int halvings = 0;

    // initial guess: linear wave with the dispersion speed of the pinned mode
    const double kap1 = kTwoPi * problem.constraint_mode / problem.grid.period();
    double c_guess = std::sqrt(problem.params.g / kap1 + problem.params.sigma * kap1);
    RealField rho(problem.grid);
    {
        double amp = problem.constraint == SolveConstraint::fixed_amplitude
                         ? value
                         : value * problem.grid.period() / 2.0;
        for (int m = 0; m < problem.grid.size(); ++m)
            rho.v[m] = amp * std::cos(kap1 * problem.grid.point(m));
    }
    HoloField guess = HoloField::from_imag_trace(rho);

    double last_ok_value = settings.start;
    for (int s = 0; s < settings.max_steps; ++s) {
        problem.constraint_value = value;
        SolveReport rep;
        try {
            rep = newton_solve(problem, guess, c_guess);
        } catch (const ConformalDegenerate&) {
            rep.converged = false;
            rep.failure = "conformal_degenerate";
        }

        if (!rep.converged) {
            if (branch.empty() || halvings >= 4) {
                if (branch.empty()) branch.push_back(rep);  // surface the failure
                break;
            }
            // previous solutions retained; retry with a halved increment
            ++halvings;
            step *= 0.5;
            value = last_ok_value + step;
            guess = branch.back().surface;
            c_guess = branch.back().c;
            continue;
        }

        branch.push_back(rep);
        halvings = 0;
        last_ok_value = value;

        double margin = check_conformal(rep.surface, 0.0).min_jacobian_abs;
        bool at_target = (step > 0.0 && value >= settings.target - 1e-14) ||
                         (step < 0.0 && value <= settings.target + 1e-14);
        if (at_target || margin < settings.delta_min) break;

        double remaining = settings.target - value;
        if (std::abs(remaining) < std::abs(step)) step = remaining;
        value += step;

        // secant extrapolation of the trace and speed for the next rung
        if (branch.size() >= 2) {
            const auto& a = branch[branch.size() - 2];
            const auto& b = branch.back();
            RealField ra = a.surface.imag_trace();
            RealField rb = b.surface.imag_trace();
            RealField rg(problem.grid);
            for (int m = 0; m < problem.grid.size(); ++m)
                rg.v[m] = 2.0 * rb.v[m] - ra.v[m];
            guess = HoloField::from_imag_trace(rg);
            c_guess = 2.0 * b.c - a.c;
        } else {
            guess = branch.back().surface;
            c_guess = branch.back().c;
        }
    }
    return branch;
}

// ---- crest diagnostics -------------------------------------------------------------------

CrestReport crest_diagnostics(const SolveReport& report, const PhysParams& p, bool strict) {
    if (p.sigma != 0.0 || p.g <= 0.0)
        throw std::invalid_argument("crest_diagnostics: gravity-only solutions");
    CrestReport out;
    out.h0 = report.c_squared / (2.0 * p.g);
    out.h_max = -1e300;
    for (const auto& z : report.surface.field().v) out.h_max = std::max(out.h_max, z.imag());

    // tail model |W_alpha^(k)| = C k^{-theta/pi} e^{-mu k}; a crest of angle
    // theta gives the power, analytic waves are dominated by the exponential
    auto coef = spectrum(derivative(report.surface.field()));
    const SpectralGrid& g = report.surface.grid();
    const int K = g.dealias_limit();
    double amax = 0.0;
    for (int k = 1; k <= K; ++k) amax = std::max(amax, std::abs(coef[g.size() - k]));

    const int k_lo = 4;
    int k_hi = k_lo;
    for (int k = k_lo; k <= K; ++k)
        if (std::abs(coef[g.size() - k]) > 1e-13 * amax) k_hi = k;

    out.reliable = k_hi >= 100 * k_lo;
    if (!out.reliable && strict)
        throw FitUnreliable("crest_diagnostics: usable tail spans under two decades");

    if (k_hi > k_lo + 4) {
        // least squares for log a_k = log C + p log k - mu k
        double s[3][3] = {{0}}, rhs[3] = {0};
        for (int k = k_lo; k <= k_hi; ++k) {
            double a = std::abs(coef[g.size() - k]);
            if (a <= 0.0) continue;
            double row[3] = {1.0, std::log(double(k)), -double(k)};
            double y = std::log(a);
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j) s[i][j] += row[i] * row[j];
                rhs[i] += row[i] * y;
            }
        }
        // 3x3 solve by elimination
        double m[3][4];
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) m[i][j] = s[i][j];
            m[i][3] = rhs[i];
        }
        for (int col = 0; col < 3; ++col) {
            int piv = col;
            for (int rr = col + 1; rr < 3; ++rr)
                if (std::abs(m[rr][col]) > std::abs(m[piv][col])) piv = rr;
            std::swap(m[col], m[piv]);
            if (m[col][col] == 0.0) return out;
            for (int rr = 0; rr < 3; ++rr) {
                if (rr == col) continue;
                double f = m[rr][col] / m[col][col];
                for (int jj = col; jj < 4; ++jj) m[rr][jj] -= f * m[col][jj];
            }
        }
        double pfit = m[1][3] / m[1][1];
        double mu = m[2][3] / m[2][2];
        out.exponential_rate = mu;
        out.theta = -M_PI * pfit;
        out.window_ok = out.theta > 0.5 * M_PI && out.theta < M_PI;
        out.smooth = mu * k_hi > 8.0;
    }
    return out;
}

}  // namespace wavecf
