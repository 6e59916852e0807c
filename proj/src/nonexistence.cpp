#include "wavecf/nonexistence.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "wavecf/conformal.hpp"

namespace wavecf {

std::vector<DecayRow> commutator_decay_scan(const HoloField& w, const std::vector<double>& r_list,
                                            const CutoffFamily& cutoffs) {
    const SpectralGrid& g = w.grid();
    for (double r : r_list)
        if (r > g.period() / 100.0)
            throw std::invalid_argument("commutator_decay_scan: scales must satisfy r <= L/100");

    std::vector<DecayRow> rows;
    rows.reserve(r_list.size());
    for (double r : r_list) {
        ComplexField comm = commutator_p_cutoff(w.field(), r, cutoffs);
        DecayRow row;
        row.r = r;
        row.norm = l2_norm(comm);
        row.scaled = r * row.norm;
        double rise = 0.0, fall = 0.0;
        for (int m = 0; m < g.size(); ++m) {
            double a = g.point(m);
            double d0 = std::min(a, g.period() - a);  // distance to alpha = 0
            double mass = std::norm(comm.v[m]) * g.spacing();
            if (d0 <= g.period() / 4.0)
                rise += mass;
            else
                fall += mass;
        }
        row.rise_part = std::sqrt(rise);
        row.fall_part = std::sqrt(fall);
        rows.push_back(row);
    }
    return rows;
}

double coifman_meyer_ratio(const HoloField& w, double r, const CutoffFamily& cutoffs) {
    double wn = w.norm_l2();
    if (wn == 0.0) throw std::invalid_argument("coifman_meyer_ratio: W = 0");
    return r * l2_norm(commutator_p_cutoff(w.field(), r, cutoffs)) / wn;
}

MultiplierIdentity multiplier_identity_check(const HoloField& w, const PhysParams& p, double r,
                                             const CutoffFamily& cutoffs) {
    if (p.sigma != 0.0)
        throw std::invalid_argument("multiplier_identity_check: requires sigma = 0");
    const SpectralGrid& g = w.grid();
    RealField chi = cutoffs.sample(g, r);
    // The identity is exact on the grid (inner products, self-adjointness of
    // P, skew-adjointness of the spectral derivative) provided chi' means the
    // spectral derivative of the sampled cutoff; the analytic derivative
    // differs from it by the cutoff's beyond-Nyquist tail.
    RealField dchi = derivative(chi);
    ComplexField wa = derivative(w.field());
    ComplexField comm = commutator_p_cutoff(w.field(), r, cutoffs);

    MultiplierIdentity out;
    {
        RealField density(g);
        for (int m = 0; m < g.size(); ++m)
            density.v[m] = dchi.v[m] * std::norm(w.field().v[m]);
        out.lhs = p.g * integrate(density);
    }
    {
        const double c2 = p.c * p.c;
        RealField density(g);
        for (int m = 0; m < g.size(); ++m) {
            cplx vt = c2 + cplx(0.0, p.g) * (w.field().v[m] - std::conj(w.field().v[m]));
            density.v[m] = -2.0 * std::real(std::conj(comm.v[m]) * cplx(0.0, 1.0) * vt * wa.v[m]);
        }
        out.rhs = integrate(density);
    }
    {
        ComplexField rho = residual_bab_g(w, p);
        RealField density(g);
        for (int m = 0; m < g.size(); ++m)
            density.v[m] = 2.0 * std::real(chi.v[m] * std::conj(wa.v[m]) * rho.v[m]);
        out.correction = integrate(density);
    }
    out.defect = std::abs(out.lhs - out.rhs + out.correction);
    return out;
}

RealField capillary_log_residual(const ComplexField& slope, const PhysParams& p,
                                 CapillaryConvention conv, double delta) {
    if (p.g != 0.0) throw std::invalid_argument("capillary_log_residual: requires g = 0");
    const SpectralGrid& g = slope.grid;

    double mj = 1e300;
    for (const auto& z : slope.v) mj = std::min(mj, std::abs(1.0 + z));
    if (mj < delta)
        throw ConformalDegenerate("capillary_log_residual: |1 + slope| under the delta floor");
    // branch tracking guard for log(1 + slope): walk the argument
    {
        double prev = std::atan2(slope.v[0].imag(), 1.0 + slope.v[0].real());
        for (int m = 1; m < g.size(); ++m) {
            double raw = std::atan2(slope.v[m].imag(), 1.0 + slope.v[m].real());
            double d = raw - prev;
            d -= kTwoPi * std::round(d / kTwoPi);
            if (std::abs(d) > 0.9 * M_PI)
                throw BranchCut("capillary_log_residual: log branch jump between neighbors");
            prev = raw;
        }
    }

    RealField u(g);
    for (int m = 0; m < g.size(); ++m) u.v[m] = std::log(std::abs(1.0 + slope.v[m]));
    RealField hu = hilbert(derivative(u));

    const double c2 = p.c * p.c;
    RealField out(g);
    if (conv == CapillaryConvention::canonical) {
        for (int m = 0; m < g.size(); ++m)
            out.v[m] = p.sigma * hu.v[m] - c2 * std::sinh(u.v[m]);
    } else {
        for (int m = 0; m < g.size(); ++m)
            out.v[m] = hu.v[m] - 2.0 * c2 * std::sinh(u.v[m]);
    }
    return dealias(out);
}

// ---- sweeps -----------------------------------------------------------------------------

const char* to_string(SweepMode m) {
    switch (m) {
        case SweepMode::gravity: return "gravity";
        case SweepMode::capillary: return "capillary";
        case SweepMode::gravity_capillary: return "gravity-capillary";
    }
    return "?";
}

const char* to_string(SweepOutcome o) {
    switch (o) {
        case SweepOutcome::converged_to_zero: return "converged-to-zero";
        case SweepOutcome::converged_nontrivial: return "converged-nontrivial";
        case SweepOutcome::stagnated: return "stagnated";
    }
    return "?";
}

double cmin_squared(double g, double sigma) { return 2.0 * std::sqrt(g * sigma); }

SweepConfig default_sweep(SweepMode mode) {
    SweepConfig cfg;
    cfg.mode = mode;
    switch (mode) {
        case SweepMode::gravity:
            cfg.g = 1.0;
            cfg.sigma = 0.0;
            cfg.c_values = {0.5, 1.0, 2.0};
            cfg.period = 400.0;
            cfg.n_points = 8192;
            break;
        case SweepMode::capillary:
            cfg.g = 0.0;
            cfg.sigma = 1.0;
            cfg.c_values = {0.5, 1.0, 2.0};
            cfg.period = 400.0;
            cfg.n_points = 8192;
            break;
        case SweepMode::gravity_capillary:
            cfg.g = 1.0;
            cfg.sigma = 1.0;
            cfg.c_values = {0.99 * std::sqrt(cmin_squared(1.0, 1.0))};
            cfg.period = 400.0;
            cfg.n_points = 4096;
            break;
    }
    return cfg;
}

namespace {

struct GuessSpec {
    std::string id;
    RealField profile;  // elevation eta(x)
};

// Gaussian bump elevation centered at L/2, even on the torus.
RealField gaussian_bump(const SpectralGrid& g, double amplitude, double width) {
    return RealField::sample(g, [&](double x) {
        double d = x - g.period() / 2.0;
        return amplitude * std::exp(-d * d / (width * width));
    });
}

// Wavepacket guess: carrier at the grid mode closest to the phase-speed
// minimum, periodized sech envelope (image sum keeps the profile smooth
// across the seam, which the sigma-term reality assertion is sensitive to).
RealField wavepacket(const SpectralGrid& g, double amplitude, double env_rate, int carrier_mode) {
    double k0 = kTwoPi * carrier_mode / g.period();
    double L = g.period();
    return RealField::sample(g, [&](double x) {
        double d = x - L / 2.0;
        double env = 0.0;
        for (int im = -2; im <= 2; ++im) env += 1.0 / std::cosh(env_rate * (d + im * L));
        return amplitude * env * std::cos(k0 * d);
    });
}

// Weakly nonlinear speed-amplitude law of the carrier wavetrain,
// c(a) = cmin - q a^2: computed from two small-amplitude periodic solves on a
// one-wavelength grid. The steady envelope equation then gives the solitary
// packet peak sqrt(2) * a(c) and decay rate sqrt(k0 (cmin^2 - c^2)/sigma).
struct GcCalibration {
    double cmin = 0.0;
    double q = 0.0;
};

GcCalibration calibrate_wavetrain(double g, double sigma) {
    double k0 = std::sqrt(g / sigma);
    GcCalibration cal;
    cal.cmin = std::pow(4.0 * g * sigma, 0.25);  // c_min^2 = 2 sqrt(g sigma)

    TravelingProblem prob;
    prob.grid = SpectralGrid(256, kTwoPi / k0);
    prob.constraint = SolveConstraint::fixed_amplitude;
    prob.constraint_mode = 1;
    prob.params = PhysParams{g, sigma, 0.0};

    double qsum = 0.0;
    int used = 0;
    for (double a : {0.04 / k0, 0.08 / k0}) {
        prob.constraint_value = a;
        RealField rho = RealField::sample(
            prob.grid, [&](double al) { return a * std::cos(k0 * al); });
        SolveReport rep = newton_solve(prob, HoloField::from_imag_trace(rho), cal.cmin);
        if (!rep.converged) continue;
        qsum += (cal.cmin - rep.c) / (a * a);
        ++used;
    }
    cal.q = used > 0 ? qsum / used : 0.0;
    return cal;
}

HoloField lift_profile(const RealField& eta) {
    ConformalBuildOptions opt;
    opt.tol = 1e-11;
    opt.max_iter = 400;
    ConformalBuild b = build_conformal(eta, opt);
    // drop the vertical-level mean: the solver works with mean-free traces
    RealField rho = b.surface.imag_trace();
    double mu = mean(rho);
    for (auto& v : rho.v) v -= mu;
    return HoloField::from_imag_trace(rho);
}

TravelingProblem sweep_problem(const SweepConfig& cfg, double c) {
    TravelingProblem prob;
    prob.grid = SpectralGrid(cfg.n_points, cfg.period);
    prob.params = PhysParams{cfg.g, cfg.sigma, c};
    prob.formulation = Formulation::combined_scalar;
    prob.constraint = SolveConstraint::fixed_speed;
    prob.delta = cfg.delta;
    prob.tol_rms = cfg.tol_rms;
    prob.max_newton = cfg.max_newton;
    prob.max_krylov = cfg.max_krylov;
    return prob;
}

SweepRun run_lifted(const SweepConfig& cfg, double c, const std::string& guess_id,
                    const HoloField& w0) {
    auto t0 = std::chrono::steady_clock::now();
    SweepRun run;
    run.mode = to_string(cfg.mode);
    run.c = c;
    run.guess_id = guess_id;
    run.period = cfg.period;
    run.n_points = cfg.n_points;

    TravelingProblem prob = sweep_problem(cfg, c);
    try {
        SolveReport rep = newton_solve(prob, w0, c);
        run.residual = rep.residual_l2;
        run.iters = rep.newton_iterations;
        run.surface = rep.surface;
        double amp = sup_norm(imag_part(rep.surface.field()));
        run.amplitude = amp;
        if (!rep.converged) {
            run.outcome = SweepOutcome::stagnated;
        } else if (amp < 1e-6) {
            run.outcome = SweepOutcome::converged_to_zero;
        } else {
            run.outcome = SweepOutcome::converged_nontrivial;
            // localization: elevation in the outer half-period vs the peak
            RealField eta = imag_part(rep.surface.field());
            double tail = 0.0;
            const SpectralGrid& g = prob.grid;
            for (int m = 0; m < g.size(); ++m) {
                double d = std::abs(g.point(m) - g.period() / 2.0);
                if (d > g.period() / 4.0) tail = std::max(tail, std::abs(eta.v[m]));
            }
            run.localized = tail < 0.01 * amp;
        }
    } catch (const std::exception&) {
        run.outcome = SweepOutcome::stagnated;
        run.residual = std::nan("");
    }
    run.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return run;
}

SweepRun run_case(const SweepConfig& cfg, double c, const GuessSpec& guess) {
    try {
        HoloField w0 = lift_profile(guess.profile);
        return run_lifted(cfg, c, guess.id, w0);
    } catch (const std::exception&) {
        SweepRun run;
        run.mode = to_string(cfg.mode);
        run.c = c;
        run.guess_id = guess.id;
        run.period = cfg.period;
        run.n_points = cfg.n_points;
        run.outcome = SweepOutcome::stagnated;
        run.residual = std::nan("");
        return run;
    }
}

// Continuation ladder for the gravity-capillary control: start near the
// phase-speed minimum where the weakly nonlinear wavepacket guess is
// accurate, then chain down in speed.
std::vector<SweepRun> run_gc_chain(const SweepConfig& cfg) {
    std::vector<SweepRun> runs;
    const SpectralGrid grid(cfg.n_points, cfg.period);
    const double cmin = std::sqrt(cmin_squared(cfg.g, cfg.sigma));
    const double k0 = std::sqrt(cfg.g / cfg.sigma);
    const int carrier = std::max(1, int(std::round(k0 * cfg.period / kTwoPi)));
    const GcCalibration cal = calibrate_wavetrain(cfg.g, cfg.sigma);

    HoloField carried;
    bool have_carried = false;
    for (double frac : cfg.chain_fractions) {
        double c = frac * cmin;
        double deficit = std::max(cmin - c, 1e-12);
        double env = std::sqrt(k0 * std::max(cmin * cmin - c * c, 1e-15) / cfg.sigma);

        std::vector<GuessSpec> guesses;
        if (have_carried) guesses.push_back({"chain", imag_part(carried.field())});
        double a_star = cal.q > 0.0 ? std::sqrt(deficit / cal.q) : std::sqrt(deficit);
        for (double scale : {0.85, 1.0, 1.2}) {
            double amp = scale * std::sqrt(2.0) * a_star;
            char buf[64];
            std::snprintf(buf, sizeof buf, "packet-depression-a%.4f", amp);
            guesses.push_back({buf, wavepacket(grid, -amp, env, carrier)});
            std::snprintf(buf, sizeof buf, "packet-elevation-a%.4f", amp);
            guesses.push_back({buf, wavepacket(grid, amp, env, carrier)});
        }

        SweepRun best;
        bool found = false;
        for (const auto& gs : guesses) {
            SweepRun run = gs.id == "chain" ? run_lifted(cfg, c, gs.id, carried)
                                            : run_case(cfg, c, gs);
            runs.push_back(run);
            if (run.outcome == SweepOutcome::converged_nontrivial && run.localized && !found) {
                best = run;
                found = true;
            }
        }
        if (found) {
            carried = best.surface;
            have_carried = true;
        }
    }
    return runs;
}

}  // namespace

SweepReport solitary_sweep(const SweepConfig& cfg) {
    SweepReport report;

    if (cfg.mode == SweepMode::gravity_capillary) {
        report.runs = run_gc_chain(cfg);
    } else {
        const SpectralGrid grid(cfg.n_points, cfg.period);
        std::vector<std::pair<double, GuessSpec>> cases;
        for (double c : cfg.c_values)
            for (double w : cfg.widths) {
                char buf[48];
                std::snprintf(buf, sizeof buf, "bump-w%g", w);
                cases.emplace_back(c, GuessSpec{buf, gaussian_bump(grid, cfg.bump_amplitude, w)});
            }

        std::vector<SweepRun> runs(cases.size());
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= cases.size()) return;
                runs[i] = run_case(cfg, cases[i].first, cases[i].second);
            }
        };
        int nthreads = std::max(1, cfg.threads);
        if (nthreads == 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
            for (auto& th : pool) th.join();
        }
        report.runs = std::move(runs);
    }

    std::sort(report.runs.begin(), report.runs.end(), [](const SweepRun& a, const SweepRun& b) {
        if (a.c != b.c) return a.c < b.c;
        return a.guess_id < b.guess_id;
    });
    for (const auto& r : report.runs)
        if (r.outcome == SweepOutcome::converged_nontrivial && r.localized)
            ++report.converged_nontrivial_localized;
    return report;
}

}  // namespace wavecf
