#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "test_util.hpp"
#include "wavecf/traveling.hpp"

using namespace wavecf;
using namespace wtest;

namespace {

const SpectralGrid g256(256, kTwoPi);

HoloField elevation(const SpectralGrid& g, int k, double a) {
    return HoloField::from_imag_trace(cos_mode(g, k, a));
}

HoloField random_state(const SpectralGrid& g, Rng& rng, int kmax, double amp) {
    return HoloField::from_imag_trace(imag_part(random_holo_field(g, rng, kmax, amp, 2.0)));
}

}  // namespace

TEST_CASE("combined residual: trivial state and linear dispersion") {
    PhysParams p{1.0, 0.5, 0.0};
    HoloField zero = HoloField::from_imag_trace(RealField(g256));
    p.c = 0.7;
    CHECK(sup_norm(residual_combined(zero, p)) == 0.0);

    // residual vanishes to O(eps^2) iff c^2 = g/k + sigma k
    const int k = 2;
    const double eps = 1e-6;
    HoloField w = elevation(g256, k, eps);
    p.c = std::sqrt(p.g / k + p.sigma * k);
    CHECK(sup_norm(residual_combined(w, p)) < 1e-9);

    p.c *= 1.05;  // detune: the linear term must reappear
    CHECK(sup_norm(residual_combined(w, p)) > 1e-8);
}

TEST_CASE("combined residual: gravity scaling covariance, lambda = 2") {
    PhysParams p{1.0, 0.0, 0.9};
    const SpectralGrid fine(512, kTwoPi);
    const SpectralGrid half(256, M_PI);

    Rng rng(5150);
    HoloField w = random_state(fine, rng, 16, 0.02);
    RealField r_fine = residual_combined(w, p);

    // subsampled W~(alpha) = W(2 alpha)/2 lives on the half-period grid
    RealField rho = w.imag_trace();
    RealField rho_half(half);
    for (int m = 0; m < half.size(); ++m) rho_half.v[m] = 0.5 * rho.v[2 * m];
    PhysParams p_half = p;
    p_half.c = p.c / std::sqrt(2.0);
    RealField r_half = residual_combined(HoloField::from_imag_trace(rho_half), p_half);

    double worst = 0.0;
    for (int m = 0; m < half.size(); ++m)
        worst = std::max(worst, std::abs(r_half.v[m] - 0.5 * r_fine.v[2 * m]));
    CHECK(worst < 1e-10);
}

TEST_CASE("babenko gravity residual and algebraic twin") {
    PhysParams p{1.0, 0.0, 1.2};
    HoloField zero = HoloField::from_imag_trace(RealField(g256));
    CHECK(sup_norm(residual_babenko_gravity(zero, p)) == 0.0);
    CHECK(sup_norm(residual_bab_g(zero, p)) == 0.0);

    // linear mode zero to O(eps^2) iff c^2 k = g
    const double eps = 1e-6;
    HoloField w1 = elevation(g256, 1, eps);
    PhysParams pd{1.0, 0.0, 1.0};
    CHECK(sup_norm(residual_babenko_gravity(w1, pd)) < 1e-9);

    // identity residual_bab_g == residual_babenko_gravity on random fields
    Rng rng(808);
    for (int t = 0; t < 20; ++t) {
        HoloField w = random_state(g256, rng, 40, 0.05);
        ComplexField a = residual_babenko_gravity(w, p);
        ComplexField b = residual_bab_g(w, p);
        CHECK(max_diff(a, b) < 1e-11 * (1.0 + sup_norm(a)));
    }

    // V bounds: sup|V - c^2| <= 2 g sup|W|
    HoloField w = random_state(g256, rng, 40, 0.05);
    double supw = sup_norm(w.field());
    ComplexField wa = derivative(w.field());
    (void)wa;
    double bound = 2.0 * p.g * supw;
    double worst = 0.0;
    for (int m = 0; m < g256.size(); ++m) {
        cplx vt = p.c * p.c + cplx(0.0, p.g) * (w.field().v[m] - std::conj(w.field().v[m]));
        worst = std::max(worst, std::abs(vt - cplx(p.c * p.c, 0.0)));
    }
    CHECK(worst <= bound + 1e-12);
}

TEST_CASE("capillary residual: dispersion under both conventions") {
    const int k = 3;
    const double eps = 1e-6;
    PhysParams p{0.0, 1.0, 0.0};
    HoloField w = elevation(g256, k, eps);
    ComplexField slope = derivative(w.field());

    p.c = std::sqrt(p.sigma * k);  // canonical factor: c^2 = sigma k
    CHECK(sup_norm(residual_capillary(slope, p, CapillaryConvention::canonical)) < 1e-9);

    p.c = std::sqrt(0.5 * p.sigma * k);  // printed factor: c^2 = sigma k / 2
    CHECK(sup_norm(residual_capillary(slope, p, CapillaryConvention::paper)) < 1e-9);

    CHECK(sup_norm(residual_capillary(ComplexField(g256, 0.0), p)) == 0.0);
}

TEST_CASE("capillary residual: scaling covariance, lambda = 2") {
    PhysParams p{0.0, 1.0, 0.8};
    const SpectralGrid fine(512, kTwoPi);
    const SpectralGrid half(256, M_PI);

    Rng rng(61);
    HoloField w = random_state(fine, rng, 16, 0.02);
    ComplexField slope = derivative(w.field());
    ComplexField r_fine = residual_capillary(slope, p);

    ComplexField slope_half(half);
    for (int m = 0; m < half.size(); ++m) slope_half.v[m] = slope.v[2 * m];
    PhysParams ph = p;
    ph.c = p.c * std::sqrt(2.0);
    ComplexField r_half = residual_capillary(slope_half, ph);

    double worst = 0.0;
    for (int m = 0; m < half.size(); ++m)
        worst = std::max(worst, std::abs(r_half.v[m] - 2.0 * r_fine.v[2 * m]));
    CHECK(worst < 1e-10);
}

TEST_CASE("soliton system residual against independent assembly") {
    PhysParams p{1.0, 0.5, 1.4};
    Rng rng(99);
    HoloField w = random_state(g256, rng, 20, 0.01);
    RealField rho = w.imag_trace();
    for (auto& v : rho.v) v *= p.c;
    WaveState s(w, HoloField::from_imag_trace(rho));  // Q = cW

    SolitonResidual res = residual_soliton_system(s, p);
    CHECK(res.constraint_gap < 1e-13);

    // independent assembly with the unsimplified capillary term
    ComplexField wa = derivative(s.surface.field());
    ComplexField qa = derivative(s.potential.field());
    ComplexField curved(g256);
    for (int m = 0; m < g256.size(); ++m) {
        cplx zp = 1.0 + wa.v[m];
        curved.v[m] = (wa.v[m] - std::conj(wa.v[m])) / std::abs(zp);
    }
    ComplexField dcurved = derivative(dealias(curved));
    ComplexField sig_term(g256);
    for (int m = 0; m < g256.size(); ++m) {
        cplx denom = 2.0 + wa.v[m] + std::conj(wa.v[m]);
        sig_term.v[m] = cplx(0.0, -1.0) / denom * dcurved.v[m];
    }
    ComplexField p_sig = project_holo(dealias(sig_term));

    ComplexField imbalance(g256);
    for (int m = 0; m < g256.size(); ++m) {
        cplx zp = 1.0 + wa.v[m];
        imbalance.v[m] = (qa.v[m] - std::conj(qa.v[m])) / std::norm(zp);
    }
    ComplexField f = project_holo(dealias(imbalance));
    ComplexField kin(g256);
    for (int m = 0; m < g256.size(); ++m)
        kin.v[m] = std::norm(qa.v[m]) / std::norm(1.0 + wa.v[m]);
    ComplexField pk = project_holo(dealias(kin));

    ComplexField second(g256);
    for (int m = 0; m < g256.size(); ++m)
        second.v[m] = -p.c * qa.v[m] + f.v[m] * qa.v[m] -
                      cplx(0.0, p.g) * s.surface.field().v[m] + pk.v[m] -
                      2.0 * p.sigma * p_sig.v[m];
    second = dealias(second);

    double scale = 1.0 + sup_norm(res.second);
    CHECK(max_diff(res.second, second) < 1e-9 * scale);

    // zero state
    WaveState z(HoloField::from_imag_trace(RealField(g256)),
                HoloField::from_imag_trace(RealField(g256)));
    SolitonResidual rz = residual_soliton_system(z, p);
    CHECK(sup_norm(rz.first) == 0.0);
    CHECK(sup_norm(rz.second) == 0.0);
}

TEST_CASE("residuals are translation equivariant") {
    PhysParams p{1.0, 0.0, 1.1};
    Rng rng(303);
    HoloField w = random_state(g256, rng, 30, 0.03);
    double shift = 17.0 * g256.spacing();

    ComplexField a = residual_babenko_gravity(translate(w, shift), p);
    ComplexField b = residual_babenko_gravity(w, p);
    // translate the residual field by the same shift via spectrum
    auto coef = spectrum(b);
    for (int m = 0; m < g256.size(); ++m) {
        double ph = -g256.wavenumber(m) * shift;
        coef[m] *= cplx(std::cos(ph), std::sin(ph));
    }
    ComplexField b_shifted = from_spectrum(g256, coef);
    CHECK(max_diff(a, b_shifted) < 1e-11 * (1.0 + sup_norm(b)));
}

TEST_CASE("newton recovers the gravity dispersion") {
    TravelingProblem prob;
    prob.grid = g256;
    prob.params = PhysParams{1.0, 0.0, 0.0};
    prob.constraint = SolveConstraint::fixed_amplitude;
    prob.constraint_value = 1e-4;

    HoloField guess = elevation(g256, 1, 1e-4);
    SolveReport rep = newton_solve(prob, guess, 1.05);  // detuned speed guess
    CHECK(rep.converged);
    CHECK(std::abs(rep.c_squared - 1.0) < 1e-6);
    CHECK(rep.residual_l2 < prob.newton_tol());
}

TEST_CASE("newton recovers the gravity-capillary dispersion at k=1") {
    TravelingProblem prob;
    prob.grid = g256;
    prob.params = PhysParams{1.0, 1.0, 0.0};
    prob.constraint = SolveConstraint::fixed_amplitude;
    prob.constraint_value = 1e-4;

    SolveReport rep = newton_solve(prob, elevation(g256, 1, 1e-4), 1.5);
    CHECK(rep.converged);
    CHECK(std::abs(rep.c_squared - 2.0) < 1e-6);
}

TEST_CASE("newton at fixed speed from the zero guess stays at zero") {
    TravelingProblem prob;
    prob.grid = g256;
    prob.params = PhysParams{1.0, 0.0, 0.63};
    prob.constraint = SolveConstraint::fixed_speed;

    SolveReport rep = newton_solve(prob, HoloField::from_imag_trace(RealField(g256)), prob.params.c);
    CHECK(rep.converged);
    CHECK(rep.newton_iterations == 0);
    CHECK(sup_norm(rep.surface.field()) < 1e-12);
}

TEST_CASE("babenko formulations agree with the combined solve") {
    // same problem driven through three formulations: same wave, same speed
    const double amp = 0.02;
    double c_ref = 0.0;
    for (Formulation f : {Formulation::combined_scalar, Formulation::babenko_gravity,
                          Formulation::bab_g_projected}) {
        TravelingProblem prob;
        prob.grid = g256;
        prob.params = PhysParams{1.0, 0.0, 0.0};
        prob.formulation = f;
        prob.constraint = SolveConstraint::fixed_amplitude;
        prob.constraint_value = amp;
        SolveReport rep = newton_solve(prob, elevation(g256, 1, amp), 1.0);
        CHECK(rep.converged);
        if (c_ref == 0.0)
            c_ref = rep.c;
        else
            CHECK(rep.c == doctest::Approx(c_ref).epsilon(1e-7));
    }
}

TEST_CASE("soliton-system formulation reproduces the scalar solve") {
    const double amp = 0.01;
    TravelingProblem scalar;
    scalar.grid = g256;
    scalar.params = PhysParams{1.0, 0.0, 0.0};
    scalar.constraint = SolveConstraint::fixed_amplitude;
    scalar.constraint_value = amp;
    SolveReport ref = newton_solve(scalar, elevation(g256, 1, amp), 1.0);
    REQUIRE(ref.converged);

    TravelingProblem sys = scalar;
    sys.formulation = Formulation::soliton_system;
    SolveReport rep = newton_solve(sys, elevation(g256, 1, amp), 1.0);
    CHECK(rep.converged);
    CHECK(rep.c == doctest::Approx(ref.c).epsilon(1e-7));

    // Q = cW reconstruction satisfies the soliton residuals
    PhysParams p = scalar.params;
    p.c = ref.c;
    RealField rho = ref.surface.imag_trace();
    for (auto& v : rho.v) v *= ref.c;
    WaveState st(ref.surface, HoloField::from_imag_trace(rho));
    SolitonResidual sr = residual_soliton_system(st, p);
    double tol10 = 10.0 * scalar.newton_tol();
    RealField r1 = imag_part(sr.first);
    double mu = mean(r1);
    for (auto& v : r1.v) v -= mu;
    CHECK(l2_norm(r1) < tol10);
}

TEST_CASE("capillary newton via combined and babenko_capillary") {
    const double amp = 1e-3;
    TravelingProblem prob;
    prob.grid = g256;
    prob.params = PhysParams{0.0, 1.0, 0.0};
    prob.constraint = SolveConstraint::fixed_amplitude;
    prob.constraint_value = amp;
    prob.constraint_mode = 2;

    SolveReport rep = newton_solve(prob, elevation(g256, 2, amp), 1.4);
    CHECK(rep.converged);
    CHECK(std::abs(rep.c_squared - 2.0) < 1e-5);  // c^2 = sigma k = 2

    TravelingProblem prob2 = prob;
    prob2.formulation = Formulation::babenko_capillary;
    SolveReport rep2 = newton_solve(prob2, elevation(g256, 2, amp), 1.4);
    CHECK(rep2.converged);
    CHECK(rep2.c == doctest::Approx(rep.c).epsilon(1e-8));
}

TEST_CASE("continuation walks the gravity branch with increasing speed") {
    TravelingProblem prob;
    prob.grid = SpectralGrid(1024, kTwoPi);
    prob.params = PhysParams{1.0, 0.0, 0.0};
    prob.constraint = SolveConstraint::fixed_steepness;

    ContinuationSettings set;
    set.start = 5e-4;
    set.step = 5e-3;
    set.target = 0.06;
    auto branch = continuation_run(prob, set);
    REQUIRE(branch.size() >= 3);
    for (const auto& rep : branch) CHECK(rep.converged);
    for (std::size_t i = 1; i < branch.size(); ++i) CHECK(branch[i].c > branch[i - 1].c);
    CHECK(branch.back().steepness_value == doctest::Approx(0.06).epsilon(1e-6));

    // crest bound: max Im W <= c^2/(2g) on every rung
    for (const auto& rep : branch) {
        CrestReport cr = crest_diagnostics(rep, prob.params);
        CHECK(cr.h_max <= cr.h0 + 1e-8);
    }

    // small-amplitude rung: spectral decay flagged smooth
    CrestReport c0 = crest_diagnostics(branch.front(), prob.params);
    CHECK(c0.h_max < 0.1 * c0.h0);

    // h0 value pinned: c = 1, g = 1 reports 0.5 exactly
    SolveReport synthetic;
    synthetic.c = 1.0;
    synthetic.c_squared = 1.0;
    synthetic.surface = branch.front().surface;
    CrestReport ch = crest_diagnostics(synthetic, prob.params);
    CHECK(ch.h0 == 0.5);
}

TEST_CASE("continuation surfaces non-convergence and keeps the branch") {
    TravelingProblem prob;
    prob.grid = g256;
    prob.params = PhysParams{1.0, 0.0, 0.0};
    prob.constraint = SolveConstraint::fixed_steepness;
    prob.max_newton = 4;  // strangle the solver so large steps fail

    ContinuationSettings set;
    set.start = 1e-3;
    set.step = 0.2;  // absurd step: forced failure after the first rung
    set.target = 0.4;
    set.max_steps = 6;
    auto branch = continuation_run(prob, set);
    CHECK(branch.size() >= 1);
    CHECK(branch.front().converged);
    CHECK(branch.back().steepness_value < 0.2);
}
