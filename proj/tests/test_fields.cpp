#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "test_util.hpp"
#include "wavecf/fields.hpp"

using namespace wavecf;
using namespace wtest;

namespace {

const SpectralGrid g256(256, kTwoPi);

// W = i a e^{-i k alpha}: Im W = a cos(k alpha), Re W = a sin(k alpha)
HoloField elevation_mode(const SpectralGrid& g, int k, double a) {
    return HoloField::from_imag_trace(cos_mode(g, k, a));
}

WaveState traveling_pair(const SpectralGrid& g, int k, double a, double c) {
    HoloField w = elevation_mode(g, k, a);
    RealField rho = imag_part(w.field());
    return WaveState(w, HoloField::from_imag_trace(c * rho));
}

}  // namespace

TEST_CASE("holo field construction and invariants") {
    HoloField w = elevation_mode(g256, 1, 0.3);
    CHECK(HoloField::positive_mode_mass(w.field()) < 1e-13);
    CHECK(std::abs(w.mean_value()) < 1e-13);

    // Re = H(Im) for every holomorphic trace
    CHECK(max_diff(w.real_trace(), hilbert(w.imag_trace())) < 1e-13);

    // checked() rejects positive-mode content
    ComplexField bad = exp_mode(g256, 2);
    CHECK_THROWS_AS((void)HoloField::checked(bad), HolomorphyViolation);

    double leak = 0.0;
    HoloField cleaned = HoloField::project(bad, &leak);
    CHECK(leak == doctest::Approx(l2_norm(bad)).epsilon(1e-12));
    CHECK(cleaned.norm_l2() < 1e-13);
}

TEST_CASE("wave state requires shared grid and mean-free fields") {
    HoloField w = elevation_mode(g256, 1, 0.1);
    CHECK_THROWS_AS(WaveState(w, HoloField::from_imag_trace(RealField(SpectralGrid(512, kTwoPi)))),
                    GridMismatch);

    RealField with_mean = cos_mode(g256, 1, 0.1);
    for (auto& x : with_mean.v) x += 0.5;
    CHECK_THROWS_AS(WaveState(w, HoloField::from_imag_trace(with_mean)), HolomorphyViolation);
}

TEST_CASE("to_diff on trivial and small states") {
    WaveState zero(HoloField::from_imag_trace(RealField(g256)),
                   HoloField::from_imag_trace(RealField(g256)));
    DiffState dz = to_diff(zero);
    CHECK(dz.slope.norm_l2() == 0.0);
    CHECK(dz.velocity.norm_l2() == 0.0);

    // R = c W_alpha (1 - W_alpha) + O(eps^3): pointwise-division oracle
    const double eps = 1e-3, c = 1.3;
    WaveState s = traveling_pair(g256, 1, eps, c);
    DiffConversionReport rep;
    DiffState d = to_diff(s, 0.1, &rep);
    CHECK(rep.min_jacobian > 0.9);
    CHECK(rep.velocity_leakage < 1e-12);

    ComplexField wa = derivative(s.surface.field());
    ComplexField expect(g256);
    for (int m = 0; m < g256.size(); ++m)
        expect.v[m] = c * wa.v[m] * (1.0 - wa.v[m]);
    CHECK(max_diff(d.velocity.field(), expect) < 10.0 * eps * eps * eps);
}

TEST_CASE("to_diff rejects degenerate states") {
    // slope touching delta/2
    HoloField w = elevation_mode(g256, 1, 0.97);  // |W_alpha| peak ~0.97
    RealField rho = imag_part(w.field());
    WaveState s(w, HoloField::from_imag_trace(rho));
    CHECK_THROWS_AS((void)to_diff(s, 0.1), ConformalDegenerate);
}

TEST_CASE("diff round trip returns the original state") {
    Rng rng(97);
    RealField rho(g256);
    {
        ComplexField w = random_holo_field(g256, rng, 20, 0.05, 2.0);
        rho = imag_part(w);
    }
    RealField rho_q(g256);
    {
        ComplexField q = random_holo_field(g256, rng, 20, 0.05, 2.0);
        rho_q = imag_part(q);
    }
    WaveState s(HoloField::from_imag_trace(rho), HoloField::from_imag_trace(rho_q));
    WaveState back = from_diff(to_diff(s));
    CHECK(max_diff(back.surface.field(), s.surface.field()) < 1e-10);
    CHECK(max_diff(back.potential.field(), s.potential.field()) < 1e-10);
}

TEST_CASE("hamiltonian reference values") {
    PhysParams p{1.0, 0.0, 0.0};
    WaveState zero(HoloField::from_imag_trace(RealField(g256)),
                   HoloField::from_imag_trace(RealField(g256)));
    CHECK(hamiltonian(zero, p) == 0.0);

    // W = a e^{-i alpha}, Q = 0, sigma = 0 -> 2 pi g a^2 (cubic term integrates to zero)
    const double a = 0.07;
    RealField rho = -1.0 * sin_mode(g256, 1, a);  // Im(a e^{-i alpha}) = -a sin
    WaveState s(HoloField::from_imag_trace(rho), HoloField::from_imag_trace(RealField(g256)));
    CHECK(hamiltonian(s, p) == doctest::Approx(kTwoPi * a * a).epsilon(1e-12));

    // g = 0: 2 sigma int (J^{1/2} - 1 - Re W_alpha) = pi sigma eps^2 + O(eps^4)
    PhysParams pc{0.0, 2.0, 0.0};
    const double eps = 1e-3;
    WaveState sc(elevation_mode(g256, 1, eps), HoloField::from_imag_trace(RealField(g256)));
    CHECK(hamiltonian(sc, pc) ==
          doctest::Approx(M_PI * pc.sigma * eps * eps).epsilon(1e-5));
}

TEST_CASE("momentum reference values and reality") {
    WaveState q0(elevation_mode(g256, 1, 0.1), HoloField::from_imag_trace(RealField(g256)));
    CHECK(momentum(q0) == 0.0);

    // W = a e^{-i alpha}, Q = c W -> 4 pi c a^2
    const double a = 0.05, c = 0.8;
    RealField rho = -1.0 * sin_mode(g256, 1, a);
    WaveState s(HoloField::from_imag_trace(rho), HoloField::from_imag_trace(c * rho));
    CHECK(momentum(s) == doctest::Approx(4.0 * M_PI * c * a * a).epsilon(1e-12));

    // real for arbitrary random holomorphic pairs (conjugation symmetry)
    Rng rng(12);
    for (int t = 0; t < 5; ++t) {
        RealField rw = imag_part(random_holo_field(g256, rng, 40, 0.2, 1.5));
        RealField rq = imag_part(random_holo_field(g256, rng, 40, 0.2, 1.5));
        WaveState sr(HoloField::from_imag_trace(rw), HoloField::from_imag_trace(rq));
        CHECK(std::isfinite(momentum(sr)));  // throws RealityViolation if not real
    }
}

TEST_CASE("hamiltonian evaluates real on random states") {
    Rng rng(13);
    PhysParams p{1.0, 0.5, 0.0};
    RealField rw = imag_part(random_holo_field(g256, rng, 30, 0.05, 2.0));
    RealField rq = imag_part(random_holo_field(g256, rng, 30, 0.05, 2.0));
    WaveState s(HoloField::from_imag_trace(rw), HoloField::from_imag_trace(rq));
    CHECK(std::isfinite(hamiltonian(s, p)));
}

TEST_CASE("check_conformal minima") {
    HoloField zero = HoloField::from_imag_trace(RealField(g256));
    ConformalReport r0 = check_conformal(zero, 0.1);
    CHECK(r0.min_jacobian_abs == doctest::Approx(1.0));
    CHECK(r0.min_jacobian_re == doctest::Approx(1.0));
    CHECK(r0.pass);

    // W = i a e^{-i alpha}: W_alpha = a e^{-i alpha}, min(1 + Re W_alpha) = 1 - a
    const double a = 0.4;
    ConformalReport r1 = check_conformal(elevation_mode(g256, 1, a), 0.1);
    CHECK(r1.min_jacobian_re == doctest::Approx(1.0 - a).epsilon(1e-10));
    CHECK(r1.pass);

    ConformalReport r2 = check_conformal(elevation_mode(g256, 1, 0.95), 0.1);
    CHECK_FALSE(r2.pass);
}

TEST_CASE("eulerian trace and resampling") {
    HoloField zero = HoloField::from_imag_trace(RealField(g256));
    EulerianTrace t0 = eulerian_trace(zero);
    for (int m = 0; m < g256.size(); ++m) {
        CHECK(t0.x[m] == doctest::Approx(g256.point(m)));
        CHECK(t0.eta[m] == 0.0);
    }

    // W = i a e^{-i alpha}: eta(x) = a cos x + O(a^2), resampling oracle
    const double a = 0.02;
    EulerianTrace tr = eulerian_trace(elevation_mode(g256, 1, a));
    auto rs = tr.resample_uniform(64);
    double worst = 0.0;
    for (int j = 0; j < 64; ++j)
        worst = std::max(worst, std::abs(rs.eta[j] - a * std::cos(rs.x[j])));
    CHECK(worst < 3.0 * a * a);

    // consistency: eta(x(alpha)) equals Im W(alpha) exactly on the preimages
    for (int j = 0; j < 64; ++j) {
        double recon = rs.alpha[j] + a * std::sin(rs.alpha[j]);  // x = alpha + Re W
        CHECK(recon == doctest::Approx(rs.x[j]).epsilon(1e-10));
    }

    CHECK_THROWS_AS((void)eulerian_trace(elevation_mode(g256, 1, 1.2)), NotAGraph);
}

TEST_CASE("translate is exact and preserves holomorphy") {
    HoloField w = elevation_mode(g256, 3, 0.2);
    double s = 0.7;
    HoloField ws = translate(w, s);
    ComplexField expect = ComplexField::sample(g256, [&](double alpha) {
        double ph = -3.0 * (alpha - s);
        return 0.2 * cplx(0.0, 1.0) * cplx(std::cos(ph), std::sin(ph));
    });
    CHECK(max_diff(ws.field(), expect) < 1e-12);
}

TEST_CASE("steepness of a single mode") {
    const double a = 0.1;
    CHECK(steepness(elevation_mode(g256, 1, a)) == doctest::Approx(2.0 * a / kTwoPi));
}
