#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "test_util.hpp"
#include "wavecf/conformal.hpp"

using namespace wavecf;
using namespace wtest;

namespace {
const SpectralGrid g1024(1024, kTwoPi);
}

TEST_CASE("flat profile gives the identity parametrization") {
    ConformalBuild b = build_conformal(RealField(g1024));
    CHECK(b.surface.norm_l2() == 0.0);
    CHECK(b.defect == 0.0);
}

TEST_CASE("small cosine profile: W = i a e^{-i alpha} + O(a^2)") {
    const double a = 1e-3;
    ConformalBuildOptions opt;
    opt.tol = 1e-13;
    ConformalBuild b = build_conformal(cos_mode(g1024, 1, a), opt);
    CHECK(b.defect < 1e-13);

    ComplexField expect = ComplexField::sample(g1024, [&](double al) {
        return a * cplx(0.0, 1.0) * cplx(std::cos(al), -std::sin(al));
    });
    CHECK(max_diff(b.surface.field(), expect) < 5.0 * a * a);

    // the vertical level of the curve: mean Im W = -a^2/2 + O(a^4)
    cplx mu = b.surface.mean_value();
    CHECK(std::abs(mu.real()) < 1e-12);
    CHECK(mu.imag() == doctest::Approx(-0.5 * a * a).epsilon(1e-3));
}

TEST_CASE("defect definition honored at moderate slope") {
    // slope ~0.5: converges, and Im W(alpha) = eta(alpha + Re W(alpha)) to tol
    RealField eta = cos_mode(g1024, 1, 0.5);
    ConformalBuildOptions opt;
    opt.tol = 1e-12;
    opt.max_iter = 2000;
    ConformalBuild b = build_conformal(eta, opt);
    CHECK(b.defect < 1e-12);
    CHECK(b.min_jacobian > 0.0);
    CHECK(check_conformal(b.surface, 1e-3).pass);

    // composition consistency: eulerian_trace(build_conformal(eta)) returns eta
    EulerianTrace tr = eulerian_trace(b.surface);
    auto rs = tr.resample_uniform(256);
    double worst = 0.0;
    for (int j = 0; j < 256; ++j)
        worst = std::max(worst, std::abs(rs.eta[j] - 0.5 * std::cos(rs.x[j])));
    CHECK(worst < 10.0 * opt.tol);
}

TEST_CASE("steep profile either converges within contract or reports NoConvergence") {
    RealField eta = cos_mode(g1024, 1, 0.95);  // slope near 1
    ConformalBuildOptions opt;
    opt.tol = 1e-11;
    opt.max_iter = 4000;
    opt.damping = 0.7;
    try {
        ConformalBuild b = build_conformal(eta, opt);
        CHECK(b.defect < opt.tol);  // never returns a field violating the bound
    } catch (const NoConvergence& e) {
        CHECK(e.defect > opt.tol);
    }
}

TEST_CASE("regularity transfer identity on a built map") {
    const double a = 0.1;
    ConformalBuildOptions opt;
    opt.tol = 1e-13;
    RealField eta = cos_mode(g1024, 1, a);
    ConformalBuild b = build_conformal(eta, opt);

    RegularityTransferReport rep = regularity_transfer_report(eta, b.surface);
    CHECK(rep.identity_sup_diff < 1e-8);
    CHECK(rep.trace_relation_sup < 1e-10);
    CHECK(rep.besov_ratio > 0.0);

    // flat profile: ratio reported as unit by convention
    ConformalBuild b0 = build_conformal(RealField(g1024));
    RegularityTransferReport rep0 = regularity_transfer_report(RealField(g1024), b0.surface);
    CHECK(rep0.identity_sup_diff == 0.0);
    CHECK(rep0.besov_ratio == 1.0);
}

TEST_CASE("regularity transfer on random band-limited profile, slope 0.3") {
    Rng rng(2718);
    // random even-ish profile scaled to slope 0.3
    RealField eta(g1024);
    for (int k = 1; k <= 12; ++k) {
        double amp = rng.uniform(-1.0, 1.0) / (k * k);
        RealField mode = cos_mode(g1024, k, amp);
        eta = eta + mode;
    }
    double slope = sup_norm(derivative(eta));
    eta = (0.3 / slope) * eta;

    ConformalBuildOptions opt;
    opt.tol = 1e-12;
    opt.max_iter = 3000;
    ConformalBuild b = build_conformal(eta, opt);
    RegularityTransferReport rep = regularity_transfer_report(eta, b.surface);
    CHECK(rep.trace_relation_sup < 1e-10);
    CHECK(rep.identity_sup_diff < 1e-8);
}
