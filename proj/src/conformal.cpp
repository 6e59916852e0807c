#include "wavecf/conformal.hpp"

#include <algorithm>
#include <cmath>

namespace wavecf {

namespace {

// eta evaluated at arbitrary points through its Fourier modes; negligible
// coefficients are skipped so band-limited profiles stay cheap.
struct TrigProfile {
    const SpectralGrid& grid;
    std::vector<int> slots;
    std::vector<cplx> coef;

    explicit TrigProfile(const RealField& eta) : grid(eta.grid) {
        auto full = spectrum(eta);
        double top = 0.0;
        for (const auto& c : full) top = std::max(top, std::abs(c));
        for (int m = 0; m < grid.size(); ++m) {
            if (std::abs(full[m]) > 1e-17 * top) {
                slots.push_back(m);
                coef.push_back(full[m]);
            }
        }
    }

    double operator()(double x) const {
        cplx acc = 0.0;
        for (std::size_t i = 0; i < slots.size(); ++i) {
            double ph = grid.wavenumber(slots[i]) * x;
            acc += coef[i] * cplx(std::cos(ph), std::sin(ph));
        }
        return acc.real();
    }
};

double max_diff_local(const RealField& a, const RealField& b) {
    double d = 0.0;
    for (int m = 0; m < a.size(); ++m) d = std::max(d, std::abs(a.v[m] - b.v[m]));
    return d;
}

}  // namespace

ConformalBuild build_conformal(const RealField& eta, const ConformalBuildOptions& opt) {
    if (!(opt.damping > 0.0) || opt.damping > 1.0)
        throw std::invalid_argument("build_conformal: damping must be in (0, 1]");

    const SpectralGrid& g = eta.grid;
    RealField eta_x = derivative(eta);
    double slope = sup_norm(eta_x);
    if (slope >= 1e3) throw NotAGraph("build_conformal: profile slope is unbounded");

    TrigProfile profile(eta);

    RealField rho = eta;  // eta itself is the natural first iterate
    double defect = std::numeric_limits<double>::infinity();
    int it = 0;
    for (; it < opt.max_iter; ++it) {
        RealField re = hilbert(rho);
        RealField target(g);
        for (int m = 0; m < g.size(); ++m) target.v[m] = profile(g.point(m) + re.v[m]);

        double d = max_diff_local(rho, target);
        for (int m = 0; m < g.size(); ++m)
            rho.v[m] = (1.0 - opt.damping) * rho.v[m] + opt.damping * target.v[m];
        defect = d;
        if (d < opt.tol) break;
    }

    // final defect of the returned iterate
    {
        RealField re = hilbert(rho);
        double d = 0.0;
        for (int m = 0; m < g.size(); ++m)
            d = std::max(d, std::abs(rho.v[m] - profile(g.point(m) + re.v[m])));
        defect = d;
    }
    if (defect > opt.tol)
        throw NoConvergence("build_conformal: fixed point stalled at defect " +
                                std::to_string(defect),
                            it, defect);

    ConformalBuild out{HoloField::from_imag_trace(rho), it + 1, defect, 0.0};
    out.min_jacobian = check_conformal(out.surface, 0.0).min_jacobian_abs;
    return out;
}

RegularityTransferReport regularity_transfer_report(const RealField& eta, const HoloField& w) {
    const SpectralGrid& g = w.grid();
    RegularityTransferReport rep;

    // conformal side: Y = W_alpha / (1 + W_alpha)
    ComplexField wa = derivative(w.field());
    ComplexField y(g);
    for (int m = 0; m < g.size(); ++m) y.v[m] = wa.v[m] / (1.0 + wa.v[m]);

    // Eulerian side evaluated at x(alpha) = alpha + Re W(alpha)
    RealField eta_x = derivative(eta);
    TrigProfile slope_profile(eta_x);
    RealField lhs(g);
    RealField rhs(g);
    RealField rhs_unstretched = imag_part(y);
    for (int m = 0; m < g.size(); ++m) {
        double x = g.point(m) + w.field().v[m].real();
        double s = slope_profile(x);
        lhs.v[m] = s / (1.0 + s * s);
        rhs.v[m] = rhs_unstretched.v[m] * (1.0 + wa.v[m].real());
    }

    rep.identity_sup_diff = max_diff_local(lhs, rhs);
    rep.unstretched_sup_diff = max_diff_local(lhs, rhs_unstretched);
    rep.eta_x_besov = besov_half_norm(eta_x);
    rep.slope_besov = besov_half_norm(wa);
    rep.besov_ratio =
        rep.eta_x_besov == 0.0 ? 1.0 : rep.slope_besov / rep.eta_x_besov;

    RealField trace_diff = real_part(y) - hilbert(imag_part(y));
    // remove the (analytically zero) mean before comparing traces
    double mu = mean(trace_diff);
    for (auto& v : trace_diff.v) v -= mu;
    rep.trace_relation_sup = sup_norm(trace_diff) + std::abs(mu);
    return rep;
}

}  // namespace wavecf
