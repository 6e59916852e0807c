// Python bindings: the main operations on plain numpy arrays. Fields are
// passed as collocation values (complex128 for holomorphic traces, float64
// for real profiles) together with the period; grids are rebuilt on entry.

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wavecf/conformal.hpp"
#include "wavecf/evolution.hpp"
#include "wavecf/nonexistence.hpp"
#include "wavecf/traveling.hpp"

namespace py = pybind11;
using namespace wavecf;

namespace {

using CArray = py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;
using RArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

ComplexField to_field(const CArray& a, double period) {
    if (a.ndim() != 1) throw std::invalid_argument("expected a 1-d array");
    SpectralGrid g(int(a.shape(0)), period);
    ComplexField f(g);
    auto r = a.unchecked<1>();
    for (int m = 0; m < g.size(); ++m) f.v[m] = r(m);
    return f;
}

RealField to_real_field(const RArray& a, double period) {
    if (a.ndim() != 1) throw std::invalid_argument("expected a 1-d array");
    SpectralGrid g(int(a.shape(0)), period);
    RealField f(g);
    auto r = a.unchecked<1>();
    for (int m = 0; m < g.size(); ++m) f.v[m] = r(m);
    return f;
}

CArray from_field(const ComplexField& f) {
    CArray out(std::vector<py::ssize_t>{f.size()});
    std::copy(f.v.begin(), f.v.end(), out.mutable_data());
    return out;
}

RArray from_real_field(const RealField& f) {
    RArray out(std::vector<py::ssize_t>{f.size()});
    std::copy(f.v.begin(), f.v.end(), out.mutable_data());
    return out;
}

HoloField holo_from_values(const CArray& a, double period) {
    return HoloField::checked(to_field(a, period), 1e-8);
}

PhysParams params(double g, double sigma, double c) { return PhysParams{g, sigma, c}; }

}  // namespace

PYBIND11_MODULE(_wavecf, m) {
    m.doc() = "pseudo-spectral deep-water waves in holomorphic coordinates";
    m.attr("__version__") = "0.1.0";

    // ---- spectral calculus ----
    m.def(
        "hilbert",
        [](const CArray& f, double period) { return from_field(hilbert(to_field(f, period))); },
        py::arg("values"), py::arg("period") = kTwoPi);
    m.def(
        "hilbert_real",
        [](const RArray& f, double period) {
            return from_real_field(hilbert(to_real_field(f, period)));
        },
        py::arg("values"), py::arg("period") = kTwoPi);
    m.def(
        "project_holo",
        [](const CArray& f, double period) {
            return from_field(project_holo(to_field(f, period)));
        },
        py::arg("values"), py::arg("period") = kTwoPi);
    m.def(
        "derivative",
        [](const CArray& f, double period) {
            return from_field(derivative(to_field(f, period)));
        },
        py::arg("values"), py::arg("period") = kTwoPi);
    m.def(
        "besov_half_norm",
        [](const CArray& f, double period) { return besov_half_norm(to_field(f, period)); },
        py::arg("values"), py::arg("period") = kTwoPi);
    m.def(
        "from_imag_trace",
        [](const RArray& rho, double period) {
            return from_field(HoloField::from_imag_trace(to_real_field(rho, period)).field());
        },
        py::arg("rho"), py::arg("period") = kTwoPi,
        "holomorphic trace H(rho) + i rho from the elevation rho = Im W");

    // ---- states and invariants ----
    m.def(
        "hamiltonian",
        [](const CArray& w, const CArray& q, double period, double g, double sigma) {
            WaveState s(holo_from_values(w, period), holo_from_values(q, period));
            return hamiltonian(s, params(g, sigma, 0.0));
        },
        py::arg("w"), py::arg("q"), py::arg("period") = kTwoPi, py::arg("g") = 1.0,
        py::arg("sigma") = 0.0);
    m.def(
        "momentum",
        [](const CArray& w, const CArray& q, double period) {
            WaveState s(holo_from_values(w, period), holo_from_values(q, period));
            return momentum(s);
        },
        py::arg("w"), py::arg("q"), py::arg("period") = kTwoPi);
    m.def(
        "check_conformal",
        [](const CArray& w, double period, double delta) {
            ConformalReport r = check_conformal(holo_from_values(w, period), delta);
            return py::dict(py::arg("min_jacobian_abs") = r.min_jacobian_abs,
                            py::arg("min_jacobian_re") = r.min_jacobian_re,
                            py::arg("pass") = r.pass);
        },
        py::arg("w"), py::arg("period") = kTwoPi, py::arg("delta") = 0.1);

    // ---- conformal construction ----
    m.def(
        "build_conformal",
        [](const RArray& eta, double period, double tol, int max_iter, double damping) {
            ConformalBuildOptions opt;
            opt.tol = tol;
            opt.max_iter = max_iter;
            opt.damping = damping;
            ConformalBuild b = build_conformal(to_real_field(eta, period), opt);
            return py::dict(py::arg("w") = from_field(b.surface.field()),
                            py::arg("iterations") = b.iterations,
                            py::arg("defect") = b.defect,
                            py::arg("min_jacobian") = b.min_jacobian);
        },
        py::arg("eta"), py::arg("period") = kTwoPi, py::arg("tol") = 1e-12,
        py::arg("max_iter") = 500, py::arg("damping") = 1.0);
    m.def(
        "eulerian_trace",
        [](const CArray& w, double period, int points) {
            EulerianTrace tr = eulerian_trace(holo_from_values(w, period));
            auto rs = tr.resample_uniform(points);
            RArray x(std::vector<py::ssize_t>{points});
            RArray eta(std::vector<py::ssize_t>{points});
            std::copy(rs.x.begin(), rs.x.end(), x.mutable_data());
            std::copy(rs.eta.begin(), rs.eta.end(), eta.mutable_data());
            return py::dict(py::arg("x") = x, py::arg("eta") = eta);
        },
        py::arg("w"), py::arg("period") = kTwoPi, py::arg("points") = 256);

    // ---- steady waves ----
    m.def(
        "residual_combined",
        [](const CArray& w, double period, double g, double sigma, double c) {
            return from_real_field(
                residual_combined(holo_from_values(w, period), params(g, sigma, c)));
        },
        py::arg("w"), py::arg("period") = kTwoPi, py::arg("g") = 1.0, py::arg("sigma") = 0.0,
        py::arg("c") = 1.0);
    m.def(
        "solve_traveling",
        [](int n, double period, double g, double sigma, int mode, double amplitude,
           double c_guess) {
            TravelingProblem prob;
            prob.grid = SpectralGrid(n, period);
            prob.params = params(g, sigma, 0.0);
            prob.constraint = SolveConstraint::fixed_amplitude;
            prob.constraint_mode = mode;
            prob.constraint_value = amplitude;
            double kap = kTwoPi * mode / period;
            RealField rho = RealField::sample(
                prob.grid, [&](double a) { return amplitude * std::cos(kap * a); });
            if (c_guess <= 0.0) c_guess = std::sqrt(g / kap + sigma * kap);
            SolveReport rep = newton_solve(prob, HoloField::from_imag_trace(rho), c_guess);
            return py::dict(py::arg("converged") = rep.converged, py::arg("c") = rep.c,
                            py::arg("c_squared") = rep.c_squared,
                            py::arg("w") = from_field(rep.surface.field()),
                            py::arg("residual_l2") = rep.residual_l2,
                            py::arg("iterations") = rep.newton_iterations,
                            py::arg("steepness") = rep.steepness_value,
                            py::arg("energy") = rep.energy,
                            py::arg("momentum") = rep.momentum_value);
        },
        py::arg("n") = 256, py::arg("period") = kTwoPi, py::arg("g") = 1.0,
        py::arg("sigma") = 0.0, py::arg("mode") = 1, py::arg("amplitude") = 1e-3,
        py::arg("c_guess") = -1.0);

    // ---- evolution ----
    m.def("max_stable_dt",
          [](int n, double period, double g, double sigma, double safety) {
              return max_stable_dt(SpectralGrid(n, period), params(g, sigma, 0.0), safety);
          },
          py::arg("n"), py::arg("period") = kTwoPi, py::arg("g") = 1.0, py::arg("sigma") = 0.0,
          py::arg("safety") = 0.25);
    m.def(
        "evolve",
        [](const CArray& w, const CArray& q, double period, double g, double sigma, double dt,
           int steps, int sample_every, bool filter) {
            WaveState s0(holo_from_values(w, period), holo_from_values(q, period));
            EvolveOptions opt;
            opt.sample_every = sample_every;
            opt.filter = filter;
            EvolutionTrace tr = evolve(s0, params(g, sigma, 0.0), dt, steps, opt);
            py::list t, energy, momentum_l;
            for (const auto& smp : tr.samples) {
                t.append(smp.t);
                energy.append(smp.energy);
                momentum_l.append(smp.momentum);
            }
            return py::dict(py::arg("t") = t, py::arg("energy") = energy,
                            py::arg("momentum") = momentum_l,
                            py::arg("w") = from_field(tr.final_state.surface.field()),
                            py::arg("q") = from_field(tr.final_state.potential.field()),
                            py::arg("leakage") = tr.total_leakage);
        },
        py::arg("w"), py::arg("q"), py::arg("period") = kTwoPi, py::arg("g") = 1.0,
        py::arg("sigma") = 0.0, py::arg("dt") = 1e-2, py::arg("steps") = 100,
        py::arg("sample_every") = 10, py::arg("filter") = true);

    // ---- nonexistence machinery ----
    m.def("cmin_squared", &cmin_squared, py::arg("g"), py::arg("sigma"));
    m.def(
        "coifman_meyer_ratio",
        [](const CArray& w, double period, double r) {
            return coifman_meyer_ratio(holo_from_values(w, period), r);
        },
        py::arg("w"), py::arg("period"), py::arg("r"));
    m.def(
        "commutator_decay_scan",
        [](const CArray& w, double period, const std::vector<double>& r_list) {
            auto rows = commutator_decay_scan(holo_from_values(w, period), r_list);
            py::list out;
            for (const auto& row : rows)
                out.append(py::dict(py::arg("r") = row.r, py::arg("norm") = row.norm,
                                    py::arg("scaled") = row.scaled));
            return out;
        },
        py::arg("w"), py::arg("period"), py::arg("r_list"));
    m.def(
        "multiplier_identity_check",
        [](const CArray& w, double period, double g, double c, double r) {
            MultiplierIdentity mi =
                multiplier_identity_check(holo_from_values(w, period), params(g, 0.0, c), r);
            return py::dict(py::arg("lhs") = mi.lhs, py::arg("rhs") = mi.rhs,
                            py::arg("correction") = mi.correction,
                            py::arg("defect") = mi.defect);
        },
        py::arg("w"), py::arg("period"), py::arg("g"), py::arg("c"), py::arg("r"));

    py::register_exception<ConformalDegenerate>(m, "ConformalDegenerate");
    py::register_exception<NotAGraph>(m, "NotAGraph");
    py::register_exception<BranchCut>(m, "BranchCut");
    py::register_exception<BlowupDetected>(m, "BlowupDetected");
    py::register_exception<NoConvergence>(m, "NoConvergenceError");
    py::register_exception<HolomorphyViolation>(m, "HolomorphyViolation");
}
