#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "wavecf/grid.hpp"

namespace wavecf {

using cplx = std::complex<double>;

// Value-semantic sample containers. A field is its collocation values; the
// coefficient view is obtained through the transforms in spectral.hpp.

struct RealField {
    RealField() : grid(16, kTwoPi), v() {}
    explicit RealField(const SpectralGrid& g, double fill = 0.0) : grid(g), v(g.size(), fill) {}
    RealField(const SpectralGrid& g, std::vector<double> values) : grid(g), v(std::move(values)) {
        if (static_cast<int>(v.size()) != grid.size())
            throw std::invalid_argument("RealField: value count != grid size");
    }

    static RealField sample(const SpectralGrid& g, const std::function<double(double)>& f) {
        RealField out(g);
        for (int m = 0; m < g.size(); ++m) out.v[m] = f(g.point(m));
        return out;
    }

    SpectralGrid grid;
    std::vector<double> v;

    double& operator[](int m) { return v[m]; }
    double operator[](int m) const { return v[m]; }
    int size() const { return grid.size(); }
};

struct ComplexField {
    ComplexField() : grid(16, kTwoPi), v() {}
    explicit ComplexField(const SpectralGrid& g, cplx fill = 0.0) : grid(g), v(g.size(), fill) {}
    ComplexField(const SpectralGrid& g, std::vector<cplx> values) : grid(g), v(std::move(values)) {
        if (static_cast<int>(v.size()) != grid.size())
            throw std::invalid_argument("ComplexField: value count != grid size");
    }

    static ComplexField sample(const SpectralGrid& g, const std::function<cplx(double)>& f) {
        ComplexField out(g);
        for (int m = 0; m < g.size(); ++m) out.v[m] = f(g.point(m));
        return out;
    }

    SpectralGrid grid;
    std::vector<cplx> v;

    cplx& operator[](int m) { return v[m]; }
    cplx operator[](int m) const { return v[m]; }
    int size() const { return grid.size(); }
};

inline ComplexField to_complex(const RealField& f) {
    ComplexField out(f.grid);
    for (int m = 0; m < f.size(); ++m) out.v[m] = f.v[m];
    return out;
}

// Exact pointwise arithmetic (no truncation). Nonlinear terms in the model
// equations should go through product()/quotient() in spectral.hpp instead.

#define WAVECF_FIELD_BINOP(T, OP)                                       \
    inline T operator OP(const T& a, const T& b) {                     \
        require_same_grid(a.grid, b.grid, "field op");                  \
        T out(a.grid);                                                  \
        for (int m = 0; m < a.size(); ++m) out.v[m] = a.v[m] OP b.v[m]; \
        return out;                                                     \
    }

WAVECF_FIELD_BINOP(RealField, +)
WAVECF_FIELD_BINOP(RealField, -)
WAVECF_FIELD_BINOP(ComplexField, +)
WAVECF_FIELD_BINOP(ComplexField, -)
#undef WAVECF_FIELD_BINOP

inline RealField operator*(double s, const RealField& f) {
    RealField out(f.grid);
    for (int m = 0; m < f.size(); ++m) out.v[m] = s * f.v[m];
    return out;
}

inline ComplexField operator*(cplx s, const ComplexField& f) {
    ComplexField out(f.grid);
    for (int m = 0; m < f.size(); ++m) out.v[m] = s * f.v[m];
    return out;
}

inline ComplexField conj(const ComplexField& f) {
    ComplexField out(f.grid);
    for (int m = 0; m < f.size(); ++m) out.v[m] = std::conj(f.v[m]);
    return out;
}

inline RealField real_part(const ComplexField& f) {
    RealField out(f.grid);
    for (int m = 0; m < f.size(); ++m) out.v[m] = f.v[m].real();
    return out;
}

inline RealField imag_part(const ComplexField& f) {
    RealField out(f.grid);
    for (int m = 0; m < f.size(); ++m) out.v[m] = f.v[m].imag();
    return out;
}

inline double mean(const RealField& f) {
    double s = 0.0;
    for (double x : f.v) s += x;
    return s / f.size();
}

inline cplx mean(const ComplexField& f) {
    cplx s = 0.0;
    for (cplx x : f.v) s += x;
    return s / static_cast<double>(f.size());
}

inline double sup_norm(const RealField& f) {
    double s = 0.0;
    for (double x : f.v) s = std::max(s, std::abs(x));
    return s;
}

inline double sup_norm(const ComplexField& f) {
    double s = 0.0;
    for (cplx x : f.v) s = std::max(s, std::abs(x));
    return s;
}

// Trapezoid quadrature over one period; exact for band-limited integrands.
inline double integrate(const RealField& f) {
    double s = 0.0;
    for (double x : f.v) s += x;
    return s * f.grid.spacing();
}

inline cplx integrate(const ComplexField& f) {
    cplx s = 0.0;
    for (cplx x : f.v) s += x;
    return s * f.grid.spacing();
}

inline double l2_norm(const RealField& f) {
    double s = 0.0;
    for (double x : f.v) s += x * x;
    return std::sqrt(s * f.grid.spacing());
}

inline double l2_norm(const ComplexField& f) {
    double s = 0.0;
    for (cplx x : f.v) s += std::norm(x);
    return std::sqrt(s * f.grid.spacing());
}

}  // namespace wavecf
