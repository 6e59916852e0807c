#pragma once

#include <cmath>
#include <stdexcept>

#include "wavecf/errors.hpp"

namespace wavecf {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Periodic collocation grid on [0, L). Mode storage follows FFT order:
// slot m holds the signed integer mode j = m for m < n/2 and j = m - n
// otherwise, so j ranges over [-n/2, n/2). Physical wavenumber 2*pi*j/L.
class SpectralGrid {
  public:
    SpectralGrid(int n_points, double period) : n_(n_points), L_(period) {
        if (n_ < 16 || (n_ & (n_ - 1)) != 0)
            throw std::invalid_argument("SpectralGrid: n_points must be a power of two >= 16");
        if (!(L_ > 0.0) || !std::isfinite(L_))
            throw std::invalid_argument("SpectralGrid: period must be positive");
    }

    int size() const { return n_; }
    double period() const { return L_; }
    double spacing() const { return L_ / n_; }
    double point(int m) const { return m * (L_ / n_); }

    // signed mode index for FFT slot m
    int mode(int m) const { return m < n_ / 2 ? m : m - n_; }
    // physical wavenumber for FFT slot m
    double wavenumber(int m) const { return kTwoPi * mode(m) / L_; }
    // largest retained |mode| under the 2/3 dealiasing rule
    int dealias_limit() const { return n_ / 3; }

    bool operator==(const SpectralGrid& o) const { return n_ == o.n_ && L_ == o.L_; }
    bool operator!=(const SpectralGrid& o) const { return !(*this == o); }

  private:
    int n_;
    double L_;
};

inline void require_same_grid(const SpectralGrid& a, const SpectralGrid& b, const char* where) {
    if (a != b) throw GridMismatch(std::string(where) + ": fields live on different grids");
}

}  // namespace wavecf
