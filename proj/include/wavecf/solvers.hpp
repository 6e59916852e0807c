#pragma once

// Matrix-free GMRES (Arnoldi + Givens), single cycle with a fixed maximum
// basis size. Operators are plain callables on coefficient vectors.

#include <functional>
#include <vector>

namespace wavecf {

using VecFn = std::function<std::vector<double>(const std::vector<double>&)>;

struct GmresResult {
    bool converged = false;
    int iterations = 0;
    double rel_residual = 1.0;
};

// Solves A x = b starting from x = 0; on exit x holds the best iterate.
GmresResult gmres(const VecFn& apply, const std::vector<double>& b, std::vector<double>& x,
                  int max_iter, double rtol);

}  // namespace wavecf
