#include "wavecf/solvers.hpp"

#include <cmath>

namespace wavecf {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double nrm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

}  // namespace

GmresResult gmres(const VecFn& apply, const std::vector<double>& b, std::vector<double>& x,
                  int max_iter, double rtol) {
    const std::size_t n = b.size();
    x.assign(n, 0.0);
    GmresResult out;

    const double beta = nrm2(b);
    if (beta == 0.0) {
        out.converged = true;
        out.rel_residual = 0.0;
        return out;
    }

    std::vector<std::vector<double>> V;
    V.reserve(max_iter + 1);
    V.push_back(b);
    for (double& v : V[0]) v /= beta;

    std::vector<std::vector<double>> H;  // H[j]: rotated column j (j+1 entries kept)
    std::vector<double> cs(max_iter), sn(max_iter);
    std::vector<double> g(max_iter + 1, 0.0);
    g[0] = beta;

    int m = 0;
    for (int j = 0; j < max_iter; ++j) {
        std::vector<double> w = apply(V[j]);
        std::vector<double> h(j + 2, 0.0);
        // modified Gram-Schmidt with one refinement pass
        for (int pass = 0; pass < 2; ++pass) {
            for (int i = 0; i <= j; ++i) {
                double hij = dot(w, V[i]);
                h[i] += hij;
                for (std::size_t k = 0; k < n; ++k) w[k] -= hij * V[i][k];
            }
        }
        const double hsub = nrm2(w);
        h[j + 1] = hsub;

        // previous Givens rotations on the new column
        for (int i = 0; i < j; ++i) {
            double t = cs[i] * h[i] + sn[i] * h[i + 1];
            h[i + 1] = -sn[i] * h[i] + cs[i] * h[i + 1];
            h[i] = t;
        }
        // new rotation annihilating the subdiagonal
        double denom = std::hypot(h[j], h[j + 1]);
        if (denom == 0.0) {
            cs[j] = 1.0;
            sn[j] = 0.0;
        } else {
            cs[j] = h[j] / denom;
            sn[j] = h[j + 1] / denom;
        }
        h[j] = denom;
        h[j + 1] = 0.0;
        g[j + 1] = -sn[j] * g[j];
        g[j] = cs[j] * g[j];

        H.push_back(std::move(h));
        m = j + 1;
        out.rel_residual = std::abs(g[j + 1]) / beta;
        if (out.rel_residual <= rtol) {
            out.converged = true;
            break;
        }
        if (hsub <= 1e-300) break;  // invariant subspace reached
        for (double& v : w) v /= hsub;
        V.push_back(std::move(w));
    }
    out.iterations = m;

    // back substitution for y, then x = V y
    std::vector<double> y(m, 0.0);
    for (int i = m - 1; i >= 0; --i) {
        double s = g[i];
        for (int k = i + 1; k < m; ++k) s -= H[k][i] * y[k];
        double diag = H[i][i];
        y[i] = diag != 0.0 ? s / diag : 0.0;
    }
    for (int k = 0; k < m; ++k)
        for (std::size_t i = 0; i < n; ++i) x[i] += y[k] * V[k][i];
    return out;
}

}  // namespace wavecf
