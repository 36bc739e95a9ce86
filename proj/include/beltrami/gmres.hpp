#pragma once

#include "beltrami/common.hpp"

namespace beltrami {

struct GmresResult {
    int iterations = 0;
    double rel_residual = 0.0;
    bool converged = false;
};

namespace detail {

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double nrm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

inline void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

/// Cholesky solve of (A + ridge I) x = b for symmetric positive semidefinite A.
inline std::vector<double> spd_solve(std::vector<double> a, std::vector<double> b,
                                     double ridge) {
    const int n = static_cast<int>(b.size());
    for (int i = 0; i < n; ++i) a[i * n + i] += ridge;
    for (int j = 0; j < n; ++j) {
        double d = a[j * n + j];
        for (int k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
        if (d <= 0) throw SolveError("spd_solve: matrix not positive definite");
        a[j * n + j] = std::sqrt(d);
        for (int i = j + 1; i < n; ++i) {
            double s = a[i * n + j];
            for (int k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
            a[i * n + j] = s / a[j * n + j];
        }
    }
    for (int i = 0; i < n; ++i) {
        double s = b[i];
        for (int k = 0; k < i; ++k) s -= a[i * n + k] * b[k];
        b[i] = s / a[i * n + i];
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = b[i];
        for (int k = i + 1; k < n; ++k) s -= a[k * n + i] * b[k];
        b[i] = s / a[i * n + i];
    }
    return b;
}

}  // namespace detail

/// Restarted GMRES with modified Gram-Schmidt and Givens rotations, for
/// matrix-free real-linear operators. Stops when the (recurrence) residual
/// falls below tol * ||b||; the returned residual is recomputed from A x.
template <typename Op>
GmresResult gmres(const Op& apply, const std::vector<double>& b, std::vector<double>& x,
                  double tol, int max_iter, int restart) {
    using detail::axpy;
    using detail::dot;
    using detail::nrm2;
    const std::size_t n = b.size();
    GmresResult res;
    double bnorm = nrm2(b);
    if (bnorm == 0.0) {
        x.assign(n, 0.0);
        res.converged = true;
        return res;
    }
    if (x.size() != n) x.assign(n, 0.0);

    int total_it = 0;
    while (total_it < max_iter) {
        std::vector<double> r = apply(x);
        for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
        double beta = nrm2(r);
        if (beta / bnorm <= tol) break;

        const int m = std::min(restart, max_iter - total_it);
        std::vector<std::vector<double>> V;
        V.reserve(m + 1);
        std::vector<double> H((m + 1) * m, 0.0);  // H[i*m+j], i <= m, j < m
        std::vector<double> cs(m, 0.0), sn(m, 0.0), g(m + 1, 0.0);
        for (double& v : r) v /= beta;
        V.push_back(std::move(r));
        g[0] = beta;

        int k = 0;
        bool inner_done = false;
        for (; k < m; ++k) {
            std::vector<double> w = apply(V[k]);
            for (int i = 0; i <= k; ++i) {
                double h = dot(w, V[i]);
                H[i * m + k] = h;
                axpy(-h, V[i], w);
            }
            double h1 = nrm2(w);
            H[(k + 1) * m + k] = h1;
            if (h1 > 0) {
                for (double& v : w) v /= h1;
                V.push_back(std::move(w));
            }
            // apply accumulated rotations
            for (int i = 0; i < k; ++i) {
                double t = cs[i] * H[i * m + k] + sn[i] * H[(i + 1) * m + k];
                H[(i + 1) * m + k] = -sn[i] * H[i * m + k] + cs[i] * H[(i + 1) * m + k];
                H[i * m + k] = t;
            }
            double denom = std::hypot(H[k * m + k], H[(k + 1) * m + k]);
            cs[k] = denom == 0.0 ? 1.0 : H[k * m + k] / denom;
            sn[k] = denom == 0.0 ? 0.0 : H[(k + 1) * m + k] / denom;
            H[k * m + k] = denom;
            H[(k + 1) * m + k] = 0.0;
            g[k + 1] = -sn[k] * g[k];
            g[k] = cs[k] * g[k];
            ++total_it;
            if (std::abs(g[k + 1]) / bnorm <= tol || h1 == 0.0) {
                ++k;
                inner_done = true;
                break;
            }
        }
        // back substitution
        std::vector<double> y(k, 0.0);
        for (int i = k - 1; i >= 0; --i) {
            double s = g[i];
            for (int j = i + 1; j < k; ++j) s -= H[i * m + j] * y[j];
            y[i] = H[i * m + i] == 0.0 ? 0.0 : s / H[i * m + i];
        }
        for (int i = 0; i < k; ++i) axpy(y[i], V[i], x);
        if (inner_done) break;
    }
    std::vector<double> r = apply(x);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
    res.rel_residual = nrm2(r) / bnorm;
    res.iterations = total_it;
    res.converged = res.rel_residual <= tol * 1.01;
    return res;
}

}  // namespace beltrami
