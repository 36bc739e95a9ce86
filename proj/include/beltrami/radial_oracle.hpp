#pragma once

#include "beltrami/common.hpp"

namespace beltrami {

// ---------------------------------------------------------------------------
// Independent per-mode boundary-value oracle for radial conductivities.
// For sigma = sigma(r), the angular mode k of div(sigma grad u) = 0 obeys
//     (r sigma u_k')' = sigma k^2 u_k / r   on (0, 1),
// regular at the origin. Solved by conservative second-order finite
// differences with Richardson extrapolation; entirely independent of the
// spectral machinery it cross-checks.
// ---------------------------------------------------------------------------

enum class RadialBc { dirichlet, neumann };

class RadialModeOracle {
  public:
    /// Solves for mode k >= 1 with u(1) = 1 (dirichlet) or u'(1) = 1
    /// (neumann); returns values at the requested radii in (0, 1].
    static std::vector<double> solve(const std::function<double(double)>& sigma, int k,
                                     RadialBc bc, const std::vector<double>& eval_radii,
                                     int n_cells = 16384) {
        if (k < 1) throw ConfigError("RadialModeOracle: mode must be >= 1");
        std::vector<double> coarse = solve_grid(sigma, k, bc, n_cells / 2);
        std::vector<double> fine = solve_grid(sigma, k, bc, n_cells);
        std::vector<double> out;
        out.reserve(eval_radii.size());
        for (double r : eval_radii) {
            double uc = interp(coarse, r);
            double uf = interp(fine, r);
            out.push_back((4.0 * uf - uc) / 3.0);
        }
        return out;
    }

  private:
    /// u at nodes r_i = i h, i = 0..N (u[0] = 0 for k >= 1).
    static std::vector<double> solve_grid(const std::function<double(double)>& sigma, int k,
                                          RadialBc bc, int N) {
        const double h = 1.0 / N;
        // unknowns u_1..u_N; tridiagonal (sub, diag, super)
        std::vector<double> a(N + 1, 0.0), b(N + 1, 0.0), c(N + 1, 0.0), rhs(N + 1, 0.0);
        auto flux = [&](double r) { return r * sigma(r); };  // r sigma at half nodes
        for (int i = 1; i < N; ++i) {
            double r = i * h;
            double fm = flux(r - 0.5 * h), fp = flux(r + 0.5 * h);
            a[i] = fm / (h * h);
            c[i] = fp / (h * h);
            b[i] = -(fm + fp) / (h * h) - sigma(r) * k * k / r;
        }
        if (bc == RadialBc::dirichlet) {
            b[N] = 1.0;
            rhs[N] = 1.0;
        } else {
            // ghost node: (u_{N+1} - u_{N-1})/(2h) = 1 combined with the
            // conservative stencil at i = N
            double r = 1.0;
            double fm = flux(r - 0.5 * h), fp = flux(r + 0.5 * h);
            a[N] = (fm + fp) / (h * h);
            b[N] = -(fm + fp) / (h * h) - sigma(r) * k * k / r;
            rhs[N] = -fp * 2.0 / h;
        }
        // Thomas algorithm
        for (int i = 2; i <= N; ++i) {
            double m = a[i] / b[i - 1];
            b[i] -= m * c[i - 1];
            rhs[i] -= m * rhs[i - 1];
        }
        std::vector<double> u(N + 1, 0.0);
        u[N] = rhs[N] / b[N];
        for (int i = N - 1; i >= 1; --i) u[i] = (rhs[i] - c[i] * u[i + 1]) / b[i];
        return u;
    }

    static double interp(const std::vector<double>& u, double r) {
        const int N = static_cast<int>(u.size()) - 1;
        double x = r * N;
        int i = std::clamp(static_cast<int>(std::floor(x)), 0, N - 1);
        double t = x - i;
        // local quadratic through i-1, i, i+1 (falls back to linear at i = 0)
        if (i == 0) return (1.0 - t) * u[0] + t * u[1];
        double um = u[i - 1], u0 = u[i], up = u[i + 1];
        return u0 + 0.5 * t * (up - um) + 0.5 * t * t * (up - 2.0 * u0 + um);
    }
};

}  // namespace beltrami
