#pragma once

#include "beltrami/coeff.hpp"
#include "beltrami/gmres.hpp"

namespace beltrami {

// ---------------------------------------------------------------------------
// Transport of problems between the disk and a Dini-smooth simply connected
// domain Omega through a user-supplied injective analytic map psi. The
// library checks the computable invariants (derivative bounded away from
// zero on the sampled closure, simple boundary image); Dini smoothness of a
// custom map is the caller's attestation.
// ---------------------------------------------------------------------------

class ConformalMap {
  public:
    using MapFn = std::function<cd(cd)>;

    ConformalMap(MapFn psi, MapFn dpsi, std::string name = "custom")
        : psi_(std::move(psi)), dpsi_(std::move(dpsi)), name_(std::move(name)) {}

    static ConformalMap identity() {
        return ConformalMap([](cd z) { return z; }, [](cd) { return cd(1, 0); }, "identity");
    }

    static ConformalMap affine(cd a, cd b) {
        if (std::abs(a) == 0.0) throw ConfigError("ConformalMap: affine factor must be nonzero");
        return ConformalMap([a, b](cd z) { return a * z + b; }, [a](cd) { return a; }, "affine");
    }

    /// psi(z) = z + eps z^2; injective on the closed disk for |eps| < 1/2.
    static ConformalMap quadratic(cd eps) {
        if (std::abs(eps) >= 0.5)
            throw ConfigError("ConformalMap: quadratic map needs |eps| < 1/2 for injectivity");
        return ConformalMap([eps](cd z) { return z + eps * z * z; },
                            [eps](cd z) { return 1.0 + 2.0 * eps * z; }, "quadratic");
    }

    cd map(cd z) const { return psi_(z); }
    cd derivative(cd z) const { return dpsi_(z); }
    const std::string& name() const { return name_; }

    /// Computable invariants: min |psi'| > 0 on the sampled closure and a
    /// simple (non-self-crossing) boundary image polygon.
    void validate(const GridPtr& g) const {
        double dmin = 1e300;
        for (int j = 0; j < g->n_radial(); ++j)
            for (int k = 0; k < g->n_theta(); k += 4) {
                cd z = std::polar(g->radial.nodes[j], g->circle.theta(k));
                dmin = std::min(dmin, std::abs(dpsi_(z)));
            }
        const int nt = g->n_theta();
        std::vector<cd> bd(nt);
        for (int k = 0; k < nt; ++k) {
            cd z = std::polar(1.0, g->circle.theta(k));
            bd[k] = psi_(z);
            dmin = std::min(dmin, std::abs(dpsi_(z)));
        }
        if (dmin <= 1e-12)
            throw ConfigError("ConformalMap: sampled |psi'| reaches zero on the closed disk");
        // segment crossing check on the boundary polygon
        auto crosses = [](cd a, cd b, cd c, cd d) {
            auto orient = [](cd p, cd q, cd r) {
                double v = (q.real() - p.real()) * (r.imag() - p.imag()) -
                           (q.imag() - p.imag()) * (r.real() - p.real());
                return v > 0 ? 1 : (v < 0 ? -1 : 0);
            };
            return orient(a, b, c) != orient(a, b, d) && orient(c, d, a) != orient(c, d, b);
        };
        for (int i = 0; i < nt; ++i)
            for (int j = i + 2; j < nt; ++j) {
                if (i == 0 && j == nt - 1) continue;  // adjacent around the seam
                if (crosses(bd[i], bd[(i + 1) % nt], bd[j], bd[(j + 1) % nt]))
                    throw ConfigError("ConformalMap: boundary image is not a simple curve");
            }
    }

  private:
    MapFn psi_, dpsi_;
    std::string name_;
};

struct PulledBackProblem {
    Coefficient coefficient;
    BoundarySpectrum boundary_data;
};

/// Samples nu and the boundary data from Omega onto the disk through psi.
/// For analytic psi the Wirtinger chain rule gives
/// dbar(nu o psi) = (dbar nu)(psi) conj(psi').
inline PulledBackProblem pullback_problem(const ConformalMap& map, const GridPtr& g,
                                          const Coefficient::RealFn& nu_omega,
                                          const Coefficient::ComplexFn& dbar_nu_omega,
                                          const std::function<double(double, double)>& data_omega) {
    map.validate(g);
    auto nu = [&map, nu_omega](double x, double y) {
        cd w = map.map(cd(x, y));
        return nu_omega(w.real(), w.imag());
    };
    auto dbar = [&map, dbar_nu_omega](double x, double y) {
        cd z(x, y);
        cd w = map.map(z);
        return dbar_nu_omega(w.real(), w.imag()) * std::conj(map.derivative(z));
    };
    PulledBackProblem out{Coefficient::from_callables(g, nu, dbar),
                          BoundarySpectrum(g->n_theta(), true)};
    std::vector<double> bd(g->n_theta());
    for (int k = 0; k < g->n_theta(); ++k) {
        cd w = map.map(std::polar(1.0, g->circle.theta(k)));
        bd[k] = data_omega(w.real(), w.imag());
    }
    out.boundary_data = BoundarySpectrum::from_real_samples(bd);
    return out;
}

struct TransportedPoint {
    cd location;  // psi(z)
    cd value;
};

/// Pairs the disk solution's grid values with their image coordinates; no
/// inverse map is ever required.
inline std::vector<TransportedPoint> pushforward_solution(const ConformalMap& map,
                                                          const DiskField& disk_solution) {
    const GridPtr& g = disk_solution.grid();
    std::vector<cd> s = synthesize(disk_solution);
    std::vector<TransportedPoint> out;
    out.reserve(s.size());
    for (int j = 0; j < g->n_radial(); ++j)
        for (int k = 0; k < g->n_theta(); ++k) {
            cd z = std::polar(g->radial.nodes[j], g->circle.theta(k));
            out.push_back({map.map(z), s[static_cast<std::size_t>(j) * g->n_theta() + k]});
        }
    return out;
}

/// Independent check that transported values satisfy div(sigma grad u) = 0 on
/// the image mesh: local least-squares polynomial fits of degree `deg` over
/// an index neighbourhood around interior check points, generalized finite
/// differences on the irregular mesh. Returns the maximum relative residual.
inline double image_mesh_pde_residual(const ConformalMap& map, const DiskField& u_disk,
                                      const Coefficient::RealFn& sigma_omega,
                                      int deg = 8, int halo = 6) {
    const GridPtr& g = u_disk.grid();
    const int nt = g->n_theta(), nr = g->n_radial();
    std::vector<cd> s = synthesize(u_disk);
    // check points: away from the center (mesh degenerates) and the rim
    std::vector<std::pair<int, int>> checks;
    for (int j = nr / 3; j < nr - 8; j += 7)
        for (int k = 0; k < nt; k += nt / 8) checks.emplace_back(j, k);

    const int nc = (deg + 1) * (deg + 2) / 2;
    double worst = 0.0, scale = 0.0;
    std::vector<double> A, rhs_re;
    for (auto [j0, k0] : checks) {
        cd w0 = map.map(std::polar(g->radial.nodes[j0], g->circle.theta(k0)));
        A.clear();
        rhs_re.clear();
        double h = 0.0;
        for (int dj = -halo; dj <= halo; ++dj) {
            int j = j0 + dj;
            if (j < 0 || j >= nr) continue;
            for (int dk = -halo; dk <= halo; ++dk) {
                int k = (k0 + dk + nt) % nt;
                cd w = map.map(std::polar(g->radial.nodes[j], g->circle.theta(k))) - w0;
                h = std::max(h, std::abs(w));
                double row[2] = {w.real(), w.imag()};
                for (int px = 0; px <= deg; ++px)
                    for (int py = 0; py + px <= deg; ++py)
                        A.push_back(std::pow(row[0], px) * std::pow(row[1], py));
                rhs_re.push_back(s[static_cast<std::size_t>(j) * nt + k].real());
            }
        }
        const int m = static_cast<int>(rhs_re.size());
        // normal equations with mild scaling by h
        std::vector<double> At(nc * nc, 0.0), bt(nc, 0.0);
        std::vector<double> colscale(nc, 1.0);
        {
            int c = 0;
            for (int px = 0; px <= deg; ++px)
                for (int py = 0; py + px <= deg; ++py) colscale[c++] = std::pow(h, px + py);
        }
        for (int r = 0; r < m; ++r)
            for (int a = 0; a < nc; ++a) {
                double va = A[static_cast<std::size_t>(r) * nc + a] / colscale[a];
                bt[a] += va * rhs_re[r];
                for (int b = 0; b <= a; ++b)
                    At[a * nc + b] += va * A[static_cast<std::size_t>(r) * nc + b] / colscale[b];
            }
        for (int a = 0; a < nc; ++a)
            for (int b = a + 1; b < nc; ++b) At[a * nc + b] = At[b * nc + a];
        std::vector<double> coef;
        try {
            coef = detail::spd_solve(At, bt, 1e-24);
        } catch (const SolveError&) {
            continue;
        }
        // index map for monomial (px, py)
        auto cidx = [deg](int px, int py) {
            int c = 0;
            for (int a = 0; a < px; ++a) c += deg + 1 - a;
            return c + py;
        };
        double ux = coef[cidx(1, 0)] / colscale[cidx(1, 0)];
        double uy = coef[cidx(0, 1)] / colscale[cidx(0, 1)];
        double uxx = 2.0 * coef[cidx(2, 0)] / colscale[cidx(2, 0)];
        double uyy = 2.0 * coef[cidx(0, 2)] / colscale[cidx(0, 2)];
        // sigma and its gradient at the check point by central differences
        double eps = 1e-6;
        double sg = sigma_omega(w0.real(), w0.imag());
        double sgx = (sigma_omega(w0.real() + eps, w0.imag()) -
                      sigma_omega(w0.real() - eps, w0.imag())) /
                     (2 * eps);
        double sgy = (sigma_omega(w0.real(), w0.imag() + eps) -
                      sigma_omega(w0.real(), w0.imag() - eps)) /
                     (2 * eps);
        double resid = sg * (uxx + uyy) + sgx * ux + sgy * uy;
        double local = std::abs(sg) * (std::abs(uxx) + std::abs(uyy)) +
                       std::abs(sgx * ux) + std::abs(sgy * uy);
        worst = std::max(worst, std::abs(resid));
        scale = std::max(scale, local);
    }
    return worst / std::max(scale, 1e-300);
}

}  // namespace beltrami
