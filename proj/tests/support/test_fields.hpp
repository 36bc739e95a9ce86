#pragma once

#include "beltrami/grid.hpp"

namespace beltrami::testing {

/// Random polynomial in z and conj(z) of total degree <= deg: smooth radial
/// profiles (monomials r^{j+k}), angular band |n| <= deg.
inline DiskField random_polynomial_field(const GridPtr& g, Rng& rng, int deg) {
    const int nr = g->n_radial();
    DiskField out(g);
    for (int j = 0; j <= deg; ++j) {
        for (int k = 0; j + k <= deg; ++k) {
            cd a = rng.complex_sym();
            int n = j - k;
            for (int i = 0; i < nr; ++i) {
                double rp = std::pow(g->radial.nodes[i], j + k);
                out.set_profile(n, i, out.profile(n, i) + a * rp);
            }
        }
    }
    return out;
}

/// Random band-limited field with smooth profiles r^{|n|} (1 + a r + b r^2).
inline DiskField random_smooth_field(const GridPtr& g, Rng& rng, int band) {
    const int nr = g->n_radial();
    DiskField out(g);
    for (int n = -band; n <= band; ++n) {
        cd c = rng.complex_sym();
        double a = rng.sym(), b = rng.sym();
        for (int i = 0; i < nr; ++i) {
            double r = g->radial.nodes[i];
            out.set_profile(n, i, c * std::pow(r, std::abs(n)) * (1.0 + a * r + b * r * r));
        }
    }
    return out;
}

/// Random real trigonometric polynomial of degree <= deg on the circle.
inline BoundarySpectrum random_real_trig(int n_theta, Rng& rng, int deg) {
    BoundarySpectrum out(n_theta, true);
    out.set_coeff(0, cd(rng.sym(), 0));
    for (int n = 1; n <= deg && n <= out.max_mode(); ++n) {
        cd c = 0.5 * rng.complex_sym();
        out.set_coeff(n, c);
        out.set_coeff(-n, std::conj(c));
    }
    return out;
}

/// Random complex spectrum of degree <= deg.
inline BoundarySpectrum random_spectrum(int n_theta, Rng& rng, int deg) {
    BoundarySpectrum out(n_theta, false);
    for (int n = -deg; n <= deg; ++n)
        if (std::abs(n) <= out.max_mode()) out.set_coeff(n, rng.complex_sym());
    return out;
}

/// The monomial field z^k (k >= 0) or conj(z)^{-k} (k < 0).
inline DiskField monomial_field(const GridPtr& g, int k) {
    DiskField out(g);
    for (int j = 0; j < g->n_radial(); ++j)
        out.set_profile(k, j, std::pow(g->radial.nodes[j], std::abs(k)));
    return out;
}

inline double rel_field_err(const DiskField& a, const DiskField& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.raw().size(); ++i) {
        num += std::norm(a.raw()[i] - b.raw()[i]);
        den += std::norm(b.raw()[i]);
    }
    return den > 0 ? std::sqrt(num / den) : std::sqrt(num);
}

inline double rel_spec_err(const BoundarySpectrum& a, const BoundarySpectrum& b) {
    double num = 0.0, den = 0.0;
    int M = a.max_mode();
    for (int n = -M; n <= M; ++n) {
        num += std::norm(a.coeff(n) - b.coeff(n));
        den += std::norm(b.coeff(n));
    }
    return den > 0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace beltrami::testing
