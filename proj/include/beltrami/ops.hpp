#pragma once

#include "beltrami/grid.hpp"

namespace beltrami {

// ---------------------------------------------------------------------------
// Singular integral operators on the disk discretization.
//
// The areal Cauchy transform  Tw(z) = (1/2 pi i) \iint_D w(xi)/(xi - z)
// dxi ^ dxi-bar  is diagonal in the angular modes: expanding the kernel shows
// that output mode m receives only input mode n = m + 1, through radial
// integrals
//
//   m <= -1:  (Tw)_m(r) = +2 \int_0^r w_n(rho) (rho/r)^{1-n} drho
//   m >=  0:  (Tw)_m(r) = -2 \int_r^1 w_n(rho) (r/rho)^{n-1} drho
//
// written here in ratio form so that no power overflows for |n| up to the
// band limit. The workspace caches, per input mode, the dense map from
// profile samples to these integrals at every node radius and at r = 1 (the
// exact trace). Within a panel the profile is its degree-(q-1) interpolant;
// integrals are exact for weight exponents e <= q-1 and elsewhere use
// geometric sub-intervals matched to the exp(e log(rho/x)) boundary layer.
// ---------------------------------------------------------------------------

class OperatorWorkspace {
  public:
    explicit OperatorWorkspace(GridPtr g) : g_(std::move(g)) {
        const int M = g_->max_mode();
        tables_.resize(2 * M + 1);
        parallel_for(0, static_cast<std::size_t>(2 * M + 1),
                     [this, M](std::size_t idx) { build_mode(static_cast<int>(idx) - M); });
    }

    const GridPtr& grid() const { return g_; }

    /// Row-major (N_r + 1) x N_r map for input mode n; row N_r is r = 1.
    const std::vector<double>& table(int n) const { return tables_[n + g_->max_mode()]; }

  private:
    void build_mode(int n) {
        const RadialRule& rad = g_->radial;
        const int nr = rad.size();
        std::vector<double>& tab = tables_[n + g_->max_mode()];
        tab.assign(static_cast<std::size_t>(nr + 1) * nr, 0.0);
        const int e = n <= 0 ? 1 - n : n - 1;
        for (int row = 0; row <= nr; ++row) {
            double x = row < nr ? rad.nodes[row] : 1.0;
            if (n <= 0) {
                accumulate_range(tab.data() + static_cast<std::size_t>(row) * nr,
                                 0.0, x, x, e, /*decay_left=*/true);
            } else if (x < 1.0) {
                accumulate_range(tab.data() + static_cast<std::size_t>(row) * nr,
                                 x, 1.0, x, e, /*decay_left=*/false);
            }
        }
    }

    /// Adds quadrature weights for \int_lo^hi f(rho) ratio(rho)^e drho to
    /// `out`, where ratio = rho/x (decay_left) or x/rho, and f is carried by
    /// its per-panel interpolant through the rule's nodes.
    void accumulate_range(double* out, double lo, double hi, double x, int e,
                          bool decay_left) {
        const RadialRule& rad = g_->radial;
        const int q = rad.nodes_per_panel;
        // cutoff: contributions below exp(-45) of the peak are dropped
        const double log_cut = 45.0;
        const double span = 1.25;  // decay units per sub-interval
        for (int p = 0; p < rad.n_panels; ++p) {
            double a = std::max(lo, rad.panel_lo[p]);
            double b = std::min(hi, rad.panel_hi[p]);
            if (a >= b) continue;
            // negligible-portion skip
            if (e > 0) {
                double best = decay_left ? b : a;  // rho nearest x
                double lg = decay_left ? e * std::log(best / x) : e * std::log(x / best);
                if (lg < -log_cut) continue;
            }
            std::vector<double> cuts;
            cuts.push_back(a);
            if (e > 2) {
                // geometric breakpoints x * exp(-+span k/e), clipped to [a, b]
                std::vector<double> marks;
                for (int k = 1; k * span <= log_cut + span; ++k) {
                    double rho = decay_left ? x * std::exp(-span * k / e)
                                            : x * std::exp(span * k / e);
                    if (rho > a && rho < b) marks.push_back(rho);
                    if (decay_left && rho <= a) break;
                    if (!decay_left && rho >= b) break;
                }
                std::sort(marks.begin(), marks.end());
                for (double m : marks) cuts.push_back(m);
            }
            cuts.push_back(b);
            for (std::size_t s = 0; s + 1 < cuts.size(); ++s)
                accumulate_gauss(out, p, cuts[s], cuts[s + 1], x, e, decay_left);
        }
    }

    void accumulate_gauss(double* out, int panel, double a, double b, double x,
                          int e, bool decay_left) {
        const RadialRule& rad = g_->radial;
        const int q = rad.nodes_per_panel;
        static thread_local std::vector<double> gx, gw;
        if (gx.empty()) gauss::legendre(12, gx, gw);
        const double pa = rad.panel_lo[panel], pb = rad.panel_hi[panel];
        for (std::size_t i = 0; i < gx.size(); ++i) {
            double rho = 0.5 * (a + b) + 0.5 * (b - a) * gx[i];
            double w = 0.5 * (b - a) * gw[i];
            double lg = e == 0 ? 0.0
                               : (decay_left ? e * std::log(rho / x)
                                             : e * std::log(x / rho));
            double weight = w * std::exp(lg);
            // spread onto the panel's nodes with barycentric coefficients
            double t = (2.0 * rho - pa - pb) / (pb - pa);
            double den = 0.0;
            bool hit = false;
            for (int j = 0; j < q; ++j) {
                double d = t - rad.ref_nodes[j];
                if (std::abs(d) < 1e-14) {
                    out[panel * q + j] += weight;
                    hit = true;
                    break;
                }
                den += rad.ref_bary[j] / d;
            }
            if (hit) continue;
            for (int j = 0; j < q; ++j) {
                double c = rad.ref_bary[j] / (t - rad.ref_nodes[j]);
                out[panel * q + j] += weight * c / den;
            }
        }
    }

    GridPtr g_;
    std::vector<std::vector<double>> tables_;
};

// ---------------------------------------------------------------------------
// Boundary operators
// ---------------------------------------------------------------------------

/// Cauchy integral of boundary data: holomorphic field with mode-n profile
/// psi_n r^n for n >= 0. The exact trace (= P_+ psi) is attached.
inline DiskField cauchy_boundary(const GridPtr& g, const BoundarySpectrum& psi) {
    DiskField out(g);
    const int M = g->max_mode(), nr = g->n_radial();
    for (int n = 0; n <= M; ++n) {
        cd c = psi.coeff(n);
        if (c == cd(0, 0)) continue;
        for (int j = 0; j < nr; ++j)
            out.set_profile(n, j, c * std::pow(g->radial.nodes[j], n));
    }
    BoundarySpectrum tr(g->n_theta());
    for (int n = 0; n <= M; ++n) tr.set_coeff(n, psi.coeff(n));
    out.attach_trace(std::move(tr));
    return out;
}

/// P_+: zero the negative-index coefficients. Idempotent.
inline BoundarySpectrum analytic_projection(const BoundarySpectrum& psi) {
    BoundarySpectrum out(psi.n_theta());
    for (int n = 0; n <= psi.max_mode(); ++n) out.set_coeff(n, psi.coeff(n));
    return out;
}

/// Harmonic conjugation H_0 (Fourier multiplier -i sgn n), zero-mean output;
/// phi + i H_0 phi has only nonnegative modes.
inline BoundarySpectrum conjugation_h0(const BoundarySpectrum& phi) {
    if (!phi.is_real_valued() || phi.real_symmetry_defect() > 1e-10)
        throw ConfigError("conjugation_h0: input must be real-valued");
    BoundarySpectrum out(phi.n_theta(), true);
    const int M = phi.max_mode();
    for (int n = 1; n <= M; ++n) {
        out.set_coeff(n, cd(0, -1) * phi.coeff(n));
        out.set_coeff(-n, cd(0, 1) * phi.coeff(-n));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Areal operators
// ---------------------------------------------------------------------------

/// Areal Cauchy transform T. Satisfies dbar(Tw) = w spectrally; the exact
/// trace is attached (nonzero only in modes m <= -1).
inline DiskField cauchy_area(const OperatorWorkspace& ws, const DiskField& w) {
    const GridPtr& g = ws.grid();
    const int M = g->max_mode(), nr = g->n_radial();
    DiskField out(g);
    BoundarySpectrum tr(g->n_theta());
    for (int n = -M + 1; n <= M; ++n) {
        const int m = n - 1;  // output mode
        const std::vector<double>& tab = ws.table(n);
        const cd* in = w.mode_row(n);
        cd* o = out.mode_row(m);
        const double sign = n <= 0 ? 2.0 : -2.0;
        for (int row = 0; row < nr; ++row) {
            const double* trow = tab.data() + static_cast<std::size_t>(row) * nr;
            cd acc(0, 0);
            for (int i = 0; i < nr; ++i) acc += trow[i] * in[i];
            o[row] = sign * acc;
        }
        if (n <= 0) {
            const double* trow = tab.data() + static_cast<std::size_t>(nr) * nr;
            cd acc(0, 0);
            for (int i = 0; i < nr; ++i) acc += trow[i] * in[i];
            tr.set_coeff(m, 2.0 * acc);
        }
    }
    out.attach_trace(std::move(tr));
    return out;
}

enum class ReflectSign { plus, minus };

/// The reflected summand of the s-kernel:
///   +- (1/2 pi i) \iint_D z conj(r(zeta)) / (1 - conj(zeta) z) dzeta ^ dzeta-bar,
/// holomorphic in z (output modes m >= 1 only, profiles proportional to r^m);
/// exact trace attached.
inline DiskField reflect_area(const OperatorWorkspace& ws, const DiskField& r_field,
                              ReflectSign sign = ReflectSign::plus) {
    const GridPtr& g = ws.grid();
    const int M = g->max_mode(), nr = g->n_radial();
    const double sgn = sign == ReflectSign::plus ? 1.0 : -1.0;
    DiskField out(g);
    BoundarySpectrum tr(g->n_theta());
    for (int m = 1; m <= M; ++m) {
        const int n_in = 1 - m;                     // contributing input mode
        const std::vector<double>& tab = ws.table(n_in);  // weight rho^{1-n_in} = rho^m
        const double* brow = tab.data() + static_cast<std::size_t>(nr) * nr;
        const cd* in = r_field.mode_row(n_in);
        cd acc(0, 0);
        for (int i = 0; i < nr; ++i) acc += brow[i] * std::conj(in[i]);
        cd coeff = sgn * -2.0 * acc;
        cd* o = out.mode_row(m);
        for (int j = 0; j < nr; ++j) o[j] = coeff * std::pow(g->radial.nodes[j], m);
        tr.set_coeff(m, coeff);
    }
    out.attach_trace(std::move(tr));
    return out;
}

/// Beurling transform S restricted to the disk, obtained by differentiating
/// the mode-wise cauchy_area formulas in z:
///   (Sw)_l(r) = (l+1)/r (Tw)_{l+1}(r) + w_{l+2}(r).
inline DiskField beurling(const OperatorWorkspace& ws, const DiskField& w) {
    const GridPtr& g = ws.grid();
    const int M = g->max_mode(), nr = g->n_radial();
    DiskField tw = cauchy_area(ws, w);
    DiskField out(g);
    for (int l = -M; l <= M; ++l) {
        cd* o = out.mode_row(l);
        if (l + 1 >= -M && l + 1 <= M) {
            const cd* t = tw.mode_row(l + 1);
            for (int j = 0; j < nr; ++j)
                o[j] += static_cast<double>(l + 1) / g->radial.nodes[j] * t[j];
        }
        if (l + 2 >= -M && l + 2 <= M) {
            const cd* p = w.mode_row(l + 2);
            for (int j = 0; j < nr; ++j) o[j] += p[j];
        }
    }
    return out;
}

enum class TraceKind { cauchy_image, smooth };

/// Boundary trace. cauchy_image demands the exact trace attached by
/// cauchy_area/reflect_area/cauchy_boundary; smooth extrapolates the radial
/// profiles through the outermost 4 nodes (divergence guarded).
inline BoundarySpectrum trace_at_boundary(const DiskField& f, TraceKind kind,
                                          double growth_bound = 10.0) {
    if (kind == TraceKind::cauchy_image) {
        if (!f.attached_trace())
            throw ConfigError("trace_at_boundary: field carries no exact boundary trace");
        return *f.attached_trace();
    }
    return extrapolated_trace(f, growth_bound);
}

// ---------------------------------------------------------------------------
// Spectral Wirtinger derivatives (panel-collocation radial derivative)
// ---------------------------------------------------------------------------

/// dbar f; output mode m = (1/2)(p'_{m-1} - (m-1) p_{m-1}/r). The radial
/// derivative respects the r^{|k|} structure of mode-k profiles.
inline DiskField dbar_field(const DiskField& f) {
    const GridPtr& g = f.grid();
    const int M = g->max_mode(), nr = g->n_radial();
    DiskField out(g);
    for (int k = -M; k <= M - 1; ++k) {  // input mode k -> output mode k+1
        std::vector<cd> prof = f.mode_profile(k);
        std::vector<cd> dp = g->radial.differentiate_weighted(prof, std::abs(k));
        cd* o = out.mode_row(k + 1);
        for (int j = 0; j < nr; ++j)
            o[j] = 0.5 * (dp[j] - static_cast<double>(k) * prof[j] / g->radial.nodes[j]);
    }
    return out;
}

/// d f; output mode m = (1/2)(p'_{m+1} + (m+1) p_{m+1}/r).
inline DiskField d_field(const DiskField& f) {
    const GridPtr& g = f.grid();
    const int M = g->max_mode(), nr = g->n_radial();
    DiskField out(g);
    for (int k = -M + 1; k <= M; ++k) {  // input mode k -> output mode k-1
        std::vector<cd> prof = f.mode_profile(k);
        std::vector<cd> dp = g->radial.differentiate_weighted(prof, std::abs(k));
        cd* o = out.mode_row(k - 1);
        for (int j = 0; j < nr; ++j)
            o[j] = 0.5 * (dp[j] + static_cast<double>(k) * prof[j] / g->radial.nodes[j]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Dense quadrature oracle
// ---------------------------------------------------------------------------

enum class DenseKind { T, reflect };

struct DenseOracleResult {
    DiskField field;
    /// Bound on the contribution omitted by skipping the singular cell
    /// (T only; the 1/(xi - z) singularity is integrable).
    double singular_cell_bound = 0.0;
};

/// Brute-force 2D quadrature of the defining integrals at every grid point.
/// The quadrature runs on a 2x refined tensor grid (sources interpolated from
/// the band-limited representation); cells overlapping the target are omitted
/// for T (integrable singularity). Intended for small grids; guarded against
/// accidental O(N^4) runs.
inline DenseOracleResult oracle_dense(const DiskField& w, DenseKind which) {
    const GridPtr& g = w.grid();
    const int nt = g->n_theta(), nr = g->n_radial();
    if (nt > 64 || nr > 24)
        throw ConfigError("oracle_dense: grid too large (use n_theta <= 64, N_r <= 24)");
    // refined quadrature grid
    const int ntf = 4 * nt;
    RadialRule fine(3 * g->radial.n_panels, g->radial.nodes_per_panel);
    const int nrf = fine.size();
    std::vector<cd> coarse = synthesize(w, ntf);  // theta-refined samples at coarse radii
    // radial interpolation of each theta-column's panel interpolant
    std::vector<cd> src(static_cast<std::size_t>(nrf) * ntf);
    {
        std::vector<cd> col(nr);
        for (int k = 0; k < ntf; ++k) {
            for (int j = 0; j < nr; ++j) col[j] = coarse[static_cast<std::size_t>(j) * ntf + k];
            for (int i = 0; i < nrf; ++i)
                src[static_cast<std::size_t>(i) * ntf + k] =
                    g->radial.interpolate(col, fine.nodes[i]);
        }
    }
    const double dth = 2.0 * pi / ntf;
    double wsup = 0.0;
    for (const cd& v : src) wsup = std::max(wsup, std::abs(v));
    double max_cell_area = 0.0;
    for (int i = 0; i < nrf; ++i)
        max_cell_area = std::max(max_cell_area, fine.weights_rho[i] * dth);

    std::vector<cd> out(static_cast<std::size_t>(nt) * nr);
    parallel_for(0, static_cast<std::size_t>(nr), [&](std::size_t tj) {
        for (int tk = 0; tk < nt; ++tk) {
            cd z = std::polar(g->radial.nodes[tj], g->circle.theta(tk));
            cd acc(0, 0);
            for (int i = 0; i < nrf; ++i) {
                double wq = fine.weights_rho[i] * dth;
                double cell = std::sqrt(wq);
                for (int l = 0; l < ntf; ++l) {
                    cd xi = std::polar(fine.nodes[i], dth * l);
                    cd v = src[static_cast<std::size_t>(i) * ntf + l];
                    if (which == DenseKind::T) {
                        if (std::abs(xi - z) < 0.75 * cell) continue;  // singular cell
                        acc += v / (xi - z) * wq;
                    } else {
                        acc += std::conj(v) * z / (1.0 - std::conj(xi) * z) * wq;
                    }
                }
            }
            out[tj * nt + tk] = -acc / pi;
        }
    });
    DenseOracleResult res;
    res.field = analyze(g, out);
    // \int_cell dm/|xi-z| <= 2 sqrt(pi A) by symmetric rearrangement
    res.singular_cell_bound = wsup / pi * 2.0 * std::sqrt(pi * max_cell_area);
    return res;
}

}  // namespace beltrami
