#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>

#include "beltrami/common.hpp"
#include "beltrami/fourier.hpp"

namespace beltrami {

// ---------------------------------------------------------------------------
// Discretization of the unit disk: equispaced angles on the circle, composite
// Gauss-Legendre panels in the radius. A function on the disk is carried as
// complex Fourier modes n = -M..M (M = n_theta/2 - 1, Nyquist bin dropped)
// with one radial profile per mode ("DiskField"); a function on the circle is
// carried as the coefficient array alone ("BoundarySpectrum").
//
// Conventions used throughout:
//   L^p(T_r) norm  = (1/2pi \int_0^{2pi} |f(r e^{i theta})|^p dtheta)^{1/p}
//   tangential derivative on T:  d_t = d_theta / (2 pi)
//   planar measure dm = rho drho dtheta; radial weights integrate g against
//   rho drho on (0,1).
// ---------------------------------------------------------------------------

namespace gauss {

/// Nodes/weights of the m-point Gauss-Legendre rule on [-1, 1].
inline void legendre(int m, std::vector<double>& x, std::vector<double>& w) {
    x.assign(m, 0.0);
    w.assign(m, 0.0);
    for (int i = 0; i < m; ++i) {
        // Chebyshev initial guess + Newton on P_m.
        double t = std::cos(pi * (i + 0.75) / (m + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int k = 2; k <= m; ++k) {
                double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = m * (t * p1 - p0) / (t * t - 1.0);
            double dt = p1 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        double p0 = 1.0, p1 = t;
        for (int k = 2; k <= m; ++k) {
            double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        double dp = m * (t * p1 - p0) / (t * t - 1.0);
        x[m - 1 - i] = t;
        w[m - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
}

}  // namespace gauss

struct CircleGrid {
    int n_theta = 256;

    explicit CircleGrid(int n = 256) : n_theta(n) {
        if (n_theta < 16 || (n_theta & (n_theta - 1)) != 0)
            throw ConfigError("CircleGrid: n_theta must be a power of two >= 16");
    }

    int max_mode() const { return n_theta / 2 - 1; }
    int n_modes() const { return n_theta - 1; }
    double theta(int k) const { return 2.0 * pi * k / n_theta; }
};

/// Composite Gauss-Legendre rule on (0,1) for integrals against rho drho.
/// Panel-local node data double as a spectral element basis: barycentric
/// weights for interpolation and a collocation differentiation matrix.
struct RadialRule {
    int n_panels = 8;
    int nodes_per_panel = 8;
    std::vector<double> nodes;          // strictly increasing, in (0,1)
    std::vector<double> weights_rho;    // for \int g(rho) rho drho
    std::vector<double> weights_plain;  // for \int g(rho) drho
    std::vector<double> panel_lo, panel_hi;
    std::vector<double> ref_nodes;      // panel-local nodes on [-1,1]
    std::vector<double> ref_bary;       // barycentric weights on ref_nodes
    std::vector<double> ref_diff;       // differentiation matrix on [-1,1]

    RadialRule(int panels = 8, int per_panel = 8)
        : n_panels(panels), nodes_per_panel(per_panel) {
        if (panels < 1 || per_panel < 2) throw ConfigError("RadialRule: bad sizes");
        std::vector<double> gx, gw;
        gauss::legendre(per_panel, gx, gw);
        ref_nodes = gx;
        for (int p = 0; p < panels; ++p) {
            double a = static_cast<double>(p) / panels;
            double b = static_cast<double>(p + 1) / panels;
            panel_lo.push_back(a);
            panel_hi.push_back(b);
            for (int i = 0; i < per_panel; ++i) {
                double r = 0.5 * (a + b) + 0.5 * (b - a) * gx[i];
                double w = 0.5 * (b - a) * gw[i];
                nodes.push_back(r);
                weights_plain.push_back(w);
                weights_rho.push_back(w * r);
            }
        }
        // barycentric weights on the reference nodes
        ref_bary.assign(per_panel, 1.0);
        for (int i = 0; i < per_panel; ++i)
            for (int j = 0; j < per_panel; ++j)
                if (j != i) ref_bary[i] /= (ref_nodes[i] - ref_nodes[j]);
        // collocation differentiation matrix on [-1,1]
        ref_diff.assign(per_panel * per_panel, 0.0);
        for (int i = 0; i < per_panel; ++i) {
            double diag = 0.0;
            for (int j = 0; j < per_panel; ++j) {
                if (j == i) continue;
                double d = (ref_bary[j] / ref_bary[i]) / (ref_nodes[i] - ref_nodes[j]);
                ref_diff[i * per_panel + j] = d;
                diag -= d;
            }
            ref_diff[i * per_panel + i] = diag;
        }
    }

    int size() const { return static_cast<int>(nodes.size()); }
    /// Largest degree d such that monomials rho^k, k <= d, are integrated
    /// exactly against rho drho.
    int exact_degree() const { return 2 * nodes_per_panel - 2; }

    int panel_of_node(int j) const { return j / nodes_per_panel; }

    int panel_of_radius(double r) const {
        int p = static_cast<int>(std::floor(r * n_panels));
        return std::clamp(p, 0, n_panels - 1);
    }

    /// Barycentric evaluation of the panel interpolant of per-node values
    /// (vals indexed like nodes) at radius r in [0,1].
    template <typename T>
    T interpolate(const std::vector<T>& vals, double r) const {
        int p = panel_of_radius(r);
        double a = panel_lo[p], b = panel_hi[p];
        double t = (2.0 * r - a - b) / (b - a);
        const int m = nodes_per_panel;
        T num{};
        double den = 0.0;
        for (int i = 0; i < m; ++i) {
            double d = t - ref_nodes[i];
            if (std::abs(d) < 1e-14) return vals[p * m + i];
            double c = ref_bary[i] / d;
            num += vals[p * m + i] * c;
            den += c;
        }
        return num * (1.0 / den);
    }

    /// Derivative of the panel interpolant at the panel's own nodes.
    template <typename T>
    std::vector<T> differentiate(const std::vector<T>& vals) const {
        const int m = nodes_per_panel;
        std::vector<T> out(vals.size());
        for (int p = 0; p < n_panels; ++p) {
            double scale = 2.0 / (panel_hi[p] - panel_lo[p]);
            for (int i = 0; i < m; ++i) {
                T acc{};
                for (int j = 0; j < m; ++j)
                    acc += vals[p * m + j] * ref_diff[i * m + j];
                out[p * m + i] = acc * scale;
            }
        }
        return out;
    }

    /// Derivative of p(r) = r^k q(r) with q the panel interpolant of
    /// p(r_j) r_j^{-k}: exact when q is a panel polynomial, which is the
    /// natural radial structure of an angular mode of order k. Evaluated in
    /// ratio form (r_ref/r)^k against the panel's right edge so nothing
    /// overflows; where the ratio exponent would overflow, the profile itself
    /// has underflowed and the contribution is zero.
    template <typename T>
    std::vector<T> differentiate_weighted(const std::vector<T>& vals, int k) const {
        if (k <= 0) return differentiate(vals);
        const int m = nodes_per_panel;
        std::vector<T> out(vals.size());
        std::vector<T> q(m);
        std::vector<double> s(m);
        for (int p = 0; p < n_panels; ++p) {
            double scale = 2.0 / (panel_hi[p] - panel_lo[p]);
            double lref = std::log(nodes[p * m + m - 1]);
            // The rescaling amplifies absolute errors of the samples by up to
            // exp(k * panel log-width); restrict to panels where that factor
            // is modest. Those are exactly the panels where r^k varies fast
            // enough for the plain derivative to struggle.
            bool usable = k * (lref - std::log(nodes[p * m])) <= 5.0;
            double qmax = 0.0, qright = 0.0;
            for (int i = 0; usable && i < m; ++i) {
                s[i] = k * (lref - std::log(nodes[p * m + i]));
                q[i] = vals[p * m + i] * std::exp(s[i]);
                qmax = std::max(qmax, std::abs(q[i]));
                if (i >= m - 3) qright = std::max(qright, std::abs(q[i]));
            }
            // guard: rescaled samples of a genuine r^k profile are flat
            if (usable && qmax > 1e3 * qright) usable = false;
            if (!usable) {
                for (int i = 0; i < m; ++i) {
                    T acc{};
                    for (int j = 0; j < m; ++j)
                        acc += vals[p * m + j] * ref_diff[i * m + j];
                    out[p * m + i] = acc * scale;
                }
                continue;
            }
            for (int i = 0; i < m; ++i) {
                T acc{};
                for (int j = 0; j < m; ++j) acc += q[j] * ref_diff[i * m + j];
                out[p * m + i] = vals[p * m + i] * (static_cast<double>(k) / nodes[p * m + i]) +
                                 acc * scale * std::exp(-s[i]);
            }
        }
        return out;
    }
};

struct Grid {
    CircleGrid circle;
    RadialRule radial;

    Grid(int n_theta = 256, int panels = 8, int per_panel = 8)
        : circle(n_theta), radial(panels, per_panel) {}

    int n_theta() const { return circle.n_theta; }
    int max_mode() const { return circle.max_mode(); }
    int n_modes() const { return circle.n_modes(); }
    int n_radial() const { return radial.size(); }
};

using GridPtr = std::shared_ptr<const Grid>;

inline GridPtr make_grid(int n_theta = 256, int panels = 8, int per_panel = 8) {
    return std::make_shared<const Grid>(n_theta, panels, per_panel);
}

// ---------------------------------------------------------------------------
// BoundarySpectrum
// ---------------------------------------------------------------------------

class BoundarySpectrum {
  public:
    BoundarySpectrum() = default;
    explicit BoundarySpectrum(int n_theta, bool real_valued = false)
        : n_theta_(n_theta), real_(real_valued), c_(n_theta - 1, cd(0, 0)) {}

    int n_theta() const { return n_theta_; }
    int max_mode() const { return n_theta_ / 2 - 1; }
    bool is_real_valued() const { return real_; }
    void set_real_valued(bool b) { real_ = b; }

    cd coeff(int n) const {
        int M = max_mode();
        return (n < -M || n > M) ? cd(0, 0) : c_[n + M];
    }
    void set_coeff(int n, cd v) {
        int M = max_mode();
        if (n < -M || n > M) throw ConfigError("BoundarySpectrum: mode out of band");
        c_[n + M] = v;
    }
    const std::vector<cd>& raw() const { return c_; }
    std::vector<cd>& raw() { return c_; }

    cd mean() const { return coeff(0); }

    /// Largest violation of coeff(-n) == conj(coeff(n)), relative to sup|coeff|.
    double real_symmetry_defect() const {
        int M = max_mode();
        double worst = 0.0, scale = 0.0;
        for (int n = 0; n <= M; ++n) {
            worst = std::max(worst, std::abs(coeff(-n) - std::conj(coeff(n))));
            scale = std::max({scale, std::abs(coeff(n)), std::abs(coeff(-n))});
        }
        return scale > 0 ? worst / scale : 0.0;
    }

    std::vector<cd> to_samples(int n_out = 0) const {
        int n = n_out == 0 ? n_theta_ : n_out;
        int M = max_mode();
        if (n < n_theta_) throw ConfigError("to_samples: cannot shrink the grid");
        std::vector<cd> bins(n, cd(0, 0));
        for (int m = 0; m <= M; ++m) bins[m] = coeff(m);
        for (int m = 1; m <= M; ++m) bins[n - m] = coeff(-m);
        fft_inverse(bins);
        return bins;
    }

    std::vector<double> to_real_samples(int n_out = 0) const {
        std::vector<cd> s = to_samples(n_out);
        std::vector<double> out(s.size());
        for (std::size_t k = 0; k < s.size(); ++k) out[k] = s[k].real();
        return out;
    }

    static BoundarySpectrum from_samples(const std::vector<cd>& samples) {
        int n = static_cast<int>(samples.size());
        BoundarySpectrum out(n);
        std::vector<cd> bins = samples;
        fft_forward(bins);
        int M = out.max_mode();
        bool real = true;
        for (const cd& v : samples)
            if (std::abs(v.imag()) > 1e-13 * (1.0 + std::abs(v))) real = false;
        for (int m = 0; m <= M; ++m) out.set_coeff(m, bins[m]);
        for (int m = 1; m <= M; ++m) out.set_coeff(-m, bins[n - m]);
        out.real_ = real;
        return out;
    }

    static BoundarySpectrum from_real_samples(const std::vector<double>& samples) {
        std::vector<cd> s(samples.size());
        for (std::size_t k = 0; k < samples.size(); ++k) s[k] = cd(samples[k], 0.0);
        BoundarySpectrum out = from_samples(s);
        out.real_ = true;
        return out;
    }

    BoundarySpectrum deriv_theta() const {
        BoundarySpectrum out(n_theta_, false);
        int M = max_mode();
        for (int n = -M; n <= M; ++n) out.set_coeff(n, coeff(n) * cd(0, n));
        out.real_ = real_;
        return out;
    }

    /// Zero-mean antiderivative in theta; requires (and zeroes) mode 0.
    BoundarySpectrum antideriv_theta() const {
        BoundarySpectrum out(n_theta_, real_);
        int M = max_mode();
        for (int n = -M; n <= M; ++n)
            if (n != 0) out.set_coeff(n, coeff(n) / cd(0, n));
        return out;
    }

    BoundarySpectrum conjugated() const {
        BoundarySpectrum out(n_theta_, real_);
        int M = max_mode();
        for (int n = -M; n <= M; ++n) out.set_coeff(n, std::conj(coeff(-n)));
        return out;
    }

    BoundarySpectrum& operator+=(const BoundarySpectrum& o) {
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
        real_ = real_ && o.real_;
        return *this;
    }
    BoundarySpectrum& operator-=(const BoundarySpectrum& o) {
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
        real_ = real_ && o.real_;
        return *this;
    }
    BoundarySpectrum& operator*=(cd a) {
        for (cd& v : c_) v *= a;
        if (std::abs(a.imag()) > 0) real_ = false;
        return *this;
    }
    friend BoundarySpectrum operator+(BoundarySpectrum a, const BoundarySpectrum& b) { return a += b; }
    friend BoundarySpectrum operator-(BoundarySpectrum a, const BoundarySpectrum& b) { return a -= b; }
    friend BoundarySpectrum operator*(BoundarySpectrum a, cd s) { return a *= s; }

  private:
    int n_theta_ = 0;
    bool real_ = false;
    std::vector<cd> c_;
};

// ---------------------------------------------------------------------------
// DiskField
// ---------------------------------------------------------------------------

class DiskField {
  public:
    DiskField() = default;
    explicit DiskField(GridPtr g) : g_(std::move(g)) {
        prof_.assign(static_cast<std::size_t>(g_->n_modes()) * g_->n_radial(), cd(0, 0));
    }

    const GridPtr& grid() const { return g_; }
    bool empty() const { return prof_.empty(); }

    cd profile(int n, int j) const {
        int M = g_->max_mode();
        if (n < -M || n > M) return cd(0, 0);
        return prof_[static_cast<std::size_t>(n + M) * g_->n_radial() + j];
    }
    void set_profile(int n, int j, cd v) {
        int M = g_->max_mode();
        if (n < -M || n > M) throw ConfigError("DiskField: mode out of band");
        prof_[static_cast<std::size_t>(n + M) * g_->n_radial() + j] = v;
    }
    cd* mode_row(int n) {
        return prof_.data() + static_cast<std::size_t>(n + g_->max_mode()) * g_->n_radial();
    }
    const cd* mode_row(int n) const {
        return prof_.data() + static_cast<std::size_t>(n + g_->max_mode()) * g_->n_radial();
    }
    std::vector<cd> mode_profile(int n) const {
        const cd* row = mode_row(n);
        return std::vector<cd>(row, row + g_->n_radial());
    }
    const std::vector<cd>& raw() const { return prof_; }
    std::vector<cd>& raw() { return prof_; }

    /// Exact boundary trace attached by the integral operators; absent for
    /// generic fields (use extrapolation-based tracing instead).
    const std::optional<BoundarySpectrum>& attached_trace() const { return trace_; }
    void attach_trace(BoundarySpectrum t) { trace_ = std::move(t); }

    /// Value at an interior point by mode synthesis + radial interpolation.
    cd value_at(double r, double theta) const {
        int M = g_->max_mode();
        int nr = g_->n_radial();
        cd z = std::polar(1.0, theta);
        // Horner over modes: sum_n p_n(r) z^n = e^{-i M theta} sum_k p_{k-M}(r) z^k
        cd acc(0, 0);
        std::vector<cd> vals(nr);
        for (int n = M; n >= -M; --n) {
            const cd* row = mode_row(n);
            std::copy(row, row + nr, vals.begin());
            acc = acc * z + g_->radial.interpolate(vals, r);
        }
        return acc * std::polar(1.0, -M * theta);
    }

    DiskField& operator+=(const DiskField& o) {
        for (std::size_t i = 0; i < prof_.size(); ++i) prof_[i] += o.prof_[i];
        if (trace_ && o.trace_) *trace_ += *o.trace_; else trace_.reset();
        return *this;
    }
    DiskField& operator-=(const DiskField& o) {
        for (std::size_t i = 0; i < prof_.size(); ++i) prof_[i] -= o.prof_[i];
        if (trace_ && o.trace_) *trace_ -= *o.trace_; else trace_.reset();
        return *this;
    }
    DiskField& operator*=(cd a) {
        for (cd& v : prof_) v *= a;
        if (trace_) *trace_ *= a;
        return *this;
    }
    friend DiskField operator+(DiskField a, const DiskField& b) { return a += b; }
    friend DiskField operator-(DiskField a, const DiskField& b) { return a -= b; }
    friend DiskField operator*(DiskField a, cd s) { return a *= s; }

    /// Complex conjugate; exact on the spectrum (mode n <- conj(mode -n)).
    DiskField conjugated() const {
        DiskField out(g_);
        int M = g_->max_mode();
        int nr = g_->n_radial();
        for (int n = -M; n <= M; ++n)
            for (int j = 0; j < nr; ++j)
                out.set_profile(n, j, std::conj(profile(-n, j)));
        if (trace_) out.trace_ = trace_->conjugated();
        return out;
    }

    DiskField real_part() const {
        DiskField c = conjugated();
        DiskField out(g_);
        for (std::size_t i = 0; i < prof_.size(); ++i)
            out.prof_[i] = 0.5 * (prof_[i] + c.prof_[i]);
        if (trace_ && c.trace_) {
            BoundarySpectrum t = *trace_;
            t += *c.trace_;
            t *= 0.5;
            t.set_real_valued(true);
            out.trace_ = t;
        }
        return out;
    }

    DiskField imag_part() const {
        DiskField c = conjugated();
        DiskField out(g_);
        for (std::size_t i = 0; i < prof_.size(); ++i)
            out.prof_[i] = cd(0, -0.5) * (prof_[i] - c.prof_[i]);
        if (trace_ && c.trace_) {
            BoundarySpectrum t = *trace_;
            t -= *c.trace_;
            t *= cd(0, -0.5);
            t.set_real_valued(true);
            out.trace_ = t;
        }
        return out;
    }

  private:
    GridPtr g_;
    std::vector<cd> prof_;
    std::optional<BoundarySpectrum> trace_;
};

// ---------------------------------------------------------------------------
// analyze / synthesize
// ---------------------------------------------------------------------------

/// samples[j * n_theta + k] = f(r_j e^{i theta_k}).
inline DiskField analyze(const GridPtr& g, const std::vector<cd>& samples) {
    const int nt = g->n_theta(), nr = g->n_radial(), M = g->max_mode();
    if (static_cast<int>(samples.size()) != nt * nr)
        throw ConfigError("analyze: sample array shape mismatch");
    DiskField out(g);
    std::vector<cd> row(nt);
    for (int j = 0; j < nr; ++j) {
        for (int k = 0; k < nt; ++k) row[k] = samples[static_cast<std::size_t>(j) * nt + k];
        fft_forward(row);
        for (int m = 0; m <= M; ++m) out.set_profile(m, j, row[m]);
        for (int m = 1; m <= M; ++m) out.set_profile(-m, j, row[nt - m]);
        // Nyquist bin nt/2 dropped: band limit of the representation.
    }
    return out;
}

/// Inverse of analyze on the retained band. n_theta_out >= n_theta gives a
/// theta-oversampled (zero-padded) synthesis used for dealiased products.
inline std::vector<cd> synthesize(const DiskField& f, int n_theta_out = 0) {
    const GridPtr& g = f.grid();
    const int nt = n_theta_out == 0 ? g->n_theta() : n_theta_out;
    const int nr = g->n_radial(), M = g->max_mode();
    if (nt < g->n_theta()) throw ConfigError("synthesize: cannot shrink the grid");
    std::vector<cd> out(static_cast<std::size_t>(nt) * nr);
    std::vector<cd> bins(nt);
    for (int j = 0; j < nr; ++j) {
        std::fill(bins.begin(), bins.end(), cd(0, 0));
        for (int m = 0; m <= M; ++m) bins[m] = f.profile(m, j);
        for (int m = 1; m <= M; ++m) bins[nt - m] = f.profile(-m, j);
        fft_inverse(bins);
        for (int k = 0; k < nt; ++k) out[static_cast<std::size_t>(j) * nt + k] = bins[k];
    }
    return out;
}

/// Sample a pointwise function of position onto the grid.
template <typename F>
DiskField sample_field(const GridPtr& g, F&& fn) {
    const int nt = g->n_theta(), nr = g->n_radial();
    std::vector<cd> samples(static_cast<std::size_t>(nt) * nr);
    for (int j = 0; j < nr; ++j) {
        double r = g->radial.nodes[j];
        for (int k = 0; k < nt; ++k) {
            double th = g->circle.theta(k);
            samples[static_cast<std::size_t>(j) * nt + k] = fn(r * std::cos(th), r * std::sin(th));
        }
    }
    return analyze(g, samples);
}

/// Dealiased pointwise product: both factors synthesized on a doubly fine
/// theta grid, multiplied, re-analyzed, truncated to the band.
inline DiskField pointwise_multiply(const DiskField& a, const DiskField& b) {
    const GridPtr& g = a.grid();
    const int nt2 = 2 * g->n_theta(), nr = g->n_radial(), M = g->max_mode();
    std::vector<cd> sa = synthesize(a, nt2), sb = synthesize(b, nt2);
    for (std::size_t i = 0; i < sa.size(); ++i) sa[i] *= sb[i];
    DiskField out(g);
    std::vector<cd> row(nt2);
    for (int j = 0; j < nr; ++j) {
        for (int k = 0; k < nt2; ++k) row[k] = sa[static_cast<std::size_t>(j) * nt2 + k];
        fft_forward(row);
        for (int m = 0; m <= M; ++m) out.set_profile(m, j, row[m]);
        for (int m = 1; m <= M; ++m) out.set_profile(-m, j, row[nt2 - m]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Norms
// ---------------------------------------------------------------------------

namespace detail {

/// Polynomial extrapolation of a mode profile to r = 1 through the outermost
/// four radial nodes. Returns {value, growth ratio vs. the outer samples}.
inline std::pair<cd, double> extrapolate_to_boundary(const RadialRule& rad,
                                                     const std::vector<cd>& prof) {
    const int nr = static_cast<int>(prof.size());
    const int k = std::min(4, nr);
    double scale = 0.0;
    cd val(0, 0);
    for (int i = 0; i < k; ++i) {
        double xi = rad.nodes[nr - k + i];
        cd li = prof[nr - k + i];
        scale = std::max(scale, std::abs(li));
        double w = 1.0;
        for (int j = 0; j < k; ++j) {
            if (j == i) continue;
            double xj = rad.nodes[nr - k + j];
            w *= (1.0 - xj) / (xi - xj);
        }
        val += li * w;
    }
    double growth = scale > 0 ? std::abs(val) / scale : 0.0;
    return {val, growth};
}

inline double lp_mean(const std::vector<cd>& samples, double p) {
    double acc = 0.0;
    for (const cd& v : samples) acc += std::pow(std::abs(v), p);
    return std::pow(acc / samples.size(), 1.0 / p);
}

}  // namespace detail

/// Boundary spectrum of a generic field by per-mode polynomial extrapolation
/// through the outermost 4 nodes. growth_bound guards against non-Hardy
/// fields whose profiles blow up toward the rim.
inline BoundarySpectrum extrapolated_trace(const DiskField& f, double growth_bound = 10.0) {
    const GridPtr& g = f.grid();
    BoundarySpectrum out(g->n_theta());
    int M = g->max_mode();
    double sup = 0.0;
    for (const cd& v : f.raw()) sup = std::max(sup, std::abs(v));
    for (int n = -M; n <= M; ++n) {
        auto [val, growth] = detail::extrapolate_to_boundary(g->radial, f.mode_profile(n));
        if (growth > growth_bound && std::abs(val) > 1e-12 * sup)
            throw SolveError("extrapolated_trace: profile growth ratio " +
                             std::to_string(growth) + " exceeds bound (non-Hardy field?)");
        out.set_coeff(n, val);
    }
    return out;
}

/// L^p norm on the circle of radius r (normalized angular measure). r must be
/// a radial node, or 1 (which uses the attached trace when present and
/// extrapolation otherwise).
inline double circle_norm(const DiskField& f, double r, double p) {
    if (p <= 1.0 || !std::isfinite(p))
        throw ConfigError("circle_norm: exponent must lie in (1, inf)");
    const GridPtr& g = f.grid();
    if (r == 1.0) {
        BoundarySpectrum tr = f.attached_trace() ? *f.attached_trace() : extrapolated_trace(f);
        return detail::lp_mean(tr.to_samples(), p);
    }
    const auto& nodes = g->radial.nodes;
    auto it = std::find_if(nodes.begin(), nodes.end(),
                           [r](double x) { return std::abs(x - r) < 1e-12; });
    if (it == nodes.end())
        throw ConfigError("circle_norm: radius is not representable on the grid");
    int j = static_cast<int>(it - nodes.begin());
    const int nt = g->n_theta(), M = g->max_mode();
    std::vector<cd> bins(nt, cd(0, 0));
    for (int m = 0; m <= M; ++m) bins[m] = f.profile(m, j);
    for (int m = 1; m <= M; ++m) bins[nt - m] = f.profile(-m, j);
    fft_inverse(bins);
    return detail::lp_mean(bins, p);
}

/// Discrete stand-in for ess sup_{0<r<1} ||f||_{L^p(T_r)}: max over the
/// radial nodes, under-approximating and refined by larger N_r. Fields that
/// carry an exact boundary trace include the r = 1 circle in the max.
inline double hardy_norm(const DiskField& f, double p) {
    double best = 0.0;
    for (double r : f.grid()->radial.nodes) best = std::max(best, circle_norm(f, r, p));
    if (f.attached_trace()) best = std::max(best, circle_norm(f, 1.0, p));
    return best;
}

/// W^{1,p}(T) norm (order 1) or L^p(T) norm (order 0); the tangential
/// derivative is taken w.r.t. normalized arclength, d_t = d_theta/(2 pi).
inline double sobolev_norm(const BoundarySpectrum& phi, double p, int order) {
    if (order != 0 && order != 1) throw ConfigError("sobolev_norm: order must be 0 or 1");
    double base = detail::lp_mean(phi.to_samples(), p);
    if (order == 0) return base;
    BoundarySpectrum d = phi.deriv_theta();
    d *= cd(1.0 / (2.0 * pi), 0);
    double dn = detail::lp_mean(d.to_samples(), p);
    return std::pow(std::pow(base, p) + std::pow(dn, p), 1.0 / p);
}

/// Slobodeckij seminorm of order s on T: double integral over T x T in the
/// normalized angular measure, chordal distance |e^{i a} - e^{i b}|, diagonal
/// cells excluded. First-order accurate tensor trapezoid quadrature.
inline double fractional_seminorm(const BoundarySpectrum& phi, double s, double p) {
    if (s <= 0.0 || s >= 1.0) throw ConfigError("fractional_seminorm: s must lie in (0,1)");
    std::vector<cd> v = phi.to_samples();
    const int n = static_cast<int>(v.size());
    const double w = 1.0 / n;
    double acc = 0.0;
    // |e^{i theta_i} - e^{i theta_j}| depends only on i - j
    std::vector<double> kern(n, 0.0);
    for (int d = 1; d < n; ++d) {
        double chord = 2.0 * std::abs(std::sin(pi * d / n));
        kern[d] = std::pow(chord, -(1.0 + s * p));
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            int d = std::abs(i - j);
            acc += std::pow(std::abs(v[i] - v[j]), p) * kern[d] * w * w;
        }
    return std::pow(acc, 1.0 / p);
}

/// Parseval pairing at a fixed node radius (used by tests and reports).
inline double parseval_circle_norm2(const DiskField& f, int node) {
    double acc = 0.0;
    int M = f.grid()->max_mode();
    for (int n = -M; n <= M; ++n) acc += std::norm(f.profile(n, node));
    return std::sqrt(acc);
}

/// L^2(D) norm with the plain planar measure dm.
inline double l2_disk(const DiskField& f) {
    const GridPtr& g = f.grid();
    double acc = 0.0;
    int M = g->max_mode(), nr = g->n_radial();
    for (int n = -M; n <= M; ++n)
        for (int j = 0; j < nr; ++j)
            acc += std::norm(f.profile(n, j)) * g->radial.weights_rho[j];
    return std::sqrt(2.0 * pi * acc);
}

inline double sup_abs(const DiskField& f) {
    std::vector<cd> s = synthesize(f);
    double m = 0.0;
    for (const cd& v : s) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace beltrami
