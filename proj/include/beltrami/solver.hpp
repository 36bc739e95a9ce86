#pragma once

#include <map>

#include "beltrami/coeff.hpp"
#include "beltrami/gmres.hpp"

namespace beltrami {

// ---------------------------------------------------------------------------
// Fredholm solve (I - T_alpha) w = g and the Dirichlet / Neumann / conjugation
// solvers built on it. T_alpha w := T(alpha conj(w)) is conjugate-linear, so
// iterative solves run on the doubled real system (Re w, Im w).
// ---------------------------------------------------------------------------

struct SolveConfig {
    double p = 2.0;            // Lebesgue exponent for reported norms
    double inner_tol = 1e-10;  // relative residual of the Fredholm stage
    double outer_tol = 1e-8;   // relative residual of boundary-matching stages
    int max_iter = 400;
    int restart = 60;
    double compat_tol = 1e-8;         // Neumann compatibility tolerance
    double trace_growth_bound = 10.0;  // smooth-trace extrapolation guard
    std::uint64_t seed = 0;

    void validate() const {
        if (!(p > 1.0) || !std::isfinite(p))
            throw ConfigError("SolveConfig: p must lie in (1, inf)");
        if (inner_tol <= 0 || outer_tol <= 0 || compat_tol <= 0)
            throw ConfigError("SolveConfig: tolerances must be positive");
        if (max_iter < 1 || restart < 1) throw ConfigError("SolveConfig: bad iteration caps");
    }
};

struct StageStat {
    std::string name;
    double residual = 0.0;
    int iterations = 0;
};

/// Residuals, iteration counts, norms and inequality certificates attached to
/// every solver output. Residuals are recomputed from the final iterate when
/// the stage finishes, never carried over from the iteration.
struct SolveReport {
    std::vector<StageStat> stages;
    std::vector<std::pair<std::string, double>> values;
    std::vector<std::string> warnings;

    void stage(const std::string& name, double residual, int iterations) {
        stages.push_back({name, residual, iterations});
    }
    void value(const std::string& name, double v) { values.emplace_back(name, v); }
    void warn(const std::string& w) { warnings.push_back(w); }

    double get(const std::string& name) const {
        for (const auto& [k, v] : values)
            if (k == name) return v;
        throw ConfigError("SolveReport: no value named " + name);
    }
    bool has(const std::string& name) const {
        for (const auto& [k, v] : values)
            if (k == name) return true;
        return false;
    }
    void merge(const SolveReport& o, const std::string& prefix) {
        for (const auto& s : o.stages) stages.push_back({prefix + s.name, s.residual, s.iterations});
        for (const auto& [k, v] : o.values) values.emplace_back(prefix + k, v);
        for (const auto& w : o.warnings) warnings.push_back(prefix + w);
    }
};

// ---------------------------------------------------------------------------
// field <-> real vector packing
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<double> field_to_vec(const DiskField& f) {
    const std::vector<cd>& p = f.raw();
    std::vector<double> v(2 * p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        v[2 * i] = p[i].real();
        v[2 * i + 1] = p[i].imag();
    }
    return v;
}

inline DiskField vec_to_field(const GridPtr& g, const std::vector<double>& v) {
    DiskField f(g);
    std::vector<cd>& p = f.raw();
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = cd(v[2 * i], v[2 * i + 1]);
    return f;
}

}  // namespace detail

/// T_alpha w = T(alpha conj(w)); the product is formed pointwise on the
/// padded theta grid (dealiased) and pushed through the cached mode tables.
inline DiskField apply_T_alpha(const OperatorWorkspace& ws, const AlphaField& alpha,
                               const DiskField& w) {
    const GridPtr& g = ws.grid();
    if (alpha.zero()) return DiskField(g);
    const int nt2 = 2 * g->n_theta(), nr = g->n_radial(), M = g->max_mode();
    std::vector<cd> s = synthesize(w, nt2);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = alpha.samples_padded[i] * std::conj(s[i]);
    DiskField prod(g);
    std::vector<cd> row(nt2);
    for (int j = 0; j < nr; ++j) {
        for (int k = 0; k < nt2; ++k) row[k] = s[static_cast<std::size_t>(j) * nt2 + k];
        fft_forward(row);
        for (int m = 0; m <= M; ++m) prod.set_profile(m, j, row[m]);
        for (int m = 1; m <= M; ++m) prod.set_profile(-m, j, row[nt2 - m]);
    }
    return cauchy_area(ws, prod);
}

struct FredholmOutput {
    DiskField w;
    SolveReport report;
};

/// Solve w = g + T(alpha conj(w)). Picard iteration when a power-iteration
/// estimate of ||T_alpha|| stays below 0.9, else GMRES on the doubled real
/// system. The exact trace tr g + tr T(alpha conj(w)) is attached to w.
/// The Dirichlet machinery requires holomorphic g; manufactured-solution
/// oracles legitimately feed a general right-hand side (the operator
/// I - T_alpha is invertible on all of L^p), so the check can be waived.
inline FredholmOutput solve_fredholm(const OperatorWorkspace& ws, const DiskField& g_field,
                                     const AlphaField& alpha, const SolveConfig& cfg,
                                     bool require_holomorphic = true) {
    cfg.validate();
    const GridPtr& g = ws.grid();
    FredholmOutput out;

    double neg_mass = 0.0, tot_mass = 0.0;
    for (int n = -g->max_mode(); n <= g->max_mode(); ++n)
        for (int j = 0; j < g->n_radial(); ++j) {
            double a = std::norm(g_field.profile(n, j));
            tot_mass += a;
            if (n < 0) neg_mass += a;
        }
    if (require_holomorphic && neg_mass > 1e-20 * std::max(tot_mass, 1e-300))
        throw ConfigError("solve_fredholm: g is not holomorphic (negative modes present)");

    BoundarySpectrum tr_g = g_field.attached_trace()
                                ? *g_field.attached_trace()
                                : extrapolated_trace(g_field, cfg.trace_growth_bound);
    double gnorm = l2_disk(g_field);
    if (alpha.zero() || gnorm == 0.0) {
        // alpha = 0 gives w = g exactly; g = 0 gives w = 0 by uniqueness
        out.w = g_field;
        out.w.attach_trace(tr_g);
        out.report.stage("fredholm", 0.0, 0);
        out.report.value("fredholm_rel_residual", 0.0);
        return out;
    }

    // contraction estimate by power iteration on the doubled real system
    Rng rng(cfg.seed ^ 0x5eedf00dULL);
    DiskField v(g);
    for (int n = -8; n <= 8; ++n)
        for (int j = 0; j < g->n_radial(); ++j) v.set_profile(n, j, rng.complex_sym());
    double rate = 0.0;
    {
        double prev = l2_disk(v);
        for (int it = 0; it < 6; ++it) {
            v = apply_T_alpha(ws, alpha, v);
            double cur = l2_disk(v);
            rate = prev > 0 ? cur / prev : 0.0;
            if (cur == 0.0) break;
            v *= cd(1.0 / cur, 0);
            prev = 1.0;
        }
    }

    DiskField w = g_field;
    int iterations = 0;
    if (rate < 0.9) {
        for (; iterations < cfg.max_iter; ++iterations) {
            DiskField next = g_field + apply_T_alpha(ws, alpha, w);
            DiskField diff = next - w;
            w = std::move(next);
            if (l2_disk(diff) <= 0.25 * (1.0 - rate) * cfg.inner_tol * gnorm) break;
        }
    } else {
        auto op = [&](const std::vector<double>& x) {
            DiskField wx = detail::vec_to_field(g, x);
            DiskField ax = wx - apply_T_alpha(ws, alpha, wx);
            return detail::field_to_vec(ax);
        };
        std::vector<double> b = detail::field_to_vec(g_field);
        std::vector<double> x = b;
        GmresResult gr = gmres(op, b, x, cfg.inner_tol * 0.5, cfg.max_iter, cfg.restart);
        iterations = gr.iterations;
        w = detail::vec_to_field(g, x);
    }

    // recompute the true residual and the exact trace
    DiskField taw = apply_T_alpha(ws, alpha, w);
    DiskField resid = w - g_field - taw;
    double rel = l2_disk(resid) / gnorm;
    if (rel > cfg.inner_tol)
        throw SolveError("solve_fredholm: no convergence after " + std::to_string(iterations) +
                         " iterations (relative residual " + std::to_string(rel) + ")");
    w.attach_trace(tr_g + *taw.attached_trace());
    out.w = std::move(w);
    out.report.stage("fredholm", rel, iterations);
    out.report.value("fredholm_rel_residual", rel);
    out.report.value("fredholm_contraction_estimate", rate);
    return out;
}

// ---------------------------------------------------------------------------
// Dirichlet problem in G^p_alpha
// ---------------------------------------------------------------------------

struct DirichletOutput {
    DiskField w;
    SolveReport report;
};

namespace detail {

/// The analytic boundary function x + i(H_0 x + c): modes n > 0 doubled,
/// mode 0 = mean(x) + i c, negative modes zero.
inline BoundarySpectrum analytic_completion(const BoundarySpectrum& x_spec, double c) {
    BoundarySpectrum b(x_spec.n_theta());
    b.set_coeff(0, cd(x_spec.coeff(0).real(), c));
    for (int n = 1; n <= b.max_mode(); ++n) b.set_coeff(n, 2.0 * x_spec.coeff(n));
    return b;
}

struct OuterApply {
    const OperatorWorkspace& ws;
    const AlphaField& alpha;
    const SolveConfig& cfg;
    int nt;
    mutable int inner_iterations = 0;

    /// (x samples, c') -> (Re tr w samples, mean Im tr w)
    std::vector<double> operator()(const std::vector<double>& u) const {
        std::vector<double> x(u.begin(), u.begin() + nt);
        double cprime = u[nt];
        BoundarySpectrum xs = BoundarySpectrum::from_real_samples(x);
        BoundarySpectrum b = analytic_completion(xs, cprime);
        DiskField g = cauchy_boundary(ws.grid(), b);
        FredholmOutput f = solve_fredholm(ws, g, alpha, cfg);
        inner_iterations += f.report.stages.back().iterations;
        const BoundarySpectrum& tr = *f.w.attached_trace();
        std::vector<cd> s = tr.to_samples();
        std::vector<double> out(nt + 1);
        for (int k = 0; k < nt; ++k) out[k] = s[k].real();
        out[nt] = tr.coeff(0).imag();
        return out;
    }
};

inline double lp_of_samples(const std::vector<double>& s, double p) {
    double acc = 0.0;
    for (double v : s) acc += std::pow(std::abs(v), p);
    return std::pow(acc / s.size(), 1.0 / p);
}

}  // namespace detail

/// Solve dbar w = alpha conj(w) with Re(tr w) = psi and mean of Im(tr w) = c.
/// Outer Krylov on the boundary pair (the outer operator is identity plus
/// compact); each application performs one inner Fredholm solve.
inline DirichletOutput dirichlet_g(const OperatorWorkspace& ws, const BoundarySpectrum& psi,
                                   double mean_im, const AlphaField& alpha,
                                   const SolveConfig& cfg) {
    cfg.validate();
    const GridPtr& g = ws.grid();
    const int nt = g->n_theta();
    if (!psi.is_real_valued() || psi.real_symmetry_defect() > 1e-10)
        throw ConfigError("dirichlet_g: psi must be real-valued");

    detail::OuterApply outer{ws, alpha, cfg, nt};
    std::vector<double> rhs(nt + 1);
    std::vector<double> psi_samples = psi.to_real_samples();
    for (int k = 0; k < nt; ++k) rhs[k] = psi_samples[k];
    rhs[nt] = mean_im;

    std::vector<double> u = rhs;  // identity-plus-compact: rhs is a good start
    GmresResult gr = gmres([&](const std::vector<double>& v) { return outer(v); }, rhs, u,
                           cfg.outer_tol * 0.2, cfg.max_iter, cfg.restart);
    if (!gr.converged)
        throw SolveError("dirichlet_g: outer iteration stalled (relative residual " +
                         std::to_string(gr.rel_residual) + ")");

    // final forward pass: recompute w, trace, and honest residuals
    BoundarySpectrum xs =
        BoundarySpectrum::from_real_samples(std::vector<double>(u.begin(), u.begin() + nt));
    BoundarySpectrum b = detail::analytic_completion(xs, u[nt]);
    DiskField gfield = cauchy_boundary(g, b);
    FredholmOutput inner = solve_fredholm(ws, gfield, alpha, cfg);
    DirichletOutput out;
    out.w = std::move(inner.w);
    out.report.merge(inner.report, "inner_");

    const BoundarySpectrum& tr = *out.w.attached_trace();
    std::vector<cd> tr_s = tr.to_samples();
    std::vector<double> re_err(nt);
    for (int k = 0; k < nt; ++k) re_err[k] = tr_s[k].real() - psi_samples[k];
    double psi_norm = detail::lp_of_samples(psi_samples, cfg.p);
    double scale = std::max(psi_norm, std::abs(mean_im));
    double re_res = detail::lp_of_samples(re_err, cfg.p) / std::max(scale, 1e-300);
    double im_res = std::abs(tr.coeff(0).imag() - mean_im) / std::max(scale, 1e-300);
    out.report.stage("dirichlet_outer", std::max(re_res, im_res), gr.iterations);
    out.report.value("outer_re_residual", re_res);
    out.report.value("outer_immean_residual", im_res);
    out.report.value("inner_solves_total", outer.inner_iterations);
    if (std::max(re_res, im_res) > cfg.outer_tol * 20)
        throw SolveError("dirichlet_g: boundary match failed (residual " +
                         std::to_string(std::max(re_res, im_res)) + ")");

    // norms and certificates
    double trace_lp = detail::lp_of_samples([&] {
        std::vector<double> a(nt);
        for (int k = 0; k < nt; ++k) a[k] = std::abs(tr_s[k]);
        return a;
    }(), cfg.p);
    double hardy = hardy_norm(out.w, cfg.p);
    out.report.value("trace_lp", trace_lp);
    out.report.value("hardy_norm", hardy);
    out.report.value("fatou_upper_constant", std::exp(8.0 * alpha.sup));
    // P+ consistency: P+(tr w) = tr g
    BoundarySpectrum pw = analytic_projection(tr);
    double pplus_err = 0.0, pplus_scale = 0.0;
    for (int n = 0; n <= g->max_mode(); ++n) {
        pplus_err = std::max(pplus_err, std::abs(pw.coeff(n) - b.coeff(n)));
        pplus_scale = std::max(pplus_scale, std::abs(b.coeff(n)));
    }
    out.report.value("pplus_consistency", pplus_err / std::max(pplus_scale, 1e-300));
    return out;
}

/// Unique w in G^{p,0}_alpha with Re(tr w) = psi: solve with mean_im = 0 and
/// project out the sigma^{-1/2} constant-solution component. Requires alpha
/// derived from a Coefficient (the correction must itself solve the equation).
inline DirichletOutput dirichlet_g_normalized(const OperatorWorkspace& ws,
                                              const BoundarySpectrum& psi,
                                              const Coefficient& coef, const SolveConfig& cfg) {
    if (!coef.alpha().coefficient_derived)
        throw ConfigError("dirichlet_g_normalized: alpha is not coefficient-derived");
    DirichletOutput out = dirichlet_g(ws, psi, 0.0, coef.alpha(), cfg);
    const GridPtr& g = ws.grid();
    const int nt = g->n_theta();
    const BoundarySpectrum& tr1 = *out.w.attached_trace();
    std::vector<cd> s = tr1.to_samples();
    double m = 0.0;
    for (int k = 0; k < nt; ++k) m += coef.sqrt_sigma_boundary()[k] * s[k].imag();
    m /= nt;  // (1/2pi) \int sigma^{1/2} Im tr w dtheta
    DiskField corr = coef.inv_sqrt_sigma();
    corr *= cd(0, m);
    BoundarySpectrum corr_tr(nt);
    {
        std::vector<cd> cs(nt);
        for (int k = 0; k < nt; ++k) cs[k] = cd(0, m) / coef.sqrt_sigma_boundary()[k];
        corr_tr = BoundarySpectrum::from_samples(cs);
    }
    BoundarySpectrum new_tr = tr1 - corr_tr;
    out.w -= corr;
    out.w.attach_trace(new_tr);
    // recompute the normalization integral
    std::vector<cd> s2 = new_tr.to_samples();
    double m2 = 0.0;
    for (int k = 0; k < nt; ++k) m2 += coef.sqrt_sigma_boundary()[k] * s2[k].imag();
    m2 /= nt;
    out.report.value("gp0_normalization_residual", std::abs(m2));
    return out;
}

// ---------------------------------------------------------------------------
// Dirichlet problem in H^p_nu, the generalized conjugation, Neumann
// ---------------------------------------------------------------------------

struct FieldOutput {
    DiskField f;
    SolveReport report;
};

/// Unique f in H^{p,0}_nu with Re(tr f) = phi: transform psi = phi sigma^{1/2},
/// solve in G^{p,0}_alpha, pull back through the similarity transform.
inline FieldOutput dirichlet_h(const OperatorWorkspace& ws, const BoundarySpectrum& phi,
                               const Coefficient& coef, const SolveConfig& cfg) {
    if (!phi.is_real_valued() || phi.real_symmetry_defect() > 1e-10)
        throw ConfigError("dirichlet_h: phi must be real-valued");
    const GridPtr& g = ws.grid();
    const int nt = g->n_theta();
    std::vector<double> phi_s = phi.to_real_samples();
    std::vector<double> psi_s(nt);
    for (int k = 0; k < nt; ++k) psi_s[k] = phi_s[k] * coef.sqrt_sigma_boundary()[k];
    BoundarySpectrum psi = BoundarySpectrum::from_real_samples(psi_s);

    DirichletOutput dw = dirichlet_g_normalized(ws, psi, coef, cfg);
    FieldOutput out;
    out.report.merge(dw.report, "");
    out.f = similarity_inverse(dw.w, coef);
    out.f.attach_trace(similarity_inverse_trace(*dw.w.attached_trace(), coef));

    // conjugate-Beltrami residual of f on interior nodes
    DiskField df = d_field(out.f);
    DiskField dbf = dbar_field(out.f);
    DiskField nu_conj_df = detail::padded_pointwise(
        df, [&](cd v, std::size_t i) { return coef.nu_padded()[i] * std::conj(v); });
    DiskField resid = dbf - nu_conj_df;
    double scale = std::max(l2_disk(df), 1e-300);
    out.report.value("conjugate_beltrami_residual", l2_disk(resid) / scale);
    out.report.value("normal_f_residual", std::abs(out.f.attached_trace()->coeff(0).imag()));
    return out;
}

struct HilbertOutput {
    BoundarySpectrum h;
    SolveReport report;
};

/// Generalized Hilbert transform: H_nu phi = Im tr f, f the normalized
/// solution with Re tr f = phi. Reports the measured L^p operator ratio.
inline HilbertOutput hilbert_nu(const OperatorWorkspace& ws, const BoundarySpectrum& phi,
                                const Coefficient& coef, const SolveConfig& cfg) {
    FieldOutput f = dirichlet_h(ws, phi, coef, cfg);
    const BoundarySpectrum& tr = *f.f.attached_trace();
    std::vector<cd> s = tr.to_samples();
    std::vector<double> im(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) im[k] = s[k].imag();
    HilbertOutput out;
    out.h = BoundarySpectrum::from_real_samples(im);
    out.report = std::move(f.report);
    double phin = detail::lp_of_samples(phi.to_real_samples(), cfg.p);
    double hn = detail::lp_of_samples(im, cfg.p);
    out.report.value("hilbert_ratio_lp", phin > 0 ? hn / phin : 0.0);
    out.report.value("hilbert_mean", std::abs(out.h.coeff(0)));
    if (phin > 0) {
        double sphi = sobolev_norm(phi, cfg.p, 1);
        double sh = sobolev_norm(out.h, cfg.p, 1);
        out.report.value("hilbert_ratio_w1p", sphi > 0 ? sh / sphi : 0.0);
    }
    return out;
}

/// Neumann problem d_n u = g for div(sigma grad u) = 0, via the tangential
/// relation d_theta v = sigma g and the nu -> -nu flip (prescribing Im tr f).
/// u = Re f with zero-mean trace.
inline FieldOutput neumann(const OperatorWorkspace& ws, const BoundarySpectrum& g_data,
                           const Coefficient& coef, const SolveConfig& cfg) {
    if (!g_data.is_real_valued() || g_data.real_symmetry_defect() > 1e-10)
        throw ConfigError("neumann: boundary data must be real-valued");
    const GridPtr& g = ws.grid();
    const int nt = g->n_theta();
    std::vector<double> gs = g_data.to_real_samples();
    std::vector<double> sg(nt);
    double compat = 0.0, scale = 0.0;
    for (int k = 0; k < nt; ++k) {
        sg[k] = coef.sigma_boundary()[k] * gs[k];
        compat += sg[k];
        scale += std::abs(sg[k]);
    }
    compat /= nt;
    scale = std::max(scale / nt, 1e-300);
    if (std::abs(compat) / scale > cfg.compat_tol)
        throw SolveError("neumann: compatibility condition violated "
                         "(int_T sigma g dtheta = " +
                         std::to_string(compat * 2 * pi) + ", must vanish)");

    BoundarySpectrum sg_spec = BoundarySpectrum::from_real_samples(sg);
    BoundarySpectrum v_b = sg_spec.antideriv_theta();  // d_theta v = sigma g, zero mean
    v_b.set_real_valued(true);
    BoundarySpectrum minus_v = v_b;
    minus_v *= cd(-1, 0);
    minus_v.set_real_valued(true);

    // i f solves the -nu equation; prescribe Re tr (i f) = -v.
    FieldOutput tilde = dirichlet_h(ws, minus_v, coef.negated(), cfg);
    FieldOutput out;
    out.report.merge(tilde.report, "flip_");
    DiskField f = tilde.f;
    f *= cd(0, -1);  // f = -i f~  =>  Im tr f = v
    BoundarySpectrum tr_f = *tilde.f.attached_trace() * cd(0, -1);

    // normalize: zero-mean real part of the trace
    double mean_u = tr_f.coeff(0).real();
    DiskField ones(g);
    for (int j = 0; j < g->n_radial(); ++j) ones.set_profile(0, j, cd(1, 0));
    f -= ones * cd(mean_u, 0);
    tr_f.set_coeff(0, tr_f.coeff(0) - mean_u);
    f.attach_trace(tr_f);

    // d_n u reconstructed two ways: the exact tangential formula
    // d_n u = d_theta(tr v)/sigma, and a one-sided radial stencil.
    BoundarySpectrum tr_v(nt);
    {
        std::vector<cd> s = tr_f.to_samples();
        std::vector<double> vs(nt);
        for (int k = 0; k < nt; ++k) vs[k] = s[k].imag();
        tr_v = BoundarySpectrum::from_real_samples(vs);
    }
    std::vector<cd> dv = tr_v.deriv_theta().to_samples();
    double err_tang = 0.0, gscale = 0.0;
    for (int k = 0; k < nt; ++k) {
        err_tang = std::max(err_tang,
                            std::abs(dv[k].real() / coef.sigma_boundary()[k] - gs[k]));
        gscale = std::max(gscale, std::abs(gs[k]));
    }
    out.report.value("dn_u_tangential_residual", err_tang / std::max(gscale, 1e-300));

    DiskField u = f.real_part();
    {
        // radial stencil: derivative of each mode profile extrapolated to 1
        BoundarySpectrum dn(nt);
        for (int n = -g->max_mode(); n <= g->max_mode(); ++n) {
            std::vector<cd> prof = u.mode_profile(n);
            std::vector<cd> dp = g->radial.differentiate_weighted(prof, std::abs(n));
            dn.set_coeff(n, detail::extrapolate_to_boundary(g->radial, dp).first);
        }
        std::vector<cd> dns = dn.to_samples();
        double err = 0.0;
        for (int k = 0; k < nt; ++k) err = std::max(err, std::abs(dns[k].real() - gs[k]));
        out.report.value("dn_u_stencil_residual", err / std::max(gscale, 1e-300));
    }
    out.f = std::move(f);
    return out;
}

/// Dirichlet problem for div(sigma grad u) = 0 with L^p boundary data:
/// u = Re f. The report carries the Fatou chain certificate and the
/// L^p(T_r) -> L^p(T) convergence table.
inline FieldOutput dirichlet_u(const OperatorWorkspace& ws, const BoundarySpectrum& phi,
                               const Coefficient& coef, const SolveConfig& cfg) {
    FieldOutput hf = dirichlet_h(ws, phi, coef, cfg);
    FieldOutput out;
    out.report = std::move(hf.report);
    DiskField u = hf.f.real_part();
    double tr_norm = 0.0;
    {
        std::vector<cd> s = u.attached_trace()->to_samples();
        std::vector<double> a(s.size());
        for (std::size_t k = 0; k < s.size(); ++k) a[k] = s[k].real();
        tr_norm = detail::lp_of_samples(a, cfg.p);
    }
    double fp = hardy_norm(u, cfg.p);
    out.report.value("u_trace_lp", tr_norm);
    out.report.value("u_hardy_norm", fp);
    out.report.value("fatou_chain_ok", fp + 1e-12 >= tr_norm ? 1.0 : 0.0);
    // convergence of ||u(r .) - tr u||_p along the outermost nodes
    const GridPtr& g = ws.grid();
    const int nr = g->n_radial(), nt = g->n_theta();
    std::vector<cd> tr_s = u.attached_trace()->to_samples();
    std::vector<int> radii_idx;
    for (int j : {nr - 24, nr - 16, nr - 8, nr - 1})
        if (j >= 0 && (radii_idx.empty() || j > radii_idx.back())) radii_idx.push_back(j);
    for (int j : radii_idx) {
        double r = g->radial.nodes[j];
        std::vector<cd> bins(nt, cd(0, 0));
        for (int m = 0; m <= g->max_mode(); ++m) bins[m] = u.profile(m, j);
        for (int m = 1; m <= g->max_mode(); ++m) bins[nt - m] = u.profile(-m, j);
        fft_inverse(bins);
        std::vector<double> diff(nt);
        for (int k = 0; k < nt; ++k) diff[k] = std::abs(bins[k] - tr_s[k]);
        out.report.value("fatou_err@r=" + std::to_string(r).substr(0, 6),
                         detail::lp_of_samples(diff, cfg.p));
    }
    out.f = std::move(u);
    return out;
}

// ---------------------------------------------------------------------------
// Derivative machinery
// ---------------------------------------------------------------------------

struct GradientOutput {
    DiskField W;
    SolveReport report;
};

/// W = (1 - nu^2)^{1/2} d f, which solves dbar W = alpha_1 conj(W) with
/// alpha_1 = d(nu)/(1 - nu^2). Reports the equation residual and the
/// gradient Hardy norms.
inline GradientOutput gradient_field(const OperatorWorkspace& ws, const DiskField& f,
                                     const Coefficient& coef, double p = 2.0) {
    (void)ws;
    GradientOutput out;
    DiskField df = d_field(f);
    out.W = detail::padded_pointwise(
        df, [&](cd v, std::size_t i) { return coef.sqrt_1mnu2_padded()[i] * v; });
    DiskField dbW = dbar_field(out.W);
    DiskField rhs = detail::padded_pointwise(out.W, [&](cd v, std::size_t i) {
        return coef.alpha1().samples_padded[i] * std::conj(v);
    });
    DiskField resid = dbW - rhs;
    double scale = std::max(l2_disk(out.W), 1e-300);
    out.report.value("eqbder_residual", l2_disk(resid) / scale);
    out.report.value("grad_hardy_d", hardy_norm(df, p));
    DiskField dbf = dbar_field(f);
    out.report.value("grad_hardy_dbar", hardy_norm(dbf, p));
    return out;
}

/// Nontangential limit of d f from the trace alone:
/// Phi = -i e^{-i theta} (d_theta tr f - nu d_theta conj(tr f)) / (1 - nu^2).
inline BoundarySpectrum boundary_derivative(const BoundarySpectrum& trace_f,
                                            const Coefficient& coef) {
    const int nt = trace_f.n_theta();
    std::vector<cd> d = trace_f.deriv_theta().to_samples();
    std::vector<cd> out(nt);
    for (int k = 0; k < nt; ++k) {
        double th = 2.0 * pi * k / nt;
        double nu = coef.nu_boundary()[k];
        out[k] = cd(0, -1) * std::polar(1.0, -th) * (d[k] - nu * std::conj(d[k])) /
                 (1.0 - nu * nu);
    }
    return BoundarySpectrum::from_samples(out);
}

}  // namespace beltrami
