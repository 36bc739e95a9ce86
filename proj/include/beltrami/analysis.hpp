#pragma once

#include "beltrami/solver.hpp"

namespace beltrami {

// ---------------------------------------------------------------------------
// Boundary-behaviour diagnostics, duality/adjoint identities, and the
// density / ill-posedness experiments.
// ---------------------------------------------------------------------------

/// Sample set for the nontangential maximal function: points
/// z = xi (1 - d e^{i chi}), depths d = 2^{-m} geometric, angles chi filling
/// (-beta, beta). The same offsets serve every boundary point by rotation.
struct SectorConfig {
    double aperture = 0.5 * pi / 2.0;
    std::vector<cd> offsets;  // the factors (1 - d e^{i chi}), all inside D

    explicit SectorConfig(double beta = 0.5 * pi / 2.0, int n_depths = 8, int n_angles = 8)
        : aperture(beta) {
        if (beta <= 0.0 || beta >= pi / 2.0)
            throw ConfigError("SectorConfig: aperture must lie in (0, pi/2)");
        for (int m = 1; m <= n_depths; ++m) {
            double d = std::pow(2.0, -m);
            for (int a = 0; a < n_angles; ++a) {
                double chi = -0.9 * beta + 1.8 * beta * a / (n_angles - 1);
                cd o = 1.0 - d * std::polar(1.0, chi);
                if (std::abs(o) >= 1.0)
                    throw ConfigError("SectorConfig: sample point escaped the disk");
                offsets.push_back(o);
            }
        }
    }
};

struct NtMaxReport {
    std::vector<double> values;  // M_f at each boundary angle
    double lp_norm = 0.0;
    double trace_lp = 0.0;
    double ratio = 0.0;
};

/// M_f(xi) = sup over the sector sample set of |f|; reports ||M||_p and the
/// ratio to ||tr f||_p.
inline NtMaxReport nontangential_max(const DiskField& f, const SectorConfig& sectors,
                                     double p = 2.0) {
    const GridPtr& g = f.grid();
    const int nt = g->n_theta(), nr = g->n_radial(), M = g->max_mode();
    NtMaxReport rep;
    rep.values.assign(nt, 0.0);
    std::vector<cd> prof(nr), bins(nt);
    for (const cd& o : sectors.offsets) {
        double r = std::abs(o), ao = std::arg(o);
        std::fill(bins.begin(), bins.end(), cd(0, 0));
        for (int n = -M; n <= M; ++n) {
            const cd* row = f.mode_row(n);
            std::copy(row, row + nr, prof.begin());
            cd v = g->radial.interpolate(prof, r) * std::polar(1.0, n * ao);
            bins[n >= 0 ? n : nt + n] = v;
        }
        fft_inverse(bins);
        for (int k = 0; k < nt; ++k)
            rep.values[k] = std::max(rep.values[k], std::abs(bins[k]));
    }
    double acc = 0.0;
    for (double v : rep.values) acc += std::pow(v, p);
    rep.lp_norm = std::pow(acc / nt, 1.0 / p);
    BoundarySpectrum tr = f.attached_trace() ? *f.attached_trace() : extrapolated_trace(f);
    rep.trace_lp = detail::lp_of_samples([&] {
        std::vector<cd> s = tr.to_samples();
        std::vector<double> a(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) a[i] = std::abs(s[i]);
        return a;
    }(), p);
    rep.ratio = rep.trace_lp > 0 ? rep.lp_norm / rep.trace_lp : 0.0;
    return rep;
}

/// Table of (r_j, ||f(r_j .) - tr f||_{L^p(T)}) over the radial nodes.
inline std::vector<std::pair<double, double>> fatou_convergence(const DiskField& f, double p) {
    const GridPtr& g = f.grid();
    const int nt = g->n_theta(), nr = g->n_radial(), M = g->max_mode();
    BoundarySpectrum tr = f.attached_trace() ? *f.attached_trace() : extrapolated_trace(f);
    std::vector<cd> ts = tr.to_samples();
    std::vector<std::pair<double, double>> table;
    std::vector<cd> bins(nt);
    for (int j = 0; j < nr; ++j) {
        std::fill(bins.begin(), bins.end(), cd(0, 0));
        for (int m = 0; m <= M; ++m) bins[m] = f.profile(m, j);
        for (int m = 1; m <= M; ++m) bins[nt - m] = f.profile(-m, j);
        fft_inverse(bins);
        double acc = 0.0;
        for (int k = 0; k < nt; ++k) acc += std::pow(std::abs(bins[k] - ts[k]), p);
        table.emplace_back(g->radial.nodes[j], std::pow(acc / nt, 1.0 / p));
    }
    return table;
}

/// <f, g> = Re (1/2pi) \int f g dtheta = Re sum_n f_n g_{-n}; spectrally exact.
inline double duality_pair(const BoundarySpectrum& f, const BoundarySpectrum& g) {
    int M = std::min(f.max_mode(), g.max_mode());
    cd acc(0, 0);
    for (int n = -M; n <= M; ++n) acc += f.coeff(n) * g.coeff(-n);
    return acc.real();
}

// ---------------------------------------------------------------------------
// small dense SPD solves for the least-squares machinery
// ---------------------------------------------------------------------------

namespace detail {

/// Real trigonometric basis: 1, cos t, sin t, cos 2t, ... as samples.
inline std::vector<double> trig_basis_samples(int nt, int idx) {
    std::vector<double> v(nt);
    if (idx == 0) {
        std::fill(v.begin(), v.end(), 1.0);
        return v;
    }
    int k = (idx + 1) / 2;
    bool is_cos = idx % 2 == 1;
    for (int i = 0; i < nt; ++i) {
        double t = 2.0 * pi * i / nt;
        v[i] = is_cos ? std::cos(k * t) : std::sin(k * t);
    }
    return v;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// adjoint identities
// ---------------------------------------------------------------------------

struct AdjointReport {
    double thetaconj_violation = 0.0;  // symmetry of <d_theta H phi, psi>
    double hnuadj_violation = 0.0;     // H* = -d_theta H d_theta^{-1}
    double matrix_scale = 0.0;
    int basis_size = 0;
};

/// Builds the K x K matrix of H_nu over the orthonormal real trigonometric
/// basis and checks the two adjoint identities at solver accuracy.
inline AdjointReport adjoint_check(const OperatorWorkspace& ws, const Coefficient& coef,
                                   const SolveConfig& cfg, int K) {
    const GridPtr& g = ws.grid();
    const int nt = g->n_theta();
    if (K > g->max_mode()) throw ConfigError("adjoint_check: K exceeds the band");
    AdjointReport rep;
    rep.basis_size = K;

    // orthonormal basis under <f,g>: sqrt(2) cos(kt), sqrt(2) sin(kt)
    std::vector<BoundarySpectrum> basis;
    for (int i = 1; i <= K; ++i) {
        std::vector<double> s = detail::trig_basis_samples(nt, i);
        for (double& v : s) v *= std::sqrt(2.0);
        basis.push_back(BoundarySpectrum::from_real_samples(s));
    }
    std::vector<BoundarySpectrum> H;  // H_nu basis_j
    std::vector<BoundarySpectrum> HU; // H_nu (d_theta^{-1} basis_j)
    for (int j = 0; j < K; ++j) {
        H.push_back(hilbert_nu(ws, basis[j], coef, cfg).h);
        BoundarySpectrum U = basis[j].antideriv_theta();
        U.set_real_valued(true);
        HU.push_back(hilbert_nu(ws, U, coef, cfg).h);
    }

    // (thetaconj): <d_theta(H e_i), e_j> = <e_i, d_theta(H e_j)>
    for (int i = 0; i < K; ++i)
        for (int j = 0; j < K; ++j) {
            double lhs = duality_pair(H[i].deriv_theta(), basis[j]);
            double rhs = duality_pair(basis[i], H[j].deriv_theta());
            rep.thetaconj_violation = std::max(rep.thetaconj_violation, std::abs(lhs - rhs));
            rep.matrix_scale = std::max(rep.matrix_scale, std::abs(lhs));
        }

    // (hnuadj): A_ij = <e_i, H e_j>; adjoint matrix A^T must equal the matrix
    // of -d_theta H d_theta^{-1} on the zero-mean basis.
    for (int i = 0; i < K; ++i)
        for (int j = 0; j < K; ++j) {
            double a_ji = duality_pair(basis[i], H[j]);          // (A)_ij with roles swapped below
            BoundarySpectrum col = HU[i].deriv_theta();
            col *= cd(-1, 0);
            double b_ji = duality_pair(basis[j], col);
            // <H* e_i, e_j> = <e_i, H e_j> = a_ji ; B_ji = <-d_theta H U_i, e_j>
            rep.hnuadj_violation = std::max(rep.hnuadj_violation, std::abs(a_ji - b_ji));
        }
    return rep;
}

// ---------------------------------------------------------------------------
// orthogonality of traces and the p = 2 duality spot check
// ---------------------------------------------------------------------------

struct OrthogonalityReport {
    double max_pairing = 0.0;    // |<d_theta Phi, tr f>| over trials
    double dual_inf = 0.0;       // K-truncated inf side of the duality relation
    double dual_sup = 0.0;       // K-truncated sup side
    int trials = 0;
};

inline OrthogonalityReport orthogonality_check(const OperatorWorkspace& ws,
                                               const Coefficient& coef, const SolveConfig& cfg,
                                               int trials, int K = 8,
                                               std::uint64_t seed = 0) {
    const GridPtr& g = ws.grid();
    const int nt = g->n_theta();
    OrthogonalityReport rep;
    rep.trials = trials;
    Rng rng(seed ^ 0xa11ce5ULL);
    Coefficient neg = coef.negated();

    auto random_unit_trig = [&](int deg) {
        BoundarySpectrum b(nt, true);
        b.set_coeff(0, cd(rng.sym(), 0));
        for (int n = 1; n <= deg; ++n) {
            cd c = 0.5 * rng.complex_sym();
            b.set_coeff(n, c);
            b.set_coeff(-n, std::conj(c));
        }
        double norm = std::sqrt(std::max(duality_pair(b, b.conjugated()), 1e-300));
        b *= cd(1.0 / norm, 0);
        b.set_real_valued(true);
        return b;
    };

    for (int t = 0; t < trials; ++t) {
        BoundarySpectrum phi = random_unit_trig(8);
        BoundarySpectrum gam = random_unit_trig(8);
        BoundarySpectrum trf = phi + hilbert_nu(ws, phi, coef, cfg).h * cd(0, 1);
        BoundarySpectrum Phi = gam + hilbert_nu(ws, gam, neg, cfg).h * cd(0, 1);
        double pairing = duality_pair(Phi.deriv_theta(), trf);
        rep.max_pairing = std::max(rep.max_pairing, std::abs(pairing));
    }

    // duality relation at p = q = 2 on K-dimensional truncations:
    //   inf_g ||Phi - g||_2  >=  sup_f <Phi, tr f> / ||tr f||_2
    // with g in the span of d_theta(tr H^2_{-nu}) columns and f in the span
    // of solver columns; equality in the limit K -> infinity.
    {
        BoundarySpectrum Phi = random_unit_trig(6);
        BoundarySpectrum extra = random_unit_trig(6);
        Phi += extra * cd(0, 0.7);  // genuinely complex test functional

        std::vector<BoundarySpectrum> f_cols, g_cols;
        f_cols.push_back([&] {
            BoundarySpectrum one(nt, true);
            one.set_coeff(0, cd(1, 0));
            return one;  // constants lie in tr H^2_nu
        }());
        for (int i = 1; i <= K; ++i) {
            std::vector<double> s = detail::trig_basis_samples(nt, i);
            BoundarySpectrum e = BoundarySpectrum::from_real_samples(s);
            f_cols.push_back(e + hilbert_nu(ws, e, coef, cfg).h * cd(0, 1));
            g_cols.push_back(
                (e + hilbert_nu(ws, e, neg, cfg).h * cd(0, 1)).deriv_theta());
        }
        auto rip = [&](const BoundarySpectrum& a, const BoundarySpectrum& b) {
            // real L^2 inner product Re (1/2pi) \int a conj(b)
            return duality_pair(a, b.conjugated());
        };
        // sup side: sqrt(l^T G^{-1} l) with G the L2 Gram of f-columns
        {
            const int n = static_cast<int>(f_cols.size());
            std::vector<double> G(n * n), l(n);
            for (int i = 0; i < n; ++i) {
                l[i] = duality_pair(Phi, f_cols[i]);
                for (int j = 0; j < n; ++j) G[i * n + j] = rip(f_cols[i], f_cols[j]);
            }
            std::vector<double> x = detail::spd_solve(G, l, 1e-12);
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += l[i] * x[i];
            rep.dual_sup = std::sqrt(std::max(s, 0.0));
        }
        // inf side: least squares onto g-columns
        {
            const int n = static_cast<int>(g_cols.size());
            std::vector<double> G(n * n), l(n);
            for (int i = 0; i < n; ++i) {
                l[i] = rip(Phi, g_cols[i]);
                for (int j = 0; j < n; ++j) G[i * n + j] = rip(g_cols[i], g_cols[j]);
            }
            std::vector<double> x = detail::spd_solve(G, l, 1e-12);
            double red = 0.0;
            for (int i = 0; i < n; ++i) red += l[i] * x[i];
            double phi2 = rip(Phi, Phi);
            rep.dual_inf = std::sqrt(std::max(phi2 - red, 0.0));
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// density / ill-posedness experiments
// ---------------------------------------------------------------------------

/// Measurable split of the angle grid into I and its complement J.
struct ArcSplit {
    int n_theta = 0;
    std::vector<std::uint8_t> in_I;

    static ArcSplit from_arcs(int nt, const std::vector<std::pair<double, double>>& arcs) {
        ArcSplit s;
        s.n_theta = nt;
        s.in_I.assign(nt, 0);
        for (int k = 0; k < nt; ++k) {
            double th = 2.0 * pi * k / nt;
            for (auto [a, b] : arcs) {
                double t = std::fmod(th - a + 4.0 * pi, 2.0 * pi);
                double len = std::fmod(b - a + 4.0 * pi, 2.0 * pi);
                if (t < len) {
                    s.in_I[k] = 1;
                    break;
                }
            }
        }
        int nI = 0;
        for (auto v : s.in_I) nI += v;
        if (nI == 0) throw ConfigError("ArcSplit: I is empty on the grid");
        if (nI == nt)
            throw ConfigError("ArcSplit: complement J must have positive measure");
        return s;
    }

    int count_I() const {
        int n = 0;
        for (auto v : in_I) n += v;
        return n;
    }
    double measure_I() const { return static_cast<double>(count_I()) / n_theta; }

    /// C^1 cutoff on J: 0 on I, ramping to 1 over `width` grid cells inside J.
    std::vector<double> j_mollifier(int width = 2) const {
        std::vector<double> m(n_theta, 0.0);
        auto dist_to_I = [&](int k) {
            for (int d = 0; d <= n_theta; ++d) {
                if (in_I[(k + d) % n_theta] || in_I[(k - d % n_theta + n_theta) % n_theta])
                    return d;
            }
            return n_theta;
        };
        for (int k = 0; k < n_theta; ++k) {
            if (in_I[k]) continue;
            int d = dist_to_I(k);
            double t = std::min(1.0, static_cast<double>(d) / (width + 1));
            m[k] = t * t * (3.0 - 2.0 * t);  // smoothstep
        }
        return m;
    }
};

struct DensityRow {
    int K = 0;
    double error_I = 0.0;
    double norm_J = 0.0;
};

struct DensityReport {
    std::vector<DensityRow> rows;
    double in_class_error = 0.0;  // error for targets already in the trace class
};

namespace detail {

struct DensityColumns {
    BoundarySpectrum base;                // H_nu(u_I v 0) as full-circle spectrum
    std::vector<std::vector<double>> bj;  // mollified basis samples on J
    std::vector<BoundarySpectrum> cols;   // H_nu(0 v b_k)
};

inline DensityColumns density_columns(const OperatorWorkspace& ws, const Coefficient& coef,
                                      const SolveConfig& cfg, const ArcSplit& split,
                                      const std::vector<double>& u_I_samples, int Kmax) {
    const int nt = split.n_theta;
    DensityColumns out;
    std::vector<double> uI(nt, 0.0);
    for (int k = 0; k < nt; ++k)
        if (split.in_I[k]) uI[k] = u_I_samples[k];
    out.base = hilbert_nu(ws, BoundarySpectrum::from_real_samples(uI), coef, cfg).h;
    std::vector<double> moll = split.j_mollifier();
    for (int i = 0; i < Kmax; ++i) {
        std::vector<double> b = trig_basis_samples(nt, i);
        for (int k = 0; k < nt; ++k) b[k] *= moll[k];
        out.bj.push_back(b);
        out.cols.push_back(hilbert_nu(ws, BoundarySpectrum::from_real_samples(b), coef, cfg).h);
    }
    return out;
}

}  // namespace detail

/// Approximates a complex target on I by traces of H^p_nu functions built
/// exactly as in the constructive density proof: least squares for u_J over a
/// K-dimensional mollified basis on J plus a constant, assembled as
/// psi = (u_I v u_J) + i H_nu(u_I v u_J) + i c.
inline DensityReport density_experiment(const OperatorWorkspace& ws,
                                        const std::vector<cd>& target_samples,
                                        const ArcSplit& split, const Coefficient& coef,
                                        const SolveConfig& cfg, const std::vector<int>& Ks,
                                        double ridge = 1e-10) {
    const GridPtr& g = ws.grid();
    const int nt = g->n_theta();
    if (static_cast<int>(target_samples.size()) != nt)
        throw ConfigError("density_experiment: target sample count mismatch");
    int Kmax = 0;
    for (int k : Ks) Kmax = std::max(Kmax, k);

    std::vector<double> uI(nt, 0.0), vI(nt, 0.0);
    for (int k = 0; k < nt; ++k)
        if (split.in_I[k]) {
            uI[k] = target_samples[k].real();
            vI[k] = target_samples[k].imag();
        }
    detail::DensityColumns C = detail::density_columns(ws, coef, cfg, split, uI, Kmax);

    // v = v_I - H_nu(u_I v 0) on I
    std::vector<cd> base_s = C.base.to_samples();
    std::vector<double> v(nt, 0.0);
    for (int k = 0; k < nt; ++k)
        if (split.in_I[k]) v[k] = vI[k] - base_s[k].real();

    // column samples on I (real parts; H_nu outputs are real)
    std::vector<std::vector<double>> col_s;
    for (int i = 0; i < Kmax; ++i) {
        std::vector<cd> s = C.cols[i].to_samples();
        std::vector<double> re(nt);
        for (int k = 0; k < nt; ++k) re[k] = s[k].real();
        col_s.push_back(std::move(re));
    }

    DensityReport rep;
    const double w = 1.0 / nt;
    for (int K : Ks) {
        const int n = K + 1;  // K basis columns + the constant
        std::vector<double> G(n * n, 0.0), rhs(n, 0.0);
        auto col = [&](int i, int k) { return i < K ? col_s[i][k] : 1.0; };
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) {
                double acc = 0.0;
                for (int k = 0; k < nt; ++k)
                    if (split.in_I[k]) acc += col(i, k) * col(j, k) * w;
                G[i * n + j] = G[j * n + i] = acc;
            }
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int k = 0; k < nt; ++k)
                if (split.in_I[k]) acc += col(i, k) * v[k] * w;
            rhs[i] = acc;
        }
        std::vector<double> cvec = detail::spd_solve(G, rhs, ridge);

        // assemble psi = (u_I v u_J) + i H_nu(u_I v u_J) + i c by linearity
        std::vector<double> full_u = uI;
        for (int k = 0; k < nt; ++k)
            if (!split.in_I[k])
                for (int i = 0; i < K; ++i) full_u[k] += cvec[i] * C.bj[i][k];
        std::vector<cd> h = base_s;
        for (int i = 0; i < K; ++i) {
            std::vector<cd> s = C.cols[i].to_samples();
            for (int k = 0; k < nt; ++k) h[k] += cvec[i] * s[k];
        }
        double c0 = cvec[K];
        DensityRow row;
        row.K = K;
        double errI = 0.0, normJ = 0.0;
        for (int k = 0; k < nt; ++k) {
            cd psi = cd(full_u[k], h[k].real() + c0);
            if (split.in_I[k])
                errI += std::norm(psi - target_samples[k]) * w;
            else
                normJ += std::norm(psi) * w;
        }
        row.error_I = std::sqrt(errI);
        row.norm_J = std::sqrt(normJ);
        rep.rows.push_back(row);
    }
    return rep;
}

/// Same scheme with the W^{1-1/p,p}(I) error functional: the least squares
/// runs in the p = 2 quadratic form (L^2(I) mass + Slobodeckij s = 1/2 Gram
/// restricted to I x I, which carries the tangential-derivative information
/// of the A-columns); the report evaluates the functional at the requested p.
inline DensityReport density_sobolev_experiment(const OperatorWorkspace& ws,
                                                const std::vector<cd>& target_samples,
                                                const ArcSplit& split, const Coefficient& coef,
                                                const SolveConfig& cfg,
                                                const std::vector<int>& Ks,
                                                double ridge = 1e-10) {
    const GridPtr& g = ws.grid();
    const int nt = g->n_theta();
    int Kmax = 0;
    for (int k : Ks) Kmax = std::max(Kmax, k);
    const double s_order = 1.0 - 1.0 / cfg.p;

    std::vector<double> uI(nt, 0.0), vI(nt, 0.0);
    for (int k = 0; k < nt; ++k)
        if (split.in_I[k]) {
            uI[k] = target_samples[k].real();
            vI[k] = target_samples[k].imag();
        }
    detail::DensityColumns C = detail::density_columns(ws, coef, cfg, split, uI, Kmax);
    std::vector<cd> base_s = C.base.to_samples();
    std::vector<double> v(nt, 0.0);
    for (int k = 0; k < nt; ++k)
        if (split.in_I[k]) v[k] = vI[k] - base_s[k].real();

    // quadratic form on samples restricted to I: mass + s = 1/2 seminorm
    std::vector<int> idx;  // grid indices of I
    for (int k = 0; k < nt; ++k)
        if (split.in_I[k]) idx.push_back(k);
    const int nI = static_cast<int>(idx.size());
    const double w = 1.0 / nt;
    std::vector<double> Q(static_cast<std::size_t>(nI) * nI, 0.0);
    for (int a = 0; a < nI; ++a) Q[a * nI + a] += w;
    for (int a = 0; a < nI; ++a)
        for (int b = 0; b < nI; ++b) {
            if (a == b) continue;
            int d = std::abs(idx[a] - idx[b]);
            double chord = 2.0 * std::abs(std::sin(pi * d / nt));
            double kern = std::pow(chord, -2.0) * w * w;  // 1 + s p = 2 at p = 2
            Q[a * nI + a] += kern;
            Q[a * nI + b] -= kern;
        }

    std::vector<std::vector<double>> col_I;
    for (int i = 0; i < Kmax; ++i) {
        std::vector<cd> s = C.cols[i].to_samples();
        std::vector<double> re(nI);
        for (int a = 0; a < nI; ++a) re[a] = s[idx[a]].real();
        col_I.push_back(std::move(re));
    }
    std::vector<double> v_I(nI);
    for (int a = 0; a < nI; ++a) v_I[a] = v[idx[a]];

    auto qform = [&](const std::vector<double>& x, const std::vector<double>& y) {
        double acc = 0.0;
        for (int a = 0; a < nI; ++a) {
            double row = 0.0;
            for (int b = 0; b < nI; ++b) row += Q[a * nI + b] * y[b];
            acc += x[a] * row;
        }
        return acc;
    };

    DensityReport rep;
    for (int K : Ks) {
        const int n = K + 1;
        std::vector<double> G(n * n, 0.0), rhs(n, 0.0);
        std::vector<std::vector<double>> cols;
        for (int i = 0; i < K; ++i) cols.push_back(col_I[i]);
        cols.push_back(std::vector<double>(nI, 1.0));
        for (int i = 0; i < n; ++i) {
            rhs[i] = qform(cols[i], v_I);
            for (int j = 0; j <= i; ++j) {
                G[i * n + j] = G[j * n + i] = qform(cols[i], cols[j]);
            }
        }
        std::vector<double> cvec = detail::spd_solve(G, rhs, ridge);

        std::vector<double> full_u = uI;
        for (int k = 0; k < nt; ++k)
            if (!split.in_I[k])
                for (int i = 0; i < K; ++i) full_u[k] += cvec[i] * C.bj[i][k];
        std::vector<cd> h = base_s;
        for (int i = 0; i < K; ++i) {
            std::vector<cd> s = C.cols[i].to_samples();
            for (int k = 0; k < nt; ++k) h[k] += cvec[i] * s[k];
        }
        double c0 = cvec[K];

        // W^{1-1/p,p}(I) functional of the mismatch, evaluated at cfg.p
        double mass = 0.0;
        std::vector<cd> diff(nI);
        for (int a = 0; a < nI; ++a) {
            cd psi = cd(full_u[idx[a]], h[idx[a]].real() + c0);
            diff[a] = psi - target_samples[idx[a]];
            mass += std::pow(std::abs(diff[a]), cfg.p) * w;
        }
        double semi = 0.0;
        for (int a = 0; a < nI; ++a)
            for (int b = 0; b < nI; ++b) {
                if (a == b) continue;
                int d = std::abs(idx[a] - idx[b]);
                double chord = 2.0 * std::abs(std::sin(pi * d / nt));
                semi += std::pow(std::abs(diff[a] - diff[b]), cfg.p) *
                        std::pow(chord, -(1.0 + s_order * cfg.p)) * w * w;
            }
        DensityRow row;
        row.K = K;
        row.error_I = std::pow(mass + semi, 1.0 / cfg.p);
        double normJ = 0.0;
        for (int k = 0; k < nt; ++k)
            if (!split.in_I[k])
                normJ += std::norm(cd(full_u[k], h[k].real() + c0)) * w;
        row.norm_J = std::sqrt(normJ);
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace beltrami
