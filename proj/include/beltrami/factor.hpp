#pragma once

#include "beltrami/solver.hpp"

namespace beltrami {

// ---------------------------------------------------------------------------
// Bers-Nirenberg factorization w = exp(s) F with F holomorphic, s bounded by
// 4 ||alpha||_inf, and one boundary component of s vanishing on T:
//   r = alpha conj(w)/w (r = 0 where w ~ 0),
//   s = T(r) +- reflected kernel of r.
// The "+" variant kills Re s on T, the "-" variant kills Im s. (The two
// discrete trace expansions share their quadrature rows, so the vanishing is
// exact at the discrete level.)
// ---------------------------------------------------------------------------

enum class FactorVariant { plus, minus };

struct Factorization {
    DiskField s;
    DiskField F;
    FactorVariant variant = FactorVariant::plus;
    double sup_s = 0.0;                 // max sampled |s|
    double alpha_sup = 0.0;             // reference for the (estims) bound
    double boundary_residual = 0.0;     // vanishing component of tr s, relative
    double holomorphy_residual = 0.0;   // relative negative-mode mass of F
    double equation_residual = 0.0;     // dbar w - alpha conj(w), relative
    bool certified = false;
    std::vector<std::string> warnings;
};

/// r = alpha conj(w)/w where |w| exceeds threshold * sup|w|, else 0.
/// |r| <= |alpha| pointwise.
inline DiskField compute_r(const DiskField& w, const AlphaField& alpha,
                           double zero_threshold = 1e-12) {
    const GridPtr& g = w.grid();
    double wsup = 0.0;
    std::vector<cd> s = synthesize(w, 2 * g->n_theta());
    for (const cd& v : s) wsup = std::max(wsup, std::abs(v));
    double floor = zero_threshold * wsup;
    return detail::padded_pointwise(w, [&](cd v, std::size_t i) {
        if (std::abs(v) <= floor) return cd(0, 0);
        return alpha.samples_padded[i] * std::conj(v) / v;
    });
}

/// s = T(r) +- reflect(r); dbar s = r spectrally, and the reflected term is
/// holomorphic so the identity is carried by the T part alone.
inline DiskField compute_s(const OperatorWorkspace& ws, const DiskField& r_field,
                           FactorVariant variant) {
    ReflectSign sign = variant == FactorVariant::plus ? ReflectSign::plus : ReflectSign::minus;
    return cauchy_area(ws, r_field) + reflect_area(ws, r_field, sign);
}

/// Factorize w = exp(s) F and certify: the sup bound on s, the vanishing
/// boundary component, and the holomorphy of F. Certification failure is
/// reported in the flags, not raised.
inline Factorization factorize(const OperatorWorkspace& ws, const DiskField& w,
                               const AlphaField& alpha,
                               FactorVariant variant = FactorVariant::plus,
                               double equation_tol = 1e-6, double holo_threshold = 1e-6) {
    const GridPtr& g = ws.grid();
    Factorization out;
    out.variant = variant;
    out.alpha_sup = alpha.sup;

    // precondition: w should solve dbar w = alpha conj(w)
    {
        DiskField resid = dbar_field(w) - detail::padded_pointwise(w, [&](cd v, std::size_t i) {
                              return alpha.samples_padded[i] * std::conj(v);
                          });
        double scale = std::max({l2_disk(dbar_field(w)), alpha.sup * l2_disk(w), 1e-300});
        out.equation_residual = l2_disk(resid) / scale;
        if (out.equation_residual > equation_tol)
            out.warnings.push_back("input does not solve the equation to the declared residual");
    }

    DiskField r = compute_r(w, alpha);
    out.s = compute_s(ws, r, variant);
    out.sup_s = sup_abs(out.s);

    // boundary certificate: which component of tr s vanishes
    {
        const BoundarySpectrum& tr = *out.s.attached_trace();
        std::vector<cd> ts = tr.to_samples();
        double comp = 0.0, scale = 0.0;
        for (const cd& v : ts) {
            comp = std::max(comp, variant == FactorVariant::plus ? std::abs(v.real())
                                                                 : std::abs(v.imag()));
            scale = std::max(scale, std::abs(v));
        }
        out.boundary_residual = comp / std::max({scale, out.sup_s, 1e-300});
    }

    // F = exp(-s) w
    {
        std::vector<cd> s_samp = synthesize(out.s, 2 * g->n_theta());
        out.F = detail::padded_pointwise(
            w, [&](cd v, std::size_t i) { return std::exp(-s_samp[i]) * v; });
    }

    // holomorphy: relative l2 mass of negative modes, maximized over radii
    {
        double worst = 0.0;
        const int M = g->max_mode(), nr = g->n_radial();
        for (int j = 0; j < nr; ++j) {
            double neg = 0.0, tot = 0.0;
            for (int n = -M; n <= M; ++n) {
                double a = std::norm(out.F.profile(n, j));
                tot += a;
                if (n < 0) neg += a;
            }
            if (tot > 0) worst = std::max(worst, std::sqrt(neg / tot));
        }
        out.holomorphy_residual = worst;
    }

    out.certified = out.sup_s <= 4.0 * alpha.sup + 1e-6 &&
                    out.boundary_residual <= 1e-8 &&
                    out.holomorphy_residual <= holo_threshold;
    return out;
}

}  // namespace beltrami
