#pragma once

#include <functional>

#include "beltrami/ops.hpp"

namespace beltrami {

// ---------------------------------------------------------------------------
// The dilatation nu (real, |nu| <= kappa < 1), its conductivity
// sigma = (1 - nu)/(1 + nu), and the coefficient alpha = -dbar(nu)/(1 - nu^2)
// of the transformed equation dbar w = alpha conj(w). nu is preferably given
// in closed form together with dbar(nu); a grid-sampled fallback uses
// spectral differentiation and flags the accuracy caveat.
// ---------------------------------------------------------------------------

/// alpha of dbar w = alpha conj(w). Either derived from a Coefficient (which
/// makes the sigma^{-1/2} normalization machinery available) or a free
/// L^inf field.
struct AlphaField {
    DiskField field;
    std::vector<cd> samples_padded;  // on the 2x theta grid, for products
    double sup = 0.0;
    bool coefficient_derived = false;

    AlphaField() = default;
    explicit AlphaField(DiskField f, bool from_coefficient = false)
        : field(std::move(f)), coefficient_derived(from_coefficient) {
        const GridPtr& g = field.grid();
        samples_padded = synthesize(field, 2 * g->n_theta());
        for (const cd& v : samples_padded) sup = std::max(sup, std::abs(v));
    }

    bool zero() const { return sup < 1e-300; }
};

class Coefficient {
  public:
    using RealFn = std::function<double(double, double)>;
    using ComplexFn = std::function<cd(double, double)>;

    /// Closed-form nu with closed-form Wirtinger derivative dbar(nu).
    static Coefficient from_callables(GridPtr g, RealFn nu, ComplexFn dbar_nu,
                                      double declared_kappa = -1.0) {
        Coefficient c;
        c.g_ = std::move(g);
        c.nu_fn_ = std::move(nu);
        c.dbar_fn_ = std::move(dbar_nu);
        c.exact_derivative_ = true;
        c.build(declared_kappa);
        return c;
    }

    static Coefficient constant(GridPtr g, double nu0) {
        return from_callables(
            std::move(g), [nu0](double, double) { return nu0; },
            [](double, double) { return cd(0, 0); }, std::abs(nu0));
    }

    /// Radial conductivity sigma(r) with derivative dsigma/dr.
    static Coefficient radial_sigma(GridPtr g, std::function<double(double)> sigma,
                                    std::function<double(double)> dsigma) {
        auto nu = [sigma](double x, double y) {
            double s = sigma(std::hypot(x, y));
            return (1.0 - s) / (1.0 + s);
        };
        auto dbar = [sigma, dsigma](double x, double y) -> cd {
            double r = std::hypot(x, y);
            if (r == 0.0) return cd(0, 0);
            double s = sigma(r), ds = dsigma(r);
            // dbar nu = (dnu/dsigma) sigma'(r) dbar r,  dbar r = e^{i theta}/2
            cd eith(x / r, y / r);
            return -2.0 / ((1.0 + s) * (1.0 + s)) * ds * 0.5 * eith;
        };
        return from_callables(std::move(g), nu, dbar);
    }

    /// Grid-only nu: Wirtinger derivative by spectral differentiation.
    /// Less accurate than a closed form; derivative_is_exact() reports it.
    static Coefficient from_grid_samples(GridPtr g, const DiskField& nu_field) {
        Coefficient c;
        c.g_ = std::move(g);
        c.exact_derivative_ = false;
        c.nu_disc_ = nu_field;
        c.dbar_disc_ = dbar_field(nu_field);
        c.build(-1.0);
        return c;
    }

    const GridPtr& grid() const { return g_; }
    double kappa() const { return kappa_; }
    double lipschitz_bound() const { return lipschitz_; }
    bool derivative_is_exact() const { return exact_derivative_; }
    bool is_zero() const { return kappa_ < 1e-300; }

    const DiskField& nu() const { return nu_field_; }
    const DiskField& sigma() const { return sigma_field_; }
    const DiskField& sqrt_sigma() const { return sqrt_sigma_field_; }
    const DiskField& inv_sqrt_sigma() const { return inv_sqrt_sigma_field_; }
    const AlphaField& alpha() const { return alpha_; }
    /// alpha_1 = d(nu)/(1 - nu^2), the coefficient of the gradient equation.
    const AlphaField& alpha1() const { return alpha1_; }

    // boundary samples at theta_k (r = 1)
    const std::vector<double>& nu_boundary() const { return nu_T_; }
    const std::vector<double>& sigma_boundary() const { return sigma_T_; }
    const std::vector<double>& sqrt_sigma_boundary() const { return sqrt_sigma_T_; }

    // pointwise samples on the 2x padded tensor grid (for dealiased products)
    const std::vector<double>& nu_padded() const { return nu_pad_; }
    const std::vector<double>& sqrt_sigma_padded() const { return sqrt_sigma_pad_; }
    const std::vector<double>& inv_sqrt_sigma_padded() const { return inv_sqrt_sigma_pad_; }
    const std::vector<double>& inv_sqrt_1mnu2_padded() const { return inv_sqrt_1mnu2_pad_; }
    const std::vector<double>& sqrt_1mnu2_padded() const { return sqrt_1mnu2_pad_; }

    Coefficient negated() const {
        if (nu_fn_) {
            RealFn nu = nu_fn_;
            ComplexFn db = dbar_fn_;
            return from_callables(
                g_, [nu](double x, double y) { return -nu(x, y); },
                [db](double x, double y) { return -db(x, y); }, kappa_);
        }
        DiskField neg = nu_disc_;
        neg *= cd(-1, 0);
        return from_grid_samples(g_, neg);
    }

  private:
    Coefficient() = default;

    double eval_nu(double x, double y) const {
        if (nu_fn_) return nu_fn_(x, y);
        double r = std::hypot(x, y);
        return nu_disc_.value_at(std::min(r, 1.0), std::atan2(y, x)).real();
    }
    cd eval_dbar(double x, double y) const {
        if (dbar_fn_) return dbar_fn_(x, y);
        double r = std::hypot(x, y);
        return dbar_disc_.value_at(std::min(r, 1.0), std::atan2(y, x));
    }

    void build(double declared_kappa) {
        const int nt = g_->n_theta(), nr = g_->n_radial(), nt2 = 2 * nt;
        std::vector<cd> nu_s(static_cast<std::size_t>(nt) * nr);
        std::vector<cd> sg(nu_s.size()), sq(nu_s.size()), isq(nu_s.size());
        std::vector<cd> al(nu_s.size()), al1(nu_s.size());
        nu_pad_.resize(static_cast<std::size_t>(nt2) * nr);
        sqrt_sigma_pad_.resize(nu_pad_.size());
        inv_sqrt_sigma_pad_.resize(nu_pad_.size());
        inv_sqrt_1mnu2_pad_.resize(nu_pad_.size());
        sqrt_1mnu2_pad_.resize(nu_pad_.size());

        double max_nu = 0.0, max_grad = 0.0;
        for (int j = 0; j < nr; ++j) {
            double r = g_->radial.nodes[j];
            for (int k = 0; k < nt2; ++k) {
                double th = 2.0 * pi * k / nt2;
                double x = r * std::cos(th), y = r * std::sin(th);
                double v = eval_nu(x, y);
                if (std::abs(v) >= 1.0)
                    throw ConfigError("Coefficient: |nu| >= 1 at a sample point");
                max_nu = std::max(max_nu, std::abs(v));
                double s = (1.0 - v) / (1.0 + v);
                nu_pad_[static_cast<std::size_t>(j) * nt2 + k] = v;
                sqrt_sigma_pad_[static_cast<std::size_t>(j) * nt2 + k] = std::sqrt(s);
                inv_sqrt_sigma_pad_[static_cast<std::size_t>(j) * nt2 + k] = 1.0 / std::sqrt(s);
                inv_sqrt_1mnu2_pad_[static_cast<std::size_t>(j) * nt2 + k] =
                    1.0 / std::sqrt(1.0 - v * v);
                sqrt_1mnu2_pad_[static_cast<std::size_t>(j) * nt2 + k] = std::sqrt(1.0 - v * v);
                if (k % 2 == 0) {
                    cd db = eval_dbar(x, y);
                    max_grad = std::max(max_grad, 2.0 * std::abs(db));
                    std::size_t idx = static_cast<std::size_t>(j) * nt + k / 2;
                    nu_s[idx] = v;
                    sg[idx] = s;
                    sq[idx] = std::sqrt(s);
                    isq[idx] = 1.0 / std::sqrt(s);
                    al[idx] = -db / (1.0 - v * v);
                    al1[idx] = std::conj(db) / (1.0 - v * v);  // d nu = conj(dbar nu), nu real
                }
            }
        }
        kappa_ = declared_kappa > 0 ? declared_kappa : max_nu * (1.0 + 1e-12);
        if (max_nu > kappa_ + 1e-12)
            throw ConfigError("Coefficient: sampled |nu| exceeds the declared kappa");
        if (kappa_ >= 1.0) throw ConfigError("Coefficient: kappa must be < 1");
        lipschitz_ = max_grad;

        nu_field_ = analyze(g_, nu_s);
        sigma_field_ = analyze(g_, sg);
        sqrt_sigma_field_ = analyze(g_, sq);
        inv_sqrt_sigma_field_ = analyze(g_, isq);
        alpha_ = AlphaField(analyze(g_, al), true);
        alpha1_ = AlphaField(analyze(g_, al1), true);

        nu_T_.resize(nt);
        sigma_T_.resize(nt);
        sqrt_sigma_T_.resize(nt);
        for (int k = 0; k < nt; ++k) {
            double th = g_->circle.theta(k);
            double v;
            if (nu_fn_) {
                v = nu_fn_(std::cos(th), std::sin(th));
            } else {
                BoundarySpectrum tr = extrapolated_trace(nu_disc_);
                v = tr.to_real_samples()[k];
            }
            if (std::abs(v) >= 1.0) throw ConfigError("Coefficient: |nu| >= 1 on the boundary");
            nu_T_[k] = v;
            sigma_T_[k] = (1.0 - v) / (1.0 + v);
            sqrt_sigma_T_[k] = std::sqrt(sigma_T_[k]);
        }
    }

    GridPtr g_;
    RealFn nu_fn_;
    ComplexFn dbar_fn_;
    DiskField nu_disc_, dbar_disc_;  // grid-sampled fallback
    bool exact_derivative_ = false;
    double kappa_ = 0.0, lipschitz_ = 0.0;

    DiskField nu_field_, sigma_field_, sqrt_sigma_field_, inv_sqrt_sigma_field_;
    AlphaField alpha_, alpha1_;
    std::vector<double> nu_T_, sigma_T_, sqrt_sigma_T_;
    std::vector<double> nu_pad_, sqrt_sigma_pad_, inv_sqrt_sigma_pad_, inv_sqrt_1mnu2_pad_,
        sqrt_1mnu2_pad_;
};

// ---------------------------------------------------------------------------
// sigma algebra and the similarity transform w = (f - nu conj(f)) / sqrt(1 - nu^2)
// ---------------------------------------------------------------------------

struct SigmaFields {
    DiskField sigma, sqrt_sigma, inv_sqrt_sigma;
};

inline SigmaFields nu_to_sigma(const Coefficient& coef) {
    return {coef.sigma(), coef.sqrt_sigma(), coef.inv_sqrt_sigma()};
}

inline AlphaField alpha_from_nu(const Coefficient& coef) { return coef.alpha(); }

namespace detail {

/// Pointwise map on the 2x-padded physical grid; fn(sample, flat_index).
template <typename F>
DiskField padded_pointwise(const DiskField& f, F&& fn) {
    const GridPtr& g = f.grid();
    const int nt2 = 2 * g->n_theta(), nr = g->n_radial(), M = g->max_mode();
    std::vector<cd> s = synthesize(f, nt2);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = fn(s[i], i);
    DiskField out(g);
    std::vector<cd> row(nt2);
    for (int j = 0; j < nr; ++j) {
        for (int k = 0; k < nt2; ++k) row[k] = s[static_cast<std::size_t>(j) * nt2 + k];
        fft_forward(row);
        for (int m = 0; m <= M; ++m) out.set_profile(m, j, row[m]);
        for (int m = 1; m <= M; ++m) out.set_profile(-m, j, row[nt2 - m]);
    }
    return out;
}

}  // namespace detail

/// w = (f - nu conj(f)) / sqrt(1 - nu^2), pointwise on the padded grid.
inline DiskField similarity_forward(const DiskField& f, const Coefficient& coef) {
    const std::vector<double>& nu = coef.nu_padded();
    const std::vector<double>& isq = coef.inv_sqrt_1mnu2_padded();
    return detail::padded_pointwise(f, [&](cd v, std::size_t i) {
        return (v - nu[i] * std::conj(v)) * isq[i];
    });
}

/// f = (w + nu conj(w)) / sqrt(1 - nu^2).
inline DiskField similarity_inverse(const DiskField& w, const Coefficient& coef) {
    const std::vector<double>& nu = coef.nu_padded();
    const std::vector<double>& isq = coef.inv_sqrt_1mnu2_padded();
    return detail::padded_pointwise(w, [&](cd v, std::size_t i) {
        return (v + nu[i] * std::conj(v)) * isq[i];
    });
}

/// The equivalent form w = sigma^{1/2} u + i sigma^{-1/2} v (u = Re f,
/// v = Im f); used to cross-check similarity_forward.
inline DiskField similarity_forward_sigma_form(const DiskField& f, const Coefficient& coef) {
    const std::vector<double>& sq = coef.sqrt_sigma_padded();
    const std::vector<double>& isq = coef.inv_sqrt_sigma_padded();
    return detail::padded_pointwise(f, [&](cd v, std::size_t i) {
        return cd(sq[i] * v.real(), isq[i] * v.imag());
    });
}

/// Boundary-level inverse similarity: tr f from tr w.
inline BoundarySpectrum similarity_inverse_trace(const BoundarySpectrum& tr_w,
                                                 const Coefficient& coef) {
    std::vector<cd> s = tr_w.to_samples();
    const std::vector<double>& nu = coef.nu_boundary();
    for (std::size_t k = 0; k < s.size(); ++k)
        s[k] = (s[k] + nu[k] * std::conj(s[k])) / std::sqrt(1.0 - nu[k] * nu[k]);
    return BoundarySpectrum::from_samples(s);
}

}  // namespace beltrami
