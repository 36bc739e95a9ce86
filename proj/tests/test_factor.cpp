#include <catch2/catch_amalgamated.hpp>

#include "beltrami/factor.hpp"
#include "support/test_fields.hpp"

using namespace beltrami;
using namespace beltrami::testing;
using Catch::Approx;

namespace {
GridPtr g64() {
    static GridPtr g = make_grid(64, 4, 8);
    return g;
}
const OperatorWorkspace& ws64() {
    static OperatorWorkspace w(g64());
    return w;
}
}  // namespace

TEST_CASE("compute_r: closed forms and pointwise bound") {
    GridPtr g = g64();
    Rng rng(2);
    DiskField w = random_polynomial_field(g, rng, 5);
    AlphaField zero{DiskField(g)};
    DiskField r0 = compute_r(w, zero);
    REQUIRE(sup_abs(r0) < 1e-14);

    // w real positive -> r = alpha
    DiskField wpos = monomial_field(g, 0);
    wpos *= cd(2.0, 0);
    AlphaField alpha{random_smooth_field(g, rng, 4)};
    DiskField r1 = compute_r(wpos, alpha);
    REQUIRE(rel_field_err(r1, alpha.field) < 1e-12);

    // |r| <= |alpha| pointwise on smooth non-vanishing inputs
    DiskField wnv = monomial_field(g, 0);
    wnv *= cd(3.0, 1.0);
    DiskField pert = random_smooth_field(g, rng, 3);
    pert *= cd(0.2, 0);
    wnv += pert;
    DiskField r2 = compute_r(wnv, alpha);
    std::vector<cd> rs = synthesize(r2, 2 * g->n_theta());
    for (std::size_t i = 0; i < rs.size(); ++i)
        REQUIRE(std::abs(rs[i]) <= std::abs(alpha.samples_padded[i]) + 1e-9);
}

TEST_CASE("compute_s: closed form for constant r, dbar identity, variants") {
    GridPtr g = g64();
    DiskField zero(g);
    DiskField s0 = compute_s(ws64(), zero, FactorVariant::plus);
    REQUIRE(sup_abs(s0) < 1e-14);

    // r = c real: s_+ = c (zbar - z), purely imaginary, Re s|_T = 0,
    // sup |s| = 2|c| <= 4|c|
    double c = 0.35;
    DiskField cf = monomial_field(g, 0);
    cf *= cd(c, 0);
    DiskField sp = compute_s(ws64(), cf, FactorVariant::plus);
    DiskField expect = monomial_field(g, -1);
    expect *= cd(c, 0);
    DiskField mz = monomial_field(g, 1);
    mz *= cd(-c, 0);
    expect += mz;
    REQUIRE(rel_field_err(sp, expect) < 1e-12);
    // sampled sup of |c (zbar - z)| = 2|c| max |Im z| over grid nodes
    REQUIRE(sup_abs(sp) <= 2 * c + 1e-12);
    REQUIRE(sup_abs(sp) > 2 * c * 0.98);
    std::vector<cd> ts = sp.attached_trace()->to_samples();
    for (const cd& v : ts) REQUIRE(std::abs(v.real()) < 1e-13);

    // "-" variant: s_- = c (zbar + z), real, Im s|_T = 0
    DiskField sm = compute_s(ws64(), cf, FactorVariant::minus);
    std::vector<cd> tm = sm.attached_trace()->to_samples();
    for (const cd& v : tm) REQUIRE(std::abs(v.imag()) < 1e-13);

    // dbar s = r spectrally for random band-limited r; both variants
    Rng rng(7);
    DiskField r = random_smooth_field(g, rng, 6);
    for (FactorVariant v : {FactorVariant::plus, FactorVariant::minus}) {
        DiskField s = compute_s(ws64(), r, v);
        REQUIRE(rel_field_err(dbar_field(s), r) < 1e-8);
    }
}

TEST_CASE("factorize: holomorphic input with alpha = 0") {
    GridPtr g = g64();
    AlphaField zero{DiskField(g)};
    DiskField z = monomial_field(g, 1);
    Factorization fac = factorize(ws64(), z, zero);
    REQUIRE(fac.sup_s < 1e-13);
    REQUIRE(rel_field_err(fac.F, z) < 1e-12);
    REQUIRE(fac.holomorphy_residual < 1e-12);
    REQUIRE(fac.certified);
}

TEST_CASE("factorize: manufactured fixed point recovers s and F") {
    GridPtr g = g64();
    Rng rng(19);
    AlphaField alpha = [&] {
        DiskField a = random_smooth_field(g, rng, 4);
        AlphaField raw(a);
        DiskField sc = a;
        sc *= cd(0.15 / std::max(raw.sup, 1e-300), 0);
        return AlphaField(sc);
    }();
    // F0 holomorphic and bounded away from zero
    DiskField F0(g);
    for (int j = 0; j < g->n_radial(); ++j) {
        double r = g->radial.nodes[j];
        F0.set_profile(0, j, cd(2.0, 0));
        F0.set_profile(1, j, cd(0.4 * r, 0.1 * r));
        F0.set_profile(2, j, cd(-0.2 * r * r, 0));
    }
    // fixed point w = exp(s(r(w))) F0
    DiskField w = F0;
    for (int it = 0; it < 40; ++it) {
        DiskField s = compute_s(ws64(), compute_r(w, alpha), FactorVariant::plus);
        std::vector<cd> ss = synthesize(s, 2 * g->n_theta());
        DiskField next = detail::padded_pointwise(
            F0, [&](cd v, std::size_t i) { return std::exp(ss[i]) * v; });
        double delta = rel_field_err(next, w);
        w = std::move(next);
        if (delta < 1e-13) break;
    }
    Factorization fac = factorize(ws64(), w, alpha, FactorVariant::plus);
    REQUIRE(fac.equation_residual < 1e-6);
    REQUIRE(fac.certified);
    REQUIRE(fac.sup_s <= 4.0 * alpha.sup + 1e-6);
    REQUIRE(fac.boundary_residual < 1e-8);
    REQUIRE(fac.holomorphy_residual < 1e-6);
    REQUIRE(rel_field_err(fac.F, F0) < 1e-6);

    // nonvanishing transport: min |w| > 0 implies min |F| > 0
    std::vector<cd> wsamp = synthesize(w);
    std::vector<cd> fsamp = synthesize(fac.F);
    double wmin = 1e9, fmin = 1e9;
    for (const cd& v : wsamp) wmin = std::min(wmin, std::abs(v));
    for (const cd& v : fsamp) fmin = std::min(fmin, std::abs(v));
    REQUIRE(wmin > 0);
    REQUIRE(fmin > 0.5 * wmin * std::exp(-fac.sup_s));

    // variant flip: same dbar, other boundary component
    Factorization fm = factorize(ws64(), w, alpha, FactorVariant::minus);
    REQUIRE(fm.boundary_residual < 1e-8);
    REQUIRE(rel_field_err(dbar_field(fm.s), dbar_field(fac.s)) < 1e-8);
}
