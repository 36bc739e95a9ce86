#include <catch2/catch_amalgamated.hpp>

#include "beltrami/grid.hpp"
#include "support/test_fields.hpp"

using namespace beltrami;
using beltrami::testing::random_polynomial_field;
using beltrami::testing::random_real_trig;
using Catch::Approx;

namespace {
GridPtr small_grid() {
    static GridPtr g = make_grid(64, 4, 8);
    return g;
}
}  // namespace

TEST_CASE("radial rule: nodes interior, weights positive, monomials exact") {
    RadialRule rad(8, 8);
    REQUIRE(rad.size() == 64);
    for (int j = 0; j < rad.size(); ++j) {
        REQUIRE(rad.nodes[j] > 0.0);
        REQUIRE(rad.nodes[j] < 1.0);
        REQUIRE(rad.weights_rho[j] > 0.0);
        if (j > 0) REQUIRE(rad.nodes[j] > rad.nodes[j - 1]);
    }
    // \int_0^1 rho^k rho drho = 1/(k+2), exact through the declared degree
    for (int k = 0; k <= rad.exact_degree(); ++k) {
        double acc = 0.0;
        for (int j = 0; j < rad.size(); ++j)
            acc += std::pow(rad.nodes[j], k) * rad.weights_rho[j];
        REQUIRE(acc == Approx(1.0 / (k + 2)).epsilon(1e-13));
    }
}

TEST_CASE("radial rule: panel differentiation and interpolation") {
    RadialRule rad(4, 8);
    std::vector<double> vals(rad.size()), dvals;
    for (int j = 0; j < rad.size(); ++j) {
        double r = rad.nodes[j];
        vals[j] = r * r * r - 2.0 * r;
    }
    dvals = rad.differentiate(vals);
    for (int j = 0; j < rad.size(); ++j) {
        double r = rad.nodes[j];
        REQUIRE(dvals[j] == Approx(3.0 * r * r - 2.0).margin(1e-11));
    }
    REQUIRE(rad.interpolate(vals, 0.377) == Approx(0.377 * 0.377 * 0.377 - 2 * 0.377).margin(1e-12));
}

TEST_CASE("analyze: constant and single-mode fields") {
    GridPtr g = small_grid();
    const int nt = g->n_theta(), nr = g->n_radial();
    std::vector<cd> ones(static_cast<std::size_t>(nt) * nr, cd(1, 0));
    DiskField f = analyze(g, ones);
    for (int j = 0; j < nr; ++j) REQUIRE(std::abs(f.profile(0, j) - 1.0) < 1e-13);
    for (int n = 1; n <= g->max_mode(); ++n)
        for (int j = 0; j < nr; ++j) {
            REQUIRE(std::abs(f.profile(n, j)) < 1e-13);
            REQUIRE(std::abs(f.profile(-n, j)) < 1e-13);
        }

    std::vector<cd> zs(static_cast<std::size_t>(nt) * nr);
    for (int j = 0; j < nr; ++j)
        for (int k = 0; k < nt; ++k)
            zs[static_cast<std::size_t>(j) * nt + k] =
                std::polar(g->radial.nodes[j], g->circle.theta(k));
    DiskField fz = analyze(g, zs);
    for (int j = 0; j < nr; ++j)
        REQUIRE(std::abs(fz.profile(1, j) - g->radial.nodes[j]) < 1e-13);
    REQUIRE(std::abs(fz.profile(0, 3)) < 1e-13);
    REQUIRE(std::abs(fz.profile(-1, 5)) < 1e-13);
}

TEST_CASE("analyze . synthesize round trip on band-limited fields") {
    GridPtr g = small_grid();
    Rng rng(7);
    DiskField f = random_polynomial_field(g, rng, 10);
    DiskField back = analyze(g, synthesize(f));
    REQUIRE(beltrami::testing::rel_field_err(back, f) < 1e-13);
}

TEST_CASE("analyze rejects shape mismatch") {
    GridPtr g = small_grid();
    std::vector<cd> bad(17);
    REQUIRE_THROWS_AS(analyze(g, bad), ConfigError);
}

TEST_CASE("circle_norm closed forms") {
    GridPtr g = small_grid();
    DiskField c = beltrami::testing::monomial_field(g, 0);
    c *= cd(3.0, -1.0);
    double r = g->radial.nodes[10];
    REQUIRE(circle_norm(c, r, 2.5) == Approx(std::abs(cd(3.0, -1.0))).epsilon(1e-12));

    // field z: |z| constant on circles
    DiskField z = beltrami::testing::monomial_field(g, 1);
    // 0.5 is not a node; use a node radius and the exact value r
    REQUIRE(circle_norm(z, r, 2.0) == Approx(r).epsilon(1e-12));

    // z + z^2 at node radius, p = 2: Parseval by hand -> sqrt(r^2 + r^4)
    DiskField zz = beltrami::testing::monomial_field(g, 1);
    DiskField z2 = beltrami::testing::monomial_field(g, 2);
    zz += z2;
    REQUIRE(circle_norm(zz, r, 2.0) == Approx(std::sqrt(r * r + r * r * r * r)).epsilon(1e-12));
    REQUIRE_THROWS_AS(circle_norm(zz, 0.5000001234, 2.0), ConfigError);
}

TEST_CASE("Parseval at every node radius") {
    GridPtr g = small_grid();
    Rng rng(21);
    DiskField f = random_polynomial_field(g, rng, 8);
    for (int j : {0, 7, 20, g->n_radial() - 1}) {
        double direct = circle_norm(f, g->radial.nodes[j], 2.0);
        double pars = parseval_circle_norm2(f, j);
        REQUIRE(direct == Approx(pars).epsilon(1e-12));
    }
}

TEST_CASE("hardy_norm: constants, monotone holomorphic case") {
    GridPtr g = small_grid();
    DiskField c = beltrami::testing::monomial_field(g, 0);
    c *= cd(0, 2.0);
    REQUIRE(hardy_norm(c, 3.0) == Approx(2.0).epsilon(1e-12));

    DiskField z = beltrami::testing::monomial_field(g, 1);
    double outer = g->radial.nodes[g->n_radial() - 1];
    REQUIRE(hardy_norm(z, 2.0) == Approx(outer).epsilon(1e-12));
    // holomorphic field: sup over nodes is attained at the outermost node
    Rng rng(3);
    DiskField h(g);
    for (int n = 0; n <= 6; ++n) {
        cd a = rng.complex_sym();
        for (int j = 0; j < g->n_radial(); ++j)
            h.set_profile(n, j, a * std::pow(g->radial.nodes[j], n));
    }
    REQUIRE(hardy_norm(h, 2.0) == Approx(circle_norm(h, outer, 2.0)).epsilon(1e-12));
    for (double r : g->radial.nodes) REQUIRE(hardy_norm(h, 2.0) >= circle_norm(h, r, 2.0) - 1e-14);
}

TEST_CASE("sobolev_norm: constants and pure modes") {
    const int nt = 64;
    BoundarySpectrum c(nt, true);
    c.set_coeff(0, cd(-2.5, 0));
    REQUIRE(sobolev_norm(c, 3.0, 1) == Approx(2.5).epsilon(1e-13));

    BoundarySpectrum e1(nt);
    e1.set_coeff(1, cd(1, 0));
    REQUIRE(sobolev_norm(e1, 2.0, 0) == Approx(1.0).epsilon(1e-13));
    // order 1: (1 + (1/2pi)^2)^{1/2}, d_t = d_theta/(2 pi)
    REQUIRE(sobolev_norm(e1, 2.0, 1) ==
            Approx(std::sqrt(1.0 + 1.0 / (4.0 * pi * pi))).epsilon(1e-13));

    // validate against direct quadrature of the definition for a mixed input
    BoundarySpectrum mix(nt, true);
    mix.set_coeff(0, cd(0.3, 0));
    mix.set_coeff(2, cd(0.1, -0.2));
    mix.set_coeff(-2, cd(0.1, 0.2));
    double p = 2.7;
    std::vector<cd> s = mix.to_samples();
    std::vector<cd> d = mix.deriv_theta().to_samples();
    double a0 = 0.0, a1 = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) {
        a0 += std::pow(std::abs(s[k]), p);
        a1 += std::pow(std::abs(d[k]) / (2.0 * pi), p);
    }
    a0 /= s.size();
    a1 /= s.size();
    REQUIRE(sobolev_norm(mix, p, 1) == Approx(std::pow(a0 + a1, 1.0 / p)).epsilon(1e-12));
}

TEST_CASE("fractional_seminorm: closed forms and homogeneity") {
    const int nt = 64;
    BoundarySpectrum c(nt, true);
    c.set_coeff(0, cd(4, 0));
    REQUIRE(fractional_seminorm(c, 0.5, 2.0) == Approx(0.0).margin(1e-14));

    // e^{i theta}, s = 1/2, p = 2: integrand == 1 off-diagonal, so the
    // discrete double sum is exactly (n^2 - n)/n^2 = 1 - 1/n.
    BoundarySpectrum e1(nt);
    e1.set_coeff(1, cd(1, 0));
    REQUIRE(fractional_seminorm(e1, 0.5, 2.0) ==
            Approx(std::sqrt(1.0 - 1.0 / nt)).epsilon(1e-13));

    // cos theta: by hand the sum is (1/2)(1 - 1/n); the p=2 Fourier oracle
    // (sum |n| |phi_n|^2)^{1/2} = sqrt(1/2), measured ratio -> sqrt(1 - 1/n).
    BoundarySpectrum co(nt, true);
    co.set_coeff(1, cd(0.5, 0));
    co.set_coeff(-1, cd(0.5, 0));
    double got = fractional_seminorm(co, 0.5, 2.0);
    REQUIRE(got == Approx(std::sqrt(0.5 * (1.0 - 1.0 / nt))).epsilon(1e-13));
    double fourier_oracle = std::sqrt(0.5);
    REQUIRE(got / fourier_oracle == Approx(std::sqrt(1.0 - 1.0 / nt)).epsilon(1e-12));

    Rng rng(5);
    BoundarySpectrum f = beltrami::testing::random_spectrum(nt, rng, 9);
    double base = fractional_seminorm(f, 0.4, 3.0);
    BoundarySpectrum scaled = f;
    scaled *= cd(-2.5, 0);
    REQUIRE(fractional_seminorm(scaled, 0.4, 3.0) == Approx(2.5 * base).epsilon(1e-12));
}

TEST_CASE("norm axioms on random inputs") {
    GridPtr g = small_grid();
    Rng rng(11);
    for (int trial = 0; trial < 8; ++trial) {
        DiskField a = random_polynomial_field(g, rng, 6);
        DiskField b = random_polynomial_field(g, rng, 6);
        double p = 1.5 + rng.uniform() * 2.0;
        double r = g->radial.nodes[5];
        DiskField sum = a;
        sum += b;
        REQUIRE(circle_norm(sum, r, p) <=
                circle_norm(a, r, p) + circle_norm(b, r, p) + 1e-12);
        REQUIRE(hardy_norm(sum, p) <= hardy_norm(a, p) + hardy_norm(b, p) + 1e-12);
        cd lam(0.0, -1.7);
        DiskField sc = a;
        sc *= lam;
        REQUIRE(circle_norm(sc, r, p) == Approx(std::abs(lam) * circle_norm(a, r, p)).epsilon(1e-11));
    }
    const int nt = g->n_theta();
    for (int trial = 0; trial < 8; ++trial) {
        BoundarySpectrum a = beltrami::testing::random_spectrum(nt, rng, 10);
        BoundarySpectrum b = beltrami::testing::random_spectrum(nt, rng, 10);
        double p = 1.5 + rng.uniform() * 2.0;
        REQUIRE(sobolev_norm(a + b, p, 1) <=
                sobolev_norm(a, p, 1) + sobolev_norm(b, p, 1) + 1e-12);
        REQUIRE(fractional_seminorm(a + b, 0.5, p) <=
                fractional_seminorm(a, 0.5, p) + fractional_seminorm(b, 0.5, p) + 1e-12);
    }
}

TEST_CASE("BoundarySpectrum real symmetry invariant") {
    Rng rng(2);
    BoundarySpectrum f = random_real_trig(64, rng, 12);
    REQUIRE(f.is_real_valued());
    REQUIRE(f.real_symmetry_defect() < 1e-12);
    std::vector<double> samples = f.to_real_samples();
    BoundarySpectrum back = BoundarySpectrum::from_real_samples(samples);
    REQUIRE(beltrami::testing::rel_spec_err(back, f) < 1e-13);
    BoundarySpectrum g2 = f;
    g2.set_coeff(3, g2.coeff(3) + cd(0.1, 0.1));
    REQUIRE(g2.real_symmetry_defect() > 1e-3);
}

TEST_CASE("grid invariants are enforced") {
    REQUIRE_THROWS_AS(CircleGrid(12), ConfigError);
    REQUIRE_THROWS_AS(CircleGrid(100), ConfigError);
    REQUIRE_NOTHROW(CircleGrid(16));
}

TEST_CASE("value_at matches synthesis at grid points") {
    GridPtr g = small_grid();
    Rng rng(9);
    DiskField f = random_polynomial_field(g, rng, 7);
    std::vector<cd> s = synthesize(f);
    int j = 12, k = 30;
    cd direct = s[static_cast<std::size_t>(j) * g->n_theta() + k];
    cd interp = f.value_at(g->radial.nodes[j], g->circle.theta(k));
    REQUIRE(std::abs(direct - interp) < 1e-11);
}
