#include <catch2/catch_amalgamated.hpp>

#include "beltrami/domains.hpp"
#include "beltrami/solver.hpp"
#include "support/test_fields.hpp"

using namespace beltrami;
using namespace beltrami::testing;
using Catch::Approx;

namespace {
GridPtr g128() {
    static GridPtr g = make_grid(128, 8, 8);
    return g;
}
const OperatorWorkspace& ws128() {
    static OperatorWorkspace w(g128());
    return w;
}

double nu_om(double X, double Y) { return 0.25 * std::sin(X) + 0.1 * Y; }
cd dbar_nu_om(double X, double Y) {
    (void)Y;
    // dbar = (d_x + i d_y)/2 of 0.25 sin X + 0.1 Y
    return cd(0.125 * std::cos(X), 0.05);
}
double data_om(double X, double Y) {
    (void)Y;
    return X;
}
}  // namespace

TEST_CASE("conformal map validation") {
    GridPtr g = g128();
    REQUIRE_NOTHROW(ConformalMap::identity().validate(g));
    REQUIRE_NOTHROW(ConformalMap::affine(cd(0.5, 0.2), cd(1, -1)).validate(g));
    REQUIRE_NOTHROW(ConformalMap::quadratic(cd(0.3, 0)).validate(g));
    REQUIRE_THROWS_AS(ConformalMap::quadratic(cd(0.6, 0)), ConfigError);
    // psi' vanishing inside the disk is caught
    ConformalMap bad([](cd z) { return z * z; }, [](cd z) { return 2.0 * z; }, "square");
    REQUIRE_THROWS_AS(bad.validate(g), ConfigError);
}

TEST_CASE("pullback: identity is the identity, affine keeps constants") {
    GridPtr g = g128();
    PulledBackProblem idp = pullback_problem(
        ConformalMap::identity(), g, [](double, double) { return 0.2; },
        [](double, double) { return cd(0, 0); }, [](double x, double) { return x; });
    REQUIRE(idp.coefficient.kappa() == Approx(0.2).epsilon(1e-10));
    REQUIRE(std::abs(idp.boundary_data.coeff(1) - cd(0.5, 0)) < 1e-12);

    PulledBackProblem aff = pullback_problem(
        ConformalMap::affine(cd(0.4, 0.1), cd(2, 0)), g, [](double, double) { return 0.3; },
        [](double, double) { return cd(0, 0); }, [](double x, double) { return x; });
    REQUIRE(sup_abs(aff.coefficient.nu() - monomial_field(g, 0) * cd(0.3, 0)) < 1e-10);
}

TEST_CASE("pushforward pairs values with image points") {
    GridPtr g = g128();
    DiskField z = monomial_field(g, 1);
    auto cloud_id = pushforward_solution(ConformalMap::identity(), z);
    REQUIRE(cloud_id.size() == static_cast<std::size_t>(g->n_theta() * g->n_radial()));
    for (std::size_t i = 0; i < cloud_id.size(); i += 997)
        REQUIRE(std::abs(cloud_id[i].location - cloud_id[i].value) < 1e-12);

    ConformalMap aff = ConformalMap::affine(cd(0, 1), cd(0.5, 0));
    auto cloud = pushforward_solution(aff, z);
    for (std::size_t i = 0; i < cloud.size(); i += 997)
        REQUIRE(std::abs(cloud[i].location - (cd(0, 1) * cloud[i].value + cd(0.5, 0))) < 1e-12);
}

TEST_CASE("quadratic map: image-mesh PDE residual") {
    GridPtr g = g128();
    SolveConfig cfg;
    ConformalMap map = ConformalMap::quadratic(cd(0.3, 0));
    PulledBackProblem prob = pullback_problem(map, g, nu_om, dbar_nu_om, data_om);
    FieldOutput f = dirichlet_h(ws128(), prob.boundary_data, prob.coefficient, cfg);
    auto sigma_om = [](double X, double Y) {
        double nu = nu_om(X, Y);
        return (1.0 - nu) / (1.0 + nu);
    };
    double resid = image_mesh_pde_residual(map, f.f, sigma_om);
    // the acceptance run at n_theta = 256 meets 1e-5; at this test resolution
    // the generalized finite differences resolve to ~1e-5
    REQUIRE(resid < 5e-5);
}

TEST_CASE("map independence under disk automorphisms") {
    GridPtr g = g128();
    SolveConfig cfg;
    ConformalMap psi1 = ConformalMap::quadratic(cd(0.25, 0));
    cd a(0.2, 0.1);
    auto m = [a](cd z) { return (z + a) / (1.0 + std::conj(a) * z); };
    auto dm = [a](cd z) {
        cd den = 1.0 + std::conj(a) * z;
        return (1.0 - std::norm(a)) / (den * den);
    };
    ConformalMap psi2(
        [&, a](cd z) { return psi1.map(m(z)); },
        [&, a](cd z) { return psi1.derivative(m(z)) * dm(z); }, "composed");

    PulledBackProblem p1 = pullback_problem(psi1, g, nu_om, dbar_nu_om, data_om);
    PulledBackProblem p2 = pullback_problem(psi2, g, nu_om, dbar_nu_om, data_om);
    FieldOutput f1 = dirichlet_h(ws128(), p1.boundary_data, p1.coefficient, cfg);
    FieldOutput f2 = dirichlet_h(ws128(), p2.boundary_data, p2.coefficient, cfg);

    // matched physical points: psi1(z) = psi2(m^{-1}(z))
    auto minv = [a](cd w) { return (w - a) / (1.0 - std::conj(a) * w); };
    std::vector<cd> z_pts;
    for (double r : {0.3, 0.55, 0.8})
        for (int k = 0; k < 8; ++k) z_pts.push_back(std::polar(r, 2.0 * pi * k / 8));

    // the free imaginary constant differs between parametrizations; align
    // the mean over the sample set, compare Re exactly
    double im_shift = 0.0;
    for (cd z : z_pts) {
        cd zeta = minv(z);
        im_shift += f2.f.value_at(std::abs(zeta), std::arg(zeta)).imag() -
                    f1.f.value_at(std::abs(z), std::arg(z)).imag();
    }
    im_shift /= static_cast<double>(z_pts.size());
    for (cd z : z_pts) {
        cd zeta = minv(z);
        cd v1 = f1.f.value_at(std::abs(z), std::arg(z));
        cd v2 = f2.f.value_at(std::abs(zeta), std::arg(zeta));
        REQUIRE(std::abs(v1.real() - v2.real()) < 1e-6);
        REQUIRE(std::abs(v1.imag() - (v2.imag() - im_shift)) < 1e-6);
    }
}
