#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dislab/energy.hpp"
#include "dislab/verify.hpp"

using namespace dislab;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("oracle area quadrature: plain areas") {
    QuadratureSpec spec(QuadratureSpec::Scheme::TriangleAdaptive, 1e-5, 14);
    auto one = [](Vec2) { return 1.0; };

    verify::OracleRegion disk_minus_core;
    disk_minus_core.domain = DomainGeometry::unit_disk();
    disk_minus_core.holes = {Ellipse{{0, 0}, 0.5, 1.0}};
    auto a = verify::area_quadrature(one, disk_minus_core, spec);
    CHECK(a.value == doctest::Approx(0.75 * kPi).epsilon(2e-4));
    CHECK(std::abs(a.value - 0.75 * kPi) <= a.error + 1e-4);

    verify::OracleRegion aniso = disk_minus_core;
    aniso.holes = {Ellipse{{0, 0}, 0.5, 2.0}};
    auto b = verify::area_quadrature(one, aniso, spec);
    CHECK(b.value == doctest::Approx(kPi / 2).epsilon(2e-4));
}

TEST_CASE("oracle area quadrature agrees with the production integrator") {
    QuadratureSpec spec(QuadratureSpec::Scheme::TriangleAdaptive, 1e-5, 14);
    auto f = [](Vec2 p) { return 1.0 + p.x * p.x - 0.5 * p.y; };
    verify::OracleRegion region;
    region.domain = DomainGeometry::unit_disk();
    region.holes = {Ellipse{{0.3, 0.1}, 0.2, 1.5}};
    auto oracle = verify::area_quadrature(f, region, spec);
    QuadResult prod = integrate_domain(DomainGeometry::unit_disk(), 1.5,
                                       {{{0.3, 0.1}, 0.2}}, f, 1e-10);
    CHECK(oracle.value == doctest::Approx(prod.value).epsilon(3e-4));
}

TEST_CASE("oracle area quadrature: strain energy over an annulus region") {
    Material m(1.0, 1.0);
    SingularStrain s(Dislocation({0, 0}, 1.0), m.lambda);
    auto w = [&](Vec2 x) { return energy_density(m, k_eval(s, x)); };
    verify::OracleRegion annulus;
    annulus.outer = Ellipse{{0, 0}, 0.8, 1.0};
    annulus.holes = {Ellipse{{0, 0}, 0.3, 1.0}};
    QuadratureSpec spec(QuadratureSpec::Scheme::TriangleAdaptive, 1e-5, 13);
    auto got = verify::area_quadrature(w, annulus, spec);
    CHECK(got.value == doctest::Approx(annulus_energy(m, 1.0, 0.8, 0.3)).epsilon(5e-4));
}

TEST_CASE("oracle annulus rule hits the closed form at tight tolerance") {
    Material m(2.0, 3.0);
    SingularStrain s(Dislocation({0, 0}, 1.5), m.lambda);
    auto w = [&](Vec2 x) { return energy_density(m, k_eval(s, x)); };
    auto r = verify::annulus_quadrature(w, {0, 0}, m.lambda, 0.1, 0.4, 1e-11);
    CHECK(r.value == doctest::Approx(annulus_energy(m, 1.5, 0.4, 0.1)).epsilon(1e-10));
}

TEST_CASE("transport identities: constant integrand") {
    auto f = [](Vec2, double) { return 1.0; };
    auto rep = verify::moving_domain_derivative_check(f, {0.1, -0.05}, 0.3, 1.4, {0.8, 0.6},
                                                      1e-4);
    CHECK(std::abs(rep.lhs_core) < 1e-9);
    CHECK(std::abs(rep.rhs_core) < 1e-9);
    CHECK(std::abs(rep.lhs_complement) < 1e-8);
    CHECK(rep.diff_core < 1e-9);
    CHECK(rep.diff_complement < 1e-8);
}

TEST_CASE("transport identities: linear integrand") {
    // f = x1: the core rate is area * v1 by the divergence theorem.
    auto f = [](Vec2 x, double) { return x.x; };
    const double eps = 0.25, lambda = 1.7;
    const Vec2 v{0.6, 0.8};
    auto rep = verify::moving_domain_derivative_check(f, {0.15, -0.1}, eps, lambda, v, 1e-4);
    double area = kPi * lambda * eps * eps;
    CHECK(rep.lhs_core == doctest::Approx(area * v.x).epsilon(1e-7));
    CHECK(rep.rhs_core == doctest::Approx(area * v.x).epsilon(1e-9));
    CHECK(rep.diff_core < 1e-7 * (1.0 + std::abs(rep.lhs_core)));
    CHECK(rep.diff_complement < 1e-7 * (1.0 + std::abs(rep.lhs_complement)));
}

TEST_CASE("transport identities: parameter-dependent integrand") {
    // f = xi * x2: the volume rate recovers the centroid times the area.
    auto f = [](Vec2 x, double xi) { return xi * x.y; };
    const double eps = 0.2, lambda = 1.3;
    const Vec2 center{0.1, 0.25}, v{-0.3, 0.5};
    auto rep = verify::moving_domain_derivative_check(f, center, eps, lambda, v, 1e-4);
    double area = kPi * lambda * eps * eps;
    CHECK(rep.rhs_core == doctest::Approx(center.y * area).epsilon(1e-8));
    CHECK(rep.diff_core < 1e-7 * (1.0 + std::abs(rep.lhs_core)));
    CHECK(rep.diff_complement < 1e-7 * (1.0 + std::abs(rep.lhs_complement)));
}

TEST_CASE("transport residuals shrink at second order in the step") {
    auto f = [](Vec2 x, double xi) { return std::sin(x.x + 0.3 * xi) * x.y; };
    const double eps = 0.22, lambda = 1.5;
    const Vec2 center{0.05, 0.1}, v{0.7, -0.4};
    auto coarse = verify::moving_domain_derivative_check(f, center, eps, lambda, v, 4e-3);
    auto fine = verify::moving_domain_derivative_check(f, center, eps, lambda, v, 2e-3);
    // Central differences: quartering of the residual when halving h.
    CHECK(fine.diff_core < 0.4 * coarse.diff_core + 1e-12);
}

TEST_CASE("source-shift derivative checks") {
    SingularStrain iso(Dislocation({0.2, -0.1}, 1.0), 1.0);
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> u(-1.2, 1.2);
    std::vector<Vec2> pts;
    while (pts.size() < 20) {
        Vec2 p{u(rng), u(rng)};
        if (norm(p - iso.source.position) > 0.3) pts.push_back(p);
    }
    Vec2 v{0.6, -0.8};

    auto rep1 = verify::dvl_k_check(iso, v, 1e-4, pts);
    auto rep2 = verify::dvl_k_check(iso, v, 5e-5, pts);
    CHECK(rep1.max_shift_residual < 1e-6);
    CHECK(rep2.max_shift_residual < 0.35 * rep1.max_shift_residual + 1e-13);
    CHECK(rep1.max_convected_residual < 1e-10);

    SingularStrain aniso(Dislocation({0.2, -0.1}, 1.0), 3.0);
    auto rep3 = verify::dvl_k_check(aniso, v, 1e-4, pts);
    auto rep4 = verify::dvl_k_check(aniso, v, 5e-5, pts);
    CHECK(rep4.max_shift_residual < 0.35 * rep3.max_shift_residual + 1e-13);

    auto rep0 = verify::dvl_k_check(iso, {0.0, 0.0}, 1e-4, pts);
    CHECK(rep0.max_shift_residual == 0.0);
    CHECK(rep0.max_convected_residual == 0.0);
}
