#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dislab/force.hpp"
#include "dislab/sampling.hpp"

using namespace dislab;

namespace {
constexpr double kPi = std::numbers::pi;
const Material kIso{1.0, 1.0};
const DomainGeometry kDisk = DomainGeometry::unit_disk();
}

TEST_CASE("eshelby stress applied to directions") {
    CHECK(norm(eshelby_apply(kIso, {0, 0}, {1, 0})) == 0.0);

    Vec2 a = eshelby_apply(kIso, {1, 0}, {1, 0});
    CHECK(a.x == doctest::Approx(-0.5).epsilon(1e-15));
    CHECK(a.y == doctest::Approx(0.0).epsilon(1e-15));

    Vec2 b = eshelby_apply(kIso, {1, 0}, {0, 1});
    CHECK(b.x == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(b.y == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("centered dislocation feels no force") {
    DislocationSystem sys({{{0.0, 0.0}, 1.0}}, 0.5);
    BoundaryResponse r = solve_disk_analytic(kIso, sys);
    CHECK(norm(force_explicit(kIso, sys, r, 0)) == 0.0);
    CHECK(norm(force_contour(kIso, sys, r, kDisk, 0, 0.2)) < 1e-10);
}

TEST_CASE("image force on an off-center dislocation") {
    DislocationSystem sys({{{0.5, 0.0}, 1.0}}, 0.2);
    BoundaryResponse r = solve_disk_analytic(kIso, sys);

    Vec2 fe = force_explicit(kIso, sys, r, 0);
    CHECK(fe.x == doctest::Approx(1.0 / (3.0 * kPi)).epsilon(1e-12));
    CHECK(std::abs(fe.y) < 1e-15);
    CHECK(fe.x > 0.0);  // attraction toward the near boundary

    Vec2 fc = force_contour(kIso, sys, r, kDisk, 0, 0.1);
    CHECK(fc.x == doctest::Approx(1.0 / (3.0 * kPi)).epsilon(1e-10));
    CHECK(std::abs(fc.y) < 1e-12);
}

TEST_CASE("contour force is R-independent") {
    DislocationSystem sys({{{0.35, 0.1}, 1.0}, {{-0.3, -0.2}, -1.3}}, 0.1);
    BoundaryResponse r = solve_disk_analytic(kIso, sys);
    Vec2 f1 = force_contour(kIso, sys, r, kDisk, 0, 0.02);
    Vec2 f2 = force_contour(kIso, sys, r, kDisk, 0, 0.08);
    CHECK(norm(f1 - f2) <= 1e-8 * (1.0 + norm(f1)));
}

TEST_CASE("like pair in a large domain repels with mu b^2 / (2 pi d)") {
    // Tight pair far from the boundary: the image contribution is sub-percent.
    const double d = 0.1;
    DislocationSystem sys({{{d / 2, 0.0}, 1.0}, {{-d / 2, 0.0}, 1.0}}, 0.02);
    BoundaryResponse r = solve_disk_analytic(kIso, sys);
    Vec2 f0 = force_explicit(kIso, sys, r, 0);
    CHECK(f0.x == doctest::Approx(1.0 / (2.0 * kPi * d)).epsilon(0.01));
    CHECK(std::abs(f0.y) < 1e-14);
    Vec2 f1 = force_explicit(kIso, sys, r, 1);
    CHECK(f1.x == doctest::Approx(-f0.x).epsilon(1e-12));
}

TEST_CASE("route equivalence on random systems (analytic backend)") {
    std::mt19937_64 rng(101);
    DomainGeometry disk = DomainGeometry::unit_disk();
    for (int trial = 0; trial < 6; ++trial) {
        DislocationSystem sys = sample_disk_system(rng, 1, 3);
        BoundaryResponse r = solve_disk_analytic(kIso, sys);
        ForceReport rep = compute_forces(kIso, sys, r, disk);
        for (const auto& e : rep.entries)
            CHECK(e.discrepancy <= 1e-8 * (1.0 + norm(e.explicit_route)));
    }
}

TEST_CASE("anisotropic route equivalence through the fem backend") {
    Material aniso(1.3, 1.6);
    DislocationSystem sys({{{0.3, 0.1}, 1.0}}, 0.1);
    BoundaryResponse r = solve_fem(aniso, sys, kDisk, 0.05);
    Vec2 fc = force_contour(aniso, sys, r, kDisk, 0, 0.04, 1e-8);
    Vec2 fe = force_explicit(aniso, sys, r, 0);
    CHECK(norm(fc - fe) <= 2e-3 * (1.0 + norm(fe)));
}

TEST_CASE("bad contour radii are rejected") {
    DislocationSystem sys({{{0.35, 0.1}, 1.0}, {{-0.3, -0.2}, -1.3}}, 0.1);
    BoundaryResponse r = solve_disk_analytic(kIso, sys);
    CHECK_THROWS_AS(force_contour(kIso, sys, r, kDisk, 0, 0.0), BadCutRadiusError);
    CHECK_THROWS_AS(force_contour(kIso, sys, r, kDisk, 0, 0.15), BadCutRadiusError);
    // Radius reaching the other core.
    DislocationSystem tight({{{0.2, 0.0}, 1.0}, {{-0.2, 0.0}, 1.0}}, 0.19);
    BoundaryResponse rt = solve_disk_analytic(kIso, tight);
    CHECK_THROWS_AS(force_contour(kIso, tight, rt, kDisk, 0, 0.21), BadCutRadiusError);
}

TEST_CASE("default contour radius respects neighbors and the boundary") {
    DislocationSystem sys({{{0.35, 0.1}, 1.0}, {{0.55, 0.1}, 1.0}}, 0.09);
    double R = default_contour_radius(kIso, sys, kDisk, 0);
    CHECK(R <= 0.5 * sys.epsilon0 + 1e-15);
    CHECK(R <= 0.5 * 0.2 + 1e-15);
    CHECK(R > 0.0);
}

TEST_CASE("gradient of U by finite differences matches the force") {
    DislocationSystem sys({{{0.35, 0.1}, 1.0}, {{-0.3, -0.2}, -1.3}}, 0.1);
    BoundaryResponse r = solve_disk_analytic(kIso, sys);
    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> au(0.0, 2 * kPi);
    for (size_t ell = 0; ell < sys.size(); ++ell) {
        double a = au(rng);
        Vec2 v{std::cos(a), std::sin(a)};
        double fd = grad_U_fd(kIso, sys, kDisk, ell, v, 2e-3);
        double expect = -dot(v, force_explicit(kIso, sys, r, ell));
        CHECK(fd == doctest::Approx(expect).epsilon(2e-6));
    }
}

TEST_CASE("gradient vanishes by symmetry") {
    // Symmetric pair: the derivative orthogonal to the symmetry line is zero.
    DislocationSystem pair({{{0.3, 0.0}, 1.0}, {{-0.3, 0.0}, 1.0}}, 0.1);
    double fd = grad_U_fd(kIso, pair, kDisk, 0, {0.0, 1.0}, 2e-3);
    CHECK(std::abs(fd) < 1e-7);

    DislocationSystem center({{{0.0, 0.0}, 1.0}}, 0.4);
    double fd2 = grad_U_fd(kIso, center, kDisk, 0, {0.7, 0.3}, 2e-3);
    CHECK(std::abs(fd2) < 1e-8);
}

TEST_CASE("coincident dislocations are a hard error") {
    DislocationSystem bad({{{0.3, 0.1}, 1.0}, {{0.3, 0.1}, -1.0}}, 0.05);
    BoundaryResponse r;  // backend never reached: the strain evaluation throws
    CHECK_THROWS_AS(force_explicit(kIso, bad, r, 0), SingularPointError);
}

TEST_CASE("inadmissible perturbations are rejected") {
    DislocationSystem tight({{{0.2, 0.0}, 1.0}, {{-0.2, 0.0}, 1.0}}, 0.19);
    CHECK_THROWS_AS(grad_U_fd(kIso, tight, kDisk, 0, {1.0, 0.0}, 0.05),
                    InadmissiblePerturbationError);
}

TEST_CASE("force varies smoothly under small position changes") {
    DislocationSystem sys({{{0.35, 0.1}, 1.0}, {{-0.3, -0.2}, -1.3}}, 0.05);
    BoundaryResponse r = solve_disk_analytic(kIso, sys);
    Vec2 f0 = force_explicit(kIso, sys, r, 0);
    const double h = 1e-5;
    for (Vec2 dir : {Vec2{1.0, 0.0}, Vec2{0.0, 1.0}}) {
        DislocationSystem moved = sys;
        moved.dislocations[0].position += dir * h;
        BoundaryResponse rm = solve_disk_analytic(kIso, moved);
        Vec2 fm = force_explicit(kIso, moved, rm, 0);
        // Directional derivative stays bounded (separations are ~4 eps0).
        CHECK(norm(fm - f0) / h < 50.0);
    }
}

TEST_CASE("self-term pieces of the contour integral vanish individually") {
    // Over the core boundary, the three integrals involving the own strain
    // (its quadratic term against the normal, and both mixed dyadic terms)
    // each integrate to zero.
    Material m(1.3, 1.8);
    DislocationSystem sys({{{0.3, 0.1}, 1.1}, {{-0.35, -0.15}, -0.8}}, 0.1);
    BoundaryResponse r = solve_fem(m, sys, kDisk, 0.06);
    const size_t ell = 0;
    const double R = 0.05;
    const Vec2 z = sys.dislocations[ell].position;
    SingularStrain own(sys.dislocations[ell], m.lambda);

    auto h_tilde = [&](Vec2 x) {
        Vec2 h = grad_u0(r, x);
        for (size_t i = 0; i < sys.size(); ++i)
            if (i != ell) h += k_eval(SingularStrain(sys.dislocations[i], m.lambda), x);
        return h;
    };

    const int n = 4096;
    Vec2 quad_term{0, 0}, own_dyad{0, 0}, mixed_dyad{0, 0};
    double scale = 0.0;
    for (int i = 0; i < n; ++i) {
        double tau = 2 * kPi * i / n;
        Vec2 x = z + Vec2{R * std::cos(tau), m.lambda * R * std::sin(tau)};
        Vec2 k = k_eval_anomaly(own, R, tau);
        Vec2 nrm = ellipse_normal(m.lambda, tau);
        double c = std::cos(tau), s = std::sin(tau);
        double ds = R * std::sqrt(m.lambda * m.lambda * c * c + s * s) * (2 * kPi / n);
        Vec2 Lk = apply_L(m, k);
        quad_term += nrm * (0.5 * dot(k, Lk) * ds);
        own_dyad += k * (dot(Lk, nrm) * ds);
        mixed_dyad += h_tilde(x) * (dot(Lk, nrm) * ds);
        scale += (norm(k) + 1.0) * norm(Lk) * ds;
    }
    CHECK(norm(quad_term) <= 1e-10 * scale);
    CHECK(norm(own_dyad) <= 1e-13 * scale);   // integrand is pointwise zero
    CHECK(norm(mixed_dyad) <= 1e-13 * scale);  // integrand is pointwise zero
}

TEST_CASE("force report carries both routes and the discrepancy") {
    DislocationSystem sys({{{0.35, 0.1}, 1.0}, {{-0.3, -0.2}, -1.3}}, 0.1);
    BoundaryResponse r = solve_disk_analytic(kIso, sys);
    ForceReport rep = compute_forces(kIso, sys, r, kDisk);
    REQUIRE(rep.entries.size() == 2);
    for (const auto& e : rep.entries) {
        CHECK(e.R > 0.0);
        CHECK(e.discrepancy == doctest::Approx(norm(e.contour - e.explicit_route)).epsilon(1e-12));
    }
}
