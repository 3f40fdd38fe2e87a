#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <random>

#include "dislab/model.hpp"

using namespace dislab;

TEST_CASE("elasticity tensor action") {
    CHECK(apply_L(Material(1, 1), {3, 4}).x == doctest::Approx(3).epsilon(1e-15));
    CHECK(apply_L(Material(1, 1), {3, 4}).y == doctest::Approx(4).epsilon(1e-15));
    CHECK(apply_L(Material(2, 3), {1, 1}).x == doctest::Approx(2).epsilon(1e-15));
    CHECK(apply_L(Material(2, 3), {1, 1}).y == doctest::Approx(18).epsilon(1e-15));
    CHECK(apply_L(Material(1, 2), {0, 0}).x == 0.0);
    CHECK(apply_L(Material(1, 2), {0, 0}).y == 0.0);
}

TEST_CASE("tensor action is linear") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    Material m(1.7, 0.6);
    for (int i = 0; i < 200; ++i) {
        Vec2 h{u(rng), u(rng)}, g{u(rng), u(rng)};
        double a = u(rng), b = u(rng);
        Vec2 lhs = apply_L(m, h * a + g * b);
        Vec2 rhs = apply_L(m, h) * a + apply_L(m, g) * b;
        CHECK(norm(lhs - rhs) <= 1e-13 * (1.0 + norm(rhs)));
    }
}

TEST_CASE("energy density") {
    CHECK(energy_density(Material(1, 1), {1, 0}) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(energy_density(Material(2, 3), {1, 1}) == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(energy_density(Material(1, 2), {0, 0}) == 0.0);
}

TEST_CASE("energy density is positive definite and consistent") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    Material m(0.8, 2.4);
    for (int i = 0; i < 200; ++i) {
        Vec2 h{u(rng), u(rng)};
        double w = energy_density(m, h);
        CHECK(w == doctest::Approx(0.5 * dot(h, apply_L(m, h))).epsilon(1e-14));
        if (norm(h) > 1e-6) CHECK(w > 0.0);
    }
}

TEST_CASE("core ellipse") {
    Ellipse disk = core_ellipse({0, 0}, 1.0, 1.0);
    CHECK(disk.contains({0.9, 0}));
    CHECK(!disk.contains({1.1, 0}));

    Ellipse e = core_ellipse({0, 0}, 1.0, 2.0);
    Vec2 top = e.boundary_point(std::numbers::pi / 2);
    CHECK(top.x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(top.y == doctest::Approx(2.0).epsilon(1e-12));

    Ellipse s = core_ellipse({1, 1}, 0.5, 2.0);
    CHECK(s.contains({1.0, 1.9}));
    CHECK(!s.contains({1.0, 2.1}));

    CHECK_THROWS_AS(core_ellipse({0, 0}, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(core_ellipse({0, 0}, -1.0, 1.0), std::invalid_argument);
}

TEST_CASE("isotropic core coincides with the disk") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    Ellipse e = core_ellipse({0.3, -0.4}, 0.8, 1.0);
    for (int i = 0; i < 500; ++i) {
        Vec2 p{u(rng), u(rng)};
        bool in_disk = norm(p - e.center) < e.radius;
        CHECK(e.contains(p) == in_disk);
    }
}

TEST_CASE("system validation") {
    DomainGeometry disk = DomainGeometry::unit_disk();
    Material iso(1, 1);

    auto rep = validate_system(disk, DislocationSystem({{{0, 0}, 1.0}}, 0.5), iso);
    CHECK(rep.ok());
    CHECK(rep.max_admissible_epsilon0 == doctest::Approx(1.0).epsilon(1e-9));

    rep = validate_system(disk, DislocationSystem({{{0.9, 0}, 1.0}}, 0.2), iso);
    CHECK(rep.status == ValidationStatus::BoundaryContact);
    CHECK(rep.max_admissible_epsilon0 == doctest::Approx(0.1).epsilon(1e-7));

    rep = validate_system(
        disk, DislocationSystem({{{0.1, 0}, 1.0}, {{-0.1, 0}, 1.0}}, 0.15), iso);
    CHECK(rep.status == ValidationStatus::CoreOverlap);
    CHECK(rep.max_admissible_epsilon0 == doctest::Approx(0.1).epsilon(1e-9));

    rep = validate_system(disk, DislocationSystem({{{1.5, 0}, 1.0}}, 0.1), iso);
    CHECK(rep.status == ValidationStatus::OutsideDomain);

    CHECK_THROWS_AS(
        require_valid_system(disk, DislocationSystem({{{0.9, 0}, 1.0}}, 0.2), iso),
        BoundaryContactError);
}

TEST_CASE("validation uses the scaled metric for anisotropy") {
    DomainGeometry disk = DomainGeometry::unit_disk();
    Material aniso(1.0, 4.0);
    // Cores are tall ellipses: vertical neighbors collide sooner than the
    // Euclidean distance suggests.
    auto rep = validate_system(
        disk, DislocationSystem({{{0.0, 0.3}, 1.0}, {{0.0, -0.3}, 1.0}}, 0.09), aniso);
    CHECK(rep.status == ValidationStatus::CoreOverlap);
    rep = validate_system(
        disk, DislocationSystem({{{0.0, 0.3}, 1.0}, {{0.0, -0.3}, 1.0}}, 0.07), aniso);
    CHECK(rep.ok());
}

TEST_CASE("polygon geometry") {
    auto square = DomainGeometry::polygon({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
    CHECK(square.contains({0, 0}));
    CHECK(!square.contains({1.5, 0}));
    CHECK(square.boundary_distance({0, 0}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(square.elliptic_clearance({0, 0}, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(square.elliptic_clearance({0, 0}, 2.0) == doctest::Approx(0.5).epsilon(1e-12));

    CHECK_THROWS_AS(DomainGeometry::polygon({{0, 0}, {1, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(DomainGeometry::polygon({{0, 0}, {0, 1}, {1, 0}}),
                    std::invalid_argument);  // clockwise
}

TEST_CASE("disk clearance matches the scaled-plane distance") {
    DomainGeometry disk = DomainGeometry::unit_disk();
    CHECK(disk.elliptic_clearance({0, 0}, 1.0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(disk.elliptic_clearance({0.5, 0}, 1.0) == doctest::Approx(0.5).epsilon(1e-10));
    // Tall cores (lambda = 2) hit the boundary above the center first.
    CHECK(disk.elliptic_clearance({0, 0}, 2.0) == doctest::Approx(0.5).epsilon(1e-10));
}
