#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dislab/energy.hpp"
#include "dislab/verify.hpp"

using namespace dislab;

namespace {
constexpr double kPi = std::numbers::pi;
const Material kIso{1.0, 1.0};
const DomainGeometry kDisk = DomainGeometry::unit_disk();
}

TEST_CASE("core coefficient") {
    CHECK(core_coefficient(kIso, DislocationSystem({{{0, 0}, 1.0}}, 0.1)) ==
          doctest::Approx(1.0 / (4 * kPi)).epsilon(1e-15));
    DislocationSystem two({{{0.1, 0}, 1.0}, {{-0.1, 0}, 2.0}}, 0.05);
    CHECK(core_coefficient(Material(2, 3), two) ==
          doctest::Approx(30.0 / (4 * kPi)).epsilon(1e-15));
    CHECK(core_coefficient(kIso, DislocationSystem({}, 0.1)) == 0.0);
}

TEST_CASE("annulus energy closed form") {
    CHECK(annulus_energy(kIso, 1.0, 1.0, 0.5) ==
          doctest::Approx(std::log(2.0) / (4 * kPi)).epsilon(1e-15));
    // Shrinking annulus.
    CHECK(annulus_energy(kIso, 1.0, 0.3, 0.3 * (1 - 1e-12)) ==
          doctest::Approx(0.0).epsilon(1e-9));
    CHECK_THROWS_AS(annulus_energy(kIso, 1.0, 0.3, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(annulus_energy(kIso, 1.0, 0.3, 0.4), std::invalid_argument);
}

TEST_CASE("annulus quadrature matches the closed form") {
    Material m(2.0, 3.0);
    double closed = annulus_energy(m, 1.5, 0.4, 0.1);
    double quad = annulus_energy_quadrature(m, 1.5, 0.4, 0.1);
    CHECK(quad == doctest::Approx(closed).epsilon(1e-9));

    // Independent oracle: plain composite-Simpson rule in core coordinates.
    SingularStrain s(Dislocation({0, 0}, 1.5), m.lambda);
    auto w = [&](Vec2 x) { return energy_density(m, k_eval(s, x)); };
    auto oracle = verify::annulus_quadrature(w, {0, 0}, m.lambda, 0.1, 0.4, 1e-11);
    CHECK(oracle.value == doctest::Approx(closed).epsilon(1e-9));
}

TEST_CASE("self energy is R-independent") {
    DislocationSystem sys({{{0.35, 0.1}, 1.0}, {{-0.3, -0.2}, -1.3}}, 0.1);
    double u1 = self_energy(kIso, sys, kDisk, 0.05);
    double u2 = self_energy(kIso, sys, kDisk, 0.1 * 0.999);
    CHECK(std::abs(u1 - u2) <= 1e-6 * (1.0 + std::abs(u1)));
}

TEST_CASE("self energy scales quadratically in the modulus") {
    DislocationSystem sys1({{{0.3, 0.0}, 1.0}}, 0.1);
    DislocationSystem sys2({{{0.3, 0.0}, 2.0}}, 0.1);
    double u1 = self_energy(kIso, sys1, kDisk, 0.05);
    double u2 = self_energy(kIso, sys2, kDisk, 0.05);
    CHECK(u2 == doctest::Approx(4.0 * u1).epsilon(1e-9));
}

TEST_CASE("centered dislocation: self energy collapses to zero") {
    // The unit disk is exactly the unit core, so the log R term cancels the
    // annulus integral at any admissible R.
    DislocationSystem sys({{{0.0, 0.0}, 1.0}}, 0.5);
    double u = self_energy(kIso, sys, kDisk, 0.1);
    CHECK(std::abs(u) < 1e-9);
}

TEST_CASE("self energy rejects bad cut radii") {
    DislocationSystem sys({{{0.35, 0.1}, 1.0}}, 0.1);
    CHECK_THROWS_AS(self_energy(kIso, sys, kDisk, 0.0), BadCutRadiusError);
    CHECK_THROWS_AS(self_energy(kIso, sys, kDisk, 0.2), BadCutRadiusError);
}

TEST_CASE("interaction energy: structure") {
    CHECK(interaction_energy(kIso, DislocationSystem({{{0.3, 0}, 1.0}}, 0.1), kDisk) == 0.0);

    DislocationSystem ab({{{0.3, 0.1}, 1.0}, {{-0.25, -0.15}, 0.7}}, 0.1);
    DislocationSystem ba({{{-0.25, -0.15}, 0.7}, {{0.3, 0.1}, 1.0}}, 0.1);
    double uab = interaction_energy(kIso, ab, kDisk);
    double uba = interaction_energy(kIso, ba, kDisk);
    CHECK(uab == doctest::Approx(uba).epsilon(1e-10));

    DislocationSystem flipped({{{0.3, 0.1}, 1.0}, {{-0.25, -0.15}, -0.7}}, 0.1);
    double uf = interaction_energy(kIso, flipped, kDisk);
    CHECK(uf == doctest::Approx(-uab).epsilon(1e-9));

    // Bilinear in the moduli: doubling one modulus doubles the pair term.
    DislocationSystem doubled({{{0.3, 0.1}, 2.0}, {{-0.25, -0.15}, 0.7}}, 0.1);
    CHECK(interaction_energy(kIso, doubled, kDisk) == doctest::Approx(2.0 * uab).epsilon(1e-9));
}

TEST_CASE("interaction energy of like pairs is positive and grows at short range") {
    auto pair_at = [&](double sep) {
        return DislocationSystem({{{sep / 2, 0.0}, 1.0}, {{-sep / 2, 0.0}, 1.0}}, sep / 4);
    };
    double u1 = interaction_energy(kIso, pair_at(0.4), kDisk);
    double u2 = interaction_energy(kIso, pair_at(0.2), kDisk);
    CHECK(u1 > 0.0);
    CHECK(u2 > u1);
}

TEST_CASE("elastic energy: centered dislocation gives zero") {
    DislocationSystem sys({{{0.0, 0.0}, 1.0}}, 0.5);
    BoundaryResponse r = solve_disk_analytic(kIso, sys);
    CHECK(std::abs(elastic_energy(kIso, sys, r, kDisk)) < 1e-12);
}

TEST_CASE("elastic energy: reflection symmetry") {
    DislocationSystem up({{{0.3, 0.25}, 1.0}}, 0.1);
    DislocationSystem down({{{0.3, -0.25}, 1.0}}, 0.1);
    BoundaryResponse ru = solve_disk_analytic(kIso, up);
    BoundaryResponse rd = solve_disk_analytic(kIso, down);
    double eu = elastic_energy(kIso, up, ru, kDisk);
    double ed = elastic_energy(kIso, down, rd, kDisk);
    CHECK(eu == doctest::Approx(ed).epsilon(1e-10));
}

TEST_CASE("elastic energy: fem value equals the discrete functional and tracks quadrature") {
    DislocationSystem sys({{{0.5, 0.0}, 1.0}}, 0.15);
    BoundaryResponse fem = solve_fem(kIso, sys, kDisk, 0.04);
    double discrete = elastic_energy(kIso, sys, fem, kDisk);
    CHECK(discrete == doctest::Approx(fem.discrete_energy()).epsilon(1e-15));

    // Independent evaluation through the analytic backend.
    BoundaryResponse exact = solve_disk_analytic(kIso, sys);
    double reference = elastic_energy(kIso, sys, exact, kDisk);
    CHECK(discrete == doctest::Approx(reference).epsilon(0.02));
}

TEST_CASE("renormalized energy: assembly and invariances") {
    DislocationSystem sys({{{0.35, 0.1}, 1.0}, {{-0.3, -0.2}, -1.3}}, 0.1);
    BoundaryResponse r = solve_disk_analytic(kIso, sys);
    EnergyBreakdown br = renormalized_energy(kIso, sys, kDisk, r, 0.05);
    CHECK(br.U_total == br.U_S + br.U_I + br.U_E);
    CHECK(br.R_used == 0.05);
    CHECK(br.core_coefficient ==
          doctest::Approx((1.0 + 1.3 * 1.3) / (4 * kPi)).epsilon(1e-12));

    DislocationSystem relabeled({{{-0.3, -0.2}, -1.3}, {{0.35, 0.1}, 1.0}}, 0.1);
    BoundaryResponse r2 = solve_disk_analytic(kIso, relabeled);
    EnergyBreakdown br2 = renormalized_energy(kIso, relabeled, kDisk, r2, 0.05);
    CHECK(br2.U_total == doctest::Approx(br.U_total).epsilon(1e-9));
}

TEST_CASE("renormalized energy: centered dislocation totals zero") {
    DislocationSystem sys({{{0.0, 0.0}, 1.0}}, 0.5);
    BoundaryResponse r = solve_disk_analytic(kIso, sys);
    EnergyBreakdown br = renormalized_energy(kIso, sys, kDisk, r, 0.1);
    CHECK(std::abs(br.U_total) < 1e-9);
}

TEST_CASE("renormalized energy grows as a like pair tightens") {
    double prev = -1e300;
    for (double sep : {0.2, 0.1, 0.05}) {
        DislocationSystem sys({{{sep / 2, 0.0}, 1.0}, {{-sep / 2, 0.0}, 1.0}}, sep / 4);
        BoundaryResponse r = solve_disk_analytic(kIso, sys);
        EnergyBreakdown br = renormalized_energy(kIso, sys, kDisk, r, sep / 8);
        CHECK(br.U_total > prev);
        prev = br.U_total;
    }
}

TEST_CASE("regularized energy: centered dislocation closed form") {
    DislocationSystem sys({{{0.0, 0.0}, 1.0}}, 0.5);
    BoundaryResponse r = solve_disk_analytic(kIso, sys);
    for (double eps : {0.4, 0.2, 0.1}) {
        double J = regularized_energy(kIso, sys, kDisk, r, eps);
        CHECK(J == doctest::Approx(std::log(1.0 / eps) / (4 * kPi)).epsilon(1e-9));
    }
}

TEST_CASE("regularized energy decreases in eps and rejects bad eps") {
    DislocationSystem sys({{{0.35, 0.1}, 1.0}, {{-0.3, -0.2}, -1.3}}, 0.1);
    BoundaryResponse r = solve_disk_analytic(kIso, sys);
    double j1 = regularized_energy(kIso, sys, kDisk, r, 0.04);
    double j2 = regularized_energy(kIso, sys, kDisk, r, 0.08);
    CHECK(j1 > j2);
    CHECK_THROWS_AS(regularized_energy(kIso, sys, kDisk, r, 0.2), BadCutRadiusError);
    CHECK_THROWS_AS(regularized_energy(kIso, sys, kDisk, r, 0.0), BadCutRadiusError);
}

TEST_CASE("quadratic scaling of the full breakdown in the moduli") {
    DislocationSystem sys({{{0.35, 0.1}, 0.8}, {{-0.3, -0.2}, -0.6}}, 0.1);
    DislocationSystem scaled({{{0.35, 0.1}, 1.6}, {{-0.3, -0.2}, -1.2}}, 0.1);
    BoundaryResponse r = solve_disk_analytic(kIso, sys);
    BoundaryResponse rs = solve_disk_analytic(kIso, scaled);
    EnergyBreakdown a = renormalized_energy(kIso, sys, kDisk, r, 0.05);
    EnergyBreakdown b = renormalized_energy(kIso, scaled, kDisk, rs, 0.05);
    CHECK(b.U_S == doctest::Approx(4.0 * a.U_S).epsilon(1e-9));
    CHECK(b.U_I == doctest::Approx(4.0 * a.U_I).epsilon(1e-9));
    CHECK(b.U_E == doctest::Approx(4.0 * a.U_E).epsilon(1e-8));
}
