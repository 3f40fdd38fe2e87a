#include "dislab/energy.hpp"

#include <cmath>
#include <numbers>

#include "dislab/quadrature.hpp"

namespace dislab {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

double default_tol(const BoundaryResponse* response, double requested) {
    if (requested > 0.0) return requested;
    if (response && response->backend() == BoundaryResponse::Backend::FiniteElement) return 1e-6;
    return 1e-10;
}

// Split radius for the self-energy integral: the largest core inscribed in the
// domain, shrunk a little so the remainder region never degenerates.
double split_radius(const DomainGeometry& geom, Vec2 z, double lambda) {
    return 0.95 * geom.elliptic_clearance(z, lambda);
}

void check_cut_radius(const Material& material, const DislocationSystem& sys,
                      const DomainGeometry& geom, double R) {
    if (!(R > 0.0) || !(R < sys.epsilon0))
        throw BadCutRadiusError("cut radius must satisfy 0 < R < epsilon0");
    for (size_t i = 0; i < sys.size(); ++i) {
        if (geom.elliptic_clearance(sys.dislocations[i].position, material.lambda) <= R)
            throw BadCutRadiusError("core at cut radius touches the boundary");
        for (size_t j = i + 1; j < sys.size(); ++j) {
            Vec2 zi = to_scaled(sys.dislocations[i].position, material.lambda);
            Vec2 zj = to_scaled(sys.dislocations[j].position, material.lambda);
            if (norm(zi - zj) <= 2.0 * R)
                throw BadCutRadiusError("cores at cut radius overlap");
        }
    }
}

}  // namespace

double core_coefficient(const Material& material, const DislocationSystem& sys) {
    double s = 0.0;
    for (const auto& d : sys.dislocations) s += d.burgers * d.burgers;
    return material.mu * material.lambda * s / kFourPi;
}

double annulus_energy(const Material& material, double b, double R, double eps) {
    if (!(eps > 0.0) || !(eps < R))
        throw std::invalid_argument("annulus energy needs 0 < eps < R");
    return material.mu * material.lambda * b * b / kFourPi * std::log(R / eps);
}

double annulus_energy_quadrature(const Material& material, double b, double R, double eps,
                                 double rel_tol) {
    if (!(eps > 0.0) || !(eps < R))
        throw std::invalid_argument("annulus energy needs 0 < eps < R");
    SingularStrain strain(Dislocation({0.0, 0.0}, b), material.lambda);
    auto f = [&](Vec2 x) { return energy_density(material, k_eval(strain, x)); };
    return integrate_elliptic_annulus({0.0, 0.0}, material.lambda, eps, R, f, rel_tol).value;
}

double self_energy(const Material& material, const DislocationSystem& sys,
                   const DomainGeometry& geom, double R, double rel_tol) {
    require_valid_system(geom, sys, material);
    check_cut_radius(material, sys, geom, R);
    const double tol = default_tol(nullptr, rel_tol);

    double total = 0.0;
    for (const auto& d : sys.dislocations) {
        const double coeff = material.mu * material.lambda * d.burgers * d.burgers / kFourPi;
        const double rho = split_radius(geom, d.position, material.lambda);
        // log R + annulus(R -> rho) + smooth remainder outside E_rho.
        double value = coeff * std::log(R) + coeff * std::log(rho / R);
        SingularStrain strain(d, material.lambda);
        auto f = [&](Vec2 x) { return energy_density(material, k_eval(strain, x)); };
        value += integrate_domain(geom, material.lambda, {{d.position, rho}}, f, tol).value;
        total += value;
    }
    return total;
}

double interaction_energy(const Material& material, const DislocationSystem& sys,
                          const DomainGeometry& geom, double rel_tol) {
    if (sys.size() < 2) return 0.0;
    require_valid_system(geom, sys, material);
    const double tol = default_tol(nullptr, rel_tol);

    auto strains = strains_of(sys, material);
    std::vector<RegionHole> holes;
    for (const auto& d : sys.dislocations) holes.push_back({d.position, 0.0});
    auto f = [&](Vec2 x) {
        double s = 0.0;
        for (size_t i = 0; i < strains.size(); ++i) {
            Vec2 Lki = apply_L(material, k_eval(strains[i], x));
            for (size_t j = i + 1; j < strains.size(); ++j)
                s += dot(k_eval(strains[j], x), Lki);
        }
        return s;
    };
    return integrate_domain(geom, material.lambda, holes, f, tol).value;
}

double elastic_energy(const Material& material, const DislocationSystem& sys,
                      const BoundaryResponse& response, const DomainGeometry& geom,
                      double rel_tol) {
    if (response.backend() == BoundaryResponse::Backend::FiniteElement)
        return response.discrete_energy();
    const double tol = default_tol(&response, rel_tol);
    if (sys.size() == 0) return 0.0;

    auto warea = [&](Vec2 x) { return energy_density(material, response.gradient(x)); };
    double area_part = integrate_domain(geom, material.lambda, {}, warea, tol).value;

    double bdry_part = 0.0;
    Contour bdry = domain_boundary(geom);
    QuadratureSpec spec;
    spec.rel_tol = tol;
    for (const auto& d : sys.dislocations) {
        SingularStrain strain(d, material.lambda);
        auto field = [&](Vec2 y) {
            return apply_L(material, k_eval(strain, y)) * response.value(y);
        };
        bdry_part += flux(field, bdry, spec);
    }
    return area_part + bdry_part;
}

EnergyBreakdown renormalized_energy(const Material& material, const DislocationSystem& sys,
                                    const DomainGeometry& geom, const BoundaryResponse& response,
                                    double R, double rel_tol) {
    EnergyBreakdown br;
    br.core_coefficient = core_coefficient(material, sys);
    br.R_used = R;
    if (sys.size() == 0) return br;
    br.U_S = self_energy(material, sys, geom, R, rel_tol);
    br.U_I = interaction_energy(material, sys, geom, rel_tol);
    br.U_E = elastic_energy(material, sys, response, geom, rel_tol);
    br.U_total = br.U_S + br.U_I + br.U_E;
    return br;
}

double regularized_energy(const Material& material, const DislocationSystem& sys,
                          const DomainGeometry& geom, const BoundaryResponse& response,
                          double eps, double rel_tol) {
    if (!(eps > 0.0) || !(eps < sys.epsilon0))
        throw BadCutRadiusError("regularized energy needs 0 < eps < epsilon0");
    require_valid_system(geom, sys, material);
    double tol = rel_tol > 0.0 ? rel_tol
                               : (response.backend() == BoundaryResponse::Backend::FiniteElement
                                      ? 1e-4
                                      : 1e-9);
    std::vector<RegionHole> holes;
    for (const auto& d : sys.dislocations) holes.push_back({d.position, eps});
    auto f = [&](Vec2 x) {
        return energy_density(material, h0_eval(material, sys, response, x));
    };
    return integrate_domain(geom, material.lambda, holes, f, tol).value;
}

}  // namespace dislab
