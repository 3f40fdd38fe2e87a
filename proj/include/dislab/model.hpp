#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dislab/errors.hpp"
#include "dislab/geometry.hpp"

namespace dislab {

// Antiplane elasticity tensor L = diag(mu, mu*lambda^2). Isotropic iff lambda = 1.
struct Material {
    double mu = 1.0;
    double lambda = 1.0;

    Material() = default;
    Material(double mu_, double lambda_) : mu(mu_), lambda(lambda_) {
        if (!(mu > 0.0)) throw std::invalid_argument("Material: mu must be > 0");
        if (!(lambda > 0.0)) throw std::invalid_argument("Material: lambda must be > 0");
    }
};

inline Vec2 apply_L(const Material& m, Vec2 h) {
    return {m.mu * h.x, m.mu * m.lambda * m.lambda * h.y};
}

// Energy density W(h) = 1/2 h . L h.
inline double energy_density(const Material& m, Vec2 h) {
    return 0.5 * dot(h, apply_L(m, h));
}

// A screw dislocation seen in the cross-section: a point and a signed Burgers
// modulus. The modulus is kept signed so opposite-sign pairs are expressible.
struct Dislocation {
    Vec2 position;
    double burgers = 1.0;

    Dislocation() = default;
    Dislocation(Vec2 z, double b) : position(z), burgers(b) {
        if (b == 0.0) throw std::invalid_argument("Dislocation: burgers modulus must be nonzero");
    }
};

struct DislocationSystem {
    std::vector<Dislocation> dislocations;
    double epsilon0 = 0.1;  // core-separation radius

    DislocationSystem() = default;
    DislocationSystem(std::vector<Dislocation> d, double eps0)
        : dislocations(std::move(d)), epsilon0(eps0) {
        if (!(eps0 > 0.0)) throw std::invalid_argument("DislocationSystem: epsilon0 must be > 0");
    }
    size_t size() const { return dislocations.size(); }
};

Ellipse core_ellipse(Vec2 center, double r, double lambda);

enum class ValidationStatus { Valid, OutsideDomain, BoundaryContact, CoreOverlap };

struct ValidationReport {
    ValidationStatus status = ValidationStatus::Valid;
    std::string detail;
    // Largest epsilon0 for which all cores would be disjoint and compactly
    // contained; 0 if some position is outside the domain.
    double max_admissible_epsilon0 = 0.0;

    bool ok() const { return status == ValidationStatus::Valid; }
};

// Checks that every core E_{eps0}(z_i) is compactly contained in the domain and
// that the closed cores are pairwise disjoint.
ValidationReport validate_system(const DomainGeometry& geom, const DislocationSystem& sys,
                                 const Material& material);

// Throwing variant used by operations with admissibility preconditions.
void require_valid_system(const DomainGeometry& geom, const DislocationSystem& sys,
                          const Material& material);

}  // namespace dislab
