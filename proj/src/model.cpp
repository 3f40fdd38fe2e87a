#include "dislab/model.hpp"

#include <limits>
#include <sstream>

namespace dislab {

Ellipse core_ellipse(Vec2 center, double r, double lambda) {
    if (!(r > 0.0)) throw std::invalid_argument("core_ellipse: radius must be > 0");
    if (!(lambda > 0.0)) throw std::invalid_argument("core_ellipse: lambda must be > 0");
    return Ellipse{center, r, lambda};
}

ValidationReport validate_system(const DomainGeometry& geom, const DislocationSystem& sys,
                                 const Material& material) {
    ValidationReport rep;
    const double lambda = material.lambda;
    const size_t n = sys.size();

    double max_eps = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < n; ++i) {
        Vec2 z = sys.dislocations[i].position;
        if (!geom.contains(z)) {
            rep.status = ValidationStatus::OutsideDomain;
            std::ostringstream os;
            os << "dislocation " << i << " at (" << z.x << ", " << z.y
               << ") lies outside the domain";
            rep.detail = os.str();
            rep.max_admissible_epsilon0 = 0.0;
            return rep;
        }
        max_eps = std::min(max_eps, geom.elliptic_clearance(z, lambda));
    }
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            Vec2 zi = to_scaled(sys.dislocations[i].position, lambda);
            Vec2 zj = to_scaled(sys.dislocations[j].position, lambda);
            max_eps = std::min(max_eps, 0.5 * norm(zi - zj));
        }
    }
    rep.max_admissible_epsilon0 = (n == 0) ? std::numeric_limits<double>::infinity() : max_eps;

    for (size_t i = 0; i < n; ++i) {
        Vec2 z = sys.dislocations[i].position;
        if (geom.elliptic_clearance(z, lambda) <= sys.epsilon0) {
            rep.status = ValidationStatus::BoundaryContact;
            std::ostringstream os;
            os << "core of dislocation " << i << " touches the boundary (clearance "
               << geom.elliptic_clearance(z, lambda) << " <= epsilon0 " << sys.epsilon0 << ")";
            rep.detail = os.str();
            return rep;
        }
    }
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            Vec2 zi = to_scaled(sys.dislocations[i].position, lambda);
            Vec2 zj = to_scaled(sys.dislocations[j].position, lambda);
            if (norm(zi - zj) <= 2.0 * sys.epsilon0) {
                rep.status = ValidationStatus::CoreOverlap;
                std::ostringstream os;
                os << "cores of dislocations " << i << " and " << j
                   << " overlap (scaled separation " << norm(zi - zj) << " <= 2*epsilon0 "
                   << 2.0 * sys.epsilon0 << ")";
                rep.detail = os.str();
                return rep;
            }
        }
    }
    return rep;
}

void require_valid_system(const DomainGeometry& geom, const DislocationSystem& sys,
                          const Material& material) {
    ValidationReport rep = validate_system(geom, sys, material);
    switch (rep.status) {
        case ValidationStatus::Valid: return;
        case ValidationStatus::OutsideDomain: throw OutsideDomainError(rep.detail);
        case ValidationStatus::BoundaryContact: throw BoundaryContactError(rep.detail);
        case ValidationStatus::CoreOverlap: throw CoreOverlapError(rep.detail);
    }
}

}  // namespace dislab
