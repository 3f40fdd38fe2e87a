#pragma once

#include <vector>

#include "dislab/model.hpp"
#include "dislab/quadrature.hpp"

namespace dislab {

// Fundamental singular strain of one screw dislocation:
//   k(x; z) = b*lambda / (2*pi*(lambda^2 (x1-z1)^2 + (x2-z2)^2)) * (-(x2-z2), x1-z1).
// Undefined exactly at the source.
struct SingularStrain {
    Dislocation source;
    double lambda = 1.0;

    SingularStrain() = default;
    SingularStrain(Dislocation d, double lam) : source(d), lambda(lam) {}
    SingularStrain(const Dislocation& d, const Material& m) : source(d), lambda(m.lambda) {}
};

std::vector<SingularStrain> strains_of(const DislocationSystem& sys, const Material& material);

Vec2 k_eval(const SingularStrain& strain, Vec2 x);

// Same field at x = z + (r cos tau, lambda r sin tau):
//   k = b/(2*pi*lambda*r) * (-lambda sin tau, cos tau).
Vec2 k_eval_anomaly(const SingularStrain& strain, double r, double tau);

// Spatial derivative Dk (2x2) at x; rows are gradients of the components.
Mat2 k_jacobian(const SingularStrain& strain, Vec2 x);

// div(L k) evaluated from the closed-form Jacobian (zero in exact arithmetic).
double div_Lk(const Material& material, const SingularStrain& strain, Vec2 x);

// Outward unit normal of the core ellipse at eccentric anomaly tau:
//   (lambda cos tau, sin tau) / sqrt(lambda^2 cos^2 tau + sin^2 tau).
Vec2 ellipse_normal(double lambda, double tau);

// Sum of the singular strains at x.
Vec2 superposed_k(const std::vector<SingularStrain>& strains, Vec2 x);

// Flux of L * (sum of strains) through a contour, outward.
double flux_Lk(const Material& material, const std::vector<SingularStrain>& strains,
               const Contour& contour, const QuadratureSpec& spec = {});

}  // namespace dislab
