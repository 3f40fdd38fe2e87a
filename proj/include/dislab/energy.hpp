#pragma once

#include "dislab/bvp.hpp"
#include "dislab/model.hpp"

namespace dislab {

// Renormalized energy split U = U_S + U_I + U_E together with the coefficient
// of the log(1/eps) core term and the cut radius used for U_S.
struct EnergyBreakdown {
    double core_coefficient = 0.0;
    double U_S = 0.0;
    double U_I = 0.0;
    double U_E = 0.0;
    double U_total = 0.0;
    double R_used = 0.0;
};

// Coefficient sum_i mu*lambda*b_i^2 / (4*pi) of the divergent core term.
double core_coefficient(const Material& material, const DislocationSystem& sys);

// Closed form of int_{E_R \ E_eps} W(k) dx = mu*lambda*b^2/(4*pi) * log(R/eps).
double annulus_energy(const Material& material, double b, double R, double eps);

// Same integral by the production area quadrature (cross-check path).
double annulus_energy_quadrature(const Material& material, double b, double R, double eps,
                                 double rel_tol = 1e-10);

// U_S = sum_i [ mu*lambda*b_i^2/(4*pi) * log R + int_{Omega \ E_{R,i}} W(k_i) ].
// The area integral is split into an exact elliptic annulus out to the largest
// core inscribed in Omega plus quadrature of the smooth remainder.
double self_energy(const Material& material, const DislocationSystem& sys,
                   const DomainGeometry& geom, double R, double rel_tol = 0.0);

// U_I = sum_{i<j} int_Omega k_j . L k_i dx (integrable point singularities).
double interaction_energy(const Material& material, const DislocationSystem& sys,
                          const DomainGeometry& geom, double rel_tol = 0.0);

// U_E = int_Omega W(grad u0) + sum_i int_bdry u0 L k_i . n ds. For the finite
// element backend this equals the discrete functional value recorded by the
// solve; for the analytic backend it is evaluated by quadrature.
double elastic_energy(const Material& material, const DislocationSystem& sys,
                      const BoundaryResponse& response, const DomainGeometry& geom,
                      double rel_tol = 0.0);

EnergyBreakdown renormalized_energy(const Material& material, const DislocationSystem& sys,
                                    const DomainGeometry& geom, const BoundaryResponse& response,
                                    double R, double rel_tol = 0.0);

// J_eps = int over Omega minus the N cores E_eps of W(h0), by direct quadrature.
double regularized_energy(const Material& material, const DislocationSystem& sys,
                          const DomainGeometry& geom, const BoundaryResponse& response,
                          double eps, double rel_tol = 0.0);

}  // namespace dislab
