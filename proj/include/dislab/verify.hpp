#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "dislab/model.hpp"
#include "dislab/quadrature.hpp"
#include "dislab/singular.hpp"

// Independent oracles: deliberately plain schemes with no code shared with the
// production quadrature, so disagreements can be adjudicated.

namespace dislab::verify {

struct OracleResult {
    double value = 0.0;
    double error = 0.0;  // reported bound
};

// Region "outer minus listed elliptical holes": the outer boundary is either
// the domain or a single ellipse.
struct OracleRegion {
    std::optional<DomainGeometry> domain;
    std::optional<Ellipse> outer;
    std::vector<Ellipse> holes;

    bool inside(Vec2 p) const;
};

// Quadtree cell quadrature with indicator-function classification; accuracy is
// limited near curved boundaries (intended for tolerances around 1e-5).
OracleResult area_quadrature(const std::function<double(Vec2)>& f, const OracleRegion& region,
                             const QuadratureSpec& spec);

// Composite-Simpson quadrature of f over an elliptic annulus in (r, tau)
// coordinates; spectral-grade for smooth integrands (used for the closed-form
// annulus identity at tight tolerances).
OracleResult annulus_quadrature(const std::function<double(Vec2)>& f, Vec2 center, double lambda,
                                double r_in, double r_out, double rel_tol);

// Both sides of the moving-core transport identities: d/dxi of integrals over
// a core (and its complement in the unit disk) translating with velocity v.
struct TransportReport {
    double lhs_core = 0.0, rhs_core = 0.0, diff_core = 0.0;
    double lhs_complement = 0.0, rhs_complement = 0.0, diff_complement = 0.0;
};

TransportReport moving_domain_derivative_check(
    const std::function<double(Vec2, double)>& f, Vec2 center, double eps, double lambda, Vec2 v,
    double h);

// Source-shift derivative checks for the singular strain: the shift derivative
// equals -(Dk) v, and the convected derivative vanishes.
struct SourceShiftReport {
    double max_shift_residual = 0.0;      // | FD_xi k(x; z + xi v) + (Dk) v |
    double max_convected_residual = 0.0;  // | FD_xi k(x + xi v; z + xi v) |
};

SourceShiftReport dvl_k_check(const SingularStrain& strain, Vec2 v, double h,
                              const std::vector<Vec2>& points);

}  // namespace dislab::verify
