#pragma once

#include <functional>
#include <vector>

#include "dislab/errors.hpp"
#include "dislab/geometry.hpp"

namespace dislab {

struct QuadratureSpec {
    enum class Scheme { Auto, TrapezoidPeriodic, GaussPanel, TriangleAdaptive };
    Scheme scheme = Scheme::Auto;
    double rel_tol = 1e-10;
    int max_depth = 40;

    QuadratureSpec() = default;
    QuadratureSpec(Scheme s, double tol, int depth) : scheme(s), rel_tol(tol), max_depth(depth) {
        if (!(rel_tol > 0.0)) throw std::invalid_argument("QuadratureSpec: tolerance must be > 0");
        if (max_depth < 1) throw std::invalid_argument("QuadratureSpec: depth must be >= 1");
    }
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;  // estimate, same units as value
};

// Adaptive Gauss-Legendre panels on [a, b]; abs_tol is an absolute budget.
QuadResult adaptive_gauss(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, int max_depth);

// Trapezoid rule with doubling for smooth 1-periodic integrands; returns
// integral over [0, 1). Stops when successive estimates agree to
// max(abs_tol, rel_tol * |I|); throws QuadratureFailureError past n_max.
QuadResult periodic_trapezoid(const std::function<double(double)>& f, double rel_tol,
                              double abs_tol, int n_start = 16, int n_max = (1 << 20));

// Closed curve parametrized over t in [0, 1), counterclockwise.
struct Contour {
    std::function<Vec2(double)> point;
    std::function<Vec2(double)> velocity;  // d point / dt
    bool smooth_closed = true;             // analytic and periodic: trapezoid applies
    std::vector<double> breaks;            // panel boundaries for piecewise curves
};

Contour circle_contour(Vec2 center, double radius);
Contour ellipse_contour(const Ellipse& e);
Contour polygon_contour(const std::vector<Vec2>& vertices);
Contour domain_boundary(const DomainGeometry& geom);

// Integral over the contour parameter of an arbitrary density F(t) dt.
QuadResult contour_parameter_integral(const std::function<double(double)>& F,
                                      const Contour& contour, const QuadratureSpec& spec,
                                      double abs_scale);

using VectorField = std::function<Vec2(Vec2)>;

// Counterclockwise line integral of field . tangent ds.
double circulation(const VectorField& field, const Contour& loop, const QuadratureSpec& spec = {});

// Outward flux integral of field . n ds (contour counterclockwise).
double flux(const VectorField& field, const Contour& contour, const QuadratureSpec& spec = {});

// ---- Area quadrature over the domain with elliptical holes removed. ----
//
// Holes are elliptical cores E_r(center) with "elliptic radius" r (the cores
// become disks of radius r in the scaled plane xi = (x1, x2/lambda)). The
// integrand may blow up like 1/dist at hole centers of radius zero; the polar
// decomposition around each center absorbs that.
struct RegionHole {
    Vec2 center;
    double radius = 0.0;
};

QuadResult integrate_domain(const DomainGeometry& geom, double lambda,
                            const std::vector<RegionHole>& holes,
                            const std::function<double(Vec2)>& f, double rel_tol,
                            int max_depth = 40);

// Integral of f over the elliptical annulus E_rout(center) \ E_rin(center).
QuadResult integrate_elliptic_annulus(Vec2 center, double lambda, double r_in, double r_out,
                                      const std::function<double(Vec2)>& f, double rel_tol,
                                      int max_depth = 40);

}  // namespace dislab
