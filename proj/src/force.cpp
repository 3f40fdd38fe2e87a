#include "dislab/force.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace dislab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Regular part of h0 at z_ell: grad u0 + sum of the other singular strains,
// assembled directly (not as h0 - k_ell) to avoid cancellation near the core.
Vec2 regular_part(const Material& material, const DislocationSystem& sys,
                  const BoundaryResponse& response, size_t ell, Vec2 x) {
    Vec2 h = response.gradient(x);
    for (size_t i = 0; i < sys.size(); ++i) {
        if (i == ell) continue;
        h += k_eval(SingularStrain(sys.dislocations[i], material.lambda), x);
    }
    return h;
}

void check_force_radius(const Material& material, const DislocationSystem& sys,
                        const DomainGeometry& geom, size_t ell, double R) {
    if (!(R > 0.0) || !(R < sys.epsilon0))
        throw BadCutRadiusError("force contour radius must satisfy 0 < R < epsilon0");
    Vec2 z = sys.dislocations[ell].position;
    if (geom.elliptic_clearance(z, material.lambda) <= R)
        throw BadCutRadiusError("force contour touches the boundary");
    for (size_t j = 0; j < sys.size(); ++j) {
        if (j == ell) continue;
        Vec2 d = to_scaled(z, material.lambda) -
                 to_scaled(sys.dislocations[j].position, material.lambda);
        if (norm(d) <= 2.0 * R) throw BadCutRadiusError("force contour overlaps another core");
    }
}

}  // namespace

Vec2 eshelby_apply(const Material& material, Vec2 h, Vec2 n) {
    return n * energy_density(material, h) - h * dot(n, apply_L(material, h));
}

double default_contour_radius(const Material& material, const DislocationSystem& sys,
                              const DomainGeometry& geom, size_t ell) {
    Vec2 z = sys.dislocations.at(ell).position;
    double r = 0.5 * sys.epsilon0;
    r = std::min(r, 0.5 * geom.elliptic_clearance(z, material.lambda));
    for (size_t j = 0; j < sys.size(); ++j) {
        if (j == ell) continue;
        Vec2 d = to_scaled(z, material.lambda) -
                 to_scaled(sys.dislocations[j].position, material.lambda);
        r = std::min(r, 0.5 * norm(d));
    }
    return r;
}

Vec2 force_contour(const Material& material, const DislocationSystem& sys,
                   const BoundaryResponse& response, const DomainGeometry& geom, size_t ell,
                   double R, double rel_tol) {
    check_force_radius(material, sys, geom, ell, R);
    const Vec2 z = sys.dislocations[ell].position;
    const double lam = material.lambda;
    SingularStrain own(sys.dislocations[ell], lam);

    // Integrand of the flux of the Eshelby stress over the core boundary,
    // parametrized by eccentric anomaly with ds = R sqrt(lam^2 cos^2 + sin^2) dtau.
    auto point_value = [&](double t) {
        double tau = kTwoPi * t;
        Vec2 x = z + Vec2{R * std::cos(tau), lam * R * std::sin(tau)};
        Vec2 h0 = k_eval_anomaly(own, R, tau) + regular_part(material, sys, response, ell, x);
        Vec2 n = ellipse_normal(lam, tau);
        double c = std::cos(tau), s = std::sin(tau);
        double ds = R * std::sqrt(lam * lam * c * c + s * s);
        return eshelby_apply(material, h0, n) * ds;
    };

    // Trapezoid doubling on both components at once.
    int n = 16;
    const int n_max = 1 << 18;
    Vec2 sum{0.0, 0.0};
    for (int k = 0; k < n; ++k) sum += point_value(static_cast<double>(k) / n);
    Vec2 prev = sum / static_cast<double>(n);
    double scale = 0.0;
    for (int k = 0; k < n; ++k) {
        Vec2 v = point_value((k + 0.25) / n);
        scale = std::max(scale, std::max(std::abs(v.x), std::abs(v.y)));
    }
    while (n < n_max) {
        Vec2 add{0.0, 0.0};
        for (int k = 0; k < n; ++k) add += point_value((k + 0.5) / n);
        n *= 2;
        sum += add;
        Vec2 cur = sum / static_cast<double>(n);
        double diff = std::max(std::abs(cur.x - prev.x), std::abs(cur.y - prev.y));
        double anchor = std::max({std::abs(cur.x), std::abs(cur.y), 1e-3 * scale, 1e-30});
        if (diff <= rel_tol * anchor) return cur * kTwoPi;
        prev = cur;
    }
    throw QuadratureFailureError("force contour quadrature did not converge");
}

Vec2 force_explicit(const Material& material, const DislocationSystem& sys,
                    const BoundaryResponse& response, size_t ell) {
    const Dislocation& d = sys.dislocations.at(ell);
    Vec2 h = regular_part(material, sys, response, ell, d.position);
    Vec2 Lh = apply_L(material, h);
    const Mat2 J{0.0, 1.0, -1.0, 0.0};
    return J * Lh * d.burgers;
}

ForceReport compute_forces(const Material& material, const DislocationSystem& sys,
                           const BoundaryResponse& response, const DomainGeometry& geom,
                           double R) {
    ForceReport report;
    // The finite-element field is piecewise smooth along the contour, so the
    // trapezoid rule converges at a fixed low order there; relax accordingly.
    const double rel_tol =
        response.backend() == BoundaryResponse::Backend::FiniteElement ? 1e-9 : 1e-11;
    for (size_t ell = 0; ell < sys.size(); ++ell) {
        ForceEntry e;
        e.index = ell;
        e.R = R > 0.0 ? R : default_contour_radius(material, sys, geom, ell);
        e.contour = force_contour(material, sys, response, geom, ell, e.R, rel_tol);
        e.explicit_route = force_explicit(material, sys, response, ell);
        e.discrepancy = norm(e.contour - e.explicit_route);
        report.entries.push_back(e);
    }
    return report;
}

namespace {

double energy_at(const Material& material, const DislocationSystem& sys,
                 const DomainGeometry& geom, const FdOptions& opts) {
    ValidationReport rep = validate_system(geom, sys, material);
    if (!rep.ok()) throw InadmissiblePerturbationError(rep.detail);
    BoundaryResponse response;
    if (geom.is_unit_disk() && material.lambda == 1.0) {
        response = solve_disk_analytic(material, sys);
    } else {
        response = solve_fem(material, sys, geom, opts.fem_resolution);
    }
    // Any admissible cut radius gives the same value; reuse the force default.
    double R = std::numeric_limits<double>::infinity();
    for (size_t ell = 0; ell < sys.size(); ++ell)
        R = std::min(R, default_contour_radius(material, sys, geom, ell));
    EnergyBreakdown br =
        renormalized_energy(material, sys, geom, response, R, opts.energy_rel_tol);
    return br.U_total;
}

double central_difference(const Material& material, const DislocationSystem& sys,
                          const DomainGeometry& geom, size_t ell, Vec2 v, double h,
                          const FdOptions& opts) {
    DislocationSystem plus = sys, minus = sys;
    plus.dislocations[ell].position += v * h;
    minus.dislocations[ell].position -= v * h;
    double up = energy_at(material, plus, geom, opts);
    double um = energy_at(material, minus, geom, opts);
    return (up - um) / (2.0 * h);
}

}  // namespace

double grad_U_fd(const Material& material, const DislocationSystem& sys,
                 const DomainGeometry& geom, size_t ell, Vec2 direction, double h,
                 const FdOptions& opts) {
    if (ell >= sys.size()) throw std::out_of_range("grad_U_fd: dislocation index");
    if (!(h > 0.0)) throw std::invalid_argument("grad_U_fd: step must be > 0");
    Vec2 v = normalized(direction);
    double d1 = central_difference(material, sys, geom, ell, v, h, opts);
    if (!opts.richardson) return d1;
    double d2 = central_difference(material, sys, geom, ell, v, 0.5 * h, opts);
    return (4.0 * d2 - d1) / 3.0;
}

}  // namespace dislab
