#pragma once

#include <cstddef>
#include <vector>

#include "dislab/bvp.hpp"
#include "dislab/energy.hpp"

namespace dislab {

// Eshelby stress applied to a direction: C(h) n = W(h) n - (n . L h) h.
Vec2 eshelby_apply(const Material& material, Vec2 h, Vec2 n);

// Default contour radius for the force at dislocation `ell`: half the core
// separation radius, capped by half the scaled distance to the nearest other
// source and to the boundary.
double default_contour_radius(const Material& material, const DislocationSystem& sys,
                              const DomainGeometry& geom, size_t ell);

// Peach-Koehler force as the outward flux of the Eshelby stress of h0 through
// the core boundary at radius R (value is R-independent for admissible R).
Vec2 force_contour(const Material& material, const DislocationSystem& sys,
                   const BoundaryResponse& response, const DomainGeometry& geom, size_t ell,
                   double R, double rel_tol = 1e-11);

// Explicit rotated-strain formula: b_ell * J L (grad u0(z_ell) + sum_{i != ell} k_i(z_ell))
// with the fixed rotation J = ((0, 1), (-1, 0)).
Vec2 force_explicit(const Material& material, const DislocationSystem& sys,
                    const BoundaryResponse& response, size_t ell);

struct ForceEntry {
    size_t index = 0;
    Vec2 contour;
    Vec2 explicit_route;
    double R = 0.0;
    double discrepancy = 0.0;  // |contour - explicit| norm, never dropped
};

struct ForceReport {
    std::vector<ForceEntry> entries;
};

ForceReport compute_forces(const Material& material, const DislocationSystem& sys,
                           const BoundaryResponse& response, const DomainGeometry& geom,
                           double R = 0.0 /* 0 = per-dislocation default */);

struct FdOptions {
    bool richardson = true;
    double energy_rel_tol = 1e-12;
    // Backend for the re-solves: analytic when available, else FEM at this
    // resolution.
    double fem_resolution = 0.02;
};

// Directional derivative of the renormalized energy by central differences,
// re-solving the boundary response at each perturbed configuration.
double grad_U_fd(const Material& material, const DislocationSystem& sys,
                 const DomainGeometry& geom, size_t ell, Vec2 direction, double h,
                 const FdOptions& opts = {});

}  // namespace dislab
