#include "dislab/dynamics.hpp"

#include <cmath>
#include <limits>

namespace dislab {

namespace {

BoundaryResponse solve_response(const Material& material, const DislocationSystem& sys,
                                const DomainGeometry& geom, const FlowOptions& opts) {
    if (geom.is_unit_disk() && material.lambda == 1.0)
        return solve_disk_analytic(material, sys);
    return solve_fem(material, sys, geom, opts.fem_resolution);
}

double system_energy(const Material& material, const DislocationSystem& sys,
                     const DomainGeometry& geom, const BoundaryResponse& response,
                     const FlowOptions& opts) {
    double R = std::numeric_limits<double>::infinity();
    for (size_t ell = 0; ell < sys.size(); ++ell)
        R = std::min(R, default_contour_radius(material, sys, geom, ell));
    return renormalized_energy(material, sys, geom, response, R, opts.energy_rel_tol).U_total;
}

std::vector<Vec2> system_forces(const Material& material, const DislocationSystem& sys,
                                const BoundaryResponse& response) {
    std::vector<Vec2> f(sys.size());
    for (size_t ell = 0; ell < sys.size(); ++ell)
        f[ell] = force_explicit(material, sys, response, ell);
    return f;
}

double mobility_of(const FlowOptions& opts, size_t ell) {
    if (opts.mobility.empty()) return 1.0;
    if (opts.mobility.size() == 1) return opts.mobility[0];
    return opts.mobility.at(ell);
}

}  // namespace

std::string to_string(StopReason r) {
    switch (r) {
        case StopReason::None: return "none";
        case StopReason::MaxSteps: return "max-steps";
        case StopReason::ForceBelowThreshold: return "force-below-threshold";
        case StopReason::NearCollision: return "near-collision";
        case StopReason::BoundaryApproach: return "boundary-approach";
    }
    return "unknown";
}

FlowState make_flow_state(const Material& material, const DislocationSystem& sys,
                          const DomainGeometry& geom, const FlowOptions& opts) {
    require_valid_system(geom, sys, material);
    FlowState s;
    s.system = sys;
    s.response = solve_response(material, sys, geom, opts);
    s.forces = system_forces(material, sys, s.response);
    s.energy = system_energy(material, sys, geom, s.response, opts);
    s.time = 0.0;
    return s;
}

FlowState step(const Material& material, const DomainGeometry& geom, const FlowState& state,
               double dt, const FlowOptions& opts) {
    const double dt0 = dt;
    const double energy_tol = 1e-10 * (1.0 + std::abs(state.energy));
    while (true) {
        DislocationSystem next = state.system;
        for (size_t ell = 0; ell < next.size(); ++ell)
            next.dislocations[ell].position += state.forces[ell] * (dt * mobility_of(opts, ell));
        ValidationReport rep = validate_system(geom, next, material);
        if (rep.ok()) {
            FlowState out;
            out.system = next;
            out.response = solve_response(material, next, geom, opts);
            out.forces = system_forces(material, next, out.response);
            out.energy = system_energy(material, next, geom, out.response, opts);
            out.time = state.time + dt;
            if (out.energy <= state.energy + energy_tol) return out;
        }
        dt *= 0.5;
        if (dt < 1e-12 * dt0)
            throw StepCollapseError("time step collapsed below 1e-12 of its initial value");
    }
}

Trajectory evolve(const Material& material, const DislocationSystem& initial,
                  const DomainGeometry& geom, const FlowOptions& opts) {
    Trajectory traj;
    FlowState state = make_flow_state(material, initial, geom, opts);

    auto record = [&](const FlowState& s) {
        TrajectorySample sample;
        sample.time = s.time;
        for (const auto& d : s.system.dislocations) sample.positions.push_back(d.position);
        sample.forces = s.forces;
        sample.energy = s.energy;
        traj.samples.push_back(std::move(sample));
    };
    auto stop_check = [&](const FlowState& s) -> StopReason {
        double fmax = 0.0;
        for (Vec2 f : s.forces) fmax = std::max(fmax, norm(f));
        if (fmax < opts.force_threshold) return StopReason::ForceBelowThreshold;
        // Thresholds sit a little above the admissibility limits so the flow
        // stops before steps start being rejected outright.
        const double eps = s.system.epsilon0;
        for (size_t i = 0; i < s.system.size(); ++i) {
            Vec2 zi = to_scaled(s.system.dislocations[i].position, material.lambda);
            for (size_t j = i + 1; j < s.system.size(); ++j) {
                Vec2 zj = to_scaled(s.system.dislocations[j].position, material.lambda);
                if (norm(zi - zj) < 2.0 * eps * 1.05) return StopReason::NearCollision;
            }
        }
        for (const auto& d : s.system.dislocations) {
            if (geom.elliptic_clearance(d.position, material.lambda) < eps * 1.05)
                return StopReason::BoundaryApproach;
        }
        return StopReason::None;
    };

    record(state);
    for (int k = 0; k < opts.max_steps; ++k) {
        state = step(material, geom, state, opts.dt, opts);
        record(state);
        StopReason why = stop_check(state);
        if (why != StopReason::None) {
            traj.reason = why;
            return traj;
        }
    }
    traj.reason = StopReason::MaxSteps;
    return traj;
}

}  // namespace dislab
