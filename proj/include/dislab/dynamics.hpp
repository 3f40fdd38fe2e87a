#pragma once

#include <string>
#include <vector>

#include "dislab/force.hpp"

namespace dislab {

enum class StopReason { None, MaxSteps, ForceBelowThreshold, NearCollision, BoundaryApproach };

std::string to_string(StopReason r);

struct TrajectorySample {
    double time = 0.0;
    std::vector<Vec2> positions;
    std::vector<Vec2> forces;
    double energy = 0.0;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    StopReason reason = StopReason::None;
};

struct FlowOptions {
    double dt = 1e-3;
    int max_steps = 100;
    std::vector<double> mobility;       // per dislocation; empty = unit mobility
    double force_threshold = 1e-8;      // stop when every |force| falls below
    double energy_rel_tol = 1e-11;      // quadrature tolerance for the descent check
    double fem_resolution = 0.02;       // used when the analytic backend is unavailable
};

struct FlowState {
    DislocationSystem system;
    BoundaryResponse response;
    std::vector<Vec2> forces;
    double energy = 0.0;
    double time = 0.0;
};

FlowState make_flow_state(const Material& material, const DislocationSystem& sys,
                          const DomainGeometry& geom, const FlowOptions& opts);

// One forward-Euler update z <- z + dt * m * force. The step is rejected and
// halved when the new configuration is inadmissible or the energy increases
// beyond 1e-10 * (1 + |U|); throws StepCollapseError below 1e-12 * dt.
FlowState step(const Material& material, const DomainGeometry& geom, const FlowState& state,
               double dt, const FlowOptions& opts);

Trajectory evolve(const Material& material, const DislocationSystem& initial,
                  const DomainGeometry& geom, const FlowOptions& opts);

}  // namespace dislab
