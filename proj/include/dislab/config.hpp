#pragma once

#include <string>
#include <vector>

#include "dislab/model.hpp"

namespace dislab {

// One structured configuration document drives every CLI command; unknown
// commands simply ignore the sections they do not use.
struct RunConfig {
    std::string system_id = "system";
    Material material;
    DomainGeometry geometry = DomainGeometry::unit_disk();
    DislocationSystem system;

    enum class Backend { Analytic, Fem };
    Backend backend = Backend::Analytic;
    double resolution = 0.02;  // FEM target edge length
    int threads = 1;
    std::string output_dir = ".";

    // energy command
    double energy_R = 0.0;  // 0 = epsilon0 / 2
    std::vector<double> epsilon_ladder;

    // forces command
    double force_R = 0.0;         // 0 = per-dislocation default
    double discrepancy_tol = 0.0;  // 0 = report only

    // flow command
    double dt = 1e-3;
    int max_steps = 100;
    std::vector<double> mobility;
    double force_threshold = 1e-8;

    // verify command
    std::vector<std::string> suites;
};

RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::string& path);
std::string dump_config(const RunConfig& cfg);

}  // namespace dislab
