#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dislab/config.hpp"

namespace dislab {

// Exit codes shared by every command: 0 success, 1 usage or configuration
// error, 2 failed numerical check, 3 solver failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitCheckFailed = 2;
inline constexpr int kExitSolver = 3;

int cmd_energy(const RunConfig& cfg, std::ostream& diag);
int cmd_forces(const RunConfig& cfg, std::ostream& diag);
int cmd_flow(const RunConfig& cfg, std::ostream& diag);
int cmd_verify(const RunConfig& cfg, std::ostream& diag);
int cmd_dump_config(const RunConfig& cfg, std::ostream& out);

// Names accepted by the verify command.
const std::vector<std::string>& verify_suite_names();

}  // namespace dislab
