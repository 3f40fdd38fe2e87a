#pragma once

#include <random>

#include "dislab/model.hpp"

namespace dislab {

// Deterministic generator of admissible unit-disk test systems, shared by the
// randomized verification suites (seed via DISLAB_SEED) and the tests.
DislocationSystem sample_disk_system(std::mt19937_64& rng, int n_min, int n_max);

// Seed from the DISLAB_SEED environment variable, or the fixed default.
std::uint64_t env_seed();

}  // namespace dislab
