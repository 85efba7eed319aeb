#pragma once

#include <cstdint>
#include <vector>

#include "guiprep/records.h"

namespace guiprep {

// Seeded synthetic corpora for load and determinism runs. Output depends
// only on the arguments (std::mt19937_64 with modulo draws, no library
// distributions).
std::vector<GroundingRecord> synth_grounding(std::uint64_t seed, int records,
                                             int screenshots);
std::vector<Trajectory> synth_trajectories(std::uint64_t seed, int traces);

}  // namespace guiprep
