#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lscale/harness.hpp"

namespace lscale {

// Snapshot of a (possibly multi-run) experiment between selection steps.
// Together with the derived seeding scheme this is enough to continue a run
// exactly as if it had never been interrupted. An empty labelled set with
// step 0 means "run not started yet".
struct ExperimentState {
  std::uint64_t config_hash = 0;
  int run = 0;
  int step = 0;
  int spent = 0;
  std::vector<int> labelled;  // insertion order
  std::vector<AccuracyRecord> records;
  bool finished = false;
};

void save_state(const ExperimentState& state, const std::string& path);
ExperimentState load_state(const std::string& path);

}  // namespace lscale
