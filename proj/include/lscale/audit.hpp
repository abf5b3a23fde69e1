#pragma once

#include <array>
#include <span>
#include <vector>

#include "lscale/dataset.hpp"

namespace lscale {

// Why a label was read. Training and Selection must never touch test or
// validation labels; the audit makes that checkable instead of assumed.
enum class AccessPhase { Training = 0, ValidationEval = 1, Selection = 2, TestEval = 3 };
inline constexpr int kNumAccessPhases = 4;

// The only label path inside an experiment run. Records every read per
// node and phase.
class LabelAudit {
 public:
  explicit LabelAudit(const LabelSet& labels);

  int read(AccessPhase phase, int node);
  std::vector<int> gather(AccessPhase phase, std::span<const int> ids);

  // Total reads of the given nodes under the given phase.
  long reads(AccessPhase phase, std::span<const int> ids) const;
  long total(AccessPhase phase) const;

 private:
  const LabelSet* labels_;
  std::array<std::vector<long>, kNumAccessPhases> counts_;
};

}  // namespace lscale
