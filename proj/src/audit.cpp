#include "lscale/audit.hpp"

#include <stdexcept>

namespace lscale {

LabelAudit::LabelAudit(const LabelSet& labels) : labels_(&labels) {
  for (auto& c : counts_) c.assign(labels.labels.size(), 0);
}

int LabelAudit::read(AccessPhase phase, int node) {
  if (node < 0 || node >= static_cast<int>(labels_->labels.size()))
    throw std::out_of_range("label audit: node id out of range");
  ++counts_[static_cast<int>(phase)][node];
  return labels_->labels[node];
}

std::vector<int> LabelAudit::gather(AccessPhase phase, std::span<const int> ids) {
  std::vector<int> out;
  out.reserve(ids.size());
  for (const int id : ids) out.push_back(read(phase, id));
  return out;
}

long LabelAudit::reads(AccessPhase phase, std::span<const int> ids) const {
  const auto& c = counts_[static_cast<int>(phase)];
  long total = 0;
  for (const int id : ids)
    if (id >= 0 && id < static_cast<int>(c.size())) total += c[id];
  return total;
}

long LabelAudit::total(AccessPhase phase) const {
  long total = 0;
  for (const long v : counts_[static_cast<int>(phase)]) total += v;
  return total;
}

}  // namespace lscale
