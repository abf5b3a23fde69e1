#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lscale/classifier.hpp"
#include "lscale/graph.hpp"
#include "lscale/latent.hpp"
#include "lscale/matrix.hpp"

namespace lscale {

enum class StrategyKind { Lscale, Random, Uncertainty, Featprop, FeatpropU };

StrategyKind parse_strategy(const std::string& name);
std::string strategy_name(StrategyKind kind);

struct Strategy {
  StrategyKind kind = StrategyKind::Lscale;
  double lambda = 0.99;     // lscale mixing decay
  int khops = 2;            // featprop propagation depth
  bool incremental = true;  // lscale: fixed-medoid clustering vs plain per-step clustering
  int restarts = 1;         // clustering restarts per step
};

// Labelled/unlabelled bookkeeping over the selectable pool.
struct PoolState {
  std::vector<int> labelled;    // insertion order, each batch sorted
  std::vector<int> unlabelled;  // sorted
  int step = 0;
  int spent = 0;  // labels charged against the budget

  // Moves `selected` from unlabelled to labelled; validates membership.
  void apply_selection(std::span<const int> selected);
};

// Everything a strategy may look at, plus per-run caches that survive across
// steps (the provider features and the pool are fixed within a run).
struct SelectionContext {
  const Graph* graph = nullptr;
  const FeatureMatrix* attributes = nullptr;  // raw node attributes X
  const FeatureMatrix* features = nullptr;    // provider features H
  const ClassifierModel* model = nullptr;     // classifier trained on the current labelled set

  std::vector<int> pool_ids;  // sorted; the ids all cached matrices are over

  struct Cache {
    std::vector<int> pool_index;            // node id -> row in pool matrices, -1 outside
    std::optional<FeatureMatrix> h_norm;    // row-normalized H (all nodes)
    std::optional<Eigen::MatrixXd> hnorm_sq;    // squared distances of h_norm over pool_ids
    std::optional<Eigen::MatrixXd> featprop_sq; // squared distances of propagated X over pool_ids
    std::optional<Eigen::MatrixXd> featraw_sq;  // squared distances of raw H over pool_ids
  };
  Cache cache;
};

struct SelectionResult {
  std::vector<int> selected;  // ascending, size == batch
  // Mean over selected nodes of the distance to the nearest previously
  // labelled node, in the space the strategy clustered (NaN when the
  // strategy has no metric space or no labelled nodes exist).
  double mean_dist_to_labelled = 0.0;
};

// Picks `batch` nodes from state.unlabelled. Never touches labels.
// Deterministic for a fixed seed.
SelectionResult select(const Strategy& strategy, const PoolState& state, SelectionContext& ctx,
                       int batch, std::uint64_t seed);

// -sum p ln p with 0 ln 0 = 0.
double entropy(const Eigen::RowVectorXd& p);

}  // namespace lscale
