#include "lscale/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lscale/features.hpp"
#include "lscale/kmedoids.hpp"
#include "lscale/rng.hpp"

namespace lscale {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void ensure_pool_index(SelectionContext& ctx) {
  if (!ctx.cache.pool_index.empty()) return;
  int max_id = -1;
  for (const int id : ctx.pool_ids) max_id = std::max(max_id, id);
  ctx.cache.pool_index.assign(max_id + 1, -1);
  for (size_t i = 0; i < ctx.pool_ids.size(); ++i) ctx.cache.pool_index[ctx.pool_ids[i]] = static_cast<int>(i);
}

int pool_row(const SelectionContext& ctx, int node) {
  const auto& idx = ctx.cache.pool_index;
  if (node < 0 || node >= static_cast<int>(idx.size()) || idx[node] < 0)
    throw std::logic_error("selection: node " + std::to_string(node) + " is not in the pool");
  return idx[node];
}

// dist over `ids`, gathered from a pool-aligned squared-distance matrix
Eigen::MatrixXd gather_distances(const SelectionContext& ctx, const Eigen::MatrixXd& pool_sq,
                                 std::span<const int> ids) {
  const int p = static_cast<int>(ids.size());
  Eigen::MatrixXd d(p, p);
  std::vector<int> rows(p);
  for (int a = 0; a < p; ++a) rows[a] = pool_row(ctx, ids[a]);
  for (int a = 0; a < p; ++a) {
    d(a, a) = 0.0;
    for (int b = a + 1; b < p; ++b) {
      const double v = std::sqrt(pool_sq(rows[a], rows[b]));
      d(a, b) = v;
      d(b, a) = v;
    }
  }
  return d;
}

// mean over `selected` of the distance to the nearest labelled node
double mean_dist_to_labelled(const SelectionContext& ctx, const Eigen::MatrixXd& pool_sq,
                             std::span<const int> selected, std::span<const int> labelled) {
  if (selected.empty() || labelled.empty()) return kNaN;
  double total = 0.0;
  for (const int s : selected) {
    const int rs = pool_row(ctx, s);
    double best = std::numeric_limits<double>::infinity();
    for (const int l : labelled) best = std::min(best, pool_sq(rs, pool_row(ctx, l)));
    total += std::sqrt(best);
  }
  return total / static_cast<double>(selected.size());
}

SelectionResult cluster_pool(const Strategy& strat, const PoolState& state, SelectionContext& ctx,
                             const Eigen::MatrixXd& pool_sq, int batch, std::uint64_t seed,
                             bool incremental) {
  SelectionResult res;
  if (incremental) {
    std::vector<int> order(state.labelled.begin(), state.labelled.end());
    order.insert(order.end(), state.unlabelled.begin(), state.unlabelled.end());
    const Eigen::MatrixXd d = gather_distances(ctx, pool_sq, order);
    auto inc = incremental_kmedoids(d, state.labelled, state.unlabelled, batch, seed,
                                    strat.restarts);
    res.selected = std::move(inc.selected);
  } else {
    const Eigen::MatrixXd d = gather_distances(ctx, pool_sq, state.unlabelled);
    auto clu = kmedoids(d, state.unlabelled, batch, seed, strat.restarts);
    res.selected = std::move(clu.medoids);
  }
  res.mean_dist_to_labelled = mean_dist_to_labelled(ctx, pool_sq, res.selected, state.labelled);
  return res;
}

}  // namespace

StrategyKind parse_strategy(const std::string& name) {
  if (name == "lscale") return StrategyKind::Lscale;
  if (name == "random") return StrategyKind::Random;
  if (name == "uncertainty") return StrategyKind::Uncertainty;
  if (name == "featprop") return StrategyKind::Featprop;
  if (name == "featprop-u") return StrategyKind::FeatpropU;
  throw std::invalid_argument(
      "unknown strategy '" + name +
      "' (expected lscale, random, uncertainty, featprop or featprop-u)");
}

std::string strategy_name(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::Lscale: return "lscale";
    case StrategyKind::Random: return "random";
    case StrategyKind::Uncertainty: return "uncertainty";
    case StrategyKind::Featprop: return "featprop";
    case StrategyKind::FeatpropU: return "featprop-u";
  }
  return "?";
}

void PoolState::apply_selection(std::span<const int> selected) {
  std::vector<int> sorted(selected.begin(), selected.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::logic_error("apply_selection: duplicate node in selection");
  if (!std::includes(unlabelled.begin(), unlabelled.end(), sorted.begin(), sorted.end()))
    throw std::logic_error("apply_selection: selected node outside the unlabelled pool");

  std::vector<int> remaining;
  remaining.reserve(unlabelled.size() - sorted.size());
  std::set_difference(unlabelled.begin(), unlabelled.end(), sorted.begin(), sorted.end(),
                      std::back_inserter(remaining));
  unlabelled = std::move(remaining);
  labelled.insert(labelled.end(), sorted.begin(), sorted.end());
  step += 1;
  spent += static_cast<int>(sorted.size());
}

double entropy(const Eigen::RowVectorXd& p) {
  double h = 0.0;
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    const double v = p(k);
    if (v > 0.0) h -= v * std::log(v);
  }
  return h;
}

SelectionResult select(const Strategy& strategy, const PoolState& state, SelectionContext& ctx,
                       int batch, std::uint64_t seed) {
  if (batch < 0) throw std::invalid_argument("select: negative batch");
  if (batch > static_cast<int>(state.unlabelled.size()))
    throw std::invalid_argument("select: batch " + std::to_string(batch) +
                                " exceeds unlabelled pool of " +
                                std::to_string(state.unlabelled.size()));
  ensure_pool_index(ctx);

  switch (strategy.kind) {
    case StrategyKind::Random: {
      Rng rng(seed);
      SelectionResult res;
      res.selected = sample_without_replacement(state.unlabelled, batch, rng);
      std::sort(res.selected.begin(), res.selected.end());
      res.mean_dist_to_labelled = kNaN;
      return res;
    }

    case StrategyKind::Uncertainty: {
      if (!ctx.model || !ctx.features)
        throw std::logic_error("uncertainty: requires the current model and features");
      const int nu = static_cast<int>(state.unlabelled.size());
      FeatureMatrix hu(nu, ctx.features->cols());
      for (int a = 0; a < nu; ++a) hu.row(a) = ctx.features->row(state.unlabelled[a]);
      const Eigen::MatrixXd p = forward(*ctx.model, hu);

      std::vector<std::pair<double, int>> scored(nu);
      for (int a = 0; a < nu; ++a) scored[a] = {entropy(p.row(a)), state.unlabelled[a]};
      // highest entropy first, ties to the lower node id
      std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
      });
      SelectionResult res;
      for (int a = 0; a < batch; ++a) res.selected.push_back(scored[a].second);
      std::sort(res.selected.begin(), res.selected.end());
      res.mean_dist_to_labelled = kNaN;
      return res;
    }

    case StrategyKind::Featprop: {
      if (!ctx.graph || !ctx.attributes)
        throw std::logic_error("featprop: requires the graph and node attributes");
      if (!ctx.cache.featprop_sq) {
        const FeatureMatrix prop = propagate_features(*ctx.graph, *ctx.attributes, strategy.khops);
        ctx.cache.featprop_sq = pairwise_sq_distances(prop, ctx.pool_ids);
      }
      return cluster_pool(strategy, state, ctx, *ctx.cache.featprop_sq, batch, seed,
                          /*incremental=*/false);
    }

    case StrategyKind::FeatpropU: {
      if (!ctx.features) throw std::logic_error("featprop-u: requires provider features");
      if (!ctx.cache.featraw_sq)
        ctx.cache.featraw_sq = pairwise_sq_distances(*ctx.features, ctx.pool_ids);
      return cluster_pool(strategy, state, ctx, *ctx.cache.featraw_sq, batch, seed,
                          /*incremental=*/false);
    }

    case StrategyKind::Lscale: {
      if (!ctx.model || !ctx.features)
        throw std::logic_error("lscale: requires the current model and features");
      if (!ctx.cache.h_norm) ctx.cache.h_norm = l2_normalize_rows(*ctx.features);
      if (!ctx.cache.hnorm_sq)
        ctx.cache.hnorm_sq = pairwise_sq_distances(*ctx.cache.h_norm, ctx.pool_ids);

      const double alpha =
          alpha_schedule(strategy.lambda, static_cast<int>(state.labelled.size()));
      const FeatureMatrix z_norm = l2_normalize_rows(*ctx.features * ctx.model->w);
      const Eigen::MatrixXd znorm_sq = pairwise_sq_distances(z_norm, ctx.pool_ids);

      const double a2 = alpha * alpha;
      const double b2 = (1.0 - alpha) * (1.0 - alpha);
      const Eigen::MatrixXd combined_sq = a2 * (*ctx.cache.hnorm_sq) + b2 * znorm_sq;

      return cluster_pool(strategy, state, ctx, combined_sq, batch, seed, strategy.incremental);
    }
  }
  throw std::logic_error("select: unreachable");
}

}  // namespace lscale
