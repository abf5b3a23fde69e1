#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lscale/features.hpp"
#include "lscale/kmedoids.hpp"
#include "lscale/strategies.hpp"
#include "support/synth.hpp"

using namespace lscale;

namespace {

// small pool world shared by the strategy tests
struct World {
  Dataset ds;
  FeatureMatrix features;  // provider output H
  ClassifierModel model;
  SelectionContext ctx;
  PoolState state;

  explicit World(std::uint64_t seed, int n = 24, int labelled_count = 4) {
    ds = testsupport::make_sbm({.blocks = 2, .per_block = n / 2, .attr_dim = 4}, seed);
    features = propagate_features(ds.graph, ds.features, 2);
    model = init_model(static_cast<int>(features.cols()), 3, ds.labels.num_classes, seed);

    ctx.graph = &ds.graph;
    ctx.attributes = &ds.features;
    ctx.features = &features;
    ctx.model = &model;
    ctx.pool_ids.resize(n);
    std::iota(ctx.pool_ids.begin(), ctx.pool_ids.end(), 0);

    for (int v = 0; v < n; ++v)
      (v < labelled_count ? state.labelled : state.unlabelled).push_back(v);
  }
};

Strategy make(StrategyKind kind) {
  Strategy s;
  s.kind = kind;
  return s;
}

}  // namespace

TEST_CASE("strategy names round-trip") {
  for (const auto kind : {StrategyKind::Lscale, StrategyKind::Random, StrategyKind::Uncertainty,
                          StrategyKind::Featprop, StrategyKind::FeatpropU})
    CHECK(parse_strategy(strategy_name(kind)) == kind);
  CHECK_THROWS_AS(parse_strategy("age"), std::invalid_argument);
}

TEST_CASE("entropy: known values and the uniform maximum") {
  Eigen::RowVectorXd uniform(2);
  uniform << 0.5, 0.5;
  CHECK(entropy(uniform) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(entropy(uniform) == doctest::Approx(0.69314718).epsilon(1e-7));

  Eigen::RowVectorXd onehot(3);
  onehot << 0.0, 1.0, 0.0;
  CHECK(entropy(onehot) == 0.0);

  Rng rng(4);
  Eigen::RowVectorXd u5 = Eigen::RowVectorXd::Constant(5, 0.2);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::RowVectorXd p(5);
    double total = 0.0;
    for (int i = 0; i < 5; ++i) total += p(i) = rng.unit() + 1e-6;
    p /= total;
    CHECK(entropy(p) <= entropy(u5) + 1e-12);
  }
}

TEST_CASE("every strategy returns a valid batch from the pool") {
  World w(11);
  const int batch = 5;
  for (const auto kind : {StrategyKind::Lscale, StrategyKind::Random, StrategyKind::Uncertainty,
                          StrategyKind::Featprop, StrategyKind::FeatpropU}) {
    CAPTURE(strategy_name(kind));
    const SelectionResult res = select(make(kind), w.state, w.ctx, batch, 99);
    CHECK(res.selected.size() == batch);
    CHECK(std::is_sorted(res.selected.begin(), res.selected.end()));
    for (const int v : res.selected)
      CHECK(std::binary_search(w.state.unlabelled.begin(), w.state.unlabelled.end(), v));

    // same seed, same state: identical selection
    const SelectionResult again = select(make(kind), w.state, w.ctx, batch, 99);
    CHECK(again.selected == res.selected);
  }
}

TEST_CASE("selecting the whole pool exhausts it") {
  World w(13);
  const int batch = static_cast<int>(w.state.unlabelled.size());
  for (const auto kind : {StrategyKind::Random, StrategyKind::Uncertainty, StrategyKind::Lscale}) {
    const SelectionResult res = select(make(kind), w.state, w.ctx, batch, 1);
    CHECK(res.selected == w.state.unlabelled);
  }
}

TEST_CASE("batch larger than the pool is rejected") {
  World w(17);
  CHECK_THROWS_AS(
      select(make(StrategyKind::Random), w.state, w.ctx,
             static_cast<int>(w.state.unlabelled.size()) + 1, 1),
      std::invalid_argument);
}

TEST_CASE("random: different seeds usually differ") {
  World w(19);
  const SelectionResult a = select(make(StrategyKind::Random), w.state, w.ctx, 5, 1);
  const SelectionResult b = select(make(StrategyKind::Random), w.state, w.ctx, 5, 2);
  CHECK(a.selected != b.selected);
  CHECK(std::isnan(a.mean_dist_to_labelled));
}

TEST_CASE("uncertainty: all-tied entropies fall back to the lowest node ids") {
  World w(23);
  // identical feature rows make every prediction row identical
  FeatureMatrix flat = FeatureMatrix::Ones(w.ds.graph.n, w.features.cols());
  w.ctx.features = &flat;
  const SelectionResult res = select(make(StrategyKind::Uncertainty), w.state, w.ctx, 3, 5);
  const std::vector<int> expected(w.state.unlabelled.begin(), w.state.unlabelled.begin() + 3);
  CHECK(res.selected == expected);
}

TEST_CASE("lscale: two tight pairs on the unit circle, batch of one") {
  // normalized feature rows at angles {0, eps, 1, 1+eps}: two tight pairs
  Dataset ds;
  ds.graph = Graph::from_edges(4, {});
  ds.labels = {{0, 0, 1, 1}, 2};
  FeatureMatrix h(4, 2);
  const double angles[4] = {0.0, 0.02, 1.0, 1.02};
  for (int i = 0; i < 4; ++i) {
    h(i, 0) = 2.0 * std::cos(angles[i]);  // scale is irrelevant after normalization
    h(i, 1) = 2.0 * std::sin(angles[i]);
  }

  SelectionContext ctx;
  ctx.graph = &ds.graph;
  ctx.attributes = &h;
  ctx.features = &h;
  const ClassifierModel model = init_model(2, 2, 2, 3);
  ctx.model = &model;
  ctx.pool_ids = {0, 1, 2, 3};

  PoolState state;
  state.labelled = {0};
  state.unlabelled = {1, 2, 3};

  Strategy lscale = make(StrategyKind::Lscale);
  lscale.lambda = 1.0;  // distances come from the unsupervised block alone
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const SelectionResult res = select(lscale, state, ctx, 1, seed);
    REQUIRE(res.selected.size() == 1);
    CHECK((res.selected[0] == 2 || res.selected[0] == 3));  // never the twin of node 0
    CHECK(res.mean_dist_to_labelled > 0.5);
  }
}

TEST_CASE("lscale with lambda=1 equals incremental clustering on normalized H") {
  World w(29);
  Strategy lscale = make(StrategyKind::Lscale);
  lscale.lambda = 1.0;
  const SelectionResult via_strategy = select(lscale, w.state, w.ctx, 4, 321);

  const FeatureMatrix hn = l2_normalize_rows(w.features);
  std::vector<int> order = w.state.labelled;
  order.insert(order.end(), w.state.unlabelled.begin(), w.state.unlabelled.end());
  const int p = static_cast<int>(order.size());
  const Eigen::MatrixXd sq = pairwise_sq_distances(hn, order);
  const Eigen::MatrixXd dist = sq.cwiseSqrt();
  const IncrementalSelection direct =
      incremental_kmedoids(dist, w.state.labelled, w.state.unlabelled, 4, 321);

  CHECK(via_strategy.selected == direct.selected);
  CHECK(p == static_cast<int>(w.state.labelled.size() + w.state.unlabelled.size()));
}

TEST_CASE("lscale: plain-clustering variant also yields a valid batch") {
  World w(31);
  Strategy plain = make(StrategyKind::Lscale);
  plain.incremental = false;
  const SelectionResult res = select(plain, w.state, w.ctx, 4, 50);
  CHECK(res.selected.size() == 4);
  for (const int v : res.selected)
    CHECK(std::binary_search(w.state.unlabelled.begin(), w.state.unlabelled.end(), v));
  CHECK(res.mean_dist_to_labelled > 0.0);
}

TEST_CASE("pool state: applying a selection keeps the bookkeeping consistent") {
  World w(37);
  const size_t labelled_before = w.state.labelled.size();
  const size_t pool_total = w.state.labelled.size() + w.state.unlabelled.size();

  const SelectionResult res = select(make(StrategyKind::Random), w.state, w.ctx, 6, 8);
  w.state.apply_selection(res.selected);

  CHECK(w.state.labelled.size() == labelled_before + 6);
  CHECK(w.state.labelled.size() + w.state.unlabelled.size() == pool_total);
  CHECK(w.state.step == 1);
  CHECK(w.state.spent == 6);
  for (const int v : res.selected) {
    CHECK(std::find(w.state.labelled.begin(), w.state.labelled.end(), v) !=
          w.state.labelled.end());
    CHECK(!std::binary_search(w.state.unlabelled.begin(), w.state.unlabelled.end(), v));
  }

  // the same nodes cannot be selected twice
  CHECK_THROWS_AS(w.state.apply_selection(res.selected), std::logic_error);
}
