#include <doctest.h>

#include <algorithm>
#include <set>

#include "lscale/kmedoids.hpp"
#include "lscale/rng.hpp"
#include "support/oracles.hpp"

using namespace lscale;
using testsupport::brute_force_best_objective;
using testsupport::medoid_objective;

namespace {

Eigen::MatrixXd line_distances(const std::vector<double>& xs) {
  const int m = static_cast<int>(xs.size());
  Eigen::MatrixXd d(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) d(a, b) = std::abs(xs[a] - xs[b]);
  return d;
}

std::vector<int> ids_from(int first, int count) {
  std::vector<int> ids(count);
  for (int i = 0; i < count; ++i) ids[i] = first + i;
  return ids;
}

int index_of(const std::vector<int>& points, int node) {
  return static_cast<int>(std::find(points.begin(), points.end(), node) - points.begin());
}

// no single medoid <-> non-medoid replacement may lower the objective
void check_swap_stable(const Eigen::MatrixXd& dist, const std::vector<int>& points,
                       const ClusteringResult& res, const std::set<int>& fixed = {}) {
  std::vector<int> medoid_idx;
  for (const int m : res.medoids) medoid_idx.push_back(index_of(points, m));
  for (size_t s = 0; s < medoid_idx.size(); ++s) {
    if (fixed.count(res.medoids[s])) continue;
    for (int x = 0; x < static_cast<int>(points.size()); ++x) {
      if (std::find(medoid_idx.begin(), medoid_idx.end(), x) != medoid_idx.end()) continue;
      std::vector<int> swapped = medoid_idx;
      swapped[s] = x;
      CHECK(medoid_objective(dist, swapped) >= res.objective - 1e-9);
    }
  }
}

}  // namespace

TEST_CASE("kmedoids: two tight pairs split cleanly") {
  const std::vector<double> xs{0.0, 0.1, 5.0, 5.1};
  const Eigen::MatrixXd d = line_distances(xs);
  const std::vector<int> points = ids_from(10, 4);

  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const ClusteringResult res = kmedoids(d, points, 2, seed);
    CHECK(res.objective == doctest::Approx(0.2).epsilon(1e-12));
    const bool low = res.medoids[0] == 10 || res.medoids[0] == 11;
    const bool high = res.medoids[1] == 12 || res.medoids[1] == 13;
    CHECK(low);
    CHECK(high);
  }
}

TEST_CASE("kmedoids: k equal to the point count gives objective zero") {
  const Eigen::MatrixXd d = line_distances({0.0, 1.0, 2.0, 3.0});
  const std::vector<int> points = ids_from(0, 4);
  const ClusteringResult res = kmedoids(d, points, 4, 7);
  CHECK(res.objective == 0.0);
  CHECK(res.medoids == points);
}

TEST_CASE("kmedoids: median of a 1-D triple") {
  const Eigen::MatrixXd d = line_distances({0.0, 1.0, 2.0});
  const std::vector<int> points = ids_from(0, 3);
  const ClusteringResult res = kmedoids(d, points, 1, 3);
  CHECK(res.medoids == std::vector<int>{1});
  CHECK(res.objective == doctest::Approx(2.0));
  CHECK(brute_force_best_objective(d, 1) == doctest::Approx(2.0));
}

TEST_CASE("kmedoids: k out of range is rejected") {
  const Eigen::MatrixXd d = line_distances({0.0, 1.0});
  const std::vector<int> points = ids_from(0, 2);
  CHECK_THROWS_AS(kmedoids(d, points, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(kmedoids(d, points, 3, 1), std::invalid_argument);
}

TEST_CASE("kmedoids: result invariants on random instances") {
  Rng rng(404);
  for (int trial = 0; trial < 25; ++trial) {
    const int m = 4 + static_cast<int>(rng.bounded(8));
    const int k = 1 + static_cast<int>(rng.bounded(std::min(m, 4)));
    std::vector<double> xs(m);
    for (auto& x : xs) x = 10.0 * rng.unit();
    const Eigen::MatrixXd d = line_distances(xs);
    const std::vector<int> points = ids_from(50, m);

    const ClusteringResult res = kmedoids(d, points, k, trial);

    // medoids distinct and sorted
    CHECK(std::is_sorted(res.medoids.begin(), res.medoids.end()));
    CHECK(std::adjacent_find(res.medoids.begin(), res.medoids.end()) == res.medoids.end());

    // every point is assigned to its nearest medoid, ties to the lowest id
    double recomputed = 0.0;
    for (int i = 0; i < m; ++i) {
      const int assigned_idx = index_of(points, res.assignment[i]);
      const double di = d(i, assigned_idx);
      recomputed += di;
      for (const int other : res.medoids) {
        const double dj = d(i, index_of(points, other));
        CHECK(di <= dj + 1e-15);
        if (dj == di) CHECK(res.assignment[i] <= other);
      }
    }
    CHECK(res.objective == doctest::Approx(recomputed).epsilon(1e-9));
    CHECK(res.iterations <= 100);

    check_swap_stable(d, points, res);

    // determinism
    const ClusteringResult again = kmedoids(d, points, k, trial);
    CHECK(again.medoids == res.medoids);
    CHECK(again.objective == res.objective);
  }
}

TEST_CASE("kmedoids: restarts reach the enumerated global optimum on most instances") {
  Rng rng(777);
  int hits = 0;
  const int trials = 20;
  for (int trial = 0; trial < trials; ++trial) {
    const int m = 6 + static_cast<int>(rng.bounded(5));
    const int k = 2 + static_cast<int>(rng.bounded(2));
    std::vector<double> xs(m);
    for (auto& x : xs) x = 10.0 * rng.unit();
    const Eigen::MatrixXd d = line_distances(xs);
    const std::vector<int> points = ids_from(0, m);

    const double best = brute_force_best_objective(d, k);
    const ClusteringResult res = kmedoids(d, points, k, 1000 + trial, 10);
    CHECK(res.objective >= best - 1e-12);
    if (res.objective <= best + 1e-9) ++hits;
  }
  CHECK(hits >= trials * 9 / 10);
}

TEST_CASE("incremental: toy selection avoids the redundant neighbor") {
  const std::vector<double> xs{0.0, 0.1, 5.0, 5.1};
  const Eigen::MatrixXd d = line_distances(xs);
  const std::vector<int> labelled{20};          // point at 0.0
  const std::vector<int> unlabelled{21, 22, 23};  // 0.1, 5.0, 5.1

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const IncrementalSelection sel = incremental_kmedoids(d, labelled, unlabelled, 1, seed);
    REQUIRE(sel.selected.size() == 1);
    const int chosen = sel.selected[0];
    CHECK((chosen == 22 || chosen == 23));  // never the point at 0.1
    CHECK(sel.labelled == std::vector<int>{20, chosen});
    CHECK(sel.unlabelled.size() == 2);
  }
}

TEST_CASE("incremental: zero budget selects nothing") {
  const Eigen::MatrixXd d = line_distances({0.0, 1.0, 2.0});
  const IncrementalSelection sel = incremental_kmedoids(d, {{5}}, {{6, 7}}, 0, 3);
  CHECK(sel.selected.empty());
  CHECK(sel.labelled == std::vector<int>{5});
  CHECK(sel.unlabelled == std::vector<int>{6, 7});
}

TEST_CASE("incremental: empty labelled set behaves exactly like plain clustering") {
  Rng rng(31);
  std::vector<double> xs(9);
  for (auto& x : xs) x = rng.unit() * 4.0;
  const Eigen::MatrixXd d = line_distances(xs);
  const std::vector<int> points = ids_from(0, 9);

  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const ClusteringResult plain = kmedoids(d, points, 3, seed);
    const IncrementalSelection inc = incremental_kmedoids(d, {}, points, 3, seed);
    CHECK(inc.selected == plain.medoids);
    CHECK(inc.clustering.objective == plain.objective);
  }
}

TEST_CASE("incremental: fixed medoids survive every iteration") {
  Rng rng(57);
  for (int trial = 0; trial < 10; ++trial) {
    const int m = 8 + static_cast<int>(rng.bounded(6));
    std::vector<double> xs(m);
    for (auto& x : xs) x = 10.0 * rng.unit();
    const Eigen::MatrixXd d = line_distances(xs);

    const int nl = 2;
    const int budget = 2;
    std::vector<int> labelled, unlabelled;
    for (int i = 0; i < m; ++i) (i < nl ? labelled : unlabelled).push_back(100 + i);

    int observed = 0;
    const MedoidObserver observer = [&](std::span<const int> medoids) {
      ++observed;
      for (const int l : labelled)
        CHECK(std::find(medoids.begin(), medoids.end(), l) != medoids.end());
    };
    const IncrementalSelection sel =
        incremental_kmedoids(d, labelled, unlabelled, budget, trial, 1, observer);
    CHECK(observed > 0);

    // bookkeeping
    CHECK(sel.selected.size() == budget);
    for (const int s : sel.selected) {
      CHECK(std::find(labelled.begin(), labelled.end(), s) == labelled.end());
      CHECK(std::binary_search(unlabelled.begin(), unlabelled.end(), s));
    }
    // unlabelled_new plus selected re-forms unlabelled
    std::vector<int> reunion = sel.unlabelled;
    reunion.insert(reunion.end(), sel.selected.begin(), sel.selected.end());
    std::sort(reunion.begin(), reunion.end());
    CHECK(reunion == unlabelled);

    // fixed medoids are also immune to the swap phase
    std::vector<int> all_points = labelled;
    all_points.insert(all_points.end(), unlabelled.begin(), unlabelled.end());
    check_swap_stable(d, all_points, sel.clustering, {labelled.begin(), labelled.end()});
  }
}

TEST_CASE("incremental: budget larger than the pool is rejected") {
  const Eigen::MatrixXd d = line_distances({0.0, 1.0, 2.0});
  CHECK_THROWS_AS(incremental_kmedoids(d, {{0}}, {{1, 2}}, 3, 1), std::invalid_argument);
}
