#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace lscale {

struct ClusteringResult {
  std::vector<int> medoids;     // node ids, ascending
  std::vector<int> assignment;  // per point (parallel to the input points), medoid node id
  double objective = 0.0;       // sum of distances from points to their medoid
  int iterations = 0;           // alternating sweeps of the winning restart
};

// Test/trace hook: called with the current medoid node ids after every
// assignment sweep.
using MedoidObserver = std::function<void(std::span<const int> medoids)>;

// K-Medoids local search over a precomputed distance matrix. `dist` is
// m x m, symmetric with zero diagonal, aligned with `points` (node ids).
// Initial medoids are k distinct points sampled by seed; the alternating
// assignment/update loop runs to a fixed point and is followed by a swap
// phase, so the result is stable under single medoid<->non-medoid swaps.
// Assignment and update ties break toward the lowest node id. With
// restarts > 1 the best objective over independently seeded runs wins.
ClusteringResult kmedoids(const Eigen::MatrixXd& dist, std::span<const int> points, int k,
                          std::uint64_t seed, int restarts = 1,
                          const MedoidObserver& observer = nullptr);

struct IncrementalSelection {
  std::vector<int> selected;       // new medoids, ascending
  std::vector<int> labelled;       // labelled_prev followed by selected
  std::vector<int> unlabelled;     // unlabelled minus selected, sorted
  ClusteringResult clustering;
};

// Fixed-medoid variant used for batch selection: clusters
// labelled_prev ∪ unlabelled with k = |labelled_prev| + budget, seeds the
// extra medoids uniformly from the unlabelled points, and never updates or
// swaps a medoid that is in labelled_prev. `dist` is aligned with
// labelled_prev followed by unlabelled; `unlabelled` must be sorted.
IncrementalSelection incremental_kmedoids(const Eigen::MatrixXd& dist,
                                          std::span<const int> labelled_prev,
                                          std::span<const int> unlabelled, int budget,
                                          std::uint64_t seed, int restarts = 1,
                                          const MedoidObserver& observer = nullptr);

}  // namespace lscale
