#include "lscale/kmedoids.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include "lscale/log.hpp"
#include "lscale/rng.hpp"

namespace lscale {

namespace {

constexpr int kMaxSweeps = 100;        // alternating-loop cap; hitting it is logged
constexpr double kSwapEps = 1e-12;     // minimum confirmed decrease to accept a swap

// Local-search state over point indices 0..m-1. Medoid slots [0, fixed) are
// pinned and never updated or swapped.
struct Engine {
  const Eigen::MatrixXd& dist;
  std::span<const int> points;  // node ids, for tie-breaking and reporting
  int m;
  int k;
  int fixed;

  std::vector<int> medoid;   // slot -> point index
  std::vector<int> assign;   // point index -> slot
  std::vector<char> is_medoid;
  int sweeps = 0;
  const MedoidObserver* observer = nullptr;

  Engine(const Eigen::MatrixXd& d, std::span<const int> pts, int k_, int fixed_)
      : dist(d), points(pts), m(static_cast<int>(pts.size())), k(k_), fixed(fixed_) {
    assign.assign(m, -1);
    is_medoid.assign(m, 0);
  }

  void set_medoids(std::vector<int> init) {
    medoid = std::move(init);
    std::fill(is_medoid.begin(), is_medoid.end(), 0);
    for (const int p : medoid) is_medoid[p] = 1;
  }

  void notify() const {
    if (!observer || !*observer) return;
    std::vector<int> ids(k);
    for (int s = 0; s < k; ++s) ids[s] = points[medoid[s]];
    (*observer)(ids);
  }

  // nearest medoid per point; distance ties go to the lower medoid node id
  void assign_pass() {
    for (int i = 0; i < m; ++i) {
      int best = 0;
      double best_d = dist(i, medoid[0]);
      for (int s = 1; s < k; ++s) {
        const double d = dist(i, medoid[s]);
        if (d < best_d || (d == best_d && points[medoid[s]] < points[medoid[best]])) {
          best = s;
          best_d = d;
        }
      }
      assign[i] = best;
    }
    ++sweeps;
    notify();
  }

  // each non-fixed cluster: move the medoid to the member minimizing the
  // within-cluster distance sum, on strict improvement only
  bool update_pass() {
    std::vector<std::vector<int>> members(k);
    for (int i = 0; i < m; ++i) members[assign[i]].push_back(i);

    bool changed = false;
    for (int s = fixed; s < k; ++s) {
      const auto& cl = members[s];
      if (cl.empty()) continue;  // medoid captured by a zero-distance twin; keep it
      const int cur = medoid[s];
      double cur_cost = 0.0;
      for (const int y : cl) cur_cost += dist(cur, y);

      int best = -1;
      double best_cost = std::numeric_limits<double>::infinity();
      for (const int x : cl) {
        double cost = 0.0;
        for (const int y : cl) cost += dist(x, y);
        if (cost < best_cost || (cost == best_cost && best >= 0 && points[x] < points[best])) {
          best = x;
          best_cost = cost;
        }
      }
      if (best >= 0 && best != cur && best_cost < cur_cost) {
        is_medoid[cur] = 0;
        is_medoid[best] = 1;
        medoid[s] = best;
        changed = true;
      }
    }
    return changed;
  }

  double objective() const {
    double total = 0.0;
    for (int i = 0; i < m; ++i) total += dist(i, medoid[assign[i]]);
    return total;
  }

  void local_search() {
    for (int it = 0; it < kMaxSweeps; ++it) {
      assign_pass();
      if (!update_pass()) return;
    }
    log_note("kmedoids: sweep cap (" + std::to_string(kMaxSweeps) + ") reached");
    assign_pass();  // leave assignment consistent with the final medoids
  }

  // One pass of best-improvement swap search. For each non-medoid candidate
  // x the objective deltas against every removable slot are accumulated in
  // O(m) using nearest/second-nearest medoid distances. A candidate swap is
  // only accepted after a full recompute confirms a strict decrease.
  bool swap_pass(double& current_objective) {
    if (fixed >= k || m <= k) return false;

    std::vector<double> d1(m), d2(m);
    std::vector<int> near(m);
    for (int i = 0; i < m; ++i) {
      double b1 = std::numeric_limits<double>::infinity();
      double b2 = b1;
      int slot = -1;
      for (int s = 0; s < k; ++s) {
        const double d = dist(i, medoid[s]);
        if (d < b1 || (d == b1 && (slot < 0 || points[medoid[s]] < points[medoid[slot]]))) {
          b2 = b1;
          b1 = d;
          slot = s;
        } else if (d < b2) {
          b2 = d;
        }
      }
      d1[i] = b1;
      d2[i] = b2;
      near[i] = slot;
    }

    double best_delta = -kSwapEps;
    int best_slot = -1, best_x = -1;
    std::vector<double> corr(k);
    for (int x = 0; x < m; ++x) {
      if (is_medoid[x]) continue;
      std::fill(corr.begin(), corr.end(), 0.0);
      double common = 0.0;
      for (int i = 0; i < m; ++i) {
        const double dx = dist(i, x);
        const double keep = std::min(dx, d1[i]) - d1[i];
        common += keep;
        corr[near[i]] += std::min(dx, d2[i]) - d1[i] - keep;
      }
      for (int s = fixed; s < k; ++s) {
        const double delta = common + corr[s];
        if (delta < best_delta) {
          best_delta = delta;
          best_slot = s;
          best_x = x;
        }
      }
    }
    if (best_slot < 0) return false;

    const std::vector<int> saved_medoid = medoid;
    const std::vector<int> saved_assign = assign;
    const std::vector<char> saved_flags = is_medoid;

    is_medoid[medoid[best_slot]] = 0;
    is_medoid[best_x] = 1;
    medoid[best_slot] = best_x;
    local_search();
    const double new_objective = objective();
    if (new_objective < current_objective - kSwapEps) {
      current_objective = new_objective;
      return true;
    }
    medoid = saved_medoid;
    assign = saved_assign;
    is_medoid = saved_flags;
    return false;
  }

  double run() {
    local_search();
    double obj = objective();
    while (swap_pass(obj)) {
    }
    return obj;
  }
};

ClusteringResult result_from(const Engine& eng, double obj) {
  ClusteringResult res;
  res.medoids.reserve(eng.k);
  for (const int p : eng.medoid) res.medoids.push_back(eng.points[p]);
  std::sort(res.medoids.begin(), res.medoids.end());
  res.assignment.resize(eng.m);
  for (int i = 0; i < eng.m; ++i) res.assignment[i] = eng.points[eng.medoid[eng.assign[i]]];
  res.objective = obj;
  res.iterations = eng.sweeps;
  return res;
}

void check_dist(const Eigen::MatrixXd& dist, size_t m) {
  if (dist.rows() != dist.cols() || static_cast<size_t>(dist.rows()) != m)
    throw std::invalid_argument("kmedoids: distance matrix shape does not match points");
}

}  // namespace

ClusteringResult kmedoids(const Eigen::MatrixXd& dist, std::span<const int> points, int k,
                          std::uint64_t seed, int restarts, const MedoidObserver& observer) {
  const int m = static_cast<int>(points.size());
  check_dist(dist, points.size());
  if (k < 1 || k > m) throw std::invalid_argument("kmedoids: k out of range [1, " +
                                                  std::to_string(m) + "]");
  if (restarts < 1) throw std::invalid_argument("kmedoids: restarts must be >= 1");

  std::vector<int> local(m);
  for (int i = 0; i < m; ++i) local[i] = i;

  ClusteringResult best;
  double best_obj = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    Rng rng(r == 0 ? seed : mix_seed(seed, 0x7265737461727473ULL, r));
    Engine eng(dist, points, k, 0);
    eng.observer = &observer;
    eng.set_medoids(sample_without_replacement(local, k, rng));
    const double obj = eng.run();
    if (obj < best_obj) {
      best_obj = obj;
      best = result_from(eng, obj);
    }
  }
  return best;
}

IncrementalSelection incremental_kmedoids(const Eigen::MatrixXd& dist,
                                          std::span<const int> labelled_prev,
                                          std::span<const int> unlabelled, int budget,
                                          std::uint64_t seed, int restarts,
                                          const MedoidObserver& observer) {
  const int nl = static_cast<int>(labelled_prev.size());
  const int nu = static_cast<int>(unlabelled.size());
  check_dist(dist, labelled_prev.size() + unlabelled.size());
  if (budget < 0 || budget > nu)
    throw std::invalid_argument("incremental_kmedoids: budget " + std::to_string(budget) +
                                " exceeds unlabelled pool of " + std::to_string(nu));
  if (restarts < 1) throw std::invalid_argument("incremental_kmedoids: restarts must be >= 1");

  IncrementalSelection sel;
  sel.labelled.assign(labelled_prev.begin(), labelled_prev.end());
  sel.unlabelled.assign(unlabelled.begin(), unlabelled.end());
  if (budget == 0) return sel;

  std::vector<int> points(nl + nu);
  std::copy(labelled_prev.begin(), labelled_prev.end(), points.begin());
  std::copy(unlabelled.begin(), unlabelled.end(), points.begin() + nl);

  const int k = nl + budget;
  std::vector<int> unlabelled_idx(nu);
  for (int i = 0; i < nu; ++i) unlabelled_idx[i] = nl + i;

  double best_obj = std::numeric_limits<double>::infinity();
  std::vector<int> best_slots;
  bool have_best = false;
  for (int r = 0; r < restarts; ++r) {
    Rng rng(r == 0 ? seed : mix_seed(seed, 0x7265737461727473ULL, r));
    Engine eng(dist, points, k, nl);
    eng.observer = &observer;
    std::vector<int> init(nl);
    for (int s = 0; s < nl; ++s) init[s] = s;
    const auto extra = sample_without_replacement(unlabelled_idx, budget, rng);
    init.insert(init.end(), extra.begin(), extra.end());
    eng.set_medoids(std::move(init));
    const double obj = eng.run();
    if (!have_best || obj < best_obj) {
      best_obj = obj;
      best_slots = eng.medoid;
      sel.clustering = result_from(eng, obj);
      have_best = true;
    }
  }

  for (int s = nl; s < k; ++s) sel.selected.push_back(points[best_slots[s]]);
  std::sort(sel.selected.begin(), sel.selected.end());

  sel.labelled.insert(sel.labelled.end(), sel.selected.begin(), sel.selected.end());
  std::vector<int> remaining;
  remaining.reserve(nu - budget);
  std::set_difference(sel.unlabelled.begin(), sel.unlabelled.end(), sel.selected.begin(),
                      sel.selected.end(), std::back_inserter(remaining));
  sel.unlabelled = std::move(remaining);
  return sel;
}

}  // namespace lscale
