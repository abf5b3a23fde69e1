#pragma once

// Independent oracles used to pin expected values: central finite
// differences for classifier gradients, exhaustive enumeration for medoid
// subsets, and long-double exponentiation for the mixing schedule. These
// deliberately avoid the library's own computation paths.

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "lscale/classifier.hpp"

namespace testsupport {

// d objective / d params via central differences, perturbing one entry at a
// time. The objective sees the whole model.
inline lscale::Gradients finite_diff_gradients(
    const std::function<double(const lscale::ClassifierModel&)>& objective,
    const lscale::ClassifierModel& model, double h = 1e-5) {
  lscale::Gradients g;
  g.w.resizeLike(model.w);
  g.centers.resizeLike(model.centers);

  lscale::ClassifierModel probe = model;
  const auto central = [&](double& entry) {
    const double saved = entry;
    entry = saved + h;
    const double up = objective(probe);
    entry = saved - h;
    const double down = objective(probe);
    entry = saved;
    return (up - down) / (2.0 * h);
  };
  for (Eigen::Index r = 0; r < probe.w.rows(); ++r)
    for (Eigen::Index c = 0; c < probe.w.cols(); ++c) g.w(r, c) = central(probe.w(r, c));
  for (Eigen::Index r = 0; r < probe.centers.rows(); ++r)
    for (Eigen::Index c = 0; c < probe.centers.cols(); ++c)
      g.centers(r, c) = central(probe.centers(r, c));
  return g;
}

inline double grad_relative_error(const lscale::Gradients& a, const lscale::Gradients& b) {
  const double num = std::sqrt((a.w - b.w).squaredNorm() + (a.centers - b.centers).squaredNorm());
  const double den = std::sqrt(b.w.squaredNorm() + b.centers.squaredNorm());
  return num / std::max(den, 1e-12);
}

// Objective of a fixed medoid set (indices into dist): sum over points of
// the distance to the nearest medoid.
inline double medoid_objective(const Eigen::MatrixXd& dist, const std::vector<int>& medoids) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < dist.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (const int m : medoids) best = std::min(best, dist(i, m));
    total += best;
  }
  return total;
}

// Global optimum by enumerating every k-subset of points. Only viable for
// tiny instances; that is the point.
inline double brute_force_best_objective(const Eigen::MatrixXd& dist, int k) {
  const int m = static_cast<int>(dist.rows());
  std::vector<int> subset(k);
  double best = std::numeric_limits<double>::infinity();
  const std::function<void(int, int)> recurse = [&](int start, int depth) {
    if (depth == k) {
      best = std::min(best, medoid_objective(dist, subset));
      return;
    }
    for (int i = start; i <= m - (k - depth); ++i) {
      subset[depth] = i;
      recurse(i + 1, depth + 1);
    }
  };
  recurse(0, 0);
  return best;
}

// lambda^count accumulated in extended precision.
inline double pow_oracle(double base, int count) {
  long double acc = 1.0L;
  for (int i = 0; i < count; ++i) acc *= static_cast<long double>(base);
  return static_cast<double>(acc);
}

}  // namespace testsupport
