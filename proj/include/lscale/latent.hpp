#pragma once

#include <span>

#include "lscale/matrix.hpp"

namespace lscale {

// Rescales every nonzero row to unit Euclidean norm. Zero rows pass through
// unchanged (logged), so the map is total.
FeatureMatrix l2_normalize_rows(const FeatureMatrix& m);

// Mixing weight lambda^labelled_count, shifting selection distances from the
// unsupervised space toward the supervised one as labels accumulate.
// Requires 0 < lambda <= 1.
double alpha_schedule(double lambda, int labelled_count);

// The selection space: per-node rows concat(alpha * h_norm, (1-alpha) * z_norm).
struct LatentSpace {
  FeatureMatrix h_norm;    // row-normalized unsupervised features
  FeatureMatrix z_norm;    // row-normalized classifier representations
  double alpha = 1.0;
  FeatureMatrix combined;  // n x (d' + l')
};

LatentSpace build_latent_space(const FeatureMatrix& h, const FeatureMatrix& z, double alpha);

// Euclidean distance between combined rows i and j.
double distance(const LatentSpace& space, int i, int j);

// Symmetric zero-diagonal matrix of distances over the given node ids,
// entry (a,b) = distance(ids[a], ids[b]).
Eigen::MatrixXd pairwise_distances(const LatentSpace& space, std::span<const int> ids);

// Squared Euclidean distances between the selected rows of m, computed with
// the Gram-product identity (clamped at zero). Fast path for large pools;
// cross-checked against pairwise_distances in tests.
Eigen::MatrixXd pairwise_sq_distances(const FeatureMatrix& m, std::span<const int> ids);

}  // namespace lscale
