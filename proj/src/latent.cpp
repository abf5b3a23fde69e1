#include "lscale/latent.hpp"

#include <cmath>
#include <stdexcept>

#include "lscale/log.hpp"

namespace lscale {

FeatureMatrix l2_normalize_rows(const FeatureMatrix& m) {
  FeatureMatrix out = m;
  int zero_rows = 0;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double norm = out.row(i).norm();
    if (norm > 0.0)
      out.row(i) /= norm;
    else
      ++zero_rows;
  }
  if (zero_rows > 0)
    log_note("l2_normalize_rows: " + std::to_string(zero_rows) +
             " zero row(s) left unchanged");
  return out;
}

double alpha_schedule(double lambda, int labelled_count) {
  if (!(lambda > 0.0) || lambda > 1.0)
    throw std::invalid_argument("alpha_schedule: lambda must be in (0, 1]");
  if (labelled_count < 0)
    throw std::invalid_argument("alpha_schedule: labelled count must be >= 0");
  return std::pow(lambda, static_cast<double>(labelled_count));
}

LatentSpace build_latent_space(const FeatureMatrix& h, const FeatureMatrix& z, double alpha) {
  if (h.rows() != z.rows())
    throw std::invalid_argument("build_latent_space: row mismatch (" + std::to_string(h.rows()) +
                                " vs " + std::to_string(z.rows()) + ")");
  if (alpha < 0.0 || alpha > 1.0)
    throw std::invalid_argument("build_latent_space: alpha must be in [0, 1]");

  LatentSpace space;
  space.alpha = alpha;
  space.h_norm = l2_normalize_rows(h);
  space.z_norm = l2_normalize_rows(z);
  space.combined.resize(h.rows(), h.cols() + z.cols());
  space.combined.leftCols(h.cols()) = alpha * space.h_norm;
  space.combined.rightCols(z.cols()) = (1.0 - alpha) * space.z_norm;
  return space;
}

double distance(const LatentSpace& space, int i, int j) {
  return (space.combined.row(i) - space.combined.row(j)).norm();
}

Eigen::MatrixXd pairwise_distances(const LatentSpace& space, std::span<const int> ids) {
  if (ids.empty()) throw std::invalid_argument("pairwise_distances: empty id list");
  const int p = static_cast<int>(ids.size());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(p, p);
  const double a2 = space.alpha * space.alpha;
  const double b2 = (1.0 - space.alpha) * (1.0 - space.alpha);
  for (int a = 0; a < p; ++a) {
    for (int b = a + 1; b < p; ++b) {
      const double dh = (space.h_norm.row(ids[a]) - space.h_norm.row(ids[b])).squaredNorm();
      const double dz = (space.z_norm.row(ids[a]) - space.z_norm.row(ids[b])).squaredNorm();
      const double v = std::sqrt(a2 * dh + b2 * dz);
      d(a, b) = v;
      d(b, a) = v;
    }
  }
  return d;
}

Eigen::MatrixXd pairwise_sq_distances(const FeatureMatrix& m, std::span<const int> ids) {
  const int p = static_cast<int>(ids.size());
  FeatureMatrix rows(p, m.cols());
  for (int a = 0; a < p; ++a) rows.row(a) = m.row(ids[a]);

  const Eigen::VectorXd sq = rows.rowwise().squaredNorm();
  Eigen::MatrixXd d = sq.replicate(1, p) + sq.transpose().replicate(p, 1) -
                      2.0 * (rows * rows.transpose());
  d = d.cwiseMax(0.0);  // Gram identity can go slightly negative
  d.diagonal().setZero();
  return d;
}

}  // namespace lscale
