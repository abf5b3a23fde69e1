#pragma once

#include <Eigen/Dense>
#include <string>

namespace lscale {

// Dense row-per-node feature matrix. All on-disk matrices use the text
// format: header line "rows cols", then one whitespace-separated row per
// line. Values are printed with enough digits to round-trip exactly.
using FeatureMatrix = Eigen::MatrixXd;

FeatureMatrix load_matrix(const std::string& path);
void save_matrix(const std::string& path, const FeatureMatrix& m);

}  // namespace lscale
