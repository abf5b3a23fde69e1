#pragma once

#include <string>

#include "lscale/graph.hpp"
#include "lscale/matrix.hpp"

namespace lscale {

// k sweeps of the symmetric normalized propagation operator with self-loops:
// S = D^{-1/2} (A + I) D^{-1/2}, D the degree matrix of A + I. Returns S^k X.
// Never materializes S; each sweep walks adjacency lists in a fixed order so
// the result is reproducible bit for bit.
FeatureMatrix propagate_features(const Graph& g, const FeatureMatrix& x, int hops);

// Reads a matrix file produced by an external embedding model and checks the
// row count against the graph.
FeatureMatrix load_embeddings(const std::string& path, int expected_rows);

// Source of the unsupervised feature matrix used for selection and as the
// classifier input: either an embedding file or built-in propagation.
struct FeatureProvider {
  enum class Kind { Propagated, ExternalFile };

  Kind kind = Kind::Propagated;
  int hops = 2;
  std::string path;

  static FeatureProvider propagated(int hops);
  static FeatureProvider external(std::string path);
  // "propagated" or "file:PATH"
  static FeatureProvider parse(const std::string& spec);

  std::string describe() const;
  FeatureMatrix realize(const Graph& g, const FeatureMatrix& attributes) const;
};

}  // namespace lscale
