#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lscale/graph.hpp"
#include "lscale/matrix.hpp"

namespace lscale {

// Per-node class indices. Classes must be dense 0..num_classes-1 and every
// class must occur at least once.
struct LabelSet {
  std::vector<int> labels;
  int num_classes = 0;
};

// Disjoint, exhaustive partition of the node set. `pool` is the set of
// nodes selectable for labelling.
struct DataSplit {
  std::vector<int> test;        // sorted
  std::vector<int> validation;  // sorted
  std::vector<int> pool;        // sorted
};

struct Dataset {
  Graph graph;
  FeatureMatrix features;
  LabelSet labels;
};

// Directory layout (UTF-8 text):
//   graph.edges   one "u v" edge per line, '#' starts a comment
//   features.txt  matrix format (header "n d")
//   labels.txt    one class index per line, n lines
// Node count comes from features.txt. Parse errors carry file and line.
Dataset load_dataset(const std::string& dir);
void save_dataset(const std::string& dir, const Dataset& ds);

LabelSet load_labels(const std::string& path, int n);
void save_labels(const std::string& path, const LabelSet& labels);

// Seeded uniform split into test / validation / pool.
// test_count = ceil(test_fraction * n) in the fraction form.
DataSplit make_split(const Graph& g, const LabelSet& labels, double test_fraction,
                     int validation_size, std::uint64_t seed);
DataSplit make_split_count(const Graph& g, const LabelSet& labels, int test_count,
                           int validation_size, std::uint64_t seed);

}  // namespace lscale
