#include "lscale/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "lscale/rng.hpp"
#include "text_io.hpp"

namespace lscale {

namespace {

std::vector<std::pair<int, int>> load_edge_list(const std::string& path, int n) {
  auto in = detail::open_or_throw(path);
  std::vector<std::pair<int, int>> edges;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const auto toks = detail::split_ws(line);
    if (toks.empty()) continue;
    if (toks.size() != 2) detail::fail_at(path, line_no, "expected 'u v'");
    const long u = detail::parse_long(toks[0], path, line_no);
    const long v = detail::parse_long(toks[1], path, line_no);
    if (u < 0 || u >= n || v < 0 || v >= n)
      detail::fail_at(path, line_no, "node id out of range [0, " + std::to_string(n) + ")");
    edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
  }
  return edges;
}

}  // namespace

LabelSet load_labels(const std::string& path, int n) {
  auto in = detail::open_or_throw(path);
  LabelSet ls;
  ls.labels.reserve(n);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto toks = detail::split_ws(line);
    if (toks.empty()) continue;
    if (toks.size() != 1) detail::fail_at(path, line_no, "expected a single class index");
    const long y = detail::parse_long(toks[0], path, line_no);
    if (y < 0) detail::fail_at(path, line_no, "negative class index");
    if (static_cast<int>(ls.labels.size()) >= n)
      detail::fail_at(path, line_no, "more labels than nodes (n=" + std::to_string(n) + ")");
    ls.labels.push_back(static_cast<int>(y));
  }
  if (static_cast<int>(ls.labels.size()) != n)
    throw std::runtime_error(path + ": label count " + std::to_string(ls.labels.size()) +
                             " does not match node count " + std::to_string(n));

  const int max_class = ls.labels.empty() ? -1 : *std::max_element(ls.labels.begin(), ls.labels.end());
  ls.num_classes = max_class + 1;
  std::vector<char> seen(ls.num_classes, 0);
  for (const int y : ls.labels) seen[y] = 1;
  for (int c = 0; c < ls.num_classes; ++c)
    if (!seen[c])
      throw std::runtime_error(path + ": class indices must be dense (missing class " +
                               std::to_string(c) + " of 0.." + std::to_string(max_class) + ")");
  return ls;
}

void save_labels(const std::string& path, const LabelSet& labels) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open file for writing");
  for (const int y : labels.labels) out << y << '\n';
  if (!out) throw std::runtime_error(path + ": write failed");
}

Dataset load_dataset(const std::string& dir) {
  namespace fs = std::filesystem;
  Dataset ds;
  ds.features = load_matrix((fs::path(dir) / "features.txt").string());
  const int n = static_cast<int>(ds.features.rows());
  ds.labels = load_labels((fs::path(dir) / "labels.txt").string(), n);
  const auto raw = load_edge_list((fs::path(dir) / "graph.edges").string(), n);
  ds.graph = Graph::from_edges(n, raw);
  return ds;
}

void save_dataset(const std::string& dir, const Dataset& ds) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  save_matrix((fs::path(dir) / "features.txt").string(), ds.features);
  save_labels((fs::path(dir) / "labels.txt").string(), ds.labels);
  std::ofstream out(fs::path(dir) / "graph.edges");
  if (!out) throw std::runtime_error(dir + "/graph.edges: cannot open file for writing");
  for (const auto& [u, v] : ds.graph.edges) out << u << ' ' << v << '\n';
  if (!out) throw std::runtime_error(dir + "/graph.edges: write failed");
}

DataSplit make_split_count(const Graph& g, const LabelSet& labels, int test_count,
                           int validation_size, std::uint64_t seed) {
  (void)labels;  // splits are uniform; labels only participate via the caller's bookkeeping
  const int n = g.n;
  if (test_count < 0 || validation_size < 0)
    throw std::invalid_argument("make_split: negative sizes");
  if (test_count + validation_size >= n)
    throw std::invalid_argument("make_split: sizes infeasible for n=" + std::to_string(n) +
                                " (test " + std::to_string(test_count) + " + validation " +
                                std::to_string(validation_size) + " leaves an empty pool)");

  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  Rng rng(seed);
  for (int i = 0; i < n - 1; ++i) {
    const auto j = i + static_cast<int>(rng.bounded(n - i));
    std::swap(perm[i], perm[j]);
  }

  DataSplit split;
  split.test.assign(perm.begin(), perm.begin() + test_count);
  split.validation.assign(perm.begin() + test_count, perm.begin() + test_count + validation_size);
  split.pool.assign(perm.begin() + test_count + validation_size, perm.end());
  std::sort(split.test.begin(), split.test.end());
  std::sort(split.validation.begin(), split.validation.end());
  std::sort(split.pool.begin(), split.pool.end());
  return split;
}

DataSplit make_split(const Graph& g, const LabelSet& labels, double test_fraction,
                     int validation_size, std::uint64_t seed) {
  if (test_fraction < 0.0 || test_fraction >= 1.0)
    throw std::invalid_argument("make_split: test fraction out of [0, 1)");
  const int test_count = static_cast<int>(std::ceil(test_fraction * g.n - 1e-9));
  return make_split_count(g, labels, test_count, validation_size, seed);
}

}  // namespace lscale
