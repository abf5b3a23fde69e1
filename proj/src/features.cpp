#include "lscale/features.hpp"

#include <cmath>
#include <stdexcept>

namespace lscale {

FeatureMatrix propagate_features(const Graph& g, const FeatureMatrix& x, int hops) {
  if (static_cast<int>(x.rows()) != g.n)
    throw std::invalid_argument("propagate_features: feature rows (" + std::to_string(x.rows()) +
                                ") do not match node count (" + std::to_string(g.n) + ")");
  if (hops < 0) throw std::invalid_argument("propagate_features: hops must be >= 0");

  std::vector<double> inv_sqrt_deg(g.n);
  for (int u = 0; u < g.n; ++u) inv_sqrt_deg[u] = 1.0 / std::sqrt(g.degree[u] + 1.0);

  FeatureMatrix cur = x;
  for (int h = 0; h < hops; ++h) {
    FeatureMatrix next(g.n, x.cols());
    for (int u = 0; u < g.n; ++u) {
      // self-loop term first, then neighbors in sorted order: fixed summation order
      Eigen::RowVectorXd acc = cur.row(u) * (inv_sqrt_deg[u] * inv_sqrt_deg[u]);
      for (const int v : g.adjacency[u]) acc += cur.row(v) * (inv_sqrt_deg[u] * inv_sqrt_deg[v]);
      next.row(u) = acc;
    }
    cur = std::move(next);
  }
  return cur;
}

FeatureMatrix load_embeddings(const std::string& path, int expected_rows) {
  FeatureMatrix m = load_matrix(path);
  if (static_cast<int>(m.rows()) != expected_rows)
    throw std::runtime_error(path + ": embedding rows (" + std::to_string(m.rows()) +
                             ") do not match node count (" + std::to_string(expected_rows) + ")");
  return m;
}

FeatureProvider FeatureProvider::propagated(int hops) {
  FeatureProvider p;
  p.kind = Kind::Propagated;
  p.hops = hops;
  return p;
}

FeatureProvider FeatureProvider::external(std::string path) {
  FeatureProvider p;
  p.kind = Kind::ExternalFile;
  p.path = std::move(path);
  return p;
}

FeatureProvider FeatureProvider::parse(const std::string& spec) {
  if (spec == "propagated") return propagated(2);
  if (spec.rfind("file:", 0) == 0) {
    const std::string path = spec.substr(5);
    if (path.empty()) throw std::invalid_argument("feature provider: empty path in '" + spec + "'");
    return external(path);
  }
  throw std::invalid_argument("feature provider must be 'propagated' or 'file:PATH', got '" +
                              spec + "'");
}

std::string FeatureProvider::describe() const {
  return kind == Kind::Propagated ? "propagated(k=" + std::to_string(hops) + ")" : "file:" + path;
}

FeatureMatrix FeatureProvider::realize(const Graph& g, const FeatureMatrix& attributes) const {
  if (kind == Kind::Propagated) return propagate_features(g, attributes, hops);
  return load_embeddings(path, g.n);
}

}  // namespace lscale
