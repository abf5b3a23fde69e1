#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace lscale {

// splitmix64-based seed derivation. Independent streams are obtained by
// mixing a base seed with purpose tags instead of sharing one engine, which
// keeps every stream reproducible in isolation.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t tag_a, std::uint64_t tag_b = 0);

// Deterministic RNG. Bounded and Gaussian draws are implemented here rather
// than with std distributions so results do not depend on the standard
// library implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }
  std::uint64_t bounded(std::uint64_t n);  // uniform in [0, n)
  double unit();                           // uniform in [0, 1)
  double gaussian();                       // standard normal (Box-Muller)

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// k distinct elements of pool, in draw order.
std::vector<int> sample_without_replacement(std::span<const int> pool, int k, Rng& rng);

}  // namespace lscale
