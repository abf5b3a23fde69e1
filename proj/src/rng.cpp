#include "lscale/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lscale {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t tag_a, std::uint64_t tag_b) {
  return splitmix64(splitmix64(splitmix64(base) ^ tag_a) ^ tag_b);
}

std::uint64_t Rng::bounded(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::bounded: n must be positive");
  // rejection sampling on the top range to avoid modulo bias
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n + 1) % n;
  std::uint64_t x;
  do {
    x = next();
  } while (x > limit);
  return x % n;
}

double Rng::unit() {
  // 53 random bits -> [0, 1)
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1;
  do {
    u1 = unit();
  } while (u1 <= 0.0);
  const double u2 = unit();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

std::vector<int> sample_without_replacement(std::span<const int> pool, int k, Rng& rng) {
  if (k < 0 || static_cast<size_t>(k) > pool.size())
    throw std::invalid_argument("sample_without_replacement: k out of range");
  std::vector<int> items(pool.begin(), pool.end());
  std::vector<int> out;
  out.reserve(k);
  // partial Fisher-Yates
  for (int i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::ptrdiff_t>(rng.bounded(items.size() - i));
    std::swap(items[i], items[j]);
    out.push_back(items[i]);
  }
  return out;
}

}  // namespace lscale
