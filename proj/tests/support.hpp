#pragma once

// Seeded generators for property tests. Every trial draws from its own
// mt19937_64 stream so a failing trial can be replayed from its seed.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "robustlab/core.hpp"
#include "robustlab/estimators.hpp"

namespace robustlab::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed), seed_(seed) {}

  std::uint64_t seed() const { return seed_; }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  std::size_t index(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }
  /// Nonzero, magnitude in [0.1, 10], random sign.
  double nonzero() { return (index(0, 1) ? 1.0 : -1.0) * std::exp(uniform(std::log(0.1), std::log(10.0))); }

  Sample real(std::size_t n, double spread = 1.0) {
    std::vector<double> v(n);
    for (double& x : v) x = spread * normal();
    return Sample::scalar(std::move(v));
  }
  Sample nonneg(std::size_t n) {
    std::vector<double> v(n);
    for (double& x : v) x = std::abs(normal());
    return Sample::scalar(std::move(v), Domain::NonNegative);
  }
  Sample regression(std::size_t n) {
    std::vector<RegressionPair> p(n);
    for (auto& q : p) {
      q.x = normal();
      q.y = q.x + 0.5 * normal();
    }
    return Sample::regression(std::move(p));
  }
  ContaminationMask mask(std::size_t n, std::size_t s) { return ContaminationMask::random(n, s, rng_()); }

 private:
  std::mt19937_64 rng_;
  std::uint64_t seed_;
};

/// Runs `body(gen)` for `trials` independent seeds derived from `base`.
template <typename Body>
void for_all(std::uint64_t base, std::size_t trials, Body&& body) {
  for (std::size_t i = 0; i < trials; ++i) {
    Gen gen(base * 1'000'003ULL + i);
    body(gen);
  }
}

/// Catalog names with their parameter placeholders filled in.
inline std::vector<std::string> concrete_catalog() {
  std::vector<std::string> out;
  for (auto name : catalog_names()) {
    const auto colon = name.find(':');
    if (colon != std::string::npos) name = name.substr(0, colon) + (name.starts_with("trimmed") ? ":0.2" : ":1.5");
    out.push_back(name);
  }
  return out;
}

inline std::vector<Sample> panel_of(std::size_t count, std::uint64_t seed, std::size_t n) {
  Gen gen(seed);
  std::vector<Sample> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(gen.real(n));
  return out;
}

}  // namespace robustlab::testing
