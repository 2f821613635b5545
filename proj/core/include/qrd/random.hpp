#pragma once

#include <cstdint>
#include <random>

#include "qrd/qmath.hpp"

namespace qrd {

/// Independent child seed for task `index` of a stream rooted at `master`.
/// Results must not depend on scheduling order, so every trial/restart/grid
/// point derives its own seed this way instead of sharing a generator.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Deterministic generator: mt19937_64 plus hand-rolled uniform and Box-Muller
/// transforms, so sequences depend only on the seed and not on standard
/// library distribution internals.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in [0, 1).
  double uniform01();
  /// Standard normal.
  double gaussian();
  /// Re and Im each standard normal.
  Complex complex_gaussian();
  /// Uniform integer in [0, n).
  int below(int n);

private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace qrd
