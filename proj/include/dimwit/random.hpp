#pragma once

#include <cstdint>
#include <random>

namespace dimwit {

using Seed = std::uint64_t;

/// SplitMix64 finalizer; used to derive independent streams from (seed, counter).
std::uint64_t splitmix64(std::uint64_t x);

/// Per-sample seed for sample `counter` of a run with `master` seed. Serial and
/// parallel drivers obtain identical streams.
Seed derive_seed(Seed master, std::uint64_t counter);

/// mt19937_64 with distribution transforms defined here rather than by the
/// standard library, so streams are identical across toolchains.
class Rng {
 public:
  explicit Rng(Seed seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  /// Standard normal (Box-Muller).
  double normal();
  /// Exp(1), the building block of Dirichlet(1, ..., 1).
  double exponential();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace dimwit
