#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "bayesdl/core/types.hpp"

namespace bayesdl {

/// splitmix64 finalizer; used for seeding and for deriving child streams.
std::uint64_t splitmix64(std::uint64_t& state);

/// Child seed for stream `stream` of a generator seeded with `parent`.
std::uint64_t mix_seed(std::uint64_t parent, std::uint64_t stream);

/// xoshiro256** generator (Blackman & Vigna), seeded through splitmix64.
/// Period 2^256 - 1. Normal variates use the polar Box-Muller method and
/// the spare variate is cached, so the stream is fully determined by the seed.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed);

  result_type operator()() { return next(); }
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  std::uint64_t next();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform01();
  double std_normal();
  bool bernoulli(double p);
  /// Unbiased integer in [0, n).
  std::uint64_t uniform_index(std::uint64_t n);

  std::uint64_t seed() const { return seed_; }
  /// Independent child generator for parallel or nested work.
  Rng split(std::uint64_t stream) const { return Rng(mix_seed(seed_, stream)); }

 private:
  std::array<std::uint64_t, 4> s_{};
  std::uint64_t seed_;
  std::optional<double> spare_;
};

enum class StreamKind { uniform01, std_normal, bernoulli };

/// n draws of the requested kind; `p` is only read for bernoulli.
Vector prng_stream(Rng& rng, StreamKind kind, Index n, double p = 0.5);

/// Fisher-Yates permutation of 0..n-1.
std::vector<Index> random_permutation(Index n, Rng& rng);

}  // namespace bayesdl
