#include "bayesdl/core/rng.hpp"

#include <cmath>
#include <numeric>

#include "bayesdl/core/errors.hpp"

namespace bayesdl {

namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t mix_seed(std::uint64_t parent, std::uint64_t stream) {
  std::uint64_t state = parent ^ (0xd1b54a32d192ed03ULL * (stream + 1));
  splitmix64(state);
  return splitmix64(state);
}

Rng::Rng(std::uint64_t seed) : seed_(seed) {
  std::uint64_t state = seed;
  for (auto& word : s_) word = splitmix64(state);
}

std::uint64_t Rng::next() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::std_normal() {
  if (spare_) {
    const double z = *spare_;
    spare_.reset();
    return z;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform01() - 1.0;
    v = 2.0 * uniform01() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * factor;
  return u * factor;
}

bool Rng::bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("bernoulli probability must lie in [0, 1]");
  return uniform01() < p;
}

std::uint64_t Rng::uniform_index(std::uint64_t n) {
  if (n == 0) throw DomainError("uniform_index requires n > 0");
  // Rejection on the top of the range keeps every residue equally likely.
  const std::uint64_t limit = max() - max() % n;
  std::uint64_t x;
  do {
    x = next();
  } while (x >= limit);
  return x % n;
}

Vector prng_stream(Rng& rng, StreamKind kind, Index n, double p) {
  if (n < 0) throw DomainError("prng_stream: negative count");
  if (kind == StreamKind::bernoulli && !(p >= 0.0 && p <= 1.0))
    throw DomainError("prng_stream: bernoulli probability must lie in [0, 1]");
  Vector out(n);
  for (Index i = 0; i < n; ++i) {
    switch (kind) {
      case StreamKind::uniform01: out[i] = rng.uniform01(); break;
      case StreamKind::std_normal: out[i] = rng.std_normal(); break;
      case StreamKind::bernoulli: out[i] = rng.bernoulli(p) ? 1.0 : 0.0; break;
    }
  }
  return out;
}

std::vector<Index> random_permutation(Index n, Rng& rng) {
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  for (Index i = n - 1; i > 0; --i) {
    const auto j = static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(i + 1)));
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }
  return perm;
}

}  // namespace bayesdl
