#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "surecvlab/common.hpp"

namespace surecv {

/// SplitMix64 finalizer step.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed-derivation rule used by every study: replication `rep` at sample
/// size `n` under `masterSeed` draws from
///   splitmix64(splitmix64(splitmix64(masterSeed) ^ n) ^ rep).
/// Studies are therefore reproducible piecemeal: any (n, rep) cell can be
/// regenerated without running the rest of the study. The limit experiment
/// uses n = 0.
inline std::uint64_t derive_seed(std::uint64_t masterSeed, std::uint64_t n, std::uint64_t rep) {
  return splitmix64(splitmix64(splitmix64(masterSeed) ^ n) ^ rep);
}

/// Deterministic generator: mt19937_64 stream with an in-house Marsaglia
/// polar normal sampler, so the draw sequence is fully specified by this
/// file (std::normal_distribution is implementation-defined).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    have_spare_ = true;
    return u * m;
  }

  Vec normal_vec(int k) {
    Vec z(k);
    for (int i = 0; i < k; ++i) z[i] = normal();
    return z;
  }

  /// Uniform integer in [0, m).
  std::uint64_t below(std::uint64_t m) { return engine_() % m; }

private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace surecv
