#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace plsv {

// mt19937_64 with platform-independent integer and real mappings (the standard
// distributions are implementation-defined, so they are not used).
//
// Streams: Rng::stream(seed, tag) seeds the engine with splitmix64(seed ^ tag * C),
// one tag per entity class, so adding draws to one class never shifts another.
class Rng {
public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  static Rng stream(std::uint64_t seed, std::uint64_t tag);
  static std::uint64_t splitmix64(std::uint64_t x);

  std::uint64_t next() { return engine_(); }
  // Uniform integer in [lo, hi], rejection sampled.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  // Uniform real in [0, 1) with 53 random bits.
  double uniform01();
  bool bernoulli(double p) { return uniform01() < p; }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(uniform_int(0, static_cast<std::int64_t>(i) - 1));
      std::swap(v[i - 1], v[j]);
    }
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace plsv
