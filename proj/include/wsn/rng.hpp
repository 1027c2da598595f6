#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <string_view>

namespace wsn {

// Seeded generator with portable derived distributions.
//
// The raw engine is std::mt19937_64, whose output sequence is fixed by the
// standard. The std:: distributions are not, so uniform/normal draws are
// computed here to keep runs bit-identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent substream for `label` and an optional key tuple, e.g.
  // Rng::stream(seed, "noise", {node, t}).
  static Rng stream(std::uint64_t master_seed, std::string_view label,
                    std::initializer_list<std::uint64_t> keys = {});

  std::uint64_t next_u64() { return engine_(); }
  // Uniform in [0, 1) with 53 random bits.
  double uniform01();
  double uniform(double lo, double hi);
  // Standard normal via Box-Muller (cosine branch only).
  double normal();
  // Uniform integer in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n);
  bool bernoulli(double p);
  void fill(std::span<std::uint8_t> out);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace wsn
