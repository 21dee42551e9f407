#pragma once

#include <cstdint>
#include <random>

namespace ncw {

// Seedable generator with a fixed, documented sampling algorithm so that masks,
// measurement matrices and noise are reproducible across standard libraries:
//   * engine: std::mt19937_64 (fully specified by the standard)
//   * uniform(): top 53 bits of one draw, scaled to [0, 1)
//   * normal(): Box-Muller on two uniform() draws, both outputs used in turn
//   * below(n): rejection sampling on the top bits, unbiased
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();
  double normal();
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ncw
