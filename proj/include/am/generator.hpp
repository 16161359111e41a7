#pragma once

#include <cstdint>
#include <random>

#include "am/model.hpp"

namespace am {

// Deterministic generator state. Draws use the raw 64-bit stream of
// mt19937_64 (fully specified by the standard) with rejection sampling, so
// sequences are identical across standard libraries and platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform in [lo, hi], inclusive.
  int uniform(int lo, int hi);
  // Uniform multiple of 1/2 in [lo, hi].
  Rat uniform_half(int lo, int hi);

 private:
  std::mt19937_64 engine_;
};

struct RandomMessageParams {
  int num_goods = 2;
  int num_vars = 4;   // >= num_goods; every good gets at least one variable
  int value_lo = -5;  // integer per-unit values
  int value_hi = 5;
  int lower_min = -2;  // set lower bounds drawn from [lower_min, 0]
  int upper_max = 3;   // set upper bounds drawn from [0, upper_max]
};

// Random message with laminar trees built by recursive partition. Output
// always passes validate_message; same seed and params give the same message.
// Throws input_error for unusable params (fewer than 2 goods, or fewer
// variables than goods).
AssignmentMessage random_message(std::uint64_t seed,
                                 const RandomMessageParams& params = {});

// Uniform half-integer price vector with entries in [lo, hi].
PriceVector random_price(Rng& rng, int num_goods, int lo, int hi);

}  // namespace am
