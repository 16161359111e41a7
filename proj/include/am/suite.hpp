#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "am/generator.hpp"

namespace am {

struct SuiteParams {
  int cases = 1000;
  int prices_per_case = 10;
  int max_goods = 3;
  int max_vars = 6;
  int price_lo = -6;  // half-integer prices drawn from [price_lo, price_hi]
  int price_hi = 6;
  // Self-test hook: corrupt the demand set of this case (0-based) by adding
  // an infeasible bundle, which the checks must reject.
  std::optional<int> corrupt_case;
};

struct SuiteFailure {
  int case_index = 0;
  std::uint64_t case_seed = 0;
  std::string price;
  std::string detail;
  std::string message_json;  // replay input
};

struct SuiteReport {
  int cases_run = 0;
  long price_points = 0;
  long pairs_checked = 0;
  std::vector<SuiteFailure> failures;

  bool ok() const { return failures.empty(); }
  std::string summary() const;
};

// Randomized exchangeability run: for each generated message and price,
// checks that every ordered pair of distinct minimum-size demanded bundles
// admits a correspondence, that the one built from flow differences passes
// verify_correspondence, and that its cycles have zero cost, touch at most
// one pair of good root arcs, and keep both circulations optimal when
// applied. Failures carry a replayable witness.
SuiteReport run_theorem1_suite(std::uint64_t seed, const SuiteParams& params);

}  // namespace am
