#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "am/model.hpp"

namespace am {

// Enumeration family for the counterexample search over integer single-unit
// valuations with v(empty) = 0 and values in [0, value_cap].
//
// Lex: every table on {0,1}^num_goods, in lexicographic order of the value
// vector (bundles by ascending mask, last coordinate fastest). Only feasible
// for num_goods <= 4.
//
// Symmetric: num_goods must be 6. Goods are identified with the six edges of
// the complete graph on four nodes, and only tables invariant under node
// permutations are enumerated, one value per edge-subset orbit. This family
// is small enough to sweep and contains matroid-rank-style tables.
enum class SearchFamily { Lex, Symmetric };

struct SearchConfig {
  int num_goods = 4;  // 2..6
  int value_cap = 3;
  long table_budget = 1000000;  // tables examined before giving up
  SearchFamily family = SearchFamily::Lex;
};

struct SearchWitness {
  ValuationTable table;  // passes the exact substitutes check
  PriceVector price;     // where exchangeability fails
  Bundle q;
  Bundle r;
  std::string detail;
};

struct SearchOutcome {
  bool found = false;
  bool budget_exhausted = false;
  long tables_examined = 0;
  long substitutes_tables = 0;
  std::optional<SearchWitness> witness;
  std::string summary;
};

// Sweeps the configured family for a table that satisfies the exact
// substitutes check yet fails strong exchangeability at some probed price.
// Prices probed per table: uniform vectors on a half-integer range, uniform
// vectors at levels tying two bundle values, and for num_goods <= 4 the full
// half-integer grid. Any witness is re-verified with the public checkers
// before being reported. Deterministic.
SearchOutcome search_counterexample(const SearchConfig& config);

}  // namespace am
