#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "am/engine.hpp"
#include "am/model.hpp"

namespace am {

// Multi-unit table expanded to single-unit items: unit c of good i becomes
// item (i, c). Masks index subsets of items; a mask is in the domain iff its
// per-good unit counts form a bundle of the source table.
struct BinaryValuation {
  int num_items = 0;
  std::vector<std::pair<int, int>> item_label;  // item -> (good, copy), 1-based
  std::vector<std::optional<Rat>> value;        // by mask, size 1 << num_items

  bool in_domain(std::uint32_t mask) const { return value[mask].has_value(); }
};

// Requires a table with nonnegative quantities (throws domain_error) and at
// most `max_items` total units (throws size_error).
BinaryValuation binary_expansion(const ValuationTable& table,
                                 int max_items = 16);

// Per-item price levels whose product forms the grid a checker sweeps.
struct PriceGrid {
  std::vector<std::vector<Rat>> levels;  // per item, ascending

  long num_points() const;
};

// Half-integer levels, identical for every item, spanning all item marginal
// values of `bv` (and the raw values) with half a unit to spare on each side.
PriceGrid default_grid(const BinaryValuation& bv);

struct SubstitutesWitness {
  std::vector<Rat> price;       // p
  std::vector<Rat> raised;      // p' >= p
  std::vector<int> bundle;      // 0/1 per item, demanded at p
  std::string detail;
};

struct PropertyReport {
  bool holds = true;
  std::string detail;
};

// Demand-monotonicity check for a single-unit valuation over a price grid:
// whenever one item's price is raised to a higher grid level, every bundle
// demanded before must have a demanded successor that keeps all other items
// it contained. Raising one coordinate at a time is equivalent to checking
// all ordered grid pairs, because a general raise is a chain of such steps
// and the retained items carry through the chain.
std::optional<SubstitutesWitness> check_binary_substitutes(
    const BinaryValuation& bv, const PriceGrid& grid);

struct ExactGsWitness {
  std::uint32_t set_x = 0;
  std::uint32_t set_y = 0;
  int item = 0;  // item index in X \ Y, 0-based
  std::string detail;
};

// Price-free equivalent of the substitutes condition for single-unit
// valuations on a full hypercube domain: for all X, Y and i in X \ Y,
//   v(X) + v(Y) <= max over j in (Y \ X) + {nothing} of
//                  v(X - i + j) + v(Y + i - j).
// Throws domain_error unless the domain is exactly {0,1}^n.
std::optional<ExactGsWitness> check_gross_substitutes_exact(
    const BinaryValuation& bv);

// Substitutes property for a multi-unit table: binary expansion plus grid
// check. Uses default_grid(bv) when `levels` is empty, otherwise the given
// scalar levels for every item.
PropertyReport check_strong_substitutes(const ValuationTable& table,
                                        const std::vector<Rat>& levels = {});

// Wraps a valuation table with demand queries.
class DemandOracle {
 public:
  explicit DemandOracle(ValuationTable table);

  const ValuationTable& table() const { return table_; }
  DemandResult demand(const PriceVector& p) const;
  bool demanded(const PriceVector& p, const Bundle& q) const;

 private:
  ValuationTable table_;
};

// Demanded bundles of minimum size (sum of quantities).
std::vector<Bundle> min_size_demand(const DemandResult& result);

// Ordered pairs (i, j), i in supp+(q - r), j in supp+(r - q), such that both
// q - e_i + e_j and r + e_i - e_j are demanded at p. Requires q and r
// demanded (throws precondition_error).
std::vector<std::pair<int, int>> valid_swap_pairs(const DemandOracle& oracle,
                                                  const PriceVector& p,
                                                  const Bundle& q,
                                                  const Bundle& r);

// Multiset of swap pairs: each (i, j) with multiplicity.
struct ExchangeCorrespondence {
  std::vector<std::pair<int, int>> pairs;  // sorted

  int degree_left(int good) const;   // occurrences of i == good
  int degree_right(int good) const;  // occurrences of j == good
};

// Selects from `candidates` a correspondence covering every i in supp+(q - r)
// between 1 and (q - r)_i times and every j in supp+(r - q) between 1 and
// (r - q)_j times, or nullopt if none exists. Deterministic.
std::optional<ExchangeCorrespondence> find_correspondence(
    const std::vector<std::pair<int, int>>& candidates, const Bundle& q,
    const Bundle& r);

// Checks the two defining properties of a correspondence for (q, r) at p:
// every pair is a valid swap, and the degree windows above hold.
PropertyReport verify_correspondence(const DemandOracle& oracle,
                                     const PriceVector& p, const Bundle& q,
                                     const Bundle& r,
                                     const ExchangeCorrespondence& sigma);

struct ExchangeabilityWitness {
  PriceVector price;
  Bundle q;
  Bundle r;
  std::string detail;
};

// Multi-unit exchangeability at price p: every ordered pair of distinct
// minimum-size demanded bundles admits a correspondence.
std::optional<ExchangeabilityWitness> check_strong_exchangeability(
    const DemandOracle& oracle, const PriceVector& p);

// Single-unit variant: every ordered pair of distinct minimum-size demanded
// bundles admits a bijection between q \ r and r \ q whose every swap is
// valid. Requires 0/1 bundles throughout the table (throws domain_error).
std::optional<ExchangeabilityWitness> check_exchangeability_bijection(
    const DemandOracle& oracle, const PriceVector& p);

// Correspondence extracted from the network: take optimal circulations for q
// and for r at p, decompose their difference into conformal cycles, and pair
// the goods whose root arcs a cycle crosses. The cycles and circulations are
// kept for inspection.
struct SigmaConstruction {
  ExchangeCorrespondence sigma;
  Circulation flow_q;
  Circulation flow_r;
  std::vector<CycleFlow> cycles;
};

// Requires q and r to be minimum-size demanded bundles at p (throws
// precondition_error).
SigmaConstruction construct_sigma_from_flows(const Engine& engine,
                                             const PriceVector& p,
                                             const Bundle& q, const Bundle& r);

}  // namespace am
