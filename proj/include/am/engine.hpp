#pragma once

#include <optional>
#include <string>
#include <vector>

#include "am/flows.hpp"
#include "am/model.hpp"

namespace am {

// A message compiled to its circulation network. Every inequality set becomes
// one arc (sets shared between trees share the arc); every non-singleton set
// contributes the vertex where its balance equation lives, plus one extra
// vertex tying the roots together. Costs are left at zero; solvers install
// them per query on the terminal arcs.
struct CompiledMessage {
  FlowNetwork network;
  std::vector<std::vector<int>> arc_members;  // arc id -> variable ids of its set
  std::vector<int> root_arc_of_good;          // index good-1 -> arc id of R_i
  std::vector<int> terminal_arc_of_var;       // index id-1 -> arc id of {j}
  int grand_root_arc = -1;                    // arc id of the full variable set
};

// Compiles a message. Requires validate_message(msg).ok() and
// is_normalized(msg); throws precondition_error otherwise.
CompiledMessage build_network(const AssignmentMessage& msg);

struct DemandResult {
  Rat indirect_utility = 0;
  std::vector<Bundle> demand;  // ascending lexicographic
};

class Engine {
 public:
  // Throws input_error with the validation report if the message is invalid.
  explicit Engine(AssignmentMessage msg);

  const AssignmentMessage& message() const { return msg_; }
  const CompiledMessage& compiled() const { return compiled_; }
  int num_goods() const { return msg_.num_goods; }

  // Best total value among assignments producing exactly q, or nullopt when q
  // is not producible.
  std::optional<Rat> value(const Bundle& q) const;

  // max_q value(q) - p*q. Always finite: the zero bundle is producible.
  Rat indirect_utility(const PriceVector& p) const;

  // All producible bundles, ascending lexicographic.
  std::vector<Bundle> feasible_bundles() const;

  DemandResult demand_set(const PriceVector& p) const;

  // Materializes value() over feasible_bundles().
  ValuationTable to_valuation_table() const;

  // An optimal circulation for the utility objective at p, with the good
  // quantities clamped to q when given. nullopt when the clamp is infeasible.
  std::optional<Circulation> optimal_circulation(
      const PriceVector& p, const std::optional<Bundle>& clamp = {}) const;

  // Good quantities read off the root arcs of a circulation.
  Bundle bundle_of(const Circulation& flow) const;

 private:
  FlowNetwork costed_network(const PriceVector* p,
                             const Bundle* clamp) const;

  AssignmentMessage msg_;
  CompiledMessage compiled_;
};

// Reference evaluation of value() that enumerates assignments directly over
// the variable box, independent of the network reformulation. Intended for
// cross-checks; throws size_error if the box exceeds `max_points`.
std::optional<Rat> value_oracle(const AssignmentMessage& msg, const Bundle& q,
                                long max_points = 4000000);

}  // namespace am
