#pragma once

#include <optional>
#include <string>
#include <vector>

#include "am/rational.hpp"

namespace am {

// Directed arc with integral flow bounds and an exact rational cost.
struct Arc {
  int id = 0;  // equals the index in FlowNetwork::arcs
  int tail = 0;
  int head = 0;
  int lower = 0;
  int upper = 0;
  Rat cost = 0;
};

struct FlowNetwork {
  std::vector<std::string> vertex_labels;
  std::vector<Arc> arcs;

  int add_vertex(std::string label);
  int add_arc(int tail, int head, int lower, int upper, Rat cost = 0);

  int num_vertices() const { return static_cast<int>(vertex_labels.size()); }
  int num_arcs() const { return static_cast<int>(arcs.size()); }
};

// Flow value per arc id.
using Circulation = std::vector<int>;

// One traversal step of a cycle: arc used forward (+1) or backward (-1).
struct CycleStep {
  int arc = 0;
  int dir = +1;

  bool operator==(const CycleStep& o) const = default;
};

// Vertex-simple cycle carrying one unit. flow_on() gives the signed unit on
// an arc (an arc appears at most once in a simple cycle).
struct CycleFlow {
  std::vector<CycleStep> steps;

  int flow_on(int arc) const;
  bool operator==(const CycleFlow& o) const = default;
};

// Certificate of infeasibility: a vertex set whose entering lower bounds
// exceed its leaving upper bounds.
struct InfeasibilityCut {
  std::vector<int> vertices;
};

struct FeasibilityResult {
  std::optional<Circulation> flow;
  std::optional<InfeasibilityCut> cut;

  bool feasible() const { return flow.has_value(); }
};

struct MinCostResult {
  std::optional<Circulation> flow;
  std::optional<InfeasibilityCut> cut;
  Rat objective = 0;

  bool feasible() const { return flow.has_value(); }
};

// true iff flow conservation holds at every vertex. Throws input_error if the
// assignment does not cover the arcs exactly.
bool check_balanced(const FlowNetwork& net, const Circulation& flow);

// Writes a balanced flow as a sum of vertex-simple cycle flows that conform
// to its signs: every cycle pushes each arc it uses in the direction of the
// flow's sign there, so no cancellation happens between cycles. Deterministic.
// Throws precondition_error if the flow is not balanced.
std::vector<CycleFlow> decompose_conformal(const FlowNetwork& net,
                                           const Circulation& flow);

// Integral circulation within bounds, or a violated cut if none exists.
FeasibilityResult feasible_circulation(const FlowNetwork& net);

// Integral minimum-cost circulation by negative-cycle cancelling, or a
// violated cut. Exact rational objective.
MinCostResult min_cost_circulation(const FlowNetwork& net);

// A negative-cost residual cycle whose unit augmentation keeps `flow`
// feasible, or nullopt if `flow` is already optimal. `flow` must be feasible.
std::optional<CycleFlow> improving_cycle(const FlowNetwork& net,
                                         const Circulation& flow);

Rat circulation_cost(const FlowNetwork& net, const Circulation& flow);
Rat cycle_cost(const FlowNetwork& net, const CycleFlow& cycle);

// Independent check that `cut` certifies infeasibility: the sum of lower
// bounds on arcs entering the set is greater than the sum of upper bounds on
// arcs leaving it.
bool cut_violates_bounds(const FlowNetwork& net, const InfeasibilityCut& cut);

// flow + cycle, arcwise.
Circulation apply_cycle(const Circulation& flow, const CycleFlow& cycle,
                        int times = 1);

}  // namespace am
