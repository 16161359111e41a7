#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "am/errors.hpp"
#include "am/flows.hpp"
#include "am/generator.hpp"
#include "oracles.hpp"

using namespace am;

namespace {

FlowNetwork triangle(int lo = 0, int hi = 5) {
  FlowNetwork net;
  net.add_vertex("a"), net.add_vertex("b"), net.add_vertex("c");
  net.add_arc(0, 1, lo, hi);
  net.add_arc(1, 2, lo, hi);
  net.add_arc(2, 0, lo, hi);
  return net;
}

// Checks one cycle of a decomposition: vertex-simple closed walk whose steps
// follow the sign of `flow` on every arc they use.
void check_cycle_shape(const FlowNetwork& net, const Circulation& flow,
                       const CycleFlow& cycle) {
  REQUIRE(!cycle.steps.empty());
  std::vector<int> visited;
  for (std::size_t k = 0; k < cycle.steps.size(); ++k) {
    const CycleStep& s = cycle.steps[k];
    const Arc& a = net.arcs[s.arc];
    CHECK((s.dir == 1 || s.dir == -1));
    if (s.dir > 0)
      CHECK(flow[s.arc] > 0);
    else
      CHECK(flow[s.arc] < 0);
    int from = s.dir > 0 ? a.tail : a.head;
    int to = s.dir > 0 ? a.head : a.tail;
    const CycleStep& nxt = cycle.steps[(k + 1) % cycle.steps.size()];
    const Arc& na = net.arcs[nxt.arc];
    CHECK(to == (nxt.dir > 0 ? na.tail : na.head));
    visited.push_back(from);
  }
  std::sort(visited.begin(), visited.end());
  CHECK(std::adjacent_find(visited.begin(), visited.end()) == visited.end());
}

}  // namespace

TEST_CASE("balance checking") {
  FlowNetwork net = triangle();
  CHECK(check_balanced(net, {1, 1, 1}));
  CHECK(check_balanced(net, {0, 0, 0}));
  CHECK_FALSE(check_balanced(net, {1, 0, 1}));
  CHECK_THROWS_AS(check_balanced(net, {1, 1}), input_error);
}

TEST_CASE("costs and cycle application") {
  FlowNetwork net = triangle();
  net.arcs[0].cost = make_rat(1, 2);
  net.arcs[1].cost = -2;
  CHECK(circulation_cost(net, {2, 2, 2}) == make_rat(-3));
  CycleFlow cycle{{{0, +1}, {1, +1}, {2, +1}}};
  CHECK(cycle_cost(net, cycle) == make_rat(-3, 2));
  CHECK(cycle.flow_on(0) == 1);
  CHECK(cycle.flow_on(9) == 0);
  CHECK(apply_cycle({0, 0, 0}, cycle, 2) == Circulation{2, 2, 2});
  CHECK(apply_cycle({2, 2, 2}, CycleFlow{{{0, -1}, {2, -1}, {1, -1}}}) ==
        Circulation{1, 1, 1});
}

TEST_CASE("empty arc bounds are rejected") {
  FlowNetwork net;
  net.add_vertex("a"), net.add_vertex("b");
  CHECK_THROWS_AS(net.add_arc(0, 1, 2, 1), input_error);
}

TEST_CASE("decompose a plain triangle") {
  FlowNetwork net = triangle();
  std::vector<CycleFlow> cycles = decompose_conformal(net, {1, 1, 1});
  REQUIRE(cycles.size() == 1);
  CHECK(cycles[0].steps ==
        std::vector<CycleStep>{{0, +1}, {1, +1}, {2, +1}});

  cycles = decompose_conformal(net, {2, 2, 2});
  REQUIRE(cycles.size() == 2);
  CHECK(cycles[0] == cycles[1]);
}

TEST_CASE("decompose two triangles sharing an arc") {
  FlowNetwork net;
  for (int v = 0; v < 4; ++v) net.add_vertex("v" + std::to_string(v));
  net.add_arc(0, 1, -9, 9);  // shared
  net.add_arc(1, 2, -9, 9);
  net.add_arc(2, 0, -9, 9);
  net.add_arc(1, 3, -9, 9);
  net.add_arc(3, 0, -9, 9);
  std::vector<CycleFlow> cycles = decompose_conformal(net, {2, 1, 1, 1, 1});
  REQUIRE(cycles.size() == 2);
  CHECK(cycles[0].steps ==
        std::vector<CycleStep>{{0, +1}, {1, +1}, {2, +1}});
  CHECK(cycles[1].steps ==
        std::vector<CycleStep>{{0, +1}, {3, +1}, {4, +1}});
}

TEST_CASE("decompose a backward cycle") {
  FlowNetwork net;
  net.add_vertex("a"), net.add_vertex("b");
  net.add_arc(0, 1, -2, 2);
  net.add_arc(1, 0, -2, 2);
  std::vector<CycleFlow> cycles = decompose_conformal(net, {-1, -1});
  REQUIRE(cycles.size() == 1);
  CHECK(cycles[0].steps == std::vector<CycleStep>{{0, -1}, {1, -1}});
}

TEST_CASE("decompose tolerates self-loops") {
  FlowNetwork net;
  net.add_vertex("a");
  net.add_arc(0, 0, 0, 3);
  std::vector<CycleFlow> cycles = decompose_conformal(net, {2});
  REQUIRE(cycles.size() == 2);
  CHECK(cycles[0].steps == std::vector<CycleStep>{{0, +1}});
}

TEST_CASE("decompose rejects unbalanced flows") {
  FlowNetwork net = triangle();
  CHECK_THROWS_AS(decompose_conformal(net, {1, 0, 0}), precondition_error);
}

TEST_CASE("decomposition of random balanced flows") {
  Rng rng(2024);
  for (int t = 0; t < 400; ++t) {
    auto [net, flow] = oracle::random_cyclic_flow(rng);
    REQUIRE(check_balanced(net, flow));
    std::vector<CycleFlow> cycles = decompose_conformal(net, flow);

    Circulation sum(net.num_arcs(), 0);
    for (const CycleFlow& c : cycles) {
      check_cycle_shape(net, flow, c);
      for (const CycleStep& s : c.steps) sum[s.arc] += s.dir;
    }
    CHECK(sum == flow);
    CHECK(decompose_conformal(net, flow) == cycles);  // deterministic
  }
}

TEST_CASE("feasibility with forced lower bounds") {
  FlowNetwork net;
  net.add_vertex("a"), net.add_vertex("b");
  net.add_arc(0, 1, 1, 3);
  net.add_arc(1, 0, 2, 2);
  FeasibilityResult res = feasible_circulation(net);
  REQUIRE(res.feasible());
  CHECK(*res.flow == Circulation{2, 2});
}

TEST_CASE("infeasibility yields a violated cut") {
  FlowNetwork net;
  net.add_vertex("a"), net.add_vertex("b");
  net.add_arc(0, 1, 2, 3);
  net.add_arc(1, 0, 0, 1);
  FeasibilityResult res = feasible_circulation(net);
  REQUIRE_FALSE(res.feasible());
  REQUIRE(res.cut.has_value());
  CHECK(res.cut->vertices == std::vector<int>{1});
  CHECK(cut_violates_bounds(net, *res.cut));

  // A set without excess lower bounds certifies nothing.
  CHECK_FALSE(cut_violates_bounds(net, InfeasibilityCut{{0}}));
}

TEST_CASE("min cost on a profitable two-cycle") {
  FlowNetwork net;
  net.add_vertex("a"), net.add_vertex("b");
  net.add_arc(0, 1, 0, 2, -1);
  net.add_arc(1, 0, 0, 2, 0);
  MinCostResult res = min_cost_circulation(net);
  REQUIRE(res.feasible());
  CHECK(*res.flow == Circulation{2, 2});
  CHECK(res.objective == -2);
  CHECK(!improving_cycle(net, *res.flow).has_value());
}

TEST_CASE("improving cycle from a suboptimal flow") {
  FlowNetwork net;
  net.add_vertex("a"), net.add_vertex("b");
  net.add_arc(0, 1, 0, 2, -1);
  net.add_arc(1, 0, 0, 2, make_rat(1, 3));
  Circulation flow{0, 0};
  std::optional<CycleFlow> cycle = improving_cycle(net, flow);
  REQUIRE(cycle.has_value());
  CHECK(cycle_cost(net, *cycle) < 0);
  Circulation better = apply_cycle(flow, *cycle);
  CHECK(check_balanced(net, better));
  CHECK(circulation_cost(net, better) < circulation_cost(net, flow));
  CHECK(improving_cycle(net, flow) == cycle);  // deterministic
}

TEST_CASE("improving cycle validates its input") {
  FlowNetwork net = triangle();
  CHECK_THROWS_AS(improving_cycle(net, {9, 9, 9}), precondition_error);
  CHECK_THROWS_AS(improving_cycle(net, {1, 0, 0}), precondition_error);
}

TEST_CASE("min cost with negative bounds matches brute force") {
  FlowNetwork net = triangle(-2, 2);
  net.arcs[0].cost = make_rat(3, 2);
  net.arcs[1].cost = 1;
  net.arcs[2].cost = make_rat(-1, 2);
  MinCostResult res = min_cost_circulation(net);
  oracle::BruteResult brute = oracle::brute_min_cost(net);
  REQUIRE(res.feasible());
  REQUIRE(brute.feasible);
  CHECK(res.objective == brute.objective);
  CHECK(res.objective == -4);  // flow -2 on arc 0, -2 on the others
}

TEST_CASE("random networks agree with brute force") {
  Rng rng(77);
  int compared = 0, infeasible = 0;
  for (int t = 0; t < 250; ++t) {
    FlowNetwork net = oracle::random_network(rng);
    oracle::BruteResult brute;
    try {
      brute = oracle::brute_min_cost(net, 400000);
    } catch (const size_error&) {
      continue;
    }
    MinCostResult res = min_cost_circulation(net);
    CHECK(res.feasible() == brute.feasible);
    if (res.feasible()) {
      ++compared;
      CHECK(res.objective == brute.objective);
      CHECK(res.objective == circulation_cost(net, *res.flow));
      CHECK(check_balanced(net, *res.flow));
      for (const Arc& a : net.arcs) {
        CHECK((*res.flow)[a.id] >= a.lower);
        CHECK((*res.flow)[a.id] <= a.upper);
      }
      CHECK(!improving_cycle(net, *res.flow).has_value());
    } else {
      ++infeasible;
      REQUIRE(res.cut.has_value());
      CHECK(cut_violates_bounds(net, *res.cut));
    }
  }
  CHECK(compared >= 60);
  CHECK(infeasible >= 20);
}

TEST_CASE("huge denominators take the exact rational path") {
  // lcm of the two prime denominators overflows the scaled-integer budget, so
  // the solver must fall back to rational costs and still be exact.
  const long p = 2147483647, q = 2147483629;
  FlowNetwork net;
  net.add_vertex("a"), net.add_vertex("b");
  net.add_arc(0, 1, 0, 2, make_rat(-1, p));
  net.add_arc(1, 0, 0, 2, make_rat(-1, q));
  MinCostResult res = min_cost_circulation(net);
  REQUIRE(res.feasible());
  CHECK(*res.flow == Circulation{2, 2});
  CHECK(res.objective == make_rat(-2, p) + make_rat(-2, q));
  CHECK(res.objective == oracle::brute_min_cost(net).objective);

  // Flipping one sign makes the cycle unprofitable; the optimum is zero.
  net.arcs[1].cost = make_rat(1, q);
  res = min_cost_circulation(net);
  REQUIRE(res.feasible());
  CHECK(res.objective == 0);
}
