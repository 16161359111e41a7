#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "am/engine.hpp"
#include "am/errors.hpp"
#include "am/generator.hpp"
#include "oracles.hpp"

using namespace am;

namespace {

AssignmentMessage two_singles(Rat v1 = 2, Rat v2 = 3) {
  AssignmentMessage msg;
  msg.num_goods = 2;
  msg.variables = {{1, 1, v1}, {2, 2, v2}};
  msg.constraints = {{0, {1, 2}, -9, 9}, {0, {1}, 0, 1}, {0, {2}, 0, 1},
                     {1, {1}, 0, 1},     {2, {2}, 0, 1}};
  return msg;
}

// One good with a buying and a selling variable, plus a dummy second good.
AssignmentMessage buy_sell() {
  AssignmentMessage msg;
  msg.num_goods = 2;
  msg.variables = {{1, 1, 2}, {2, 1, -3}, {3, 2, 0}};
  msg.constraints = {{0, {1, 2, 3}, -9, 9}, {0, {1}, 0, 1}, {0, {2}, -1, 0},
                     {0, {3}, 0, 0},        {1, {1, 2}, -9, 9},
                     {1, {1}, 0, 1},        {1, {2}, -1, 0},
                     {2, {3}, 0, 0}};
  return msg;
}

}  // namespace

TEST_CASE("minimal network: two vertices, three arcs") {
  CompiledMessage cm = build_network(normalize_trees(two_singles()));
  const FlowNetwork& net = cm.network;
  REQUIRE(net.num_vertices() == 2);
  REQUIRE(net.num_arcs() == 3);
  CHECK(net.vertex_labels[0] == "(2) I={1,2}");
  CHECK(net.vertex_labels[1] == "(5) roots");

  // Arcs in member order {1} < {1,2} < {2}; the circulation runs
  // roots -> tree-0 root -> back through the two good roots.
  CHECK(cm.arc_members ==
        std::vector<std::vector<int>>{{1}, {1, 2}, {2}});
  CHECK(net.arcs[1].tail == 1);
  CHECK(net.arcs[1].head == 0);
  CHECK(net.arcs[0].tail == 0);
  CHECK(net.arcs[0].head == 1);
  CHECK(net.arcs[2].tail == 0);
  CHECK(net.arcs[2].head == 1);
  CHECK(cm.grand_root_arc == 1);
  CHECK(cm.root_arc_of_good == std::vector<int>{0, 2});
  CHECK(cm.terminal_arc_of_var == std::vector<int>{0, 2});
}

TEST_CASE("nested trees compile to five vertices and eight arcs") {
  AssignmentMessage msg = normalize_trees(oracle::example_tree_message());
  CompiledMessage cm = build_network(msg);
  const FlowNetwork& net = cm.network;
  REQUIRE(net.num_vertices() == 5);
  REQUIRE(net.num_arcs() == 8);
  CHECK(net.vertex_labels ==
        std::vector<std::string>{"(2) I={1,2,3,4}", "(2) I={2,3,4}",
                                 "(3) i=1, I={1,2}", "(3) i=1, I={1,2,3}",
                                 "(5) roots"});
  CHECK(cm.arc_members ==
        std::vector<std::vector<int>>{{1}, {1, 2}, {1, 2, 3}, {1, 2, 3, 4},
                                      {2}, {2, 3, 4}, {3}, {4}});

  auto ends = [&](int arc) {
    return std::make_pair(net.arcs[arc].tail, net.arcs[arc].head);
  };
  CHECK(ends(3) == std::make_pair(4, 0));  // R_0 from roots
  CHECK(ends(5) == std::make_pair(0, 1));  // {2,3,4} below it
  CHECK(ends(0) == std::make_pair(0, 2));  // {1} into tree 1
  CHECK(ends(4) == std::make_pair(1, 2));
  CHECK(ends(6) == std::make_pair(1, 3));
  CHECK(ends(1) == std::make_pair(2, 3));  // {1,2} up tree 1
  CHECK(ends(2) == std::make_pair(3, 4));  // R_1 into roots
  CHECK(ends(7) == std::make_pair(1, 4));  // {4} is R_2 and a terminal

  CHECK(cm.grand_root_arc == 3);
  CHECK(cm.root_arc_of_good == std::vector<int>{2, 7});
  CHECK(cm.terminal_arc_of_var == std::vector<int>{0, 4, 6, 7});

  CHECK(net.arcs[3].lower == -9);
  CHECK(net.arcs[3].upper == 9);
  CHECK(net.arcs[5].upper == 3);
  CHECK(net.arcs[1].upper == 2);
  for (int terminal : {0, 4, 6, 7}) {
    CHECK(net.arcs[terminal].lower == 0);
    CHECK(net.arcs[terminal].upper == 1);
  }
}

TEST_CASE("compile preconditions") {
  AssignmentMessage msg = oracle::example_tree_message();
  CHECK_THROWS_AS(build_network(msg), precondition_error);  // not normalized
  msg.num_goods = 1;
  CHECK_THROWS_AS(build_network(msg), precondition_error);  // invalid
  CHECK_THROWS_AS(Engine{msg}, input_error);
}

TEST_CASE("engine normalizes its message") {
  Engine engine(oracle::example_tree_message());
  CHECK(is_normalized(engine.message()));
  CHECK(engine.num_goods() == 2);
}

TEST_CASE("values on the two-singles message") {
  Engine engine(two_singles());
  CHECK(*engine.value({0, 0}) == 0);
  CHECK(*engine.value({1, 0}) == 2);
  CHECK(*engine.value({0, 1}) == 3);
  CHECK(*engine.value({1, 1}) == 5);
  CHECK(!engine.value({2, 0}).has_value());
  CHECK(!engine.value({-1, 0}).has_value());
  CHECK_THROWS_AS(engine.value({1}), input_error);

  CHECK(engine.feasible_bundles() ==
        std::vector<Bundle>{{0, 0}, {0, 1}, {1, 0}, {1, 1}});

  CHECK(engine.indirect_utility({0, 0}) == 5);
  CHECK(engine.indirect_utility({1, 1}) == 3);
  CHECK_THROWS_AS(engine.indirect_utility({0}), input_error);

  DemandResult at_cost = engine.demand_set({2, 3});
  CHECK(at_cost.indirect_utility == 0);
  CHECK(at_cost.demand.size() == 4);

  DemandResult tied = engine.demand_set({make_rat(5, 2), 3});
  CHECK(tied.indirect_utility == 0);
  CHECK(tied.demand == std::vector<Bundle>{{0, 0}, {0, 1}});
}

TEST_CASE("values on the nested example") {
  Engine engine(oracle::example_tree_message());
  CHECK(*engine.value({3, 1}) == 4);
  CHECK(*engine.value({2, 0}) == 2);
  CHECK(*engine.value({0, 0}) == 0);
  CHECK(!engine.value({4, 0}).has_value());
  CHECK(engine.feasible_bundles().size() == 8);  // {0..3} x {0..1}

  CHECK(engine.indirect_utility({0, 0}) == 4);
  DemandResult half = engine.demand_set({make_rat(1, 2), make_rat(1, 2)});
  CHECK(half.indirect_utility == 2);
  CHECK(half.demand == std::vector<Bundle>{{3, 1}});

  DemandResult skewed = engine.demand_set({2, 0});
  CHECK(skewed.indirect_utility == 1);
  CHECK(skewed.demand == std::vector<Bundle>{{0, 1}});
}

TEST_CASE("negative assignments can beat positive ones") {
  Engine engine(buy_sell());
  CHECK(*engine.value({0, 0}) == 5);  // x = (1, -1)
  CHECK(*engine.value({-1, 0}) == 3);
  CHECK(*engine.value({1, 0}) == 2);
  CHECK(!engine.value({2, 0}).has_value());
  CHECK(engine.feasible_bundles() ==
        std::vector<Bundle>{{-1, 0}, {0, 0}, {1, 0}});
  DemandResult res = engine.demand_set({0, 0});
  CHECK(res.indirect_utility == 5);
  CHECK(res.demand == std::vector<Bundle>{{0, 0}});
}

TEST_CASE("optimal circulations and bundle readout") {
  Engine engine(oracle::example_tree_message());
  PriceVector p{make_rat(1, 2), make_rat(1, 2)};
  std::optional<Circulation> flow = engine.optimal_circulation(p);
  REQUIRE(flow.has_value());
  CHECK(engine.bundle_of(*flow) == Bundle{3, 1});

  std::optional<Circulation> clamped =
      engine.optimal_circulation(p, Bundle{2, 1});
  REQUIRE(clamped.has_value());
  CHECK(engine.bundle_of(*clamped) == Bundle{2, 1});

  CHECK(!engine.optimal_circulation(p, Bundle{9, 9}).has_value());
}

TEST_CASE("valuation table matches the direct enumeration") {
  ValuationTable table = Engine(oracle::example_tree_message()).to_valuation_table();
  CHECK(table.num_goods == 2);
  CHECK(table.values == oracle::value_table(oracle::example_tree_message()));
}

TEST_CASE("engine agrees with enumeration on random messages") {
  Rng rng(321);
  for (std::uint64_t seed = 1; seed <= 120; ++seed) {
    RandomMessageParams params;
    params.num_goods = rng.uniform(2, 3);
    params.num_vars = rng.uniform(params.num_goods, 6);
    AssignmentMessage msg = random_message(seed * 31 + 7, params);
    Engine engine(msg);
    std::map<Bundle, Rat> table = oracle::value_table(msg);

    ValuationTable got = engine.to_valuation_table();
    REQUIRE(got.values == table);

    for (const auto& [q, v] : table)
      CHECK(value_oracle(msg, q) == std::optional<Rat>(v));

    for (int t = 0; t < 5; ++t) {
      PriceVector p = random_price(rng, params.num_goods, -6, 6);
      oracle::DemandAnswer expect = oracle::demand_at(table, p);
      CHECK(engine.indirect_utility(p) == expect.indirect_utility);
      DemandResult ds = engine.demand_set(p);
      CHECK(ds.indirect_utility == expect.indirect_utility);
      CHECK(ds.demand == expect.demand);

      std::optional<Circulation> flow = engine.optimal_circulation(p);
      REQUIRE(flow.has_value());
      Bundle chosen = engine.bundle_of(*flow);
      CHECK(std::find(ds.demand.begin(), ds.demand.end(), chosen) !=
            ds.demand.end());
    }
  }
}

TEST_CASE("normalization does not change semantics") {
  Rng rng(9);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    AssignmentMessage msg = random_message(seed);
    AssignmentMessage shuffled = msg;
    for (int t = static_cast<int>(shuffled.constraints.size()) - 1; t > 0; --t)
      std::swap(shuffled.constraints[t],
                shuffled.constraints[rng.uniform(0, t)]);
    CHECK(Engine(msg).to_valuation_table().values ==
          Engine(shuffled).to_valuation_table().values);
  }
}

TEST_CASE("value oracle rejects bad input") {
  AssignmentMessage msg = two_singles();
  CHECK_THROWS_AS(value_oracle(msg, {0}), input_error);
  msg.num_goods = 1;
  CHECK_THROWS_AS(value_oracle(msg, {0}), input_error);
  CHECK_THROWS_AS(value_oracle(two_singles(), {0, 0}, 1), size_error);
}
