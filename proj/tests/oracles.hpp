#pragma once

// Reference implementations used only by tests. They avoid the library's
// network machinery on purpose: assignments and circulations are enumerated
// directly, so the two routes to every number are independent.

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "am/engine.hpp"
#include "am/errors.hpp"
#include "am/generator.hpp"
#include "am/model.hpp"
#include "am/properties.hpp"

namespace oracle {

using am::AssignmentMessage;
using am::Bundle;
using am::Circulation;
using am::FlowNetwork;
using am::PriceVector;
using am::Rat;

// Enumerates every assignment in the variable box, keeps the feasible ones
// and folds them to bundle -> best total value.
inline std::map<Bundle, Rat> value_table(const AssignmentMessage& msg,
                                         long max_points = 4000000) {
  const int m = msg.num_vars();
  std::vector<int> lo(m, 0), hi(m, 0);
  std::vector<bool> boxed(m, false);
  for (const am::TreeConstraint& tc : msg.constraints) {
    if (tc.members.size() != 1) continue;
    int j = tc.members[0] - 1;
    if (!boxed[j]) {
      lo[j] = tc.lower, hi[j] = tc.upper, boxed[j] = true;
    } else {
      lo[j] = std::max(lo[j], tc.lower);
      hi[j] = std::min(hi[j], tc.upper);
    }
  }
  long points = 1;
  for (int j = 0; j < m; ++j) {
    points *= hi[j] - lo[j] + 1;
    if (points > max_points) throw am::size_error("oracle box too large");
  }
  std::map<Bundle, Rat> table;
  std::vector<int> x(m);
  auto sweep = [&](auto&& self, int j) -> void {
    if (j == m) {
      for (const am::TreeConstraint& tc : msg.constraints) {
        long long sum = 0;
        for (int id : tc.members) sum += x[id - 1];
        if (sum < tc.lower || sum > tc.upper) return;
      }
      Bundle q(msg.num_goods, 0);
      Rat total = 0;
      for (const am::Variable& v : msg.variables) {
        q[v.good - 1] += x[v.id - 1];
        total += v.value * x[v.id - 1];
      }
      auto [it, fresh] = table.try_emplace(q, total);
      if (!fresh && total > it->second) it->second = total;
      return;
    }
    for (int t = lo[j]; t <= hi[j]; ++t) {
      x[j] = t;
      self(self, j + 1);
    }
  };
  sweep(sweep, 0);
  return table;
}

struct DemandAnswer {
  Rat indirect_utility = 0;
  std::vector<Bundle> demand;
};

inline DemandAnswer demand_at(const std::map<Bundle, Rat>& table,
                              const PriceVector& p) {
  DemandAnswer out;
  bool first = true;
  for (const auto& [q, v] : table) {
    Rat u = v - am::dot(p, q);
    if (first || u > out.indirect_utility) {
      out.indirect_utility = u;
      out.demand.clear();
      first = false;
    }
    if (u == out.indirect_utility) out.demand.push_back(q);
  }
  return out;
}

// Literal demand-monotonicity check over every ordered pair of grid points
// p <= p', with retention of the items whose price did not move. The library
// checker only raises one coordinate at a time; this is the unreduced form.
inline bool substitutes_all_pairs(const am::BinaryValuation& bv,
                                  const am::PriceGrid& grid) {
  const int n = bv.num_items;
  std::vector<std::vector<Rat>> points;
  std::vector<int> idx(n, 0);
  while (true) {
    std::vector<Rat> p;
    for (int i = 0; i < n; ++i) p.push_back(grid.levels[i][idx[i]]);
    points.push_back(std::move(p));
    int i = n - 1;
    while (i >= 0 && idx[i] + 1 == static_cast<int>(grid.levels[i].size()))
      idx[i--] = 0;
    if (i < 0) break;
    ++idx[i];
  }
  auto demand = [&](const std::vector<Rat>& p) {
    std::vector<std::uint32_t> out;
    std::optional<Rat> best;
    for (std::uint32_t mask = 0; mask < (std::uint32_t(1) << n); ++mask) {
      if (!bv.in_domain(mask)) continue;
      Rat u = *bv.value[mask];
      for (int i = 0; i < n; ++i)
        if (mask >> i & 1) u -= p[i];
      if (!best || u > *best) {
        best = u;
        out.clear();
      }
      if (u == *best) out.push_back(mask);
    }
    return out;
  };
  for (const auto& p : points) {
    for (const auto& p2 : points) {
      bool dominated = true;
      for (int i = 0; i < n && dominated; ++i) dominated = p[i] <= p2[i];
      if (!dominated) continue;
      std::uint32_t same = 0;
      for (int i = 0; i < n; ++i)
        if (p[i] == p2[i]) same |= std::uint32_t(1) << i;
      std::vector<std::uint32_t> before = demand(p);
      std::vector<std::uint32_t> after = demand(p2);
      for (std::uint32_t x : before) {
        std::uint32_t keep = x & same;
        bool retained = false;
        for (std::uint32_t y : after)
          if ((y & keep) == keep) retained = true;
        if (!retained) return false;
      }
    }
  }
  return true;
}

// Minimum-cost circulation by enumerating all integral flows in the bounds.
struct BruteResult {
  bool feasible = false;
  Rat objective = 0;
};

inline BruteResult brute_min_cost(const FlowNetwork& net,
                                  long max_points = 20000000) {
  long points = 1;
  for (const am::Arc& a : net.arcs) {
    points *= a.upper - a.lower + 1;
    if (points > max_points) throw am::size_error("brute-force box too large");
  }
  BruteResult out;
  Circulation f(net.num_arcs());
  auto sweep = [&](auto&& self, int a) -> void {
    if (a == net.num_arcs()) {
      if (!am::check_balanced(net, f)) return;
      Rat cost = am::circulation_cost(net, f);
      if (!out.feasible || cost < out.objective) {
        out.feasible = true;
        out.objective = cost;
      }
      return;
    }
    for (int t = net.arcs[a].lower; t <= net.arcs[a].upper; ++t) {
      f[a] = t;
      self(self, a + 1);
    }
  };
  sweep(sweep, 0);
  return out;
}

// Tree family borrowed from the running example: four variables, goods
// 1 -> {1,2,3} and 2 -> {4}, a middle set {2,3,4} in tree 0 and {1,2} in
// tree 1. Values default to 1 each.
inline AssignmentMessage example_tree_message(
    std::vector<Rat> values = {1, 1, 1, 1}) {
  AssignmentMessage msg;
  msg.num_goods = 2;
  for (int j = 1; j <= 4; ++j)
    msg.variables.push_back({j, j <= 3 ? 1 : 2, values[j - 1]});
  msg.constraints.push_back({0, {1, 2, 3, 4}, -9, 9});
  msg.constraints.push_back({0, {2, 3, 4}, 0, 3});
  msg.constraints.push_back({0, {1}, 0, 1});
  msg.constraints.push_back({0, {2}, 0, 1});
  msg.constraints.push_back({0, {3}, 0, 1});
  msg.constraints.push_back({0, {4}, 0, 1});
  msg.constraints.push_back({1, {1, 2, 3}, 0, 3});
  msg.constraints.push_back({1, {1, 2}, 0, 2});
  msg.constraints.push_back({1, {1}, 0, 1});
  msg.constraints.push_back({1, {2}, 0, 1});
  msg.constraints.push_back({1, {3}, 0, 1});
  msg.constraints.push_back({2, {4}, 0, 1});
  return msg;
}

// Balanced flow built as a superposition of directed cycles, some traversed
// against new arcs so negative flows appear too.
inline std::pair<FlowNetwork, Circulation> random_cyclic_flow(am::Rng& rng) {
  FlowNetwork net;
  int num_vertices = rng.uniform(2, 6);
  for (int v = 0; v < num_vertices; ++v)
    net.add_vertex("v" + std::to_string(v));
  std::vector<int> flow;
  auto arc_between = [&](int from, int to) {
    if (rng.uniform(0, 1) == 1) {
      for (const am::Arc& a : net.arcs)
        if (a.tail == from && a.head == to) return a.id;
    }
    flow.push_back(0);
    return net.add_arc(from, to, -9, 9);
  };
  int cycles = rng.uniform(1, 4);
  for (int c = 0; c < cycles; ++c) {
    int len = rng.uniform(2, std::min(num_vertices, 4));
    std::vector<int> verts(num_vertices);
    for (int v = 0; v < num_vertices; ++v) verts[v] = v;
    for (int v = num_vertices - 1; v > 0; --v)
      std::swap(verts[v], verts[rng.uniform(0, v)]);
    verts.resize(len);
    for (int k = 0; k < len; ++k) {
      int from = verts[k], to = verts[(k + 1) % len];
      if (rng.uniform(0, 1) == 1) {
        flow[arc_between(from, to)] += 1;
      } else {
        flow[arc_between(to, from)] -= 1;
      }
    }
  }
  return {net, Circulation(flow.begin(), flow.end())};
}

// Random bounded network for feasibility and optimality tests. Denominator 1
// or 2 keeps most costs on the scaled integer path; a few larger ones push
// the solver onto the rational path.
inline FlowNetwork random_network(am::Rng& rng, int max_vertices = 5,
                                  int max_arcs = 8) {
  FlowNetwork net;
  int num_vertices = rng.uniform(2, max_vertices);
  for (int v = 0; v < num_vertices; ++v)
    net.add_vertex("v" + std::to_string(v));
  int num_arcs = rng.uniform(1, max_arcs);
  for (int a = 0; a < num_arcs; ++a) {
    int tail = rng.uniform(0, num_vertices - 1);
    int head = rng.uniform(0, num_vertices - 1);
    while (head == tail) head = rng.uniform(0, num_vertices - 1);
    int lower = rng.uniform(-2, 1);
    int upper = rng.uniform(lower, lower + 4);
    Rat cost = am::make_rat(rng.uniform(-6, 6), rng.uniform(1, 3));
    net.add_arc(tail, head, lower, upper, cost);
  }
  return net;
}

}  // namespace oracle
