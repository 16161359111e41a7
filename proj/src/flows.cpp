#include "am/flows.hpp"

#include <algorithm>
#include <limits>
#include <queue>

#include "am/errors.hpp"

namespace am {
namespace {

void check_cover(const FlowNetwork& net, const Circulation& flow) {
  if (flow.size() != net.arcs.size())
    throw input_error("flow assigns " + std::to_string(flow.size()) +
                      " arcs, network has " + std::to_string(net.arcs.size()));
}

// Rotates a cycle so the lexicographically smallest (arc, dir) step is first.
CycleFlow canonical(std::vector<CycleStep> steps) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < steps.size(); ++i) {
    if (steps[i].arc < steps[best].arc ||
        (steps[i].arc == steps[best].arc && steps[i].dir < steps[best].dir))
      best = i;
  }
  std::rotate(steps.begin(), steps.begin() + best, steps.end());
  return CycleFlow{std::move(steps)};
}

// Residual arc for cycle search: traversing `arc` in direction `dir` from
// `from` to `to` at cost `cost` (negated for backward traversal).
template <class Cost>
struct ResidArc {
  int from;
  int to;
  int arc;
  int dir;
  Cost cost;
};

template <class Cost>
std::vector<ResidArc<Cost>> residual_arcs(
    const FlowNetwork& net, const Circulation& flow,
    const std::vector<Cost>& scaled_cost) {
  std::vector<ResidArc<Cost>> out;
  for (const Arc& a : net.arcs) {
    if (flow[a.id] < a.upper)
      out.push_back({a.tail, a.head, a.id, +1, scaled_cost[a.id]});
    if (flow[a.id] > a.lower)
      out.push_back({a.head, a.tail, a.id, -1, Cost(-scaled_cost[a.id])});
  }
  return out;
}

// Bellman-Ford with a virtual zero-cost source to every vertex; any negative
// cycle in the residual graph is found this way. Returns the cycle's steps in
// traversal order, or nothing.
template <class Cost>
std::optional<std::vector<CycleStep>> negative_cycle(
    int num_vertices, const std::vector<ResidArc<Cost>>& resid) {
  std::vector<Cost> dist(num_vertices, Cost(0));
  std::vector<int> pred(num_vertices, -1);
  int relaxed_on_last = -1;
  for (int pass = 0; pass <= num_vertices; ++pass) {
    relaxed_on_last = -1;
    for (std::size_t i = 0; i < resid.size(); ++i) {
      const ResidArc<Cost>& ra = resid[i];
      Cost cand = dist[ra.from] + ra.cost;
      if (cand < dist[ra.to]) {
        dist[ra.to] = cand;
        pred[ra.to] = static_cast<int>(i);
        relaxed_on_last = ra.to;
      }
    }
    if (relaxed_on_last < 0) return std::nullopt;
  }
  // A relaxation survived pass num_vertices: follow predecessors until a
  // vertex repeats, which closes a negative cycle of the pred graph.
  std::vector<bool> seen(num_vertices, false);
  int x = relaxed_on_last;
  while (!seen[x]) {
    seen[x] = true;
    if (pred[x] < 0) return std::nullopt;
    x = resid[pred[x]].from;
  }
  std::vector<CycleStep> steps;
  int cur = x;
  do {
    const ResidArc<Cost>& ra = resid[pred[cur]];
    steps.push_back({ra.arc, ra.dir});
    cur = ra.from;
  } while (cur != x);
  std::reverse(steps.begin(), steps.end());
  return steps;
}

// Costs scaled to a common integer denominator when that fits comfortably in
// 64 bits; exact rationals otherwise. Both paths are exact.
struct ScaledCosts {
  bool use_int = false;
  std::vector<long long> as_int;
  std::vector<Rat> as_rat;
};

ScaledCosts scale_costs(const FlowNetwork& net) {
  ScaledCosts sc;
  mpz_class denom = 1;
  for (const Arc& a : net.arcs) mpz_lcm(denom.get_mpz_t(), denom.get_mpz_t(),
                                        a.cost.get_den().get_mpz_t());
  mpz_class limit = std::numeric_limits<long>::max();
  limit /= (net.num_arcs() + 2);
  limit /= (net.num_vertices() + 2);
  bool ok = true;
  std::vector<mpz_class> scaled;
  for (const Arc& a : net.arcs) {
    mpz_class s = a.cost.get_num() * (denom / a.cost.get_den());
    if (abs(s) > limit) ok = false;
    scaled.push_back(s);
  }
  sc.use_int = ok;
  if (ok) {
    for (const mpz_class& s : scaled) sc.as_int.push_back(s.get_si());
  } else {
    for (const Arc& a : net.arcs) sc.as_rat.push_back(a.cost);
  }
  return sc;
}

std::optional<std::vector<CycleStep>> find_negative_cycle(
    const FlowNetwork& net, const Circulation& flow, const ScaledCosts& sc) {
  if (sc.use_int)
    return negative_cycle(net.num_vertices(),
                          residual_arcs(net, flow, sc.as_int));
  return negative_cycle(net.num_vertices(), residual_arcs(net, flow, sc.as_rat));
}

// Plain Edmonds-Karp used for the feasibility reduction.
struct MaxFlowGraph {
  int n;
  std::vector<int> to, cap;
  std::vector<std::vector<int>> adj;

  explicit MaxFlowGraph(int n) : n(n), adj(n) {}

  int add_edge(int u, int v, int c) {
    int id = static_cast<int>(to.size());
    to.push_back(v), cap.push_back(c), adj[u].push_back(id);
    to.push_back(u), cap.push_back(0), adj[v].push_back(id + 1);
    return id;
  }

  long long max_flow(int s, int t) {
    long long total = 0;
    while (true) {
      std::vector<int> pred_edge(n, -1);
      std::queue<int> bfs;
      bfs.push(s);
      pred_edge[s] = -2;
      while (!bfs.empty() && pred_edge[t] == -1) {
        int u = bfs.front();
        bfs.pop();
        for (int e : adj[u])
          if (cap[e] > 0 && pred_edge[to[e]] == -1) {
            pred_edge[to[e]] = e;
            bfs.push(to[e]);
          }
      }
      if (pred_edge[t] == -1) return total;
      int bottleneck = std::numeric_limits<int>::max();
      for (int v = t; v != s; v = to[pred_edge[v] ^ 1])
        bottleneck = std::min(bottleneck, cap[pred_edge[v]]);
      for (int v = t; v != s; v = to[pred_edge[v] ^ 1]) {
        cap[pred_edge[v]] -= bottleneck;
        cap[pred_edge[v] ^ 1] += bottleneck;
      }
      total += bottleneck;
    }
  }

  std::vector<bool> reachable(int s) const {
    std::vector<bool> seen(n, false);
    std::queue<int> bfs;
    bfs.push(s);
    seen[s] = true;
    while (!bfs.empty()) {
      int u = bfs.front();
      bfs.pop();
      for (int e : adj[u])
        if (cap[e] > 0 && !seen[to[e]]) {
          seen[to[e]] = true;
          bfs.push(to[e]);
        }
    }
    return seen;
  }
};

}  // namespace

int FlowNetwork::add_vertex(std::string label) {
  vertex_labels.push_back(std::move(label));
  return num_vertices() - 1;
}

int FlowNetwork::add_arc(int tail, int head, int lower, int upper, Rat cost) {
  if (lower > upper)
    throw input_error("arc bounds [" + std::to_string(lower) + "," +
                      std::to_string(upper) + "] are empty");
  int id = num_arcs();
  arcs.push_back({id, tail, head, lower, upper, std::move(cost)});
  return id;
}

int CycleFlow::flow_on(int arc) const {
  for (const CycleStep& s : steps)
    if (s.arc == arc) return s.dir;
  return 0;
}

bool check_balanced(const FlowNetwork& net, const Circulation& flow) {
  check_cover(net, flow);
  std::vector<long long> net_in(net.num_vertices(), 0);
  for (const Arc& a : net.arcs) {
    net_in[a.head] += flow[a.id];
    net_in[a.tail] -= flow[a.id];
  }
  return std::all_of(net_in.begin(), net_in.end(),
                     [](long long x) { return x == 0; });
}

std::vector<CycleFlow> decompose_conformal(const FlowNetwork& net,
                                           const Circulation& flow) {
  if (!check_balanced(net, flow))
    throw precondition_error("flow is not balanced, cannot decompose");
  Circulation g = flow;
  std::vector<CycleFlow> out;
  while (true) {
    int start = -1;
    for (const Arc& a : net.arcs)
      if (g[a.id] != 0) {
        start = a.id;
        break;
      }
    if (start < 0) break;
    // Walk in the direction of the remaining signs, always leaving by the
    // smallest usable arc id, until a vertex repeats.
    std::vector<CycleStep> path;
    auto step_from = [&](int vertex) -> CycleStep {
      for (const Arc& a : net.arcs) {
        if (g[a.id] > 0 && a.tail == vertex) return {a.id, +1};
        if (g[a.id] < 0 && a.head == vertex) return {a.id, -1};
      }
      throw precondition_error("walk stuck; flow imbalance slipped through");
    };
    const Arc& first = net.arcs[start];
    int cur = g[start] > 0 ? first.tail : first.head;
    std::vector<int> seen_at(net.num_vertices(), -1);
    while (seen_at[cur] < 0) {
      seen_at[cur] = static_cast<int>(path.size());
      CycleStep s = path.empty() ? CycleStep{start, g[start] > 0 ? +1 : -1}
                                 : step_from(cur);
      path.push_back(s);
      const Arc& a = net.arcs[s.arc];
      cur = s.dir > 0 ? a.head : a.tail;
    }
    std::vector<CycleStep> cycle(path.begin() + seen_at[cur], path.end());
    for (const CycleStep& s : cycle) g[s.arc] -= s.dir;
    out.push_back(canonical(std::move(cycle)));
  }
  return out;
}

FeasibilityResult feasible_circulation(const FlowNetwork& net) {
  const int V = net.num_vertices();
  // Shift flows by their lower bounds; vertices then carry fixed imbalances
  // that a max flow from s to t must route.
  std::vector<long long> need(V, 0);  // required net outflow of the shifted flow
  for (const Arc& a : net.arcs) {
    need[a.head] += a.lower;
    need[a.tail] -= a.lower;
  }
  MaxFlowGraph mf(V + 2);
  const int s = V, t = V + 1;
  std::vector<int> arc_edge(net.arcs.size(), -1);
  for (const Arc& a : net.arcs)
    arc_edge[a.id] = mf.add_edge(a.tail, a.head, a.upper - a.lower);
  long long supply = 0;
  for (int v = 0; v < V; ++v) {
    if (need[v] > 0) {
      mf.add_edge(s, v, static_cast<int>(need[v]));
      supply += need[v];
    } else if (need[v] < 0) {
      mf.add_edge(v, t, static_cast<int>(-need[v]));
    }
  }
  long long routed = mf.max_flow(s, t);
  FeasibilityResult result;
  if (routed == supply) {
    Circulation flow(net.arcs.size(), 0);
    for (const Arc& a : net.arcs) {
      int e = arc_edge[a.id];
      int shifted = (a.upper - a.lower) - mf.cap[e];
      flow[a.id] = a.lower + shifted;
    }
    result.flow = std::move(flow);
  } else {
    std::vector<bool> seen = mf.reachable(s);
    InfeasibilityCut cut;
    for (int v = 0; v < V; ++v)
      if (seen[v]) cut.vertices.push_back(v);
    result.cut = std::move(cut);
  }
  return result;
}

MinCostResult min_cost_circulation(const FlowNetwork& net) {
  FeasibilityResult feas = feasible_circulation(net);
  MinCostResult result;
  if (!feas.feasible()) {
    result.cut = feas.cut;
    return result;
  }
  Circulation flow = *feas.flow;
  ScaledCosts sc = scale_costs(net);
  while (auto steps = find_negative_cycle(net, flow, sc)) {
    Rat drop = 0;
    int bottleneck = std::numeric_limits<int>::max();
    for (const CycleStep& s : *steps) {
      const Arc& a = net.arcs[s.arc];
      drop += a.cost * s.dir;
      int room = s.dir > 0 ? a.upper - flow[s.arc] : flow[s.arc] - a.lower;
      bottleneck = std::min(bottleneck, room);
    }
    if (drop >= 0 || bottleneck <= 0)
      throw std::logic_error("cycle cancelling produced a non-improving cycle");
    for (const CycleStep& s : *steps) flow[s.arc] += s.dir * bottleneck;
  }
  result.objective = circulation_cost(net, flow);
  result.flow = std::move(flow);
  return result;
}

std::optional<CycleFlow> improving_cycle(const FlowNetwork& net,
                                         const Circulation& flow) {
  check_cover(net, flow);
  for (const Arc& a : net.arcs)
    if (flow[a.id] < a.lower || flow[a.id] > a.upper)
      throw precondition_error("flow leaves the bounds of arc " +
                               std::to_string(a.id));
  if (!check_balanced(net, flow))
    throw precondition_error("flow is not balanced");
  ScaledCosts sc = scale_costs(net);
  auto steps = find_negative_cycle(net, flow, sc);
  if (!steps) return std::nullopt;
  CycleFlow cycle = canonical(std::move(*steps));
  if (cycle_cost(net, cycle) >= 0)
    throw std::logic_error("cycle search produced a non-improving cycle");
  return cycle;
}

Rat circulation_cost(const FlowNetwork& net, const Circulation& flow) {
  check_cover(net, flow);
  Rat total = 0;
  for (const Arc& a : net.arcs) total += a.cost * flow[a.id];
  return total;
}

Rat cycle_cost(const FlowNetwork& net, const CycleFlow& cycle) {
  Rat total = 0;
  for (const CycleStep& s : cycle.steps) total += net.arcs[s.arc].cost * s.dir;
  return total;
}

bool cut_violates_bounds(const FlowNetwork& net, const InfeasibilityCut& cut) {
  std::vector<bool> in(net.num_vertices(), false);
  for (int v : cut.vertices) in[v] = true;
  long long lower_in = 0, upper_out = 0;
  for (const Arc& a : net.arcs) {
    if (!in[a.tail] && in[a.head]) lower_in += a.lower;
    if (in[a.tail] && !in[a.head]) upper_out += a.upper;
  }
  return lower_in > upper_out;
}

Circulation apply_cycle(const Circulation& flow, const CycleFlow& cycle,
                        int times) {
  Circulation out = flow;
  for (const CycleStep& s : cycle.steps) out[s.arc] += s.dir * times;
  return out;
}

}  // namespace am
