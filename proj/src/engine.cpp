#include "am/engine.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "am/errors.hpp"

namespace am {
namespace {

std::string set_label(const std::vector<int>& members) {
  std::ostringstream out;
  out << "{";
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (i) out << ",";
    out << members[i];
  }
  out << "}";
  return out.str();
}

}  // namespace

CompiledMessage build_network(const AssignmentMessage& msg) {
  ValidationReport report = validate_message(msg);
  if (!report.ok())
    throw precondition_error("message invalid:\n" + report.to_string());
  if (!is_normalized(msg))
    throw precondition_error("message must be normalized before compiling");

  CompiledMessage cm;
  // Distinct sets across all trees share one arc; remember each tree's family.
  std::map<std::vector<int>, int> arc_of_set;
  std::map<int, std::vector<std::vector<int>>> family;  // tree -> member sets
  for (const TreeConstraint& tc : msg.constraints) {
    if (arc_of_set.try_emplace(tc.members, -1).second)
      cm.arc_members.push_back(tc.members);
    family[tc.tree].push_back(tc.members);
  }
  std::sort(cm.arc_members.begin(), cm.arc_members.end());
  // Bounds: normalization left one interval per set (identical on shared
  // singletons), so take them from any entry.
  std::map<std::vector<int>, std::pair<int, int>> bounds;
  for (const TreeConstraint& tc : msg.constraints)
    bounds[tc.members] = {tc.lower, tc.upper};

  FlowNetwork& net = cm.network;
  // One vertex per non-singleton set of each tree, then the roots vertex.
  std::map<std::pair<int, std::vector<int>>, int> vertex_of;
  for (auto& [tree, sets] : family) {
    std::sort(sets.begin(), sets.end());
    for (const auto& members : sets) {
      if (members.size() == 1) continue;
      std::string label =
          tree == 0 ? "(2) I=" + set_label(members)
                    : "(3) i=" + std::to_string(tree) + ", I=" + set_label(members);
      vertex_of[{tree, members}] = net.add_vertex(std::move(label));
    }
  }
  int roots_vertex = net.add_vertex("(5) roots");

  // In-tree parent: the inclusion-minimal strict superset within the family.
  auto parent_of = [&](int tree, const std::vector<int>& members)
      -> const std::vector<int>* {
    const std::vector<int>* best = nullptr;
    for (const auto& other : family[tree]) {
      if (other.size() <= members.size() || other == members) continue;
      if (!std::includes(other.begin(), other.end(), members.begin(),
                         members.end()))
        continue;
      if (!best || other.size() < best->size()) best = &other;
    }
    return best;
  };

  std::vector<int> heads(cm.arc_members.size(), -1);
  std::vector<int> tails(cm.arc_members.size(), -1);
  auto arc_index = [&](const std::vector<int>& members) {
    return static_cast<int>(std::lower_bound(cm.arc_members.begin(),
                                             cm.arc_members.end(), members) -
                            cm.arc_members.begin());
  };
  auto place = [&](int& slot, int vertex, const std::vector<int>& members) {
    if (slot >= 0)
      throw precondition_error("set " + set_label(members) +
                               " would appear twice on the same side");
    slot = vertex;
  };
  for (const auto& [tree, sets] : family) {
    for (const auto& members : sets) {
      int idx = arc_index(members);
      const std::vector<int>* parent = parent_of(tree, members);
      if (tree == 0) {
        // Balance rows y_I - sum of successors = 0: each tree-0 set heads at
        // its own vertex and tails at its parent's; the root tails at roots.
        if (members.size() > 1) place(heads[idx], vertex_of[{0, members}], members);
        if (parent)
          place(tails[idx], vertex_of[{0, *parent}], members);
        else
          place(tails[idx], roots_vertex, members);
      } else {
        // Rows sum of successors - y_I = 0: a good-tree set tails at its own
        // vertex and heads at its parent's; the root heads at roots.
        if (members.size() > 1) place(tails[idx], vertex_of[{tree, members}], members);
        if (parent)
          place(heads[idx], vertex_of[{tree, *parent}], members);
        else
          place(heads[idx], roots_vertex, members);
      }
    }
  }

  for (std::size_t i = 0; i < cm.arc_members.size(); ++i) {
    const std::vector<int>& members = cm.arc_members[i];
    if (heads[i] < 0 || tails[i] < 0)
      throw precondition_error("set " + set_label(members) +
                               " lacks a head or tail; trees incomplete");
    auto [lo, hi] = bounds[members];
    net.add_arc(tails[i], heads[i], lo, hi);
  }

  cm.root_arc_of_good.assign(msg.num_goods, -1);
  for (int g = 1; g <= msg.num_goods; ++g)
    cm.root_arc_of_good[g - 1] = arc_index(msg.vars_of_good(g));
  cm.terminal_arc_of_var.assign(msg.num_vars(), -1);
  for (const Variable& v : msg.variables)
    cm.terminal_arc_of_var[v.id - 1] = arc_index({v.id});
  cm.grand_root_arc = arc_index(msg.all_vars());
  return cm;
}

Engine::Engine(AssignmentMessage msg) : msg_(std::move(msg)) {
  ValidationReport report = validate_message(msg_);
  if (!report.ok())
    throw input_error("message invalid:\n" + report.to_string());
  msg_ = normalize_trees(msg_);
  compiled_ = build_network(msg_);
}

FlowNetwork Engine::costed_network(const PriceVector* p,
                                   const Bundle* clamp) const {
  FlowNetwork net = compiled_.network;
  for (const Variable& v : msg_.variables) {
    Arc& arc = net.arcs[compiled_.terminal_arc_of_var[v.id - 1]];
    // Minimizing sum (p_k - v_j) x_j maximizes utility; value mode is p = 0.
    arc.cost = p ? Rat((*p)[v.good - 1] - v.value) : Rat(-v.value);
  }
  if (clamp) {
    for (int g = 1; g <= msg_.num_goods; ++g) {
      Arc& arc = net.arcs[compiled_.root_arc_of_good[g - 1]];
      arc.lower = std::max(arc.lower, (*clamp)[g - 1]);
      arc.upper = std::min(arc.upper, (*clamp)[g - 1]);
    }
  }
  return net;
}

std::optional<Rat> Engine::value(const Bundle& q) const {
  if (static_cast<int>(q.size()) != msg_.num_goods)
    throw input_error("bundle has " + std::to_string(q.size()) +
                      " entries, message has " + std::to_string(msg_.num_goods) +
                      " goods");
  for (int g = 1; g <= msg_.num_goods; ++g) {
    const Arc& root = compiled_.network.arcs[compiled_.root_arc_of_good[g - 1]];
    if (q[g - 1] < root.lower || q[g - 1] > root.upper) return std::nullopt;
  }
  FlowNetwork net = costed_network(nullptr, &q);
  MinCostResult result = min_cost_circulation(net);
  if (!result.feasible()) return std::nullopt;
  return -result.objective;
}

Rat Engine::indirect_utility(const PriceVector& p) const {
  if (static_cast<int>(p.size()) != msg_.num_goods)
    throw input_error("price has " + std::to_string(p.size()) +
                      " entries, message has " + std::to_string(msg_.num_goods) +
                      " goods");
  FlowNetwork net = costed_network(&p, nullptr);
  MinCostResult result = min_cost_circulation(net);
  if (!result.feasible())
    throw std::logic_error("profit network infeasible despite zero flow");
  return -result.objective;
}

std::vector<Bundle> Engine::feasible_bundles() const {
  std::vector<std::pair<int, int>> box;
  for (int g = 1; g <= msg_.num_goods; ++g) {
    const Arc& root = compiled_.network.arcs[compiled_.root_arc_of_good[g - 1]];
    box.emplace_back(root.lower, root.upper);
  }
  std::vector<Bundle> out;
  Bundle q(msg_.num_goods, 0);
  auto sweep = [&](auto&& self, int g) -> void {
    if (g == msg_.num_goods) {
      FlowNetwork net = costed_network(nullptr, &q);
      if (feasible_circulation(net).feasible()) out.push_back(q);
      return;
    }
    for (int t = box[g].first; t <= box[g].second; ++t) {
      q[g] = t;
      self(self, g + 1);
    }
  };
  sweep(sweep, 0);
  return out;
}

DemandResult Engine::demand_set(const PriceVector& p) const {
  DemandResult result;
  result.indirect_utility = indirect_utility(p);
  for (const Bundle& q : feasible_bundles()) {
    std::optional<Rat> v = value(q);
    if (v && *v - dot(p, q) == result.indirect_utility)
      result.demand.push_back(q);
  }
  return result;
}

ValuationTable Engine::to_valuation_table() const {
  ValuationTable table;
  table.num_goods = msg_.num_goods;
  for (const Bundle& q : feasible_bundles()) {
    std::optional<Rat> v = value(q);
    if (v) table.values[q] = *v;
  }
  return table;
}

std::optional<Circulation> Engine::optimal_circulation(
    const PriceVector& p, const std::optional<Bundle>& clamp) const {
  if (clamp) {
    for (int g = 1; g <= msg_.num_goods; ++g) {
      const Arc& root = compiled_.network.arcs[compiled_.root_arc_of_good[g - 1]];
      if ((*clamp)[g - 1] < root.lower || (*clamp)[g - 1] > root.upper)
        return std::nullopt;
    }
  }
  FlowNetwork net = costed_network(&p, clamp ? &*clamp : nullptr);
  MinCostResult result = min_cost_circulation(net);
  if (!result.feasible()) return std::nullopt;
  return result.flow;
}

Bundle Engine::bundle_of(const Circulation& flow) const {
  Bundle q(msg_.num_goods, 0);
  for (int g = 1; g <= msg_.num_goods; ++g)
    q[g - 1] = flow[compiled_.root_arc_of_good[g - 1]];
  return q;
}

std::optional<Rat> value_oracle(const AssignmentMessage& msg, const Bundle& q,
                                long max_points) {
  ValidationReport report = validate_message(msg);
  if (!report.ok())
    throw input_error("message invalid:\n" + report.to_string());
  if (static_cast<int>(q.size()) != msg.num_goods)
    throw input_error("bundle size mismatch");

  const int m = msg.num_vars();
  std::vector<int> lo(m), hi(m);
  for (int j = 0; j < m; ++j) lo[j] = 0, hi[j] = 0;
  // The singleton bounds give each variable its box; other constraints are
  // checked per point.
  std::vector<bool> boxed(m, false);
  for (const TreeConstraint& tc : msg.constraints) {
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
    if (points > max_points)
      throw size_error("assignment box exceeds " + std::to_string(max_points) +
                       " points");
  }

  std::vector<int> x(m);
  std::optional<Rat> best;
  auto sweep = [&](auto&& self, int j) -> void {
    if (j == m) {
      for (const TreeConstraint& tc : msg.constraints) {
        long long sum = 0;
        for (int id : tc.members) sum += x[id - 1];
        if (sum < tc.lower || sum > tc.upper) return;
      }
      std::vector<long long> produced(msg.num_goods, 0);
      for (const Variable& v : msg.variables) produced[v.good - 1] += x[v.id - 1];
      for (int g = 0; g < msg.num_goods; ++g)
        if (produced[g] != q[g]) return;
      Rat total = 0;
      for (const Variable& v : msg.variables) total += v.value * x[v.id - 1];
      if (!best || total > *best) best = total;
      return;
    }
    for (int t = lo[j]; t <= hi[j]; ++t) {
      x[j] = t;
      self(self, j + 1);
    }
  };
  sweep(sweep, 0);
  return best;
}

}  // namespace am
