#include "am/model.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "am/errors.hpp"

namespace am {
namespace {

std::string set_to_string(const std::vector<int>& members) {
  std::ostringstream out;
  out << "{";
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (i) out << ",";
    out << members[i];
  }
  out << "}";
  return out.str();
}

bool laminar(const std::vector<int>& a, const std::vector<int>& b) {
  // Members sorted; nested or disjoint.
  std::vector<int> inter;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(inter));
  if (inter.empty()) return true;
  return inter.size() == a.size() || inter.size() == b.size();
}

}  // namespace

const Rat& ValuationTable::at(const Bundle& q) const {
  auto it = values.find(q);
  if (it == values.end())
    throw input_error("bundle " + bundle_to_string(q) + " not in table");
  return it->second;
}

std::vector<int> AssignmentMessage::vars_of_good(int good) const {
  std::vector<int> out;
  for (const Variable& v : variables)
    if (v.good == good) out.push_back(v.id);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> AssignmentMessage::all_vars() const {
  std::vector<int> out;
  for (const Variable& v : variables) out.push_back(v.id);
  std::sort(out.begin(), out.end());
  return out;
}

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  for (const Violation& v : violations) out << v.where << ": " << v.what << "\n";
  return out.str();
}

ValidationReport validate_message(const AssignmentMessage& msg) {
  ValidationReport report;
  auto add = [&](const std::string& where, const std::string& what) {
    report.violations.push_back({where, what});
  };

  if (msg.num_goods < 2)
    add("message", "needs at least 2 goods, has " + std::to_string(msg.num_goods));

  const int m = msg.num_vars();
  if (m == 0) add("message", "no variables");

  std::vector<int> seen_ids;
  for (const Variable& v : msg.variables) {
    std::string where = "variable " + std::to_string(v.id);
    if (v.id < 1 || v.id > m)
      add(where, "id outside 1.." + std::to_string(m));
    else
      seen_ids.push_back(v.id);
    if (v.good < 1 || v.good > msg.num_goods)
      add(where, "good " + std::to_string(v.good) + " outside 1.." +
                     std::to_string(msg.num_goods));
  }
  std::sort(seen_ids.begin(), seen_ids.end());
  if (std::adjacent_find(seen_ids.begin(), seen_ids.end()) != seen_ids.end())
    add("message", "duplicate variable ids");
  bool ids_ok = static_cast<int>(seen_ids.size()) == m &&
                std::adjacent_find(seen_ids.begin(), seen_ids.end()) ==
                    seen_ids.end();

  for (int g = 1; g <= msg.num_goods; ++g)
    if (msg.vars_of_good(g).empty())
      add("good " + std::to_string(g), "no variables");

  if (!ids_ok) return report;  // set checks below need resolvable ids

  // Distinct member sets per tree, with their bounds.
  std::map<int, std::map<std::vector<int>, std::pair<int, int>>> trees;
  for (std::size_t c = 0; c < msg.constraints.size(); ++c) {
    const TreeConstraint& tc = msg.constraints[c];
    std::string where = "constraint " + std::to_string(c);
    if (tc.tree < 0 || tc.tree > msg.num_goods) {
      add(where, "tree " + std::to_string(tc.tree) + " outside 0.." +
                     std::to_string(msg.num_goods));
      continue;
    }
    if (tc.members.empty()) {
      add(where, "empty member set");
      continue;
    }
    std::vector<int> members = tc.members;
    std::sort(members.begin(), members.end());
    if (std::adjacent_find(members.begin(), members.end()) != members.end())
      add(where, "duplicate members in " + set_to_string(tc.members));
    members.erase(std::unique(members.begin(), members.end()), members.end());
    bool resolvable = true;
    for (int id : members)
      if (id < 1 || id > m) {
        add(where, "unknown variable " + std::to_string(id));
        resolvable = false;
      }
    if (!resolvable) continue;
    if (tc.tree >= 1) {
      std::vector<int> good_vars = msg.vars_of_good(tc.tree);
      if (!std::includes(good_vars.begin(), good_vars.end(), members.begin(),
                         members.end()))
        add(where, set_to_string(members) + " not within the variables of good " +
                       std::to_string(tc.tree));
    }
    if (tc.lower > 0 || tc.upper < 0)
      add(where, "bounds [" + std::to_string(tc.lower) + "," +
                     std::to_string(tc.upper) + "] do not admit 0");
    auto [it, fresh] =
        trees[tc.tree].try_emplace(members, std::make_pair(tc.lower, tc.upper));
    if (!fresh) {
      it->second.first = std::max(it->second.first, tc.lower);
      it->second.second = std::min(it->second.second, tc.upper);
    }
  }

  for (const auto& [tree, sets] : trees) {
    std::string where = "tree " + std::to_string(tree);
    std::vector<const std::vector<int>*> families;
    for (const auto& [members, bounds] : sets) families.push_back(&members);
    for (std::size_t a = 0; a < families.size(); ++a)
      for (std::size_t b = a + 1; b < families.size(); ++b)
        if (!laminar(*families[a], *families[b]))
          add(where, set_to_string(*families[a]) + " and " +
                         set_to_string(*families[b]) + " cross");
  }

  // Required members: root and singletons of each tree.
  auto require = [&](int tree, const std::vector<int>& set,
                     const std::string& what) {
    auto it = trees.find(tree);
    if (it == trees.end() || it->second.count(set) == 0)
      add("tree " + std::to_string(tree), "missing " + what);
  };
  require(0, msg.all_vars(), "the full variable set");
  for (const Variable& v : msg.variables)
    require(0, {v.id}, "singleton {" + std::to_string(v.id) + "}");
  for (int g = 1; g <= msg.num_goods; ++g) {
    std::vector<int> good_vars = msg.vars_of_good(g);
    if (good_vars.empty()) continue;
    require(g, good_vars, "the root set " + set_to_string(good_vars));
    for (int id : good_vars)
      require(g, {id}, "singleton {" + std::to_string(id) + "}");
  }

  return report;
}

AssignmentMessage normalize_trees(const AssignmentMessage& msg) {
  AssignmentMessage out;
  out.num_goods = msg.num_goods;
  out.variables = msg.variables;
  std::sort(out.variables.begin(), out.variables.end(),
            [](const Variable& a, const Variable& b) { return a.id < b.id; });

  // Merge duplicate (tree, set) entries by intersecting bounds.
  std::map<int, std::map<std::vector<int>, std::pair<int, int>>> trees;
  for (const TreeConstraint& tc : msg.constraints) {
    std::vector<int> members = tc.members;
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    auto [it, fresh] =
        trees[tc.tree].try_emplace(members, std::make_pair(tc.lower, tc.upper));
    if (!fresh) {
      it->second.first = std::max(it->second.first, tc.lower);
      it->second.second = std::min(it->second.second, tc.upper);
    }
  }

  // A non-singleton set listed both in tree 0 and in a good's tree denotes
  // the same sum, so keep one entry (in the good's tree) with the
  // intersected bounds. Singletons always live in tree 0 and their good's
  // tree; unify their bounds across all trees.
  for (auto& [tree, sets] : trees) {
    if (tree == 0) continue;
    for (auto& [members, bounds] : sets) {
      auto in_zero = trees[0].find(members);
      if (in_zero == trees[0].end()) continue;
      bounds.first = std::max(bounds.first, in_zero->second.first);
      bounds.second = std::min(bounds.second, in_zero->second.second);
      if (members.size() == 1)
        in_zero->second = bounds;  // keep both entries, same interval
      else
        trees[0].erase(in_zero);
    }
  }

  for (const auto& [tree, sets] : trees)
    for (const auto& [members, bounds] : sets)
      out.constraints.push_back({tree, members, bounds.first, bounds.second});
  std::sort(out.constraints.begin(), out.constraints.end(),
            [](const TreeConstraint& a, const TreeConstraint& b) {
              if (a.tree != b.tree) return a.tree < b.tree;
              return a.members < b.members;
            });
  return out;
}

bool is_normalized(const AssignmentMessage& msg) {
  return normalize_trees(msg) == msg;
}

AssignmentMessage complete_with_dummies(const AssignmentMessage& msg) {
  std::vector<int> missing;
  for (int g = 1; g <= msg.num_goods; ++g)
    if (msg.vars_of_good(g).empty()) missing.push_back(g);
  if (missing.empty()) return msg;

  AssignmentMessage out = msg;
  std::vector<int> old_all = msg.all_vars();
  int next_id = msg.num_vars();
  std::vector<int> new_ids;
  for (int g : missing) {
    int id = ++next_id;
    new_ids.push_back(id);
    out.variables.push_back({id, g, 0});
    out.constraints.push_back({0, {id}, 0, 0});
    out.constraints.push_back({g, {id}, 0, 0});
  }
  for (TreeConstraint& tc : out.constraints) {
    if (tc.tree != 0) continue;
    std::vector<int> members = tc.members;
    std::sort(members.begin(), members.end());
    if (members == old_all)
      tc.members.insert(tc.members.end(), new_ids.begin(), new_ids.end());
  }
  return out;
}

std::set<int> support_plus(const Bundle& q, const Bundle& r) {
  if (q.size() != r.size())
    throw input_error("bundles of different length: " + bundle_to_string(q) +
                      " vs " + bundle_to_string(r));
  std::set<int> out;
  for (std::size_t i = 0; i < q.size(); ++i)
    if (q[i] > r[i]) out.insert(static_cast<int>(i) + 1);
  return out;
}

std::string bundle_to_string(const Bundle& q) {
  std::ostringstream out;
  out << "(";
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (i) out << ",";
    out << q[i];
  }
  out << ")";
  return out.str();
}

std::string price_to_string(const PriceVector& p) {
  std::ostringstream out;
  out << "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out << ",";
    out << format_rat(p[i]);
  }
  out << ")";
  return out.str();
}

}  // namespace am
