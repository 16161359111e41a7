#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "am/rational.hpp"

namespace am {

// Bundle of goods, one (possibly negative) quantity per good. Index 0 holds
// the quantity of good 1.
using Bundle = std::vector<int>;

// One price per good, parallel to Bundle.
using PriceVector = std::vector<Rat>;

inline Rat dot(const PriceVector& p, const Bundle& q) {
  Rat s = 0;
  for (std::size_t i = 0; i < q.size(); ++i) s += p[i] * q[i];
  return s;
}

// Finite explicit valuation: bundle -> value. Only bundles present in
// `values` are feasible; message-induced tables always contain the zero
// bundle.
struct ValuationTable {
  int num_goods = 0;
  std::map<Bundle, Rat> values;

  bool contains(const Bundle& q) const { return values.count(q) != 0; }
  const Rat& at(const Bundle& q) const;
};

// Bidding variable: x_j carries good k_j and per-unit value v_j.
struct Variable {
  int id = 0;    // 1-based, contiguous
  int good = 0;  // 1-based
  Rat value = 0;

  bool operator==(const Variable& o) const {
    return id == o.id && good == o.good && value == o.value;
  }
};

// Inequality set I in tree `tree` (0 for the tree over all variables, i >= 1
// for the tree over the variables of good i): lower <= sum_{j in I} x_j <= upper.
struct TreeConstraint {
  int tree = 0;
  std::vector<int> members;  // variable ids
  int lower = 0;
  int upper = 0;

  bool operator==(const TreeConstraint& o) const = default;
};

struct AssignmentMessage {
  int num_goods = 0;
  std::vector<Variable> variables;
  std::vector<TreeConstraint> constraints;

  bool operator==(const AssignmentMessage& o) const = default;

  int num_vars() const { return static_cast<int>(variables.size()); }
  // Ids of the variables tagged with `good`, ascending.
  std::vector<int> vars_of_good(int good) const;
  // All variable ids, ascending.
  std::vector<int> all_vars() const;
};

struct Violation {
  std::string where;  // e.g. "constraint 3" or "variable 2"
  std::string what;

  bool operator==(const Violation& o) const = default;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

// Structural checks: goods covered, ids contiguous, trees laminar, each tree
// contains its root and all singletons, bounds admit zero. Collects every
// violation instead of stopping at the first.
ValidationReport validate_message(const AssignmentMessage& msg);

// Canonical form: members sorted, duplicate (tree, set) entries merged by
// intersecting bounds, non-singleton sets listed in both tree 0 and a good's
// tree kept only in the good's tree, singleton bounds unified across trees,
// constraints in a fixed order. Idempotent; preserves the feasible region.
AssignmentMessage normalize_trees(const AssignmentMessage& msg);

bool is_normalized(const AssignmentMessage& msg);

// Adds a zero-valued variable fixed to 0 for every good with no variables, so
// the result covers all goods. Other constraints are preserved (the tree-0
// root set is widened to include the new ids).
AssignmentMessage complete_with_dummies(const AssignmentMessage& msg);

// Goods where q exceeds r: {i : q_i - r_i > 0}, 1-based.
std::set<int> support_plus(const Bundle& q, const Bundle& r);

std::string bundle_to_string(const Bundle& q);
std::string price_to_string(const PriceVector& p);

}  // namespace am
