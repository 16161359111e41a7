#include "am/serialization.hpp"

#include <sstream>

#include <json.hpp>

#include "am/errors.hpp"

namespace am {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string type_name(const json& j) { return j.type_name(); }

Rat rat_field(const json& j, const std::string& path) {
  if (j.is_number_integer()) return make_rat(j.get<long>());
  if (j.is_string()) {
    std::optional<Rat> r = parse_rat(j.get<std::string>());
    if (r) return *r;
    throw input_error(path + ": '" + j.get<std::string>() +
                      "' is not a rational (use 'a' or 'a/b')");
  }
  throw input_error(path + ": expected an integer or rational string, got " +
                    type_name(j));
}

int int_field(const json& j, const std::string& path) {
  if (!j.is_number_integer())
    throw input_error(path + ": expected an integer, got " + type_name(j));
  return j.get<int>();
}

const json& field(const json& obj, const std::string& key,
                  const std::string& path) {
  if (!obj.is_object())
    throw input_error(path + ": expected an object, got " + type_name(obj));
  auto it = obj.find(key);
  if (it == obj.end()) throw input_error(path + ": missing field '" + key + "'");
  return *it;
}

}  // namespace

ParseResult parse_message(const std::string& text) {
  ParseResult result;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    result.diagnostic = std::string("syntax error: ") + e.what();
    return result;
  }
  AssignmentMessage msg;
  try {
    msg.num_goods = int_field(field(doc, "num_goods", "$"), "$.num_goods");
    const json& vars = field(doc, "variables", "$");
    if (!vars.is_array()) throw input_error("$.variables: expected an array");
    for (std::size_t k = 0; k < vars.size(); ++k) {
      std::string path = "$.variables[" + std::to_string(k) + "]";
      Variable v;
      v.id = int_field(field(vars[k], "id", path), path + ".id");
      v.good = int_field(field(vars[k], "good", path), path + ".good");
      v.value = rat_field(field(vars[k], "value", path), path + ".value");
      msg.variables.push_back(std::move(v));
    }
    const json& cons = field(doc, "constraints", "$");
    if (!cons.is_array()) throw input_error("$.constraints: expected an array");
    for (std::size_t k = 0; k < cons.size(); ++k) {
      std::string path = "$.constraints[" + std::to_string(k) + "]";
      TreeConstraint tc;
      tc.tree = int_field(field(cons[k], "tree", path), path + ".tree");
      const json& members = field(cons[k], "members", path);
      if (!members.is_array())
        throw input_error(path + ".members: expected an array");
      for (std::size_t i = 0; i < members.size(); ++i)
        tc.members.push_back(int_field(
            members[i], path + ".members[" + std::to_string(i) + "]"));
      tc.lower = int_field(field(cons[k], "lower", path), path + ".lower");
      tc.upper = int_field(field(cons[k], "upper", path), path + ".upper");
      msg.constraints.push_back(std::move(tc));
    }
  } catch (const input_error& e) {
    result.diagnostic = e.what();
    return result;
  }
  msg = complete_with_dummies(msg);
  ValidationReport report = validate_message(msg);
  if (!report.ok()) {
    result.diagnostic = "validation failed:\n" + report.to_string();
    return result;
  }
  result.message = std::move(msg);
  return result;
}

std::string serialize_message(const AssignmentMessage& msg) {
  ordered_json doc;
  doc["num_goods"] = msg.num_goods;
  doc["variables"] = ordered_json::array();
  for (const Variable& v : msg.variables) {
    ordered_json jv;
    jv["id"] = v.id;
    jv["good"] = v.good;
    jv["value"] = format_rat(v.value);
    doc["variables"].push_back(std::move(jv));
  }
  doc["constraints"] = ordered_json::array();
  for (const TreeConstraint& tc : msg.constraints) {
    ordered_json jc;
    jc["tree"] = tc.tree;
    jc["members"] = tc.members;
    jc["lower"] = tc.lower;
    jc["upper"] = tc.upper;
    doc["constraints"].push_back(std::move(jc));
  }
  return doc.dump(2) + "\n";
}

std::string export_graph(const AssignmentMessage& msg) {
  ValidationReport report = validate_message(msg);
  if (!report.ok())
    throw input_error("message invalid:\n" + report.to_string());
  AssignmentMessage normalized = normalize_trees(msg);
  CompiledMessage cm = build_network(normalized);

  std::map<int, const Variable*> var_of;
  for (const Variable& v : normalized.variables) var_of[v.id] = &v;
  std::map<std::vector<int>, int> good_of_root;
  for (int g = 1; g <= normalized.num_goods; ++g)
    good_of_root[normalized.vars_of_good(g)] = g;
  std::vector<int> all_vars = normalized.all_vars();

  std::ostringstream out;
  out << "digraph message {\n  rankdir=LR;\n";
  for (int v = 0; v < cm.network.num_vertices(); ++v)
    out << "  v" << v << " [label=\"" << cm.network.vertex_labels[v] << "\"];\n";
  for (const Arc& a : cm.network.arcs) {
    const std::vector<int>& members = cm.arc_members[a.id];
    out << "  v" << a.tail << " -> v" << a.head << " [label=\"{";
    for (std::size_t i = 0; i < members.size(); ++i)
      out << (i ? "," : "") << members[i];
    out << "} [" << a.lower << "," << a.upper << "]";
    if (members == all_vars) out << " R0";
    auto root = good_of_root.find(members);
    if (root != good_of_root.end()) out << " R" << root->second;
    if (members.size() == 1) {
      const Variable* v = var_of.at(members[0]);
      out << " good " << v->good << " value " << format_rat(v->value);
    }
    out << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

std::string table_to_json(const ValuationTable& table) {
  ordered_json doc;
  doc["num_goods"] = table.num_goods;
  doc["values"] = ordered_json::array();
  for (const auto& [bundle, v] : table.values) {
    ordered_json entry;
    entry["bundle"] = bundle;
    entry["value"] = format_rat(v);
    doc["values"].push_back(std::move(entry));
  }
  return doc.dump(2) + "\n";
}

}  // namespace am
