#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "am/engine.hpp"
#include "am/errors.hpp"
#include "am/generator.hpp"
#include "am/properties.hpp"
#include "am/search.hpp"
#include "am/serialization.hpp"
#include "am/suite.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kOk = 0;         // success, property holds
constexpr int kFails = 1;      // property fails, witness emitted
constexpr int kBadInput = 2;   // input or validation error
constexpr int kExhausted = 3;  // budget exhausted, nothing found

struct Fail {
  int code;
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Fail{kBadInput, "cannot open " + path};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Fail{kBadInput, "cannot write " + path};
  out << text;
}

am::AssignmentMessage load_message(const std::string& path) {
  am::ParseResult parsed = am::parse_message(read_file(path));
  if (!parsed.ok()) throw Fail{kBadInput, parsed.diagnostic};
  return *parsed.message;
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(item);
  return out;
}

am::Bundle parse_bundle(const std::string& text, int num_goods) {
  am::Bundle q;
  for (const std::string& tok : split_commas(text)) {
    try {
      std::size_t used = 0;
      int x = std::stoi(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      q.push_back(x);
    } catch (const std::exception&) {
      throw Fail{kBadInput, "bundle entry '" + tok + "' is not an integer"};
    }
  }
  if (static_cast<int>(q.size()) != num_goods)
    throw Fail{kBadInput, "bundle has " + std::to_string(q.size()) +
                              " entries, message has " +
                              std::to_string(num_goods) + " goods"};
  return q;
}

am::PriceVector parse_price(const std::string& text, int num_goods) {
  am::PriceVector p;
  for (const std::string& tok : split_commas(text)) {
    std::optional<am::Rat> r = am::parse_rat(tok);
    if (!r)
      throw Fail{kBadInput, "price entry '" + tok + "' is not a rational"};
    p.push_back(*r);
  }
  if (static_cast<int>(p.size()) != num_goods)
    throw Fail{kBadInput, "price has " + std::to_string(p.size()) +
                              " entries, message has " +
                              std::to_string(num_goods) + " goods"};
  return p;
}

ordered_json bundle_json(const am::Bundle& q) {
  return ordered_json(q);
}

ordered_json table_json(const am::ValuationTable& table) {
  ordered_json out;
  out["num_goods"] = table.num_goods;
  out["values"] = ordered_json::array();
  for (const auto& [bundle, v] : table.values) {
    ordered_json entry;
    entry["bundle"] = bundle;
    entry["value"] = am::format_rat(v);
    out["values"].push_back(std::move(entry));
  }
  return out;
}

void emit(const ordered_json& doc) { std::cout << doc.dump(2) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Integer assignment messages: values, demand and structure checks"};
  app.require_subcommand(1);

  std::string input, output, bundle_text, price_text, levels_text;
  bool machine = false;
  std::uint64_t seed = 1;
  int goods = 2, vars = 4, count = 100, prices = 10, value_cap = 3;
  long budget = 1000000;
  int corrupt_case = -1;
  std::string family = "lex";

  auto add_input = [&](CLI::App* cmd) {
    cmd->add_option("--input", input, "message file (JSON)")->required();
    cmd->add_flag("--machine", machine, "JSON output");
  };

  CLI::App* c_validate = app.add_subcommand("validate", "check a message file");
  add_input(c_validate);

  CLI::App* c_value = app.add_subcommand("value", "value of one bundle");
  add_input(c_value);
  c_value->add_option("--bundle", bundle_text, "comma-separated quantities")
      ->required();

  CLI::App* c_iu = app.add_subcommand("iu", "indirect utility at a price");
  add_input(c_iu);
  c_iu->add_option("--price", price_text, "comma-separated rationals")
      ->required();

  CLI::App* c_demand = app.add_subcommand("demand", "demand set at a price");
  add_input(c_demand);
  c_demand->add_option("--price", price_text, "comma-separated rationals")
      ->required();

  CLI::App* c_table = app.add_subcommand("table", "materialize the valuation");
  add_input(c_table);
  c_table->add_option("--output", output, "write here instead of stdout");

  CLI::App* c_export = app.add_subcommand("export-graph", "network as DOT");
  add_input(c_export);
  c_export->add_option("--output", output, "write here instead of stdout");

  CLI::App* c_ss = app.add_subcommand("check-ss", "strong substitutes check");
  add_input(c_ss);
  c_ss->add_option("--levels", levels_text,
                   "optional comma-separated price levels");

  CLI::App* c_ex = app.add_subcommand("check-exchangeability",
                                      "exchangeability at a price");
  add_input(c_ex);
  c_ex->add_option("--price", price_text, "comma-separated rationals")
      ->required();

  CLI::App* c_random = app.add_subcommand("random", "generate a message");
  c_random->add_option("--seed", seed, "generator seed")->required();
  c_random->add_option("--goods", goods, "number of goods");
  c_random->add_option("--vars", vars, "number of variables");
  c_random->add_option("--output", output, "write here instead of stdout");

  CLI::App* c_suite = app.add_subcommand("suite", "randomized exchange checks");
  c_suite->add_option("--seed", seed, "suite seed")->required();
  c_suite->add_option("--count", count, "number of random messages");
  c_suite->add_option("--prices", prices, "price points per message");
  c_suite->add_option("--corrupt-case", corrupt_case,
                      "self-test: corrupt this case's demand set");
  c_suite->add_flag("--machine", machine, "JSON output");

  CLI::App* c_search = app.add_subcommand(
      "search", "hunt for substitutes without exchangeability");
  c_search->add_option("--goods", goods, "number of goods (2..6)");
  c_search->add_option("--value-cap", value_cap, "max table value");
  c_search->add_option("--budget", budget, "tables examined before giving up");
  c_search->add_option("--family", family, "lex or symmetric");
  c_search->add_flag("--machine", machine, "JSON output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_validate->parsed()) {
      am::ParseResult parsed = am::parse_message(read_file(input));
      if (machine) {
        ordered_json doc;
        doc["ok"] = parsed.ok();
        doc["diagnostic"] = parsed.diagnostic;
        emit(doc);
      } else if (parsed.ok()) {
        std::cout << "ok\n";
      } else {
        std::cout << parsed.diagnostic << "\n";
      }
      return parsed.ok() ? kOk : kBadInput;
    }

    if (c_value->parsed()) {
      am::Engine engine(load_message(input));
      am::Bundle q = parse_bundle(bundle_text, engine.num_goods());
      std::optional<am::Rat> v = engine.value(q);
      if (machine) {
        ordered_json doc;
        doc["feasible"] = v.has_value();
        if (v) doc["value"] = am::format_rat(*v);
        emit(doc);
      } else if (v) {
        std::cout << am::format_rat(*v) << "\n";
      } else {
        std::cout << "infeasible\n";
      }
      return kOk;
    }

    if (c_iu->parsed()) {
      am::Engine engine(load_message(input));
      am::PriceVector p = parse_price(price_text, engine.num_goods());
      am::Rat u = engine.indirect_utility(p);
      if (machine) {
        ordered_json doc;
        doc["indirect_utility"] = am::format_rat(u);
        emit(doc);
      } else {
        std::cout << am::format_rat(u) << "\n";
      }
      return kOk;
    }

    if (c_demand->parsed()) {
      am::Engine engine(load_message(input));
      am::PriceVector p = parse_price(price_text, engine.num_goods());
      am::DemandResult result = engine.demand_set(p);
      if (machine) {
        ordered_json doc;
        doc["indirect_utility"] = am::format_rat(result.indirect_utility);
        doc["demand"] = ordered_json::array();
        for (const am::Bundle& q : result.demand)
          doc["demand"].push_back(bundle_json(q));
        emit(doc);
      } else {
        std::cout << "indirect utility " << am::format_rat(result.indirect_utility)
                  << "\n";
        for (const am::Bundle& q : result.demand)
          std::cout << am::bundle_to_string(q) << "\n";
      }
      return kOk;
    }

    if (c_table->parsed()) {
      am::Engine engine(load_message(input));
      am::ValuationTable table = engine.to_valuation_table();
      write_output(output, am::table_to_json(table));
      return kOk;
    }

    if (c_export->parsed()) {
      write_output(output, am::export_graph(load_message(input)));
      return kOk;
    }

    if (c_ss->parsed()) {
      am::Engine engine(load_message(input));
      std::vector<am::Rat> levels;
      if (!levels_text.empty()) {
        for (const std::string& tok : split_commas(levels_text)) {
          std::optional<am::Rat> r = am::parse_rat(tok);
          if (!r) throw Fail{kBadInput, "level '" + tok + "' is not a rational"};
          levels.push_back(*r);
        }
      }
      am::PropertyReport report =
          am::check_strong_substitutes(engine.to_valuation_table(), levels);
      if (machine) {
        ordered_json doc;
        doc["holds"] = report.holds;
        doc["detail"] = report.detail;
        emit(doc);
      } else {
        std::cout << (report.holds ? "holds" : "fails: " + report.detail) << "\n";
      }
      return report.holds ? kOk : kFails;
    }

    if (c_ex->parsed()) {
      am::Engine engine(load_message(input));
      am::PriceVector p = parse_price(price_text, engine.num_goods());
      am::DemandOracle oracle(engine.to_valuation_table());
      std::optional<am::ExchangeabilityWitness> w =
          am::check_strong_exchangeability(oracle, p);
      if (machine) {
        ordered_json doc;
        doc["holds"] = !w.has_value();
        if (w) {
          doc["witness"]["price"] = am::price_to_string(w->price);
          doc["witness"]["q"] = bundle_json(w->q);
          doc["witness"]["r"] = bundle_json(w->r);
          doc["witness"]["detail"] = w->detail;
        }
        emit(doc);
      } else if (!w) {
        std::cout << "holds\n";
      } else {
        std::cout << "fails: " << w->detail << "\n";
      }
      return w ? kFails : kOk;
    }

    if (c_random->parsed()) {
      am::RandomMessageParams params;
      params.num_goods = goods;
      params.num_vars = vars;
      am::AssignmentMessage msg = am::random_message(seed, params);
      write_output(output, am::serialize_message(msg));
      return kOk;
    }

    if (c_suite->parsed()) {
      am::SuiteParams params;
      params.cases = count;
      params.prices_per_case = prices;
      if (corrupt_case >= 0) params.corrupt_case = corrupt_case;
      am::SuiteReport report = am::run_theorem1_suite(seed, params);
      if (machine) {
        ordered_json doc;
        doc["ok"] = report.ok();
        doc["cases"] = report.cases_run;
        doc["price_points"] = report.price_points;
        doc["pairs_checked"] = report.pairs_checked;
        doc["failures"] = ordered_json::array();
        for (const am::SuiteFailure& f : report.failures) {
          ordered_json jf;
          jf["case"] = f.case_index;
          jf["seed"] = f.case_seed;
          jf["price"] = f.price;
          jf["detail"] = f.detail;
          jf["message"] = f.message_json;
          doc["failures"].push_back(std::move(jf));
        }
        emit(doc);
      } else {
        std::cout << report.summary() << "\n";
      }
      return report.ok() ? kOk : kFails;
    }

    if (c_search->parsed()) {
      am::SearchConfig config;
      config.num_goods = goods;
      config.value_cap = value_cap;
      config.table_budget = budget;
      if (family == "lex") {
        config.family = am::SearchFamily::Lex;
      } else if (family == "symmetric") {
        config.family = am::SearchFamily::Symmetric;
      } else {
        throw Fail{kBadInput, "unknown family '" + family + "'"};
      }
      am::SearchOutcome outcome = am::search_counterexample(config);
      if (machine) {
        ordered_json doc;
        doc["found"] = outcome.found;
        doc["budget_exhausted"] = outcome.budget_exhausted;
        doc["tables_examined"] = outcome.tables_examined;
        doc["substitutes_tables"] = outcome.substitutes_tables;
        if (outcome.witness) {
          doc["witness"]["table"] = table_json(outcome.witness->table);
          doc["witness"]["price"] = am::price_to_string(outcome.witness->price);
          doc["witness"]["q"] = bundle_json(outcome.witness->q);
          doc["witness"]["r"] = bundle_json(outcome.witness->r);
          doc["witness"]["detail"] = outcome.witness->detail;
        }
        emit(doc);
      } else {
        std::cout << outcome.summary << "\n";
        if (outcome.witness)
          std::cout << am::table_to_json(outcome.witness->table);
      }
      return outcome.found ? kOk : kExhausted;
    }
  } catch (const Fail& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  } catch (const am::input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const am::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const am::size_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kBadInput;
  }
  return kOk;
}
