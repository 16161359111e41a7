#include "am/suite.hpp"

#include <sstream>

#include "am/engine.hpp"
#include "am/errors.hpp"
#include "am/properties.hpp"
#include "am/serialization.hpp"

namespace am {
namespace {

// Cost of one traversal step under the utility objective at p: terminal arcs
// carry p_k - v_j, every other arc is free.
Rat utility_cycle_cost(const Engine& engine, const PriceVector& p,
                       const CycleFlow& cycle) {
  const CompiledMessage& cm = engine.compiled();
  std::vector<Rat> arc_cost(cm.network.num_arcs(), Rat(0));
  for (const Variable& v : engine.message().variables)
    arc_cost[cm.terminal_arc_of_var[v.id - 1]] = p[v.good - 1] - v.value;
  Rat total = 0;
  for (const CycleStep& s : cycle.steps) total += arc_cost[s.arc] * s.dir;
  return total;
}

Rat utility_flow_cost(const Engine& engine, const PriceVector& p,
                      const Circulation& flow) {
  const CompiledMessage& cm = engine.compiled();
  Rat total = 0;
  for (const Variable& v : engine.message().variables)
    total += (p[v.good - 1] - v.value) * flow[cm.terminal_arc_of_var[v.id - 1]];
  return total;
}

bool within_bounds(const FlowNetwork& net, const Circulation& flow) {
  for (const Arc& a : net.arcs)
    if (flow[a.id] < a.lower || flow[a.id] > a.upper) return false;
  return true;
}

// The exchange checks for one ordered pair of minimum-size demanded bundles.
// Returns a failure description or an empty string.
std::string check_pair(const Engine& engine, const DemandOracle& oracle,
                       const PriceVector& p, const Bundle& q, const Bundle& r,
                       const Rat& indirect_utility) {
  std::vector<std::pair<int, int>> candidates =
      valid_swap_pairs(oracle, p, q, r);
  std::optional<ExchangeCorrespondence> sigma =
      find_correspondence(candidates, q, r);
  if (!sigma)
    return "no correspondence for " + bundle_to_string(q) + " vs " +
           bundle_to_string(r);
  PropertyReport direct = verify_correspondence(oracle, p, q, r, *sigma);
  if (!direct.holds) return "selected correspondence invalid: " + direct.detail;

  SigmaConstruction sc = construct_sigma_from_flows(engine, p, q, r);
  PropertyReport from_flows = verify_correspondence(oracle, p, q, r, sc.sigma);
  if (!from_flows.holds)
    return "flow-difference correspondence invalid: " + from_flows.detail;

  const FlowNetwork& net = engine.compiled().network;
  int grand_root = engine.compiled().grand_root_arc;
  for (const CycleFlow& cycle : sc.cycles) {
    if (utility_cycle_cost(engine, p, cycle) != 0)
      return "difference cycle has nonzero cost";
    if (cycle.flow_on(grand_root) != 0)
      return "difference cycle crosses the full-set root arc";
    int plus = 0, minus = 0;
    for (int g = 1; g <= engine.num_goods(); ++g) {
      int f = cycle.flow_on(engine.compiled().root_arc_of_good[g - 1]);
      plus += f == +1;
      minus += f == -1;
    }
    if (plus > 1 || minus > 1 || plus != minus)
      return "difference cycle crosses " + std::to_string(plus) + "+/" +
             std::to_string(minus) + "- good roots";
    // Applying one cycle to either endpoint must land on another optimum.
    for (const Circulation* base : {&sc.flow_r, &sc.flow_q}) {
      int sign = base == &sc.flow_r ? +1 : -1;
      Circulation moved = apply_cycle(*base, cycle, sign);
      if (!within_bounds(net, moved) || !check_balanced(net, moved))
        return "cycle application leaves the feasible region";
      if (utility_flow_cost(engine, p, moved) != -indirect_utility)
        return "cycle application loses optimality";
      if (!oracle.demanded(p, engine.bundle_of(moved)))
        return "cycle application leaves the demand set";
    }
  }
  return "";
}

}  // namespace

std::string SuiteReport::summary() const {
  std::ostringstream out;
  out << cases_run << " cases, " << price_points << " price points, "
      << pairs_checked << " bundle pairs, " << failures.size() << " failures";
  if (!failures.empty()) {
    const SuiteFailure& f = failures.front();
    out << "; first: case " << f.case_index << " (seed " << f.case_seed
        << ") at " << f.price << ": " << f.detail;
  }
  return out.str();
}

SuiteReport run_theorem1_suite(std::uint64_t seed, const SuiteParams& params) {
  SuiteReport report;
  for (int ci = 0; ci < params.cases; ++ci) {
    std::uint64_t case_seed = seed + 1000003ULL * static_cast<std::uint64_t>(ci);
    Rng rng(case_seed);
    RandomMessageParams mp;
    mp.num_goods = rng.uniform(2, params.max_goods);
    mp.num_vars = rng.uniform(mp.num_goods, params.max_vars);
    AssignmentMessage msg = random_message(rng.next(), mp);
    std::string msg_json;
    PriceVector price;
    try {
      msg_json = serialize_message(msg);
      Engine engine(msg);
      DemandOracle oracle(engine.to_valuation_table());
      for (int t = 0; t < params.prices_per_case; ++t) {
        price = random_price(rng, mp.num_goods, params.price_lo, params.price_hi);
        ++report.price_points;
        DemandResult demand = oracle.demand(price);
        std::vector<Bundle> mins = min_size_demand(demand);
        if (params.corrupt_case && *params.corrupt_case == ci && t == 0)
          mins.push_back(Bundle(mp.num_goods, 999));
        for (const Bundle& q : mins) {
          for (const Bundle& r : mins) {
            if (q == r) continue;
            ++report.pairs_checked;
            std::string failure = check_pair(engine, oracle, price, q, r,
                                             demand.indirect_utility);
            if (!failure.empty())
              report.failures.push_back(
                  {ci, case_seed, price_to_string(price), failure, msg_json});
          }
        }
      }
    } catch (const std::exception& e) {
      report.failures.push_back({ci, case_seed, price_to_string(price),
                                 std::string("exception: ") + e.what(),
                                 msg_json});
    }
    ++report.cases_run;
  }
  return report;
}

}  // namespace am
