#include "am/search.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <numeric>
#include <set>
#include <sstream>

#include "am/errors.hpp"
#include "am/properties.hpp"

namespace am {
namespace {

// Fast integer routines for the sweep; every reported hit is re-verified with
// the public rational checkers before it leaves this module.

// Exchange condition on an integer hypercube table, earliest-exit order.
bool gs_holds_int(const std::vector<int>& v, int n) {
  const std::uint32_t space = std::uint32_t(1) << n;
  for (std::uint32_t x = 0; x < space; ++x) {
    for (std::uint32_t y = 0; y < space; ++y) {
      std::uint32_t only_x = x & ~y;
      if (!only_x) continue;
      int lhs = v[x] + v[y];
      for (int i = 0; i < n; ++i) {
        if (!(only_x >> i & 1)) continue;
        std::uint32_t bit_i = std::uint32_t(1) << i;
        int best = v[x ^ bit_i] + v[y | bit_i];
        std::uint32_t only_y = y & ~x;
        for (int j = 0; j < n && best < lhs; ++j) {
          if (!(only_y >> j & 1)) continue;
          std::uint32_t bit_j = std::uint32_t(1) << j;
          best = std::max(best,
                          v[(x ^ bit_i) | bit_j] + v[(y | bit_i) ^ bit_j]);
        }
        if (lhs > best) return false;
      }
    }
  }
  return true;
}

// Demand under a uniform price num/den, utilities scaled by den.
void demand_uniform(const std::vector<int>& v, int n, long num, long den,
                    std::vector<std::uint32_t>& out) {
  out.clear();
  long best = 0;
  const std::uint32_t space = std::uint32_t(1) << n;
  for (std::uint32_t mask = 0; mask < space; ++mask) {
    long u = static_cast<long>(v[mask]) * den - num * std::popcount(mask);
    if (u > best) {
      best = u;
      out.clear();
    }
    if (u == best) out.push_back(mask);
  }
}

// Demand under per-good doubled prices, utilities doubled.
void demand_doubled(const std::vector<int>& v, int n,
                    const std::vector<long>& doubled,
                    std::vector<std::uint32_t>& out) {
  out.clear();
  long best = 0;
  const std::uint32_t space = std::uint32_t(1) << n;
  for (std::uint32_t mask = 0; mask < space; ++mask) {
    long u = 2L * v[mask];
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1) u -= doubled[i];
    if (u > best) {
      best = u;
      out.clear();
    }
    if (u == best) out.push_back(mask);
  }
}

// Perfect matching on a bipartite validity matrix by augmenting paths.
bool has_perfect_matching(const std::vector<std::vector<bool>>& ok) {
  int n = static_cast<int>(ok.size());
  std::vector<int> match_right(n, -1);
  for (int a = 0; a < n; ++a) {
    std::vector<bool> seen(n, false);
    auto augment = [&](auto&& self, int left) -> bool {
      for (int b = 0; b < n; ++b) {
        if (!ok[left][b] || seen[b]) continue;
        seen[b] = true;
        if (match_right[b] < 0 || self(self, match_right[b])) {
          match_right[b] = left;
          return true;
        }
      }
      return false;
    };
    if (!augment(augment, a)) return false;
  }
  return true;
}

// Exchangeability of min-size demanded sets for a demand list; 0/1 bundles.
bool exchangeable_at(int n, const std::vector<std::uint32_t>& demand) {
  if (demand.size() < 2) return true;
  std::vector<bool> demanded(std::size_t(1) << n, false);
  for (std::uint32_t m : demand) demanded[m] = true;
  int min_size = n + 1;
  for (std::uint32_t m : demand) min_size = std::min(min_size, std::popcount(m));
  std::vector<std::uint32_t> mins;
  for (std::uint32_t m : demand)
    if (std::popcount(m) == min_size) mins.push_back(m);
  for (std::uint32_t q : mins) {
    for (std::uint32_t r : mins) {
      if (q == r) continue;
      std::vector<int> only_q, only_r;
      for (int i = 0; i < n; ++i) {
        if ((q & ~r) >> i & 1) only_q.push_back(i);
        if ((r & ~q) >> i & 1) only_r.push_back(i);
      }
      int k = static_cast<int>(only_q.size());
      std::vector<std::vector<bool>> ok(k, std::vector<bool>(k, false));
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) {
          std::uint32_t bit_i = std::uint32_t(1) << only_q[a];
          std::uint32_t bit_j = std::uint32_t(1) << only_r[b];
          ok[a][b] =
              demanded[(q ^ bit_i) | bit_j] && demanded[(r ^ bit_j) | bit_i];
        }
      if (!has_perfect_matching(ok)) return false;
    }
  }
  return true;
}

// Node permutations of the complete graph on 4 nodes, as permutations of its
// six edges in the fixed order 01,02,03,12,13,23.
std::vector<std::array<int, 6>> edge_permutations() {
  const int edges[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  auto edge_index = [&](int a, int b) {
    if (a > b) std::swap(a, b);
    for (int e = 0; e < 6; ++e)
      if (edges[e][0] == a && edges[e][1] == b) return e;
    return -1;
  };
  std::vector<std::array<int, 6>> out;
  std::array<int, 4> perm{0, 1, 2, 3};
  do {
    std::array<int, 6> ep{};
    for (int e = 0; e < 6; ++e)
      ep[e] = edge_index(perm[edges[e][0]], perm[edges[e][1]]);
    out.push_back(ep);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

std::uint32_t apply_edge_perm(const std::array<int, 6>& ep, std::uint32_t mask) {
  std::uint32_t out = 0;
  for (int e = 0; e < 6; ++e)
    if (mask >> e & 1) out |= std::uint32_t(1) << ep[e];
  return out;
}

struct Enumerator {
  // Each digit drives the table value of the masks in its group.
  std::vector<std::vector<std::uint32_t>> groups;
  std::vector<int> digits;
  int cap;

  void fill(std::vector<int>& v) const {
    for (std::size_t d = 0; d < groups.size(); ++d)
      for (std::uint32_t m : groups[d]) v[m] = digits[d];
  }

  bool advance() {  // lexicographic: last digit fastest
    for (int d = static_cast<int>(digits.size()) - 1; d >= 0; --d) {
      if (++digits[d] <= cap) return true;
      digits[d] = 0;
    }
    return false;
  }
};

Enumerator make_enumerator(const SearchConfig& config) {
  Enumerator en;
  en.cap = config.value_cap;
  const std::uint32_t space = std::uint32_t(1) << config.num_goods;
  if (config.family == SearchFamily::Lex) {
    for (std::uint32_t mask = 1; mask < space; ++mask) en.groups.push_back({mask});
  } else {
    std::vector<std::array<int, 6>> perms = edge_permutations();
    std::vector<bool> placed(space, false);
    placed[0] = true;  // the empty set stays at value 0
    for (std::uint32_t mask = 1; mask < space; ++mask) {
      if (placed[mask]) continue;
      std::set<std::uint32_t> orbit;
      for (const auto& ep : perms) orbit.insert(apply_edge_perm(ep, mask));
      en.groups.emplace_back(orbit.begin(), orbit.end());
      for (std::uint32_t m : orbit) placed[m] = true;
    }
  }
  en.digits.assign(en.groups.size(), 0);
  return en;
}

ValuationTable table_from_masks(const std::vector<int>& v, int n) {
  ValuationTable table;
  table.num_goods = n;
  for (std::uint32_t mask = 0; mask < (std::uint32_t(1) << n); ++mask) {
    Bundle b(n, 0);
    for (int i = 0; i < n; ++i) b[i] = mask >> i & 1;
    table.values[b] = make_rat(v[mask]);
  }
  return table;
}

}  // namespace

SearchOutcome search_counterexample(const SearchConfig& config) {
  if (config.num_goods < 2 || config.num_goods > 6)
    throw input_error("search supports 2..6 goods");
  if (config.value_cap < 1 || config.value_cap > 6)
    throw input_error("value cap must be in 1..6");
  if (config.family == SearchFamily::Symmetric && config.num_goods != 6)
    throw input_error("the symmetric family is defined for 6 goods");
  if (config.family == SearchFamily::Lex && config.num_goods > 4)
    throw input_error(
        "the lex family is limited to 4 goods; use the symmetric family");

  const int n = config.num_goods;
  const std::uint32_t space = std::uint32_t(1) << n;

  // Uniform probe levels: all half-integers covering the marginal range, plus
  // every level tying two bundle values of the current table.
  std::vector<std::pair<long, long>> base_levels;  // (num, den)
  for (long c = -2 * (config.value_cap + 1); c <= 2 * (config.value_cap + 1); ++c)
    base_levels.emplace_back(c, 2);

  Enumerator en = make_enumerator(config);
  std::vector<int> v(space, 0);
  SearchOutcome outcome;
  std::vector<std::uint32_t> demand;

  bool more = true;
  while (more) {
    if (outcome.tables_examined >= config.table_budget) {
      outcome.budget_exhausted = true;
      break;
    }
    ++outcome.tables_examined;
    en.fill(v);

    if (gs_holds_int(v, n)) {
      ++outcome.substitutes_tables;
      // Tie levels: prices making two bundle sizes trade off exactly.
      std::vector<std::pair<long, long>> levels = base_levels;
      for (std::uint32_t a = 0; a < space; ++a)
        for (std::uint32_t b = 0; b < space; ++b) {
          int dsize = std::popcount(a) - std::popcount(b);
          if (dsize <= 0) continue;
          long num = v[a] - v[b], den = dsize;
          long g = std::gcd(std::abs(num), den);
          if (g) num /= g, den /= g;
          levels.emplace_back(num, den);
        }
      std::sort(levels.begin(), levels.end());
      levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

      std::optional<PriceVector> bad_price;
      for (const auto& [num, den] : levels) {
        demand_uniform(v, n, num, den, demand);
        if (!exchangeable_at(n, demand)) {
          bad_price = PriceVector(n, make_rat(num, den));
          break;
        }
      }
      if (!bad_price && n <= 4) {
        // Full half-integer grid, doubled-price odometer.
        const long span = 2L * (config.value_cap + 1);
        std::vector<long> doubled(n, -span);
        while (!bad_price) {
          demand_doubled(v, n, doubled, demand);
          if (!exchangeable_at(n, demand)) {
            PriceVector p;
            for (long d : doubled) p.push_back(make_rat(d, 2));
            bad_price = std::move(p);
            break;
          }
          int i = n - 1;
          while (i >= 0 && doubled[i] == span) doubled[i--] = -span;
          if (i < 0) break;
          ++doubled[i];
        }
      }
      if (bad_price) {
        // Confirm with the public checkers before reporting.
        ValuationTable table = table_from_masks(v, n);
        BinaryValuation bv = binary_expansion(table);
        if (check_gross_substitutes_exact(bv))
          throw std::logic_error("search fast path disagrees on substitutes");
        DemandOracle oracle(table);
        std::optional<ExchangeabilityWitness> w =
            check_strong_exchangeability(oracle, *bad_price);
        std::optional<ExchangeabilityWitness> wb =
            check_exchangeability_bijection(oracle, *bad_price);
        if (!w || !wb)
          throw std::logic_error("search fast path disagrees on exchangeability");
        outcome.found = true;
        SearchWitness sw;
        sw.table = std::move(table);
        sw.price = *bad_price;
        sw.q = w->q;
        sw.r = w->r;
        sw.detail = w->detail;
        outcome.witness = std::move(sw);
        break;
      }
    }
    more = en.advance();
  }

  std::ostringstream summary;
  summary << outcome.tables_examined << " tables examined, "
          << outcome.substitutes_tables << " satisfied substitutes; ";
  if (outcome.found)
    summary << "witness found at " << price_to_string(outcome.witness->price);
  else if (outcome.budget_exhausted)
    summary << "budget exhausted, no witness";
  else
    summary << "family exhausted, no witness";
  outcome.summary = summary.str();
  return outcome;
}

}  // namespace am
