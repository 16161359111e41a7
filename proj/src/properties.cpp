#include "am/properties.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>
#include <sstream>

#include "am/errors.hpp"

namespace am {
namespace {

std::string mask_to_string(const BinaryValuation& bv, std::uint32_t mask) {
  std::ostringstream out;
  out << "{";
  bool first = true;
  for (int i = 0; i < bv.num_items; ++i) {
    if (!(mask >> i & 1)) continue;
    if (!first) out << ",";
    first = false;
    if (i < static_cast<int>(bv.item_label.size()))
      out << bv.item_label[i].first << "." << bv.item_label[i].second;
    else
      out << i;
  }
  out << "}";
  return out.str();
}

// Joint scaling of rationals to one integer denominator, when the results
// stay far from 64-bit limits. Sums of at most `terms` scaled values must not
// overflow.
std::optional<std::vector<long long>> scale_to_int(
    const std::vector<Rat>& values, long terms) {
  mpz_class denom = 1;
  for (const Rat& v : values)
    mpz_lcm(denom.get_mpz_t(), denom.get_mpz_t(), v.get_den().get_mpz_t());
  mpz_class limit = std::numeric_limits<long>::max();
  limit /= (terms + 2);
  std::vector<long long> out;
  for (const Rat& v : values) {
    mpz_class s = v.get_num() * (denom / v.get_den());
    if (abs(s) > limit) return std::nullopt;
    out.push_back(s.get_si());
  }
  return out;
}

// ---- grid substitutes scan ----

struct GridWitness {
  std::vector<int> level_idx;  // point p
  int item = 0;                // whose level is raised
  int raised_idx = 0;
  std::uint32_t mask = 0;      // demanded at p, orphaned at p'
};

template <class T>
std::vector<std::uint32_t> grid_demand(const std::vector<std::optional<T>>& val,
                                       const std::vector<T>& item_price) {
  const std::uint32_t space = static_cast<std::uint32_t>(val.size());
  std::vector<T> price_sum(space, T(0));
  for (std::uint32_t mask = 1; mask < space; ++mask) {
    std::uint32_t low = mask & (~mask + 1);
    int bit = std::countr_zero(mask);
    price_sum[mask] = price_sum[mask ^ low] + item_price[bit];
  }
  std::optional<T> best;
  std::vector<std::uint32_t> demand;
  for (std::uint32_t mask = 0; mask < space; ++mask) {
    if (!val[mask]) continue;
    T u = *val[mask] - price_sum[mask];
    if (!best || u > *best) {
      best = u;
      demand.clear();
    }
    if (u == *best) demand.push_back(mask);
  }
  return demand;
}

template <class T>
std::optional<GridWitness> scan_substitutes(
    const std::vector<std::optional<T>>& val,
    const std::vector<std::vector<T>>& levels) {
  const int n = static_cast<int>(levels.size());
  long points = 1;
  for (const auto& l : levels) points *= static_cast<long>(l.size());

  std::vector<long> stride(n, 1);
  for (int i = n - 2; i >= 0; --i)
    stride[i] = stride[i + 1] * static_cast<long>(levels[i + 1].size());

  std::vector<std::vector<std::uint32_t>> demands(points);
  std::vector<int> idx(n, 0);
  std::vector<T> item_price(n);
  for (int i = 0; i < n; ++i) item_price[i] = levels[i][0];
  for (long rank = 0; rank < points; ++rank) {
    demands[rank] = grid_demand(val, item_price);
    for (int i = n - 1; i >= 0; --i) {
      if (++idx[i] < static_cast<int>(levels[i].size())) {
        item_price[i] = levels[i][idx[i]];
        break;
      }
      idx[i] = 0;
      item_price[i] = levels[i][0];
    }
  }

  std::fill(idx.begin(), idx.end(), 0);
  for (long rank = 0; rank < points; ++rank) {
    for (int i = 0; i < n; ++i) {
      for (int up = idx[i] + 1; up < static_cast<int>(levels[i].size()); ++up) {
        long raised_rank = rank + (up - idx[i]) * stride[i];
        const std::vector<std::uint32_t>& before = demands[rank];
        const std::vector<std::uint32_t>& after = demands[raised_rank];
        for (std::uint32_t x : before) {
          std::uint32_t keep = x & ~(std::uint32_t(1) << i);
          bool retained = false;
          for (std::uint32_t y : after)
            if ((y & keep) == keep) {
              retained = true;
              break;
            }
          if (!retained) {
            GridWitness w;
            w.level_idx = idx;
            w.item = i;
            w.raised_idx = up;
            w.mask = x;
            return w;
          }
        }
      }
    }
    for (int i = n - 1; i >= 0; --i) {
      if (++idx[i] < static_cast<int>(levels[i].size())) break;
      idx[i] = 0;
    }
  }
  return std::nullopt;
}

// ---- exact hypercube substitutes scan ----

template <class T>
std::optional<ExactGsWitness> scan_gs_exact(const std::vector<T>& val, int n) {
  const std::uint32_t space = std::uint32_t(1) << n;
  for (std::uint32_t x = 0; x < space; ++x) {
    for (std::uint32_t y = 0; y < space; ++y) {
      std::uint32_t only_x = x & ~y;
      if (!only_x) continue;
      T lhs = val[x] + val[y];
      for (int i = 0; i < n; ++i) {
        if (!(only_x >> i & 1)) continue;
        std::uint32_t bit_i = std::uint32_t(1) << i;
        T best = val[x ^ bit_i] + val[y | bit_i];
        std::uint32_t only_y = y & ~x;
        for (int j = 0; j < n; ++j) {
          if (!(only_y >> j & 1)) continue;
          std::uint32_t bit_j = std::uint32_t(1) << j;
          T cand = val[(x ^ bit_i) | bit_j] + val[(y | bit_i) ^ bit_j];
          if (cand > best) best = cand;
        }
        if (lhs > best) {
          ExactGsWitness w;
          w.set_x = x;
          w.set_y = y;
          w.item = i;
          return w;
        }
      }
    }
  }
  return std::nullopt;
}

std::vector<Rat> point_prices(const std::vector<std::vector<Rat>>& levels,
                              const std::vector<int>& idx) {
  std::vector<Rat> p;
  for (std::size_t i = 0; i < levels.size(); ++i) p.push_back(levels[i][idx[i]]);
  return p;
}

}  // namespace

BinaryValuation binary_expansion(const ValuationTable& table, int max_items) {
  std::vector<int> cap(table.num_goods, 0);
  for (const auto& [bundle, v] : table.values) {
    for (int g = 0; g < table.num_goods; ++g) {
      if (bundle[g] < 0)
        throw domain_error("bundle " + bundle_to_string(bundle) +
                           " has a negative quantity; expansion needs "
                           "nonnegative tables");
      cap[g] = std::max(cap[g], bundle[g]);
    }
  }
  int total = std::accumulate(cap.begin(), cap.end(), 0);
  if (total > max_items)
    throw size_error("expansion needs " + std::to_string(total) +
                     " items, limit is " + std::to_string(max_items));

  BinaryValuation bv;
  bv.num_items = total;
  std::vector<int> offset(table.num_goods, 0);
  for (int g = 0; g < table.num_goods; ++g) {
    offset[g] = static_cast<int>(bv.item_label.size());
    for (int c = 1; c <= cap[g]; ++c) bv.item_label.emplace_back(g + 1, c);
  }
  bv.value.assign(std::size_t(1) << total, std::nullopt);
  for (std::uint32_t mask = 0; mask < (std::uint32_t(1) << total); ++mask) {
    Bundle counts(table.num_goods, 0);
    for (int g = 0; g < table.num_goods; ++g)
      counts[g] = std::popcount(mask >> offset[g] & ((1u << cap[g]) - 1));
    auto it = table.values.find(counts);
    if (it != table.values.end()) bv.value[mask] = it->second;
  }
  return bv;
}

long PriceGrid::num_points() const {
  long out = 1;
  for (const auto& l : levels) {
    if (l.empty()) return 0;
    if (out > std::numeric_limits<long>::max() / static_cast<long>(l.size()))
      return std::numeric_limits<long>::max();
    out *= static_cast<long>(l.size());
  }
  return out;
}

PriceGrid default_grid(const BinaryValuation& bv) {
  std::optional<Rat> min_marg, max_marg, min_val, max_val;
  const std::uint32_t space = std::uint32_t(1) << bv.num_items;
  for (std::uint32_t mask = 0; mask < space; ++mask) {
    if (!bv.in_domain(mask)) continue;
    const Rat& v = *bv.value[mask];
    if (!min_val || v < *min_val) min_val = v;
    if (!max_val || v > *max_val) max_val = v;
    for (int i = 0; i < bv.num_items; ++i) {
      if (!(mask >> i & 1)) continue;
      std::uint32_t without = mask ^ (std::uint32_t(1) << i);
      if (!bv.in_domain(without)) continue;
      Rat marg = v - *bv.value[without];
      if (!min_marg || marg < *min_marg) min_marg = marg;
      if (!max_marg || marg > *max_marg) max_marg = marg;
    }
  }
  if (!min_val) throw input_error("empty valuation domain");
  // Levels must reach past every marginal so demand can fall anywhere between
  // keeping and dropping an item; value span alone is not wide enough.
  Rat lo = *min_val - 1, hi = *max_val + 1;
  if (min_marg) {
    lo = std::min(lo, Rat(*min_marg - make_rat(1, 2)));
    hi = std::max(hi, Rat(*max_marg + make_rat(1, 2)));
  }
  PriceGrid grid;
  grid.levels.assign(bv.num_items, half_integer_range(lo, hi));
  return grid;
}

std::optional<SubstitutesWitness> check_binary_substitutes(
    const BinaryValuation& bv, const PriceGrid& grid) {
  if (static_cast<int>(grid.levels.size()) != bv.num_items)
    throw input_error("grid has " + std::to_string(grid.levels.size()) +
                      " item level lists, valuation has " +
                      std::to_string(bv.num_items) + " items");
  long points = grid.num_points();
  if (points == 0) throw input_error("grid has an empty level list");
  if (points > 1000000 ||
      points * (long(1) << bv.num_items) > (long(1) << 26))
    throw size_error("grid too fine: " + std::to_string(points) + " points");

  // One flat list for joint scaling: all values, then all levels.
  std::vector<Rat> flat;
  for (const auto& v : bv.value)
    if (v) flat.push_back(*v);
  for (const auto& l : grid.levels) flat.insert(flat.end(), l.begin(), l.end());
  std::optional<std::vector<long long>> scaled =
      scale_to_int(flat, bv.num_items + 1);

  std::optional<GridWitness> raw;
  if (scaled) {
    std::vector<std::optional<long long>> val(bv.value.size());
    std::size_t at = 0;
    for (std::size_t m = 0; m < bv.value.size(); ++m)
      if (bv.value[m]) val[m] = (*scaled)[at++];
    std::vector<std::vector<long long>> levels;
    for (const auto& l : grid.levels) {
      levels.emplace_back(scaled->begin() + at, scaled->begin() + at + l.size());
      at += l.size();
    }
    raw = scan_substitutes(val, levels);
  } else {
    raw = scan_substitutes(bv.value, grid.levels);
  }
  if (!raw) return std::nullopt;

  // Confirm the witness with plain rational arithmetic before reporting.
  std::vector<Rat> p = point_prices(grid.levels, raw->level_idx);
  std::vector<int> raised_idx = raw->level_idx;
  raised_idx[raw->item] = raw->raised_idx;
  std::vector<Rat> p2 = point_prices(grid.levels, raised_idx);
  std::vector<std::uint32_t> before = grid_demand(bv.value, p);
  std::vector<std::uint32_t> after = grid_demand(bv.value, p2);
  std::uint32_t keep = raw->mask & ~(std::uint32_t(1) << raw->item);
  bool x_demanded =
      std::find(before.begin(), before.end(), raw->mask) != before.end();
  bool retained = std::any_of(after.begin(), after.end(), [&](std::uint32_t y) {
    return (y & keep) == keep;
  });
  if (!x_demanded || retained)
    throw std::logic_error("grid scan witness failed re-verification");

  SubstitutesWitness w;
  w.price = p;
  w.raised = p2;
  w.bundle.assign(bv.num_items, 0);
  for (int i = 0; i < bv.num_items; ++i) w.bundle[i] = raw->mask >> i & 1;
  std::ostringstream detail;
  detail << "raising item " << raw->item << " from " << format_rat(p[raw->item])
         << " to " << format_rat(p2[raw->item]) << " orphans "
         << mask_to_string(bv, raw->mask) << ": no demanded bundle keeps "
         << mask_to_string(bv, keep);
  w.detail = detail.str();
  return w;
}

std::optional<ExactGsWitness> check_gross_substitutes_exact(
    const BinaryValuation& bv) {
  const std::uint32_t space = std::uint32_t(1) << bv.num_items;
  if (bv.num_items > 14)
    throw size_error("exact check limited to 14 items, got " +
                     std::to_string(bv.num_items));
  for (std::uint32_t mask = 0; mask < space; ++mask)
    if (!bv.in_domain(mask))
      throw domain_error("exact check needs the full hypercube domain; " +
                         mask_to_string(bv, mask) + " is missing");

  std::vector<Rat> flat;
  for (const auto& v : bv.value) flat.push_back(*v);
  std::optional<std::vector<long long>> scaled = scale_to_int(flat, 4);
  std::optional<ExactGsWitness> raw =
      scaled ? scan_gs_exact(*scaled, bv.num_items)
             : scan_gs_exact(flat, bv.num_items);
  if (!raw) return std::nullopt;

  // Re-verify in rational arithmetic.
  auto v = [&](std::uint32_t m) { return *bv.value[m]; };
  std::uint32_t x = raw->set_x, y = raw->set_y;
  std::uint32_t bit_i = std::uint32_t(1) << raw->item;
  Rat best = v(x ^ bit_i) + v(y | bit_i);
  for (int j = 0; j < bv.num_items; ++j)
    if ((y & ~x) >> j & 1) {
      std::uint32_t bit_j = std::uint32_t(1) << j;
      Rat cand = v((x ^ bit_i) | bit_j) + v((y | bit_i) ^ bit_j);
      if (cand > best) best = cand;
    }
  if (v(x) + v(y) <= best)
    throw std::logic_error("exchange witness failed re-verification");

  std::ostringstream detail;
  detail << "exchange fails for X=" << mask_to_string(bv, x)
         << ", Y=" << mask_to_string(bv, y) << ", moving item " << raw->item
         << ": " << format_rat(v(x) + v(y)) << " > " << format_rat(best);
  raw->detail = detail.str();
  return raw;
}

PropertyReport check_strong_substitutes(const ValuationTable& table,
                                        const std::vector<Rat>& levels) {
  BinaryValuation bv = binary_expansion(table);
  PriceGrid grid;
  if (levels.empty()) {
    grid = default_grid(bv);
  } else {
    std::vector<Rat> sorted = levels;
    std::sort(sorted.begin(), sorted.end());
    grid.levels.assign(bv.num_items, sorted);
  }
  PropertyReport report;
  if (bv.num_items == 0) return report;  // only the empty bundle, nothing to move
  std::optional<SubstitutesWitness> w = check_binary_substitutes(bv, grid);
  if (w) {
    report.holds = false;
    report.detail = w->detail;
  }
  return report;
}

DemandOracle::DemandOracle(ValuationTable table) : table_(std::move(table)) {
  if (table_.values.empty()) throw input_error("empty valuation table");
  for (const auto& [bundle, v] : table_.values)
    if (static_cast<int>(bundle.size()) != table_.num_goods)
      throw input_error("bundle " + bundle_to_string(bundle) +
                        " does not match the table's good count");
}

DemandResult DemandOracle::demand(const PriceVector& p) const {
  if (static_cast<int>(p.size()) != table_.num_goods)
    throw input_error("price has " + std::to_string(p.size()) +
                      " entries, table has " + std::to_string(table_.num_goods) +
                      " goods");
  DemandResult result;
  bool first = true;
  for (const auto& [bundle, v] : table_.values) {
    Rat u = v - dot(p, bundle);
    if (first || u > result.indirect_utility) {
      result.indirect_utility = u;
      result.demand.clear();
      first = false;
    }
    if (u == result.indirect_utility) result.demand.push_back(bundle);
  }
  return result;
}

bool DemandOracle::demanded(const PriceVector& p, const Bundle& q) const {
  auto it = table_.values.find(q);
  if (it == table_.values.end()) return false;
  Rat u = it->second - dot(p, q);
  for (const auto& [bundle, v] : table_.values)
    if (v - dot(p, bundle) > u) return false;
  return true;
}

std::vector<Bundle> min_size_demand(const DemandResult& result) {
  std::vector<Bundle> out;
  std::optional<long long> best;
  for (const Bundle& q : result.demand) {
    long long size = std::accumulate(q.begin(), q.end(), 0LL);
    if (!best || size < *best) {
      best = size;
      out.clear();
    }
    if (size == *best) out.push_back(q);
  }
  return out;
}

std::vector<std::pair<int, int>> valid_swap_pairs(const DemandOracle& oracle,
                                                  const PriceVector& p,
                                                  const Bundle& q,
                                                  const Bundle& r) {
  if (!oracle.demanded(p, q))
    throw precondition_error("bundle " + bundle_to_string(q) +
                             " is not demanded at " + price_to_string(p));
  if (!oracle.demanded(p, r))
    throw precondition_error("bundle " + bundle_to_string(r) +
                             " is not demanded at " + price_to_string(p));
  std::vector<std::pair<int, int>> out;
  for (int i : support_plus(q, r)) {
    for (int j : support_plus(r, q)) {
      Bundle q_swap = q, r_swap = r;
      --q_swap[i - 1], ++q_swap[j - 1];
      ++r_swap[i - 1], --r_swap[j - 1];
      if (oracle.demanded(p, q_swap) && oracle.demanded(p, r_swap))
        out.emplace_back(i, j);
    }
  }
  return out;
}

int ExchangeCorrespondence::degree_left(int good) const {
  int d = 0;
  for (const auto& [i, j] : pairs) d += i == good;
  return d;
}

int ExchangeCorrespondence::degree_right(int good) const {
  int d = 0;
  for (const auto& [i, j] : pairs) d += j == good;
  return d;
}

std::optional<ExchangeCorrespondence> find_correspondence(
    const std::vector<std::pair<int, int>>& candidates, const Bundle& q,
    const Bundle& r) {
  std::vector<int> left, right;
  for (int i : support_plus(q, r)) left.push_back(i);
  for (int j : support_plus(r, q)) right.push_back(j);

  // Degree-window selection as a circulation: hub -> good i (1..surplus),
  // candidate arcs (0..1), good j -> hub (1..deficit).
  FlowNetwork net;
  int hub = net.add_vertex("hub");
  std::map<int, int> left_vertex, right_vertex;
  for (int i : left) {
    left_vertex[i] = net.add_vertex("q+" + std::to_string(i));
    net.add_arc(hub, left_vertex[i], 1, q[i - 1] - r[i - 1]);
  }
  for (int j : right) {
    right_vertex[j] = net.add_vertex("r+" + std::to_string(j));
    net.add_arc(right_vertex[j], hub, 1, r[j - 1] - q[j - 1]);
  }
  std::vector<std::pair<int, int>> arc_pair;
  std::vector<int> arc_id;
  for (const auto& [i, j] : candidates) {
    if (!left_vertex.count(i) || !right_vertex.count(j))
      throw input_error("candidate pair (" + std::to_string(i) + "," +
                        std::to_string(j) + ") outside the supports");
    arc_id.push_back(net.add_arc(left_vertex[i], right_vertex[j], 0, 1));
    arc_pair.emplace_back(i, j);
  }
  FeasibilityResult feas = feasible_circulation(net);
  if (!feas.feasible()) return std::nullopt;
  ExchangeCorrespondence sigma;
  for (std::size_t k = 0; k < arc_id.size(); ++k)
    if ((*feas.flow)[arc_id[k]] == 1) sigma.pairs.push_back(arc_pair[k]);
  std::sort(sigma.pairs.begin(), sigma.pairs.end());
  return sigma;
}

PropertyReport verify_correspondence(const DemandOracle& oracle,
                                     const PriceVector& p, const Bundle& q,
                                     const Bundle& r,
                                     const ExchangeCorrespondence& sigma) {
  PropertyReport report;
  std::vector<std::pair<int, int>> valid = valid_swap_pairs(oracle, p, q, r);
  std::ostringstream detail;
  for (const auto& pair : sigma.pairs) {
    if (std::find(valid.begin(), valid.end(), pair) == valid.end()) {
      report.holds = false;
      detail << "pair (" << pair.first << "," << pair.second
             << ") is not a valid swap\n";
    }
  }
  for (int i : support_plus(q, r)) {
    int d = sigma.degree_left(i);
    if (d < 1 || d > q[i - 1] - r[i - 1]) {
      report.holds = false;
      detail << "good " << i << " covered " << d << " times, window [1,"
             << q[i - 1] - r[i - 1] << "]\n";
    }
  }
  for (int j : support_plus(r, q)) {
    int d = sigma.degree_right(j);
    if (d < 1 || d > r[j - 1] - q[j - 1]) {
      report.holds = false;
      detail << "good " << j << " covered " << d << " times, window [1,"
             << r[j - 1] - q[j - 1] << "]\n";
    }
  }
  for (const auto& [i, j] : sigma.pairs) {
    if (q[i - 1] - r[i - 1] <= 0 || r[j - 1] - q[j - 1] <= 0) {
      report.holds = false;
      detail << "pair (" << i << "," << j << ") outside the supports\n";
    }
  }
  report.detail = detail.str();
  return report;
}

std::optional<ExchangeabilityWitness> check_strong_exchangeability(
    const DemandOracle& oracle, const PriceVector& p) {
  std::vector<Bundle> mins = min_size_demand(oracle.demand(p));
  for (const Bundle& q : mins) {
    for (const Bundle& r : mins) {
      if (q == r) continue;
      std::vector<std::pair<int, int>> candidates =
          valid_swap_pairs(oracle, p, q, r);
      if (!find_correspondence(candidates, q, r)) {
        ExchangeabilityWitness w;
        w.price = p;
        w.q = q;
        w.r = r;
        std::ostringstream detail;
        detail << "no correspondence for " << bundle_to_string(q) << " vs "
               << bundle_to_string(r) << "; valid swaps:";
        for (const auto& [i, j] : candidates)
          detail << " (" << i << "," << j << ")";
        w.detail = detail.str();
        return w;
      }
    }
  }
  return std::nullopt;
}

std::optional<ExchangeabilityWitness> check_exchangeability_bijection(
    const DemandOracle& oracle, const PriceVector& p) {
  for (const auto& [bundle, v] : oracle.table().values)
    for (int x : bundle)
      if (x != 0 && x != 1)
        throw domain_error("bijection check needs 0/1 bundles, table has " +
                           bundle_to_string(bundle));
  std::vector<Bundle> mins = min_size_demand(oracle.demand(p));
  for (const Bundle& q : mins) {
    for (const Bundle& r : mins) {
      if (q == r) continue;
      std::vector<int> only_q, only_r;
      for (int i : support_plus(q, r)) only_q.push_back(i);
      for (int j : support_plus(r, q)) only_r.push_back(j);
      if (only_q.size() != only_r.size())
        throw std::logic_error("equal-size bundles with unequal swap sets");
      if (only_q.size() > 8)
        throw size_error("bijection search limited to 8 swapped items");
      std::vector<std::pair<int, int>> valid =
          valid_swap_pairs(oracle, p, q, r);
      auto is_valid = [&](int i, int j) {
        return std::find(valid.begin(), valid.end(), std::make_pair(i, j)) !=
               valid.end();
      };
      std::vector<int> perm(only_r.size());
      std::iota(perm.begin(), perm.end(), 0);
      bool matched = false;
      do {
        bool all = true;
        for (std::size_t k = 0; k < only_q.size() && all; ++k)
          all = is_valid(only_q[k], only_r[perm[k]]);
        matched = all;
      } while (!matched && std::next_permutation(perm.begin(), perm.end()));
      if (!matched) {
        ExchangeabilityWitness w;
        w.price = p;
        w.q = q;
        w.r = r;
        w.detail = "no bijection of valid swaps for " + bundle_to_string(q) +
                   " vs " + bundle_to_string(r);
        return w;
      }
    }
  }
  return std::nullopt;
}

SigmaConstruction construct_sigma_from_flows(const Engine& engine,
                                             const PriceVector& p,
                                             const Bundle& q, const Bundle& r) {
  DemandResult demand = engine.demand_set(p);
  std::vector<Bundle> mins = min_size_demand(demand);
  auto is_min = [&](const Bundle& b) {
    return std::find(mins.begin(), mins.end(), b) != mins.end();
  };
  if (!is_min(q))
    throw precondition_error("bundle " + bundle_to_string(q) +
                             " is not a minimum-size demanded bundle");
  if (!is_min(r))
    throw precondition_error("bundle " + bundle_to_string(r) +
                             " is not a minimum-size demanded bundle");

  SigmaConstruction out;
  std::optional<Circulation> fq = engine.optimal_circulation(p, q);
  std::optional<Circulation> fr = engine.optimal_circulation(p, r);
  if (!fq || !fr)
    throw std::logic_error("demanded bundle without an optimal circulation");
  out.flow_q = std::move(*fq);
  out.flow_r = std::move(*fr);

  Circulation diff(out.flow_q.size());
  for (std::size_t a = 0; a < diff.size(); ++a)
    diff[a] = out.flow_q[a] - out.flow_r[a];
  out.cycles = decompose_conformal(engine.compiled().network, diff);

  for (const CycleFlow& cycle : out.cycles) {
    int from = 0, to = 0;
    for (int g = 1; g <= engine.num_goods(); ++g) {
      int f = cycle.flow_on(engine.compiled().root_arc_of_good[g - 1]);
      if (f == +1) from = g;
      if (f == -1) to = g;
    }
    if (from && to) out.sigma.pairs.emplace_back(from, to);
  }
  std::sort(out.sigma.pairs.begin(), out.sigma.pairs.end());
  return out;
}

}  // namespace am
