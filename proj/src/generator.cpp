#include "am/generator.hpp"

#include <algorithm>

#include "am/errors.hpp"

namespace am {

int Rng::uniform(int lo, int hi) {
  if (lo > hi) throw input_error("empty range for uniform draw");
  std::uint64_t span = static_cast<std::uint64_t>(hi) - lo + 1;
  // Rejection sampling on the raw stream keeps draws unbiased and portable.
  std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t raw;
  do raw = next();
  while (raw >= limit);
  return lo + static_cast<int>(raw % span);
}

Rat Rng::uniform_half(int lo, int hi) {
  return make_rat(uniform(2 * lo, 2 * hi), 2);
}

namespace {

void shuffle_ids(std::vector<int>& ids, Rng& rng) {
  for (int i = static_cast<int>(ids.size()) - 1; i > 0; --i)
    std::swap(ids[i], ids[rng.uniform(0, i)]);
}

// Adds the constraints of one laminar tree over `ids`: the set itself, then a
// random partition whose parts are recursed into (sometimes without adding
// the part itself, so not every subset becomes a node).
void grow_tree(AssignmentMessage& msg, int tree, std::vector<int> ids, Rng& rng,
               const RandomMessageParams& params, bool add_self) {
  std::sort(ids.begin(), ids.end());
  if (add_self) {
    int lo = rng.uniform(params.lower_min, 0);
    int hi = rng.uniform(0, params.upper_max);
    msg.constraints.push_back({tree, ids, lo, hi});
  }
  if (ids.size() == 1) return;
  std::vector<int> pool = ids;
  shuffle_ids(pool, rng);
  std::size_t at = 0;
  while (at < pool.size()) {
    std::size_t take = static_cast<std::size_t>(
        rng.uniform(1, static_cast<int>(pool.size() - at)));
    // Parts of the whole set would recreate it; cap to keep progress.
    if (take == pool.size() && at == 0 && pool.size() > 1) take = pool.size() - 1;
    std::vector<int> part(pool.begin() + at, pool.begin() + at + take);
    at += take;
    if (part.size() == 1) {
      grow_tree(msg, tree, part, rng, params, true);
    } else {
      bool as_node = rng.uniform(0, 1) == 1;
      grow_tree(msg, tree, part, rng, params, as_node);
    }
  }
}

}  // namespace

AssignmentMessage random_message(std::uint64_t seed,
                                 const RandomMessageParams& params) {
  if (params.num_goods < 2)
    throw input_error("need at least 2 goods, got " +
                      std::to_string(params.num_goods));
  if (params.num_vars < params.num_goods)
    throw input_error("need at least one variable per good");
  if (params.lower_min > 0 || params.upper_max < 0)
    throw input_error("bound ranges must admit 0");

  Rng rng(seed);
  AssignmentMessage msg;
  msg.num_goods = params.num_goods;
  for (int j = 1; j <= params.num_vars; ++j) {
    // First n variables cover the goods; the rest draw theirs at random.
    int good = j <= params.num_goods ? j : rng.uniform(1, params.num_goods);
    Rat value = make_rat(rng.uniform(params.value_lo, params.value_hi));
    msg.variables.push_back({j, good, value});
  }
  // The recursion reaches every element as a singleton part, so each tree
  // ends up with its root, all singletons and a laminar middle layer.
  grow_tree(msg, 0, msg.all_vars(), rng, params, true);
  for (int g = 1; g <= params.num_goods; ++g)
    grow_tree(msg, g, msg.vars_of_good(g), rng, params, true);
  return msg;
}

PriceVector random_price(Rng& rng, int num_goods, int lo, int hi) {
  PriceVector p;
  for (int g = 0; g < num_goods; ++g) p.push_back(rng.uniform_half(lo, hi));
  return p;
}

}  // namespace am
