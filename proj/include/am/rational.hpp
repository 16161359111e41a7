#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

namespace am {

// Exact rational arithmetic. All values, prices and costs in this library are
// mpq_class so that optimality comparisons never depend on a tolerance.
using Rat = mpq_class;

inline Rat make_rat(long num, long den = 1) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

// Parses "a" or "a/b" with optional sign, b > 0 after canonicalization.
std::optional<Rat> parse_rat(const std::string& text);

// Formats as "a" for integers, "a/b" otherwise.
std::string format_rat(const Rat& value);

// true if 2*value is an integer.
bool is_half_integer(const Rat& value);

// All multiples of 1/2 in [lo, hi], ascending.
std::vector<Rat> half_integer_range(const Rat& lo, const Rat& hi);

}  // namespace am
