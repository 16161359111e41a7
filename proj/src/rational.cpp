#include "am/rational.hpp"

#include <cctype>

namespace am {

std::optional<Rat> parse_rat(const std::string& text) {
  if (text.empty()) return std::nullopt;
  std::size_t slash = text.find('/');
  std::string num = text.substr(0, slash == std::string::npos ? text.size() : slash);
  std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
  auto is_int = [](const std::string& s, bool allow_sign) {
    std::size_t i = 0;
    if (allow_sign && (s[0] == '-' || s[0] == '+')) i = 1;
    if (i >= s.size()) return false;
    for (; i < s.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
  };
  if (num.empty() || den.empty() || !is_int(num, true) || !is_int(den, false))
    return std::nullopt;
  mpz_class d(den);
  if (d == 0) return std::nullopt;
  Rat r(mpz_class(num), d);
  r.canonicalize();
  return r;
}

std::string format_rat(const Rat& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

bool is_half_integer(const Rat& value) {
  Rat twice = value * 2;
  return twice.get_den() == 1;
}

std::vector<Rat> half_integer_range(const Rat& lo, const Rat& hi) {
  std::vector<Rat> out;
  // ceil(2*lo) .. floor(2*hi) in halves.
  mpz_class two_lo_num = lo.get_num() * 2;
  mpz_class two_hi_num = hi.get_num() * 2;
  mpz_class start, stop;
  mpz_cdiv_q(start.get_mpz_t(), two_lo_num.get_mpz_t(), lo.get_den().get_mpz_t());
  mpz_fdiv_q(stop.get_mpz_t(), two_hi_num.get_mpz_t(), hi.get_den().get_mpz_t());
  for (mpz_class k = start; k <= stop; ++k) {
    Rat r(k, 2);
    r.canonicalize();
    out.push_back(r);
  }
  return out;
}

}  // namespace am
