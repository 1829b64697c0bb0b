#include "vne/amount.hpp"

#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace vne {

Amount Amount::parse(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty amount");
  std::size_t i = 0;
  std::int64_t units = 0;
  bool any_digit = false;
  while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
    units = units * 10 + (text[i] - '0');
    any_digit = true;
    ++i;
  }
  if (!any_digit) throw std::invalid_argument("bad amount: " + std::string(text));
  std::int64_t centi = units * 100;
  if (i < text.size()) {
    if (text[i] != '.') throw std::invalid_argument("bad amount: " + std::string(text));
    ++i;
    std::size_t digits = 0;
    std::int64_t frac = 0;
    while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
      frac = frac * 10 + (text[i] - '0');
      ++digits;
      ++i;
    }
    if (digits == 0 || digits > 2 || i != text.size())
      throw std::invalid_argument("bad amount: " + std::string(text));
    if (digits == 1) frac *= 10;
    centi += frac;
  }
  return from_centi(centi);
}

std::string Amount::str() const {
  const std::int64_t c = centi_ < 0 ? -centi_ : centi_;
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%s%lld.%02lld", centi_ < 0 ? "-" : "",
                static_cast<long long>(c / 100), static_cast<long long>(c % 100));
  return buf;
}

}  // namespace vne
