#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace vne {

// Resource quantity (CPU units, bandwidth units, coordinates) with exactly
// two decimal digits, stored as an integer count of hundredths. Keeping the
// representation integral makes allocate/release pairs restore residuals
// bit-exactly, which the conservation invariants rely on.
class Amount {
 public:
  constexpr Amount() = default;

  static constexpr Amount from_centi(std::int64_t centi) {
    Amount a;
    a.centi_ = centi;
    return a;
  }
  static constexpr Amount from_units(std::int64_t units) {
    return from_centi(units * 100);
  }
  // Parses "123" or "123.45" (at most two fractional digits). Throws
  // std::invalid_argument on anything else, including negative values.
  static Amount parse(std::string_view text);

  constexpr std::int64_t centi() const { return centi_; }
  double value() const { return static_cast<double>(centi_) / 100.0; }
  bool is_zero() const { return centi_ == 0; }
  bool is_negative() const { return centi_ < 0; }

  // Renders with exactly two fractional digits, e.g. "75.00".
  std::string str() const;

  constexpr Amount& operator+=(Amount o) {
    centi_ += o.centi_;
    return *this;
  }
  constexpr Amount& operator-=(Amount o) {
    centi_ -= o.centi_;
    return *this;
  }
  friend constexpr Amount operator+(Amount a, Amount b) { return from_centi(a.centi_ + b.centi_); }
  friend constexpr Amount operator-(Amount a, Amount b) { return from_centi(a.centi_ - b.centi_); }
  friend constexpr Amount operator*(Amount a, std::int64_t k) { return from_centi(a.centi_ * k); }
  auto operator<=>(const Amount&) const = default;

 private:
  std::int64_t centi_ = 0;
};

}  // namespace vne
