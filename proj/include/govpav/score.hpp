#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace govpav {

/// Exact rational kept in lowest terms with a positive
/// denominator. Used for every tally quantity so ties are detected exactly.
class Score {
 public:
  using Rational = boost::multiprecision::cpp_rational;
  using Integer = boost::multiprecision::cpp_int;

  Score() = default;
  explicit Score(std::int64_t whole) : value_(whole) {}
  Score(std::int64_t numerator, std::int64_t denominator);
  explicit Score(Rational value) : value_(std::move(value)) {}

  /// 1/(1+s): the weight of a voter who already approves s elected candidates.
  static Score harmonic_weight(std::uint64_t satisfaction);
  /// H(t) = 1 + 1/2 + ... + 1/t, with H(0) = 0.
  static Score harmonic_number(std::uint64_t t);

  Integer numerator() const { return boost::multiprecision::numerator(value_); }
  Integer denominator() const { return boost::multiprecision::denominator(value_); }

  /// "num/den", always with an explicit denominator ("3/1", "0/1").
  std::string to_string() const;
  /// Decimal approximation for display only; never used in comparisons.
  double approx() const { return value_.convert_to<double>(); }

  bool is_zero() const { return value_.is_zero(); }
  const Rational& rational() const noexcept { return value_; }

  Score& operator+=(const Score& o) {
    value_ += o.value_;
    return *this;
  }
  Score& operator-=(const Score& o) {
    value_ -= o.value_;
    return *this;
  }
  friend Score operator+(Score a, const Score& b) { return a += b; }
  friend Score operator-(Score a, const Score& b) { return a -= b; }
  friend Score operator*(const Score& a, const Score& b) { return Score(Rational(a.value_ * b.value_)); }
  friend Score operator/(const Score& a, const Score& b);

  friend bool operator==(const Score& a, const Score& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Score& a, const Score& b) {
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (a.value_ > b.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  Rational value_{0};
};

/// Value of an arbitrary-precision integer when it fits in int64.
std::optional<std::int64_t> to_int64(const Score::Integer& v);

}  // namespace govpav
