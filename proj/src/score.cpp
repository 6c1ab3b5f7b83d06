#include "govpav/score.hpp"

#include <limits>

#include "govpav/error.hpp"

namespace govpav {

Score::Score(std::int64_t numerator, std::int64_t denominator) {
  if (denominator == 0) throw Error(ErrorKind::InconsistentInput, "zero denominator");
  Integer num(numerator), den(denominator);
  if (den < 0) {
    num = -num;
    den = -den;
  }
  value_ = Rational(num, den);
}

Score Score::harmonic_weight(std::uint64_t satisfaction) {
  return Score(Rational(Integer(1), Integer(satisfaction) + 1));
}

Score Score::harmonic_number(std::uint64_t t) {
  Rational sum(0);
  for (std::uint64_t i = 1; i <= t; ++i) sum += Rational(Integer(1), Integer(i));
  return Score(std::move(sum));
}

Score operator/(const Score& a, const Score& b) {
  if (b.is_zero()) throw Error(ErrorKind::DegenerateInstance, "division by zero score");
  return Score(Score::Rational(a.value_ / b.value_));
}

std::string Score::to_string() const {
  return numerator().str() + "/" + denominator().str();
}

std::optional<std::int64_t> to_int64(const Score::Integer& v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
    return std::nullopt;
  return v.convert_to<std::int64_t>();
}

}  // namespace govpav
