#include "rideshare/rational.hpp"

#include <limits>
#include <numeric>
#include <stdexcept>

namespace rideshare {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

Rational Rational::make(__int128 num, __int128 den) {
  if (den == 0) throw std::domain_error("rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  __int128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  constexpr __int128 lo = std::numeric_limits<std::int64_t>::min();
  constexpr __int128 hi = std::numeric_limits<std::int64_t>::max();
  if (num < lo || num > hi || den > hi) {
    throw std::overflow_error("rational: reduced value exceeds 64 bits");
  }
  Rational r;
  r.num_ = static_cast<std::int64_t>(num);
  r.den_ = static_cast<std::int64_t>(den);
  return r;
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw std::domain_error("rational: division by zero");
  return Rational::make(Rational::wide(a.num_) * b.den_, Rational::wide(a.den_) * b.num_);
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational abs(const Rational& r) { return r.is_negative() ? -r : r; }

Rational harmonic_number(int k) {
  if (k < 0) throw std::domain_error("harmonic_number: negative order");
  Rational h = 0;
  for (int i = 1; i <= k; ++i) h += Rational(1, i);
  return h;
}

std::int64_t lcm_up_to(int k) {
  if (k < 1) return 1;
  std::int64_t l = 1;
  for (int i = 2; i <= k; ++i) l = std::lcm(l, static_cast<std::int64_t>(i));
  return l;
}

}  // namespace rideshare
