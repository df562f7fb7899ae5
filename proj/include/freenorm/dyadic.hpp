#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <ostream>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace freenorm {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Exact rational of the form p / 2^q.
///
/// Canonical form: q >= 0 and p odd unless q == 0. Numerators that fit in 64
/// bits are kept inline; anything larger lives in a shared immutable BigInt,
/// so copies stay cheap either way.
class Dyadic {
 public:
  Dyadic() = default;
  Dyadic(std::int64_t integer) : small_(integer) {}  // NOLINT(google-explicit-constructor)

  static Dyadic from_integer(const BigInt& integer);
  /// numerator / 2^exponent; exponent may be negative.
  static Dyadic from_parts(const BigInt& numerator, std::int64_t exponent);
  /// 2^k for any signed k.
  static Dyadic pow2(std::int64_t k);

  BigInt numerator() const;
  std::int64_t exponent() const noexcept { return exp_; }

  bool is_zero() const noexcept { return !big_ && small_ == 0; }
  int sign() const;

  Dyadic operator-() const;
  friend Dyadic operator+(const Dyadic& a, const Dyadic& b);
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b);
  Dyadic& operator+=(const Dyadic& o) { return *this = *this + o; }
  Dyadic& operator-=(const Dyadic& o) { return *this = *this - o; }
  Dyadic& operator*=(const Dyadic& o) { return *this = *this * o; }

  /// this * 2^k.
  Dyadic times_pow2(std::int64_t k) const;

  friend bool operator==(const Dyadic& a, const Dyadic& b);
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);

  Rational to_rational() const;

  /// `p/2^q`, or a bare integer when q == 0.
  std::string to_string() const;
  /// Accepts `p/2^q`, `p/N` with N a power of two, and bare integers.
  static Dyadic parse(std::string_view text);

  std::size_t hash() const;

 private:
  static Dyadic normalize(__int128 numerator, std::int64_t exponent);
  static Dyadic normalize(BigInt numerator, std::int64_t exponent);

  std::int64_t small_ = 0;
  std::int64_t exp_ = 0;
  std::shared_ptr<const BigInt> big_;
};

inline std::ostream& operator<<(std::ostream& os, const Dyadic& d) { return os << d.to_string(); }

struct DyadicHash {
  std::size_t operator()(const Dyadic& d) const { return d.hash(); }
};

}  // namespace freenorm
