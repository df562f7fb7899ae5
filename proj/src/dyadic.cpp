#include "freenorm/dyadic.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <limits>

#include "freenorm/error.hpp"

namespace freenorm {
namespace {

constexpr int kMaxFastShift = 62;

bool fits_int64(__int128 v) {
  return v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max();
}

int ctz128(unsigned __int128 v) {
  auto lo = static_cast<std::uint64_t>(v);
  if (lo != 0) return __builtin_ctzll(lo);
  return 64 + __builtin_ctzll(static_cast<std::uint64_t>(v >> 64));
}

BigInt to_big(__int128 v) {
  bool neg = v < 0;
  unsigned __int128 mag = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  BigInt r = static_cast<std::uint64_t>(mag >> 64);
  r <<= 64;
  r |= static_cast<std::uint64_t>(mag);
  return neg ? BigInt(-r) : r;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

BigInt parse_integer(std::string_view s, std::string_view whole) {
  s = trim(s);
  bool neg = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
    throw Error(ErrorCode::ParseError, "malformed dyadic '" + std::string(whole) + "'");
  BigInt v{std::string(s)};
  return neg ? BigInt(-v) : v;
}

}  // namespace

Dyadic Dyadic::normalize(__int128 n, std::int64_t e) {
  Dyadic d;
  if (n == 0) return d;
  if (e < 0) {
    unsigned __int128 mag = n < 0 ? -static_cast<unsigned __int128>(n) : static_cast<unsigned __int128>(n);
    int bits = 0;
    while (bits < 128 && (mag >> bits) != 0) ++bits;
    if (-e > kMaxFastShift || bits - e > 126) return normalize(to_big(n), e);
    n *= static_cast<__int128>(1) << -e;
    e = 0;
  }
  unsigned __int128 mag = n < 0 ? -static_cast<unsigned __int128>(n) : static_cast<unsigned __int128>(n);
  std::int64_t s = std::min<std::int64_t>(ctz128(mag), e);
  n /= static_cast<__int128>(1) << s;
  e -= s;
  d.exp_ = e;
  if (fits_int64(n)) {
    d.small_ = static_cast<std::int64_t>(n);
  } else {
    d.big_ = std::make_shared<const BigInt>(to_big(n));
  }
  return d;
}

Dyadic Dyadic::normalize(BigInt n, std::int64_t e) {
  Dyadic d;
  if (n == 0) return d;
  if (e < 0) {
    n <<= static_cast<unsigned>(-e);
    e = 0;
  }
  BigInt mag = abs(n);
  auto s = std::min<std::int64_t>(static_cast<std::int64_t>(boost::multiprecision::lsb(mag)), e);
  if (s > 0) {
    n >>= static_cast<unsigned>(s);  // exact: low s bits are zero
    e -= s;
  }
  d.exp_ = e;
  if (n >= std::numeric_limits<std::int64_t>::min() && n <= std::numeric_limits<std::int64_t>::max()) {
    d.small_ = static_cast<std::int64_t>(n);
  } else {
    d.big_ = std::make_shared<const BigInt>(std::move(n));
  }
  return d;
}

Dyadic Dyadic::from_integer(const BigInt& integer) { return normalize(integer, 0); }

Dyadic Dyadic::from_parts(const BigInt& numerator, std::int64_t exponent) {
  return normalize(numerator, exponent);
}

Dyadic Dyadic::pow2(std::int64_t k) { return normalize(static_cast<__int128>(1), -k); }

BigInt Dyadic::numerator() const { return big_ ? *big_ : BigInt(small_); }

int Dyadic::sign() const {
  if (big_) return big_->sign();
  return (small_ > 0) - (small_ < 0);
}

Dyadic Dyadic::operator-() const {
  if (big_) return normalize(BigInt(-*big_), exp_);
  return normalize(-static_cast<__int128>(small_), exp_);
}

Dyadic operator+(const Dyadic& a, const Dyadic& b) {
  if (!a.big_ && !b.big_) {
    if (a.exp_ == b.exp_) return Dyadic::normalize(static_cast<__int128>(a.small_) + b.small_, a.exp_);
    const Dyadic& hi = a.exp_ > b.exp_ ? a : b;
    const Dyadic& lo = a.exp_ > b.exp_ ? b : a;
    std::int64_t shift = hi.exp_ - lo.exp_;
    if (shift <= kMaxFastShift) {
      __int128 n = static_cast<__int128>(hi.small_) + static_cast<__int128>(lo.small_) * (static_cast<__int128>(1) << shift);
      return Dyadic::normalize(n, hi.exp_);
    }
  }
  std::int64_t e = std::max(a.exp_, b.exp_);
  BigInt na = a.numerator() << static_cast<unsigned>(e - a.exp_);
  BigInt nb = b.numerator() << static_cast<unsigned>(e - b.exp_);
  return Dyadic::normalize(BigInt(na + nb), e);
}

Dyadic operator*(const Dyadic& a, const Dyadic& b) {
  if (!a.big_ && !b.big_) return Dyadic::normalize(static_cast<__int128>(a.small_) * b.small_, a.exp_ + b.exp_);
  return Dyadic::normalize(BigInt(a.numerator() * b.numerator()), a.exp_ + b.exp_);
}

Dyadic Dyadic::times_pow2(std::int64_t k) const {
  if (big_) return normalize(*big_, exp_ - k);
  return normalize(static_cast<__int128>(small_), exp_ - k);
}

bool operator==(const Dyadic& a, const Dyadic& b) {
  if (a.exp_ != b.exp_) return false;
  if (!a.big_ && !b.big_) return a.small_ == b.small_;
  if (!a.big_ || !b.big_) return false;
  return *a.big_ == *b.big_;
}

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
  if (!a.big_ && !b.big_) {
    if (a.exp_ == b.exp_) return a.small_ <=> b.small_;
    std::int64_t shift = a.exp_ - b.exp_;
    if (shift > 0 && shift <= kMaxFastShift)
      return static_cast<__int128>(a.small_) <=> static_cast<__int128>(b.small_) * (static_cast<__int128>(1) << shift);
    if (shift < 0 && -shift <= kMaxFastShift)
      return static_cast<__int128>(a.small_) * (static_cast<__int128>(1) << -shift) <=> static_cast<__int128>(b.small_);
  }
  std::int64_t e = std::max(a.exp_, b.exp_);
  BigInt na = a.numerator() << static_cast<unsigned>(e - a.exp_);
  BigInt nb = b.numerator() << static_cast<unsigned>(e - b.exp_);
  if (na < nb) return std::strong_ordering::less;
  if (na > nb) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Rational Dyadic::to_rational() const {
  BigInt den = BigInt(1) << static_cast<unsigned>(exp_);
  return Rational(numerator(), den);
}

std::string Dyadic::to_string() const {
  std::string num = big_ ? big_->str() : std::to_string(small_);
  if (exp_ == 0) return num;
  return num + "/2^" + std::to_string(exp_);
}

Dyadic Dyadic::parse(std::string_view text) {
  std::string_view s = trim(text);
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return from_integer(parse_integer(s, text));
  BigInt num = parse_integer(s.substr(0, slash), text);
  std::string_view den = trim(s.substr(slash + 1));
  if (den.size() > 2 && den[0] == '2' && den[1] == '^') {
    BigInt q = parse_integer(den.substr(2), text);
    if (q < 0 || q > std::numeric_limits<std::int32_t>::max())
      throw Error(ErrorCode::ParseError, "dyadic exponent out of range in '" + std::string(text) + "'");
    return from_parts(num, static_cast<std::int64_t>(q));
  }
  BigInt d = parse_integer(den, text);
  if (d <= 0 || (d & (d - 1)) != 0)
    throw Error(ErrorCode::ParseError, "denominator of '" + std::string(text) + "' is not a power of two");
  return from_parts(num, static_cast<std::int64_t>(boost::multiprecision::msb(d)));
}

std::size_t Dyadic::hash() const {
  std::size_t h = big_ ? std::hash<std::string>{}(big_->str()) : std::hash<std::int64_t>{}(small_);
  return h ^ (std::hash<std::int64_t>{}(exp_) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

}  // namespace freenorm
