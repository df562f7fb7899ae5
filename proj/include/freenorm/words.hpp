#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "freenorm/dyadic.hpp"

namespace freenorm {

/// A point of N_omega: a finitely supported sequence of naturals. Stored
/// without trailing zeros, so the all-zero point is the empty sequence.
class Point {
 public:
  Point() = default;
  explicit Point(std::vector<std::uint64_t> entries);
  Point(std::initializer_list<std::uint64_t> entries) : Point(std::vector<std::uint64_t>(entries)) {}

  std::span<const std::uint64_t> entries() const noexcept { return entries_; }
  /// Least n with the point in N_n.
  std::size_t support() const noexcept { return entries_.size(); }
  bool is_zero() const noexcept { return entries_.empty(); }
  /// x(i), zero past the support.
  std::uint64_t operator[](std::size_t i) const noexcept { return i < entries_.size() ? entries_[i] : 0; }

  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;

  /// Comma-separated entries; the zero point prints as the empty string.
  std::string to_string() const;
  static Point parse(std::string_view text);

 private:
  std::vector<std::uint64_t> entries_;
};

/// pi_n: zero every coordinate at index >= n.
Point project(const Point& x, std::size_t n);

class Letter {
 public:
  enum class Kind : std::uint8_t { Identity, Pos, Neg };

  Letter() = default;
  static Letter identity() { return Letter(); }
  static Letter pos(Point p) { return Letter(Kind::Pos, std::move(p)); }
  static Letter neg(Point p) { return Letter(Kind::Neg, std::move(p)); }

  Kind kind() const noexcept { return kind_; }
  bool is_identity() const noexcept { return kind_ == Kind::Identity; }
  const Point& point() const noexcept { return point_; }
  Letter inverse() const;

  friend bool operator==(const Letter&, const Letter&) = default;
  friend auto operator<=>(const Letter&, const Letter&) = default;

  /// `e`, `x:1,0,2` or `X:1,0,2`.
  std::string to_string() const;
  static Letter parse(std::string_view text);

 private:
  Letter(Kind kind, Point p) : kind_(kind), point_(std::move(p)) {}

  Kind kind_ = Kind::Identity;
  Point point_;
};

/// The Baire ultrametric on N_omega extended to letters: points of the same
/// sign are 2^-n apart where n is the first disagreeing coordinate; every
/// other pair of distinct letters is at distance 1.
Dyadic ultrametric_d(const Letter& a, const Letter& b);

/// A nonempty word over letters. The identity of the free group is the
/// one-letter word `e`, never the empty word.
class Word {
 public:
  explicit Word(std::vector<Letter> letters);
  Word(std::initializer_list<Letter> letters) : Word(std::vector<Letter>(letters)) {}
  static Word identity() { return Word({Letter::identity()}); }

  std::span<const Letter> letters() const noexcept { return letters_; }
  std::size_t size() const noexcept { return letters_.size(); }
  const Letter& operator[](std::size_t i) const { return letters_[i]; }

  bool is_identity() const noexcept { return letters_.size() == 1 && letters_[0].is_identity(); }
  bool is_irreducible() const;

  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word&, const Word&) = default;

  /// Letters separated by single spaces.
  std::string to_string() const;
  /// Whitespace-separated letters; errors report the offending token offset.
  static Word parse(std::string_view text);

 private:
  std::vector<Letter> letters_;
};

/// The unique irreducible word obtained by cancelling x x^-1 and dropping e.
Word reduce(const Word& w);
/// Plain concatenation, no reduction.
Word concat(const Word& w, const Word& v);
Word group_multiply(const Word& w, const Word& v);
Word invert(const Word& w);

struct PointHash {
  std::size_t operator()(const Point& p) const noexcept;
};
struct LetterHash {
  std::size_t operator()(const Letter& l) const noexcept;
};
struct WordHash {
  std::size_t operator()(const Word& w) const noexcept;
};

}  // namespace freenorm

namespace freenorm {

/// Every point with support <= max_support and entries <= max_entry, in
/// graded order of (support, entries).
std::vector<Point> points_up_to(std::size_t max_support, std::uint64_t max_entry);

/// e, then x and x^-1 for every point of the pool.
std::vector<Letter> letters_over(std::span<const Point> pool);

/// A uniformly random length in [1, max_length], letters x^+-1 drawn
/// uniformly from the pool, rejection-sampled until irreducible.
Word random_irreducible_word(std::mt19937_64& rng, std::span<const Point> pool, std::size_t max_length);

}  // namespace freenorm
