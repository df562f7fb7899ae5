#pragma once

#include <optional>
#include <string>
#include <vector>

#include "freenorm/dyadic.hpp"

namespace freenorm {

/// Exact piecewise-affine function of one variable over rationals.
///
/// The domain is [lo, hi] or [lo, +inf). Between consecutive knots the
/// function is affine on the open interval; the value at each knot is stored
/// separately, so jump discontinuities are represented exactly. This is the
/// breakpoint oracle behind the "for every r" certifications.
class PiecewiseAffine {
 public:
  struct Affine {
    Rational slope;
    Rational intercept;
    Rational at(const Rational& r) const { return slope * r + intercept; }
  };

  /// Where a sign condition fails: `r` is a concrete abscissa at which the
  /// function has the offending sign.
  struct Witness {
    Rational r;
    Rational value;
  };

  static PiecewiseAffine affine(const Rational& lo, const std::optional<Rational>& hi, const Rational& slope,
                                const Rational& intercept);
  static PiecewiseAffine constant(const Rational& lo, const std::optional<Rational>& hi, const Rational& c) {
    return affine(lo, hi, 0, c);
  }
  /// `left` on [left.lo, m], `right` on [m, right.hi], value at m given.
  static PiecewiseAffine join(const PiecewiseAffine& left, const PiecewiseAffine& right, const Rational& value_at_join);

  const Rational& lo() const noexcept { return knots_.front(); }
  std::optional<Rational> hi() const;
  bool unbounded() const noexcept { return unbounded_; }
  const std::vector<Rational>& knots() const noexcept { return knots_; }
  const std::vector<Affine>& pieces() const noexcept { return pieces_; }
  const std::vector<Rational>& knot_values() const noexcept { return values_; }

  /// Exact value, including at knots.
  Rational operator()(const Rational& r) const;

  friend PiecewiseAffine operator+(const PiecewiseAffine& f, const PiecewiseAffine& g);
  friend PiecewiseAffine operator-(const PiecewiseAffine& f, const PiecewiseAffine& g);
  friend PiecewiseAffine operator*(const Rational& c, const PiecewiseAffine& f);
  friend PiecewiseAffine operator+(const PiecewiseAffine& f, const Rational& c);
  friend PiecewiseAffine min(const PiecewiseAffine& f, const PiecewiseAffine& g);
  friend PiecewiseAffine max(const PiecewiseAffine& f, const PiecewiseAffine& g);

  /// A point where f < 0, or nullopt when f >= 0 on the domain (the left
  /// endpoint is excluded when include_lo is false).
  std::optional<Witness> find_negative(bool include_lo = true) const;
  /// A point where f <= 0, or nullopt when f > 0 on the domain.
  std::optional<Witness> find_nonpositive(bool include_lo = true) const;

 private:
  PiecewiseAffine() = default;

  template <class Op>
  static PiecewiseAffine combine(const PiecewiseAffine& f, const PiecewiseAffine& g, Op op, bool split_crossings);
  std::size_t piece_index_containing(const Rational& a) const;
  std::optional<Witness> find_bad(bool include_lo, bool strict) const;

  std::vector<Rational> knots_;
  std::vector<Rational> values_;
  std::vector<Affine> pieces_;
  bool unbounded_ = false;
};

}  // namespace freenorm
