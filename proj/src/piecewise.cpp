#include "freenorm/piecewise.hpp"

#include <algorithm>

#include "freenorm/error.hpp"

namespace freenorm {

PiecewiseAffine PiecewiseAffine::affine(const Rational& lo, const std::optional<Rational>& hi, const Rational& slope,
                                        const Rational& intercept) {
  PiecewiseAffine f;
  Affine a{slope, intercept};
  f.knots_.push_back(lo);
  f.values_.push_back(a.at(lo));
  if (hi) {
    if (*hi < lo) throw Error(ErrorCode::InvalidArgument, "empty domain");
    if (*hi > lo) {
      f.knots_.push_back(*hi);
      f.values_.push_back(a.at(*hi));
      f.pieces_.push_back(a);
    }
  } else {
    f.unbounded_ = true;
    f.pieces_.push_back(a);
  }
  return f;
}

PiecewiseAffine PiecewiseAffine::join(const PiecewiseAffine& left, const PiecewiseAffine& right,
                                      const Rational& value_at_join) {
  if (left.unbounded_ || left.knots_.back() != right.lo())
    throw Error(ErrorCode::InvalidArgument, "join needs adjacent domains");
  PiecewiseAffine f;
  f.knots_ = left.knots_;
  f.values_ = left.values_;
  f.values_.back() = value_at_join;
  f.pieces_ = left.pieces_;
  f.knots_.insert(f.knots_.end(), right.knots_.begin() + 1, right.knots_.end());
  f.values_.insert(f.values_.end(), right.values_.begin() + 1, right.values_.end());
  f.pieces_.insert(f.pieces_.end(), right.pieces_.begin(), right.pieces_.end());
  f.unbounded_ = right.unbounded_;
  return f;
}

std::optional<Rational> PiecewiseAffine::hi() const {
  if (unbounded_) return std::nullopt;
  return knots_.back();
}

std::size_t PiecewiseAffine::piece_index_containing(const Rational& a) const {
  auto it = std::upper_bound(knots_.begin(), knots_.end(), a);
  return static_cast<std::size_t>(it - knots_.begin()) - 1;
}

Rational PiecewiseAffine::operator()(const Rational& r) const {
  if (r < lo() || (!unbounded_ && r > knots_.back()))
    throw Error(ErrorCode::OutOfRange, "abscissa outside the profile domain");
  auto it = std::lower_bound(knots_.begin(), knots_.end(), r);
  if (it != knots_.end() && *it == r) return values_[static_cast<std::size_t>(it - knots_.begin())];
  return pieces_[static_cast<std::size_t>(it - knots_.begin()) - 1].at(r);
}

namespace {

void require_same_domain(const PiecewiseAffine& f, const PiecewiseAffine& g) {
  if (f.lo() != g.lo() || f.hi() != g.hi()) throw Error(ErrorCode::InvalidArgument, "profiles over different domains");
}

std::vector<Rational> merged_knots(const PiecewiseAffine& f, const PiecewiseAffine& g) {
  std::vector<Rational> out;
  std::set_union(f.knots().begin(), f.knots().end(), g.knots().begin(), g.knots().end(), std::back_inserter(out));
  return out;
}

}  // namespace

template <class Op>
PiecewiseAffine PiecewiseAffine::combine(const PiecewiseAffine& f, const PiecewiseAffine& g, Op op,
                                         bool split_crossings) {
  require_same_domain(f, g);
  std::vector<Rational> knots = merged_knots(f, g);
  PiecewiseAffine out;
  out.unbounded_ = f.unbounded_;
  std::size_t n_pieces = knots.size() - 1 + (f.unbounded_ ? 1 : 0);
  for (std::size_t i = 0; i < knots.size(); ++i) {
    const Rational& a = knots[i];
    out.knots_.push_back(a);
    out.values_.push_back(op(f(a), g(a)));
    if (i >= n_pieces) break;
    const Affine& p = f.pieces_[f.piece_index_containing(a)];
    const Affine& q = g.pieces_[g.piece_index_containing(a)];
    std::optional<Rational> b;
    if (i + 1 < knots.size()) b = knots[i + 1];
    auto sample = [&](const Rational& left, const std::optional<Rational>& right) {
      return right ? Rational((left + *right) / 2) : Rational(left + 1);
    };
    auto pick = [&](const Rational& x) { return op(p.at(x), q.at(x)) == p.at(x) ? p : q; };
    if (!split_crossings) {
      out.pieces_.push_back(op(p, q));
      continue;
    }
    if (p.slope != q.slope) {
      Rational z = (q.intercept - p.intercept) / (p.slope - q.slope);
      if (z > a && (!b || z < *b)) {
        out.pieces_.push_back(pick(sample(a, z)));
        out.knots_.push_back(z);
        out.values_.push_back(p.at(z));
        out.pieces_.push_back(pick(sample(z, b)));
        continue;
      }
    }
    out.pieces_.push_back(pick(sample(a, b)));
  }
  return out;
}

namespace {

struct Sum {
  Rational operator()(const Rational& a, const Rational& b) const { return a + b; }
  PiecewiseAffine::Affine operator()(const PiecewiseAffine::Affine& a, const PiecewiseAffine::Affine& b) const {
    return {a.slope + b.slope, a.intercept + b.intercept};
  }
};
struct Min {
  Rational operator()(const Rational& a, const Rational& b) const { return a < b ? a : b; }
  PiecewiseAffine::Affine operator()(const PiecewiseAffine::Affine& a, const PiecewiseAffine::Affine&) const { return a; }
};
struct Max {
  Rational operator()(const Rational& a, const Rational& b) const { return a < b ? b : a; }
  PiecewiseAffine::Affine operator()(const PiecewiseAffine::Affine& a, const PiecewiseAffine::Affine&) const { return a; }
};

}  // namespace

PiecewiseAffine operator+(const PiecewiseAffine& f, const PiecewiseAffine& g) {
  return PiecewiseAffine::combine(f, g, Sum{}, false);
}

PiecewiseAffine operator*(const Rational& c, const PiecewiseAffine& f) {
  PiecewiseAffine out = f;
  for (auto& v : out.values_) v *= c;
  for (auto& p : out.pieces_) {
    p.slope *= c;
    p.intercept *= c;
  }
  return out;
}

PiecewiseAffine operator-(const PiecewiseAffine& f, const PiecewiseAffine& g) { return f + Rational(-1) * g; }

PiecewiseAffine operator+(const PiecewiseAffine& f, const Rational& c) {
  PiecewiseAffine out = f;
  for (auto& v : out.values_) v += c;
  for (auto& p : out.pieces_) p.intercept += c;
  return out;
}

PiecewiseAffine min(const PiecewiseAffine& f, const PiecewiseAffine& g) {
  return PiecewiseAffine::combine(f, g, Min{}, true);
}

PiecewiseAffine max(const PiecewiseAffine& f, const PiecewiseAffine& g) {
  return PiecewiseAffine::combine(f, g, Max{}, true);
}

std::optional<PiecewiseAffine::Witness> PiecewiseAffine::find_bad(bool include_lo, bool strict) const {
  auto bad = [strict](const Rational& v) { return strict ? v <= 0 : v < 0; };
  for (std::size_t i = include_lo ? 0 : 1; i < knots_.size(); ++i)
    if (bad(values_[i])) return Witness{knots_[i], values_[i]};
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const Affine& p = pieces_[i];
    const Rational& a = knots_[i];
    const bool bounded = i + 1 < knots_.size();
    Rational la = p.at(a);
    // Sign of the limit at the right end; only the sign matters at +inf.
    Rational lb = bounded ? p.at(knots_[i + 1]) : (p.slope != 0 ? p.slope : p.intercept);
    bool violated = la < 0 || lb < 0 || (strict && la == 0 && lb == 0);
    if (!violated) continue;
    Rational m = bounded ? Rational((a + knots_[i + 1]) / 2) : Rational(a + 1);
    if (bad(p.at(m))) return Witness{m, p.at(m)};
    Rational z = -p.intercept / p.slope;  // p(m) fine but an end is negative: p crosses zero
    Rational x = la < 0 ? Rational((a + z) / 2) : (bounded ? Rational((z + knots_[i + 1]) / 2) : Rational(z + 1));
    return Witness{x, p.at(x)};
  }
  return std::nullopt;
}

std::optional<PiecewiseAffine::Witness> PiecewiseAffine::find_negative(bool include_lo) const {
  return find_bad(include_lo, false);
}

std::optional<PiecewiseAffine::Witness> PiecewiseAffine::find_nonpositive(bool include_lo) const {
  return find_bad(include_lo, true);
}

}  // namespace freenorm
