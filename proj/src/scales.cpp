#include "freenorm/scales.hpp"

#include <limits>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>
#include <utility>
#include <vector>

#include "freenorm/error.hpp"

namespace freenorm {

std::optional<PiecewiseAffine> Scale::profile(const Letter&, const Rational&, const std::optional<Rational>&) const {
  return std::nullopt;
}

namespace {

// Grades beyond this would need offsets with more than 2^16 bits.
constexpr std::uint64_t kMaxGrade = 1u << 16;

BigInt binomial(const BigInt& n, std::uint64_t k) {
  if (n < 0 || n < k) return 0;
  BigInt result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) result = result * (n - k + i) / i;
  return result;
}

// Compositions of R into `parts` ordered naturals.
BigInt weak(const BigInt& r, std::uint64_t parts) {
  if (r < 0) return 0;
  if (parts == 0) return r == 0 ? 1 : 0;
  return binomial(r + parts - 1, parts - 1);
}

// Sum of weak(u, parts) over 0 <= u <= R.
BigInt weak_prefix(const BigInt& r, std::uint64_t parts) {
  if (r < 0) return 0;
  return binomial(r + parts, parts);
}

// Points of grade g >= 2 with support at most i.
BigInt free_fill(std::uint64_t i, std::uint64_t g) {
  BigInt total = 0;
  for (std::uint64_t t = 0; t < i; ++t) total += binomial(BigInt(g - 2), t);
  return total;
}

std::int64_t to_small(const BigInt& v, const char* what) {
  if (v > std::numeric_limits<std::int32_t>::max()) throw Error(ErrorCode::OutOfRange, std::string(what) + " too large");
  return static_cast<std::int64_t>(v);
}

void require_nonnegative(const Dyadic& r) {
  if (r.sign() < 0) throw Error(ErrorCode::InvalidArgument, "scale evaluated at negative r = " + r.to_string());
}

void require_domain(const Rational& lo, const std::optional<Rational>& hi) {
  if (lo < 0 || (hi && *hi < lo)) throw Error(ErrorCode::InvalidArgument, "bad profile domain");
}

PiecewiseAffine identity_profile(const Rational& lo, const std::optional<Rational>& hi) {
  return PiecewiseAffine::affine(lo, hi, 1, 0);
}

void verify_enumeration(const PointEnumeration& e, bool includes_zero) {
  if (!e.forward || !e.backward) throw Error(ErrorCode::InvalidArgument, "enumeration " + e.name + " is incomplete");
  for (int i = 0; i < 512; ++i) {
    Point p = e.backward(BigInt(i));
    if (e.forward(p) != i) throw Error(ErrorCode::InvalidArgument, "enumeration " + e.name + " is not a bijection");
    if (!includes_zero && p.is_zero()) throw Error(ErrorCode::InvalidArgument, "enumeration " + e.name + " hits 0");
  }
  if (includes_zero && e.forward(Point()) != 0)
    throw Error(ErrorCode::InvalidArgument, "enumeration " + e.name + " must send 0 to 0");
}

class Graev final : public Scale {
 public:
  std::string name() const override { return "graev"; }
  Dyadic evaluate(const Letter&, const Dyadic& r) const override {
    require_nonnegative(r);
    return r;
  }
  std::optional<PiecewiseAffine> profile(const Letter&, const Rational& lo,
                                         const std::optional<Rational>& hi) const override {
    require_domain(lo, hi);
    return identity_profile(lo, hi);
  }
  bool symmetric() const override { return true; }
  bool declared_adequate() const override { return true; }
};

class Gamma1 final : public Scale {
 public:
  explicit Gamma1(PointEnumeration xi) : xi_(std::move(xi)) { verify_enumeration(xi_, true); }

  std::string name() const override { return "gamma1"; }
  Dyadic evaluate(const Letter& x, const Dyadic& r) const override {
    require_nonnegative(r);
    return slope(x) * r;
  }
  std::optional<PiecewiseAffine> profile(const Letter& x, const Rational& lo,
                                         const std::optional<Rational>& hi) const override {
    require_domain(lo, hi);
    return PiecewiseAffine::affine(lo, hi, slope(x).to_rational(), 0);
  }
  bool symmetric() const override { return true; }

 private:
  Dyadic slope(const Letter& x) const {
    if (x.is_identity()) return 1;
    return Dyadic::from_integer(64 * xi_.forward(x.point()) + 1);
  }

  PointEnumeration xi_;
};

class Gamma2 final : public Scale {
 public:
  explicit Gamma2(PointEnumeration zeta) : zeta_(std::move(zeta)) { verify_enumeration(zeta_, false); }

  std::string name() const override { return "gamma2"; }
  Dyadic evaluate(const Letter& x, const Dyadic& r) const override {
    require_nonnegative(r);
    if (x.is_identity() || x.point().is_zero()) return r;
    if (r <= breakpoint(x.point())) return r * 8;
    return std::max(Dyadic::pow2(-3), r);
  }
  std::optional<PiecewiseAffine> profile(const Letter& x, const Rational& lo,
                                         const std::optional<Rational>& hi) const override {
    require_domain(lo, hi);
    if (x.is_identity() || x.point().is_zero()) return identity_profile(lo, hi);
    Rational bp = breakpoint(x.point()).to_rational();
    auto upper = [&](const Rational& from) {
      return max(PiecewiseAffine::constant(from, hi, Rational(1, 8)), identity_profile(from, hi));
    };
    if (hi && *hi <= bp) return PiecewiseAffine::affine(lo, hi, 8, 0);
    if (lo > bp) return upper(lo);
    return PiecewiseAffine::join(PiecewiseAffine::affine(lo, bp, 8, 0), upper(bp), 8 * bp);
  }
  bool symmetric() const override { return true; }

 private:
  Dyadic breakpoint(const Point& p) const {
    BigInt z = zeta_.forward(p);
    if (BigInt(p.support()) > z + 1)
      throw Error(ErrorCode::InvalidArgument, "zeta(" + p.to_string() + ") below support - 1");
    return Dyadic::pow2(-(to_small(z, "zeta") + 6));
  }

  PointEnumeration zeta_;
};

class Gamma0 final : public Scale {
 public:
  // min over the chain of slope * r + offset.
  struct Term {
    Dyadic slope;
    Dyadic offset;
  };
  using Chain = std::vector<Term>;

  std::string name() const override { return "gamma0"; }
  Dyadic evaluate(const Letter& x, const Dyadic& r) const override {
    require_nonnegative(r);
    if (x.is_identity()) return r;
    const Chain& chain = chain_for(x.point());
    Dyadic best = chain.front().slope * r + chain.front().offset;
    for (std::size_t i = 1; i < chain.size(); ++i) best = std::min(best, chain[i].slope * r + chain[i].offset);
    return best;
  }
  std::optional<PiecewiseAffine> profile(const Letter& x, const Rational& lo,
                                         const std::optional<Rational>& hi) const override {
    require_domain(lo, hi);
    if (x.is_identity()) return identity_profile(lo, hi);
    const Chain& chain = chain_for(x.point());
    PiecewiseAffine f =
        PiecewiseAffine::affine(lo, hi, chain.front().slope.to_rational(), chain.front().offset.to_rational());
    for (std::size_t i = 1; i < chain.size(); ++i)
      f = min(f, PiecewiseAffine::affine(lo, hi, chain[i].slope.to_rational(), chain[i].offset.to_rational()));
    return f;
  }
  unsigned declared_k() const override { return 1; }
  bool symmetric() const override { return true; }
  bool declared_adequate() const override { return true; }

 private:
  static Dyadic coefficient(const Point& p) {
    Dyadic sum = 1;
    std::int64_t exponent = 0;
    for (std::uint64_t v : p.entries()) {
      exponent += static_cast<std::int64_t>(v);
      sum += Dyadic::pow2(exponent);
    }
    return sum.times_pow2(5);
  }

  static Chain build(const Point& x) {
    Chain chain;
    Point p = x;
    Dyadic offset = 0;
    while (!p.is_zero()) {
      chain.push_back({coefficient(p), offset});
      offset += Dyadic::pow2(-static_cast<std::int64_t>(p.support()));
      p = project(p, p.support() - 1);
    }
    chain.push_back({1, offset});
    return chain;
  }

  const Chain& chain_for(const Point& x) const {
    {
      std::shared_lock lock(mutex_);
      auto it = memo_.find(x);
      if (it != memo_.end()) return it->second;
    }
    Chain chain = build(x);
    std::unique_lock lock(mutex_);
    return memo_.try_emplace(x, std::move(chain)).first->second;
  }

  // unordered_map never moves its nodes, so references stay valid.
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<Point, Chain, PointHash> memo_;
};

class FunctionScale final : public Scale {
 public:
  FunctionScale(std::string name, std::function<Dyadic(const Letter&, const Dyadic&)> f, FunctionScaleOptions o)
      : name_(std::move(name)), f_(std::move(f)), options_(std::move(o)) {
    if (!f_) throw Error(ErrorCode::InvalidArgument, "function scale needs an evaluator");
  }

  std::string name() const override { return name_; }
  Dyadic evaluate(const Letter& x, const Dyadic& r) const override {
    require_nonnegative(r);
    return f_(x, r);
  }
  std::optional<PiecewiseAffine> profile(const Letter& x, const Rational& lo,
                                         const std::optional<Rational>& hi) const override {
    if (!options_.profile) return std::nullopt;
    require_domain(lo, hi);
    return options_.profile(x, lo, hi);
  }
  unsigned declared_k() const override { return options_.k; }
  bool symmetric() const override { return options_.symmetric; }
  bool declared_adequate() const override { return options_.adequate; }

 private:
  std::string name_;
  std::function<Dyadic(const Letter&, const Dyadic&)> f_;
  FunctionScaleOptions options_;
};

}  // namespace

BigInt graded_rank(const Point& x) {
  if (x.is_zero()) return 0;
  const std::uint64_t s = x.support();
  BigInt grade = s;
  for (std::uint64_t v : x.entries()) grade += v;
  if (grade > kMaxGrade) throw Error(ErrorCode::OutOfRange, "point " + x.to_string() + " has too large a grade");
  const auto g = static_cast<std::uint64_t>(grade);

  // The top coordinate is where the support is decided.
  const BigInt top = x[s - 1];
  BigInt within = free_fill(s - 1, g);
  BigInt rest = BigInt(g - s);
  within += weak_prefix(rest - 1, s - 1) - weak_prefix(rest - top, s - 1);
  BigInt high = top;
  for (std::size_t i = s - 1; i-- > 0;) {
    const BigInt xi = x[i];
    const BigInt r = BigInt(g - s) - high;
    within += weak_prefix(r, i) - weak_prefix(r - xi, i);
    high += xi;
  }
  return (BigInt(1) << static_cast<unsigned>(g - 2)) + within;
}

Point graded_unrank(const BigInt& index) {
  if (index < 0) throw Error(ErrorCode::InvalidArgument, "negative enumeration index");
  if (index == 0) return Point();
  const std::uint64_t g = boost::multiprecision::msb(index) + 2;
  if (g > kMaxGrade) throw Error(ErrorCode::OutOfRange, "enumeration index too large");
  BigInt r = index - (BigInt(1) << static_cast<unsigned>(g - 2));

  std::uint64_t s = 1;
  for (;; ++s) {
    BigInt c = binomial(BigInt(g - 2), s - 1);
    if (r < c) break;
    r -= c;
  }
  std::vector<std::uint64_t> entries(s, 0);
  std::uint64_t remaining = g - s;
  for (std::uint64_t v = 1;; ++v) {
    BigInt c = weak(BigInt(remaining) - v, s - 1);
    if (r < c) {
      entries[s - 1] = v;
      remaining -= v;
      break;
    }
    r -= c;
  }
  for (std::size_t i = s - 1; i-- > 0;) {
    for (std::uint64_t v = 0;; ++v) {
      BigInt c = weak(BigInt(remaining) - v, i);
      if (r < c) {
        entries[i] = v;
        remaining -= v;
        break;
      }
      r -= c;
    }
  }
  return Point(std::move(entries));
}

PointEnumeration canonical_xi() { return {"xi", graded_rank, graded_unrank}; }

PointEnumeration canonical_zeta() {
  return {"zeta",
          [](const Point& x) -> BigInt {
            if (x.is_zero()) throw Error(ErrorCode::InvalidArgument, "zeta is undefined at the zero point");
            return graded_rank(x) - 1;
          },
          [](const BigInt& i) { return graded_unrank(i + 1); }};
}

ScalePtr graev_scale() { return std::make_shared<Graev>(); }
ScalePtr scale_gamma1(PointEnumeration xi) { return std::make_shared<Gamma1>(std::move(xi)); }
ScalePtr scale_gamma2(PointEnumeration zeta) { return std::make_shared<Gamma2>(std::move(zeta)); }
ScalePtr scale_gamma0() { return std::make_shared<Gamma0>(); }

ScalePtr function_scale(std::string name, std::function<Dyadic(const Letter&, const Dyadic&)> evaluator,
                        FunctionScaleOptions options) {
  return std::make_shared<FunctionScale>(std::move(name), std::move(evaluator), std::move(options));
}

ScalePtr make_scale(std::string_view name) {
  if (name == "graev") return graev_scale();
  if (name == "gamma1") return scale_gamma1();
  if (name == "gamma2") return scale_gamma2();
  if (name == "gamma0") return scale_gamma0();
  // Negative controls: r/2 breaks the first axiom; r^2 + r (r on e) is a
  // scale but neither good nor piecewise linear.
  if (name == "half") {
    FunctionScaleOptions o;
    o.symmetric = true;
    o.profile = [](const Letter&, const Rational& lo, const std::optional<Rational>& hi) {
      return std::optional(PiecewiseAffine::affine(lo, hi, Rational(1, 2), 0));
    };
    return function_scale("half", [](const Letter&, const Dyadic& r) { return r.times_pow2(-1); }, std::move(o));
  }
  if (name == "quadratic") {
    FunctionScaleOptions o;
    o.symmetric = true;
    return function_scale(
        "quadratic", [](const Letter& x, const Dyadic& r) { return x.is_identity() ? r : r * r + r; }, std::move(o));
  }
  throw Error(ErrorCode::InvalidArgument, "unknown scale '" + std::string(name) + "'");
}

}  // namespace freenorm
