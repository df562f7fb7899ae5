#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "freenorm/dyadic.hpp"
#include "freenorm/piecewise.hpp"
#include "freenorm/words.hpp"

namespace freenorm {

/// A scale Gamma(x, r) on letters. Implementations are immutable and their
/// evaluators pure; the axioms are not enforced structurally and are checked
/// with check_scale_axioms.
class Scale {
 public:
  virtual ~Scale() = default;

  virtual std::string name() const = 0;
  /// Gamma(x, r) for r >= 0.
  virtual Dyadic evaluate(const Letter& x, const Dyadic& r) const = 0;
  Dyadic operator()(const Letter& x, const Dyadic& r) const { return evaluate(x, r); }

  /// Exact piecewise-affine profile of r -> Gamma(x, r) on [lo, hi]
  /// (hi = nullopt for [lo, +inf)); nullopt when the scale has no
  /// breakpoint oracle.
  virtual std::optional<PiecewiseAffine> profile(const Letter& x, const Rational& lo,
                                                 const std::optional<Rational>& hi) const;

  /// The constant K used when probing the universality premises.
  virtual unsigned declared_k() const { return 0; }
  /// Gamma(x, r) == Gamma(x^-1, r) by construction.
  virtual bool symmetric() const { return false; }
  /// Whether norm_exact may treat the scale as adequate.
  virtual bool declared_adequate() const { return false; }
};

using ScalePtr = std::shared_ptr<const Scale>;

/// A bijection between N_omega (or N_omega minus the zero point) and N.
struct PointEnumeration {
  std::string name;
  std::function<BigInt(const Point&)> forward;
  std::function<Point(const BigInt&)> backward;
};

/// Graded order on N_omega: by (sum of entries + support), then by support,
/// then colexicographically. The zero point is 0, [1] is 1, [2] is 2, [0,1]
/// is 3, and grade g >= 2 occupies indices [2^(g-2), 2^(g-1)).
BigInt graded_rank(const Point& x);
Point graded_unrank(const BigInt& index);

/// xi: the graded order itself, xi(0) = 0.
PointEnumeration canonical_xi();
/// zeta: the graded order on N_omega minus the zero point, zeta(x) = xi(x) - 1;
/// every query re-verifies support(x) <= zeta(x) + 1.
PointEnumeration canonical_zeta();

/// Gamma(x, r) = r.
ScalePtr graev_scale();
/// Gamma_1(x, r) = (2^6 xi(x) + 1) r; K = 0.
ScalePtr scale_gamma1(PointEnumeration xi = canonical_xi());
/// Gamma_2(x, r) = 8r for r <= 2^-(zeta(x)+6), max{1/8, r} above; r on the
/// zero point; K = 0.
ScalePtr scale_gamma2(PointEnumeration zeta = canonical_zeta());
/// Gamma_0(x, r) = min{2^5 (1 + 2^x(0) + ... + 2^(x(0)+...+x(m-1))) r,
/// Gamma_0(pi_(m-1)(x), r) + 2^-m} for support m, r on the zero point; K = 1.
ScalePtr scale_gamma0();

struct FunctionScaleOptions {
  unsigned k = 0;
  bool symmetric = false;
  bool adequate = false;
  std::function<std::optional<PiecewiseAffine>(const Letter&, const Rational&, const std::optional<Rational>&)> profile;
};

/// A scale from an arbitrary evaluator, for experiments and negative controls.
ScalePtr function_scale(std::string name, std::function<Dyadic(const Letter&, const Dyadic&)> evaluator,
                        FunctionScaleOptions options = {});

/// `graev`, `gamma1`, `gamma2` or `gamma0`.
ScalePtr make_scale(std::string_view name);

}  // namespace freenorm
