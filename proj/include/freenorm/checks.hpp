#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "freenorm/dyadic.hpp"
#include "freenorm/scales.hpp"
#include "freenorm/words.hpp"

namespace freenorm {

struct Violation {
  std::string condition;
  std::string detail;
};

/// Outcome of a checker. Only the first kStoredViolations violations are
/// kept verbatim; violation_count is exact.
struct CheckReport {
  static constexpr std::size_t kStoredViolations = 20;

  std::string check;
  std::size_t cases = 0;
  std::size_t violation_count = 0;
  std::vector<Violation> violations;
  /// Some condition was only sampled on a grid rather than certified for
  /// every r.
  bool sampled = false;
  std::vector<std::string> notes;

  bool passed() const noexcept { return violation_count == 0; }
  void fail(std::string condition, std::string detail);
  void note(std::string text);
  void merge(const CheckReport& other);
};

/// The witness y in N_(m-1) offered for x in N_m \ N_(m-1).
enum class WitnessRule { Zero, Projection };
Point witness_point(WitnessRule rule, const Point& x);
WitnessRule parse_witness_rule(std::string_view text);

/// Points with support <= 3 and entries <= 3 as letters (e, x, x^-1);
/// radii 0, 2^-k and 3 * 2^-k down to 2^-20; pair radii 0 and 2^-k for
/// even k <= 20.
struct DeskGrid {
  std::vector<Point> points;
  std::vector<Letter> letters;
  std::vector<Dyadic> radii;
  std::vector<Dyadic> pair_radii;
};
DeskGrid standard_desk_grid();

/// Axioms (i)-(iii) on the grid and, when the scale has profiles, exactly
/// for every r >= 0 together with (iv). Without profiles (iv) is replaced by
/// Gamma(x, r_min) <= tolerance at the smallest positive grid radius.
CheckReport check_scale_axioms(const Scale& gamma, std::span<const Letter> letters, std::span<const Dyadic> radii,
                               const Dyadic& tolerance = Dyadic::pow2(-3));

/// (A1)' over all triples and radii, (A1)'' over pairs and pairs of radii,
/// (A2) over all triples and pairs of radii.
CheckReport check_adequacy(const Scale& gamma, std::span<const Letter> letters, std::span<const Dyadic> radii,
                           std::span<const Dyadic> pair_radii);

/// (G1) and (G2), exactly when profiles exist and on the grid otherwise;
/// (G3) on pairs of radii.
CheckReport check_goodness(const Scale& gamma, std::span<const Letter> letters, std::span<const Dyadic> radii,
                           std::span<const Dyadic> pair_radii);

/// Symmetry, (S1) on r > 2^-(m+K+5) and (S3) on r <= 2^-(m+K+5) for every
/// given point of support 1..m_max, with y chosen by `rule`.
CheckReport check_universality_premises(const Scale& gamma, unsigned k_const, std::size_t m_max,
                                        std::span<const Point> points, WitnessRule rule,
                                        std::span<const Dyadic> fallback_radii = {});

/// Certifies x outside E^k_m for every candidate of support m: the negated
/// defining inequality holds at y = rule(x) for all r in
/// (2^-k, 2^-(m+K+5)]. Requires k > m + K + 5.
CheckReport check_ekm_bound(const Scale& gamma, unsigned k_const, std::size_t m, std::size_t k,
                            std::span<const Point> candidates, WitnessRule rule,
                            std::span<const Dyadic> fallback_radii = {});

/// Points of support m beyond the finiteness bound for E^k_m derived for the
/// named scale: xi(x) >= 2^(k-(m+5)) for gamma1, zeta(x) >= k - 6 for
/// gamma2, digit sum >= k - (m+5) for gamma0. `cap` bounds the enumeration
/// index (gamma1, gamma2) or the digit sum (gamma0).
std::vector<Point> ekm_candidates(std::string_view scale_name, std::size_t m, std::size_t k, std::uint64_t cap);

}  // namespace freenorm
