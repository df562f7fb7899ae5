#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "freenorm/checks.hpp"
#include "freenorm/dyadic.hpp"

namespace freenorm {

/// A finite group with a left-invariant metric, both given by tables.
/// The constructor validates the group axioms, the metric axioms and left
/// invariance, and throws InvalidGroup naming the first violation.
class FiniteMetricGroup {
 public:
  FiniteMetricGroup(std::vector<std::string> names, std::vector<std::vector<std::size_t>> table,
                    std::vector<std::vector<Dyadic>> metric);

  /// Text format, `#` starting a comment:
  ///   elements e a b ...
  ///   table
  ///   <n rows of n element names or indices>
  ///   metric
  ///   <n rows of n dyadics>
  static FiniteMetricGroup parse(std::istream& in);
  static FiniteMetricGroup load(const std::string& path);
  std::string to_text() const;

  std::size_t size() const noexcept { return names_.size(); }
  std::size_t identity() const noexcept { return identity_; }
  std::size_t multiply(std::size_t a, std::size_t b) const { return table_[a][b]; }
  std::size_t inverse(std::size_t a) const { return inverse_[a]; }
  const Dyadic& distance(std::size_t a, std::size_t b) const { return metric_[a][b]; }
  const std::string& name(std::size_t a) const { return names_[a]; }
  std::size_t index_of(const std::string& name) const;
  /// Distinct values of the metric, ascending, including 0.
  std::vector<Dyadic> metric_values() const;
  bool is_abelian() const;

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<std::size_t>> table_;
  std::vector<std::vector<Dyadic>> metric_;
  std::vector<std::size_t> inverse_;
  std::size_t identity_ = 0;
};

/// The group with the weighted word metric: |g| is the least total weight of
/// a product of generators (and their inverses, same weight) equal to g, and
/// d(g, h) = |g^-1 h|.
FiniteMetricGroup with_word_metric(std::vector<std::string> names, std::vector<std::vector<std::size_t>> table,
                                   const std::map<std::size_t, Dyadic>& generator_weights);

/// The symmetric group S3 (elements as permutations of {0,1,2}) with the
/// word metric giving the transposition (0 1) weight 1 and (1 2) weight 1/2.
FiniteMetricGroup symmetric_group_s3();
/// Z/2 x Z/2 with a weighted word metric: a weighs 1/2, b weighs 1/4.
FiniteMetricGroup klein_four();

/// Gamma_G(g, r) = max{r, max{d(1, g^-1 h g) : d(1, h) <= r}}.
Dyadic conjugation_scale(const FiniteMetricGroup& g, std::size_t element, const Dyadic& r);

/// |Gamma_G(g1, r) - Gamma_G(g2, r)| <= 2 d(g1, g2) for all g1, g2 and every
/// r in the grid or among the metric values.
CheckReport verify_gamma_G_lipschitz(const FiniteMetricGroup& g, std::span<const Dyadic> radii = {});

}  // namespace freenorm
