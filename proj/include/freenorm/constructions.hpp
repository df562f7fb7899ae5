#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "freenorm/checks.hpp"
#include "freenorm/dyadic.hpp"
#include "freenorm/groups.hpp"
#include "freenorm/norms.hpp"
#include "freenorm/scales.hpp"
#include "freenorm/words.hpp"

namespace freenorm {

/// u = x_1^-1 y_1 ... x_k^-1 y_k with d(x_i, y_i) = 2^-n_i, where
/// m / 2^n = 2^-n_1 + ... + 2^-n_k. Its norm is m / 2^n under every scale.
struct DyadicNormWord {
  Word word = Word::identity();
  Dyadic target;
  std::vector<std::pair<Point, Point>> letter_pairs;
  std::vector<std::uint64_t> exponents;
};

/// x_i = [offset + i - 1] and y_i = x_i with a 1 at index n_i. Throws
/// OutOfRange unless 0 < m < 2^n.
DyadicNormWord build_dyadic_norm_word(std::uint64_t m, std::uint64_t n, std::uint64_t offset = 1);

/// 2^-1, 2^-2, ..., 2^-30.
std::vector<Dyadic> default_threshold_grid();

/// The largest a in the grid with a <= 1/2 and Gamma(x0, r) > r for every r
/// in (0, a], certified on the exact profile. Throws NonPiecewiseLinear when
/// the scale has no profile and NotExpanding when no grid value works.
Dyadic find_expansion_threshold(const Scale& gamma, const Point& x0, std::span<const Dyadic> grid = {});

struct CliWitnessOptions {
  std::size_t depth = 1;
  /// Bound on the iterations of f spent looking for each k_j.
  std::size_t iteration_cap = 64;
  /// Longest word w_l w_(l-1)^-1 the construction may produce.
  std::size_t cap = 16;
};

/// Cauchy sequence w_l in the free group whose inverses stay a apart.
struct CliWitness {
  ScalePtr scale;
  Point x0;
  Dyadic a;
  std::size_t depth = 0;
  std::vector<std::uint64_t> k_indices;
  /// (m_j, n_j).
  std::vector<std::pair<std::uint64_t, std::uint64_t>> fractions;
  std::vector<Word> u_words;
  std::vector<Word> v_words;
  std::vector<Word> w_words;
};

/// Throws NotExpanding, then InvalidArgument unless x0(0) = 0, IterationCap when
/// some k_j or (m_j, n_j) is not found, and WordTooLong past options.cap.
CliWitness build_cli_witness(const ScalePtr& gamma, const Point& x0, const CliWitnessOptions& options = {});

struct CliWitnessReport {
  /// N(v_l) for every stored l.
  std::vector<Dyadic> v_norms;
  /// N(w_l w_(l-1)^-1) for l = 1..depth.
  std::vector<Dyadic> step_norms;
  Dyadic partial_sum;
  /// sum over stored l of 2^-j (even l = 2j) or 2^-(j+2) (odd l = 2j+1).
  Dyadic partial_bound;
  CheckReport report;

  bool passed() const noexcept { return report.passed(); }
};

/// Re-derives the stored invariants, then computes every N(v_l) and
/// N(w_l w_(l-1)^-1) exactly.
CliWitnessReport verify_cli_witness(const CliWitness& witness);

/// Line-oriented bundle holding the witness and, optionally, its report.
std::string serialize_witness(const CliWitness& witness, const CliWitnessReport* report = nullptr);
/// Reads back the witness part; the scale is rebuilt by name.
CliWitness parse_witness(std::istream& in);

struct HomomorphismReport {
  CheckReport hypotheses;
  CheckReport conclusion;
  bool conclusion_attempted = false;

  bool passed() const noexcept { return hypotheses.passed() && conclusion_attempted && conclusion.passed(); }
};

/// Checks phi(e) = 1, phi(x^-1) = phi(x)^-1, d_G(phi x, phi y) <= d(x, y) and
/// Gamma_G(phi x, r) <= Gamma(x, r) at r = 0 and every metric value of G.
/// When all hold, verifies d_G(Phi w, Phi v) <= delta(w, v) on each pair.
/// Throws NotClosedUnderInverse when the domain of phi is not closed under
/// inversion and InvalidArgument when a sampled word leaves the domain.
HomomorphismReport extend_homomorphism(const Scale& gamma, const FiniteMetricGroup& group,
                                       const std::map<Letter, std::size_t>& phi,
                                       std::span<const std::pair<Word, Word>> samples,
                                       const NormOptions& options = {});

/// Phi(w), the product of phi over the letters of w; e maps to 1.
std::size_t apply_homomorphism(const FiniteMetricGroup& group, const std::map<Letter, std::size_t>& phi,
                               const Word& w);

}  // namespace freenorm
