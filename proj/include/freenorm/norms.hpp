#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "freenorm/dyadic.hpp"
#include "freenorm/matches.hpp"
#include "freenorm/scales.hpp"
#include "freenorm/words.hpp"

namespace freenorm {

struct NormOptions {
  /// Longest word the exponential routes (match enumeration, extension
  /// search) accept.
  std::size_t cap = 16;
  /// Let norm_exact run on scales not declared adequate.
  bool unchecked = false;
};

struct NormBounds {
  Dyadic lower;
  Dyadic upper;
};

struct NormResult {
  Dyadic value;
  /// Match on witness_word attaining `value` (lexicographically least).
  Match witness_match = Match::identity(0, 0);
  /// The word the match lives on: w itself, or the trivial extension of w
  /// that produced the upper bound.
  Word witness_word = Word::identity();
  bool exact = false;
  std::optional<NormBounds> bounds;
};

/// N^theta(w). theta must be a match on {0, ..., lh(w) - 1}.
Dyadic pre_norm(const Scale& gamma, const Word& w, const Match& theta);

/// min over matches theta on w of N^theta(w), with the lexicographically
/// least minimizing match. Polynomial (interval dynamic programming over
/// the first-letter branching), so no length cap applies. Throws NotAdequate
/// unless the scale is declared adequate or options.unchecked is set.
NormResult norm_exact(const Scale& gamma, const Word& w, const NormOptions& options = {});

/// Same value and witness by enumerating every match; the test oracle.
NormResult norm_by_enumeration(const Scale& gamma, const Word& w, const NormOptions& options = {});

/// Brackets N(w). The upper bound minimizes over every trivial extension of
/// w with at most `budget` extra letters drawn from the letters of w, their
/// inverses, e and `extra`; the lower bound is the Graev norm.
NormResult norm_bounds(const Scale& gamma, const Word& w, std::size_t budget, std::span<const Letter> extra = {},
                       const NormOptions& options = {});

/// delta(w, v) = N(w^-1 v).
Dyadic delta(const Scale& gamma, const Word& w, const Word& v, const NormOptions& options = {});
/// max{delta(w, v), delta(w^-1, v^-1)}.
Dyadic delta_big(const Scale& gamma, const Word& w, const Word& v, const NormOptions& options = {});

}  // namespace freenorm
