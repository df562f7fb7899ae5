#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace freenorm {

/// True iff `image` (image[i - lo] = theta(i)) is an involution on
/// {lo, ..., lo + image.size() - 1} with no i < j < theta(i) < theta(j).
bool is_match(std::size_t lo, std::span<const std::size_t> image);

/// A non-crossing involution on an index interval {lo, ..., hi}.
class Match {
 public:
  /// Throws InvalidArgument unless `image` is a match.
  Match(std::size_t lo, std::vector<std::size_t> image);
  static Match identity(std::size_t lo, std::size_t hi);

  std::size_t lo() const noexcept { return lo_; }
  std::size_t hi() const noexcept { return lo_ + image_.size() - 1; }
  std::size_t size() const noexcept { return image_.size(); }
  std::size_t operator()(std::size_t i) const { return image_[i - lo_]; }
  std::span<const std::size_t> image() const noexcept { return image_; }

  friend bool operator==(const Match&, const Match&) = default;
  /// Lexicographic on the mapping array (intervals compared first).
  friend auto operator<=>(const Match&, const Match&) = default;

  /// Arcs `i-j` with i < j in increasing order of i, comma separated;
  /// the identity prints as `id`.
  std::string to_string() const;
  static Match parse(std::string_view text, std::size_t lo, std::size_t hi);

 private:
  struct Unchecked {};
  Match(Unchecked, std::size_t lo, std::vector<std::size_t> image) : lo_(lo), image_(std::move(image)) {}
  friend void for_each_match(std::size_t, std::size_t, const std::function<void(const Match&)>&);
  friend Match restrict_match(const Match&, std::size_t, std::size_t);

  std::size_t lo_ = 0;
  std::vector<std::size_t> image_;
};

/// Calls `visit` on every match of {lo, ..., hi} exactly once, in
/// lexicographic order of the mapping array.
void for_each_match(std::size_t lo, std::size_t hi, const std::function<void(const Match&)>& visit);
std::vector<Match> enumerate_matches(std::size_t lo, std::size_t hi);

bool is_closed(const Match& theta, std::size_t k, std::size_t l);
/// theta restricted to {k, ..., l}; throws NotClosed when some index of the
/// range maps outside it.
Match restrict_match(const Match& theta, std::size_t k, std::size_t l);

/// A random match on {lo, ..., hi}: each first index is left fixed or paired
/// with a uniformly chosen later index, then the inner and outer parts are
/// filled recursively. Not uniform over matches.
Match random_match(std::mt19937_64& rng, std::size_t lo, std::size_t hi);

}  // namespace freenorm
