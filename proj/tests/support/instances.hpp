#pragma once

// Random word/match pairs shaped like the elimination cases: a word w with
// a match theta, and the shorter word v with a match mu that agrees with
// theta away from the eliminated letters.

#include <random>
#include <vector>

#include "freenorm/error.hpp"
#include "freenorm/matches.hpp"
#include "freenorm/norms.hpp"
#include "freenorm/words.hpp"

namespace freenorm::fixtures {

struct Instance {
  std::vector<Letter> w;
  std::vector<std::size_t> theta;
  std::vector<Letter> v;
  std::vector<std::size_t> mu;
};

// Letters and a match on a block, with positions relative to the block.
struct Block {
  std::vector<Letter> letters;
  std::vector<std::size_t> image;
};

inline std::vector<Letter> random_letters(std::mt19937_64& rng, const std::vector<Letter>& alphabet, std::size_t n) {
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::vector<Letter> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(alphabet[pick(rng)]);
  return out;
}

inline Block random_block(std::mt19937_64& rng, const std::vector<Letter>& alphabet, std::size_t n) {
  Block b{random_letters(rng, alphabet, n), {}};
  if (n > 0) {
    Match m = random_match(rng, 0, n - 1);
    b.image.assign(m.image().begin(), m.image().end());
  }
  return b;
}

// Outer letters v0 . [] . v2 with a match that fixes the placeholder; the
// placeholder is later replaced by a closed block.
struct Frame {
  std::vector<Letter> left, right;
  std::vector<std::size_t> image;  // on left + [] + right
};

inline Frame random_frame(std::mt19937_64& rng, const std::vector<Letter>& alphabet, std::size_t max_side) {
  std::uniform_int_distribution<std::size_t> len(0, max_side);
  Frame f{random_letters(rng, alphabet, len(rng)), random_letters(rng, alphabet, len(rng)), {}};
  const std::size_t k = f.left.size(), n = k + f.right.size();
  std::vector<std::size_t> outer;
  if (n > 0) {
    Match m = random_match(rng, 0, n - 1);
    outer.assign(m.image().begin(), m.image().end());
  }
  // Insert a fixed point at position k.
  auto shift = [k](std::size_t i) { return i < k ? i : i + 1; };
  for (std::size_t i = 0; i <= n; ++i) {
    if (i == k) f.image.push_back(k);
    if (i < n) f.image.push_back(shift(outer[i]));
  }
  return f;
}

// Places a closed block into the frame's placeholder.
inline void fill(const Frame& f, const Block& b, std::vector<Letter>& letters, std::vector<std::size_t>& image) {
  const std::size_t k = f.left.size(), len = b.letters.size();
  letters = f.left;
  letters.insert(letters.end(), b.letters.begin(), b.letters.end());
  letters.insert(letters.end(), f.right.begin(), f.right.end());
  auto place = [&](std::size_t frame_pos) { return frame_pos < k ? frame_pos : frame_pos - 1 + len; };
  image.assign(letters.size(), 0);
  for (std::size_t i = 0; i < f.image.size(); ++i) {
    if (i == k) continue;
    image[place(i)] = place(f.image[i]);
  }
  for (std::size_t i = 0; i < len; ++i) image[k + i] = k + b.image[i];
}

// Case 1: e fixed.  Case 2: e paired with x, x fixed after.
// Case 3: z^-1 z both fixed.  Case 4: z^-1 z paired.
// Case 5: z fixed, z^-1 paired with x.  Case 6: z^-1 paired with x, z fixed.
inline Instance trivial_case(int which, std::mt19937_64& rng, const std::vector<Letter>& alphabet,
                             std::size_t max_side = 3) {
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  const Letter z = alphabet[pick(rng)], x = alphabet[pick(rng)];
  const Frame f = random_frame(rng, alphabet, max_side);
  std::uniform_int_distribution<std::size_t> len(0, max_side);
  const Block v1 = random_block(rng, alphabet, len(rng));
  const std::size_t n1 = v1.letters.size();

  Block bw, bv;
  auto shifted = [](const Block& b, std::size_t by) {
    std::vector<std::size_t> out;
    for (std::size_t i : b.image) out.push_back(i + by);
    return out;
  };
  switch (which) {
    case 1:
    case 3:
    case 4: {
      // The eliminated letters, then v1; v keeps only v1.
      if (which == 1) {
        bw.letters = {Letter::identity()};
        bw.image = {0};
      } else {
        bw.letters = {z.inverse(), z};
        bw.image = which == 3 ? std::vector<std::size_t>{0, 1} : std::vector<std::size_t>{1, 0};
      }
      const std::size_t h = bw.letters.size();
      bw.letters.insert(bw.letters.end(), v1.letters.begin(), v1.letters.end());
      auto tail = shifted(v1, h);
      bw.image.insert(bw.image.end(), tail.begin(), tail.end());
      bv = v1;
      break;
    }
    case 2:
    case 5:
    case 6: {
      // w-block: prefix, then v1, then x paired with the opener.
      std::vector<Letter> prefix;
      std::size_t opener;
      if (which == 2) {
        prefix = {Letter::identity()};
        opener = 0;
      } else if (which == 5) {
        prefix = {z, z.inverse()};
        opener = 1;
      } else {
        prefix = {z.inverse(), z};
        opener = 0;
      }
      const std::size_t h = prefix.size();
      bw.letters = prefix;
      bw.letters.insert(bw.letters.end(), v1.letters.begin(), v1.letters.end());
      bw.letters.push_back(x);
      bw.image.assign(bw.letters.size(), 0);
      for (std::size_t i = 0; i < h; ++i) bw.image[i] = i;
      for (std::size_t i = 0; i < n1; ++i) bw.image[h + i] = h + v1.image[i];
      const std::size_t closer = h + n1;
      bw.image[opener] = closer;
      bw.image[closer] = opener;

      bv.letters = v1.letters;
      bv.letters.push_back(x);
      bv.image = v1.image;
      bv.image.push_back(n1);
      break;
    }
    default:
      throw Error(ErrorCode::InvalidArgument, "no such case");
  }

  Instance out;
  fill(f, bw, out.w, out.theta);
  if (bv.letters.empty() && f.left.empty() && f.right.empty()) {
    // v would be empty; pad both sides with a fixed e, which changes nothing.
    Frame g = f;
    g.left = {Letter::identity()};
    g.image = {0, 1};
    fill(g, bw, out.w, out.theta);
    fill(g, bv, out.v, out.mu);
    return out;
  }
  fill(f, bv, out.v, out.mu);
  return out;
}

// Two closed middles in a common frame, for segment replacement.
struct SegmentInstance {
  Instance whole;
  Block w1, v1;
};

inline SegmentInstance segment_pair(std::mt19937_64& rng, const std::vector<Letter>& alphabet,
                                    std::size_t max_side = 3) {
  const Frame f = random_frame(rng, alphabet, max_side);
  std::uniform_int_distribution<std::size_t> len(1, max_side + 1);
  SegmentInstance out{{}, random_block(rng, alphabet, len(rng)), random_block(rng, alphabet, len(rng))};
  fill(f, out.w1, out.whole.w, out.whole.theta);
  fill(f, out.v1, out.whole.v, out.whole.mu);
  return out;
}

}  // namespace freenorm::fixtures
