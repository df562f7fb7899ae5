#include "freenorm/norms.hpp"

#include <algorithm>
#include <functional>
#include <unordered_set>
#include <vector>

#include "freenorm/error.hpp"

namespace freenorm {

namespace {

// Minimum pre-norm over matches of every subinterval, by the branching on
// the partner k of the first index i:
//   P(i, i) = d(e, w_i)
//   P(i, k) = d(w_i^-1, w_k) + min{Gamma(w_i^-1, M[i+1, k)), Gamma(w_k, M[i+1, k))}
//   M[i, j) = min_k P(i, k) + M[k+1, j)
// Taking the optimal inner value is exact because Gamma is monotone in r.
class IntervalDp {
 public:
  IntervalDp(const Scale& gamma, std::span<const Letter> w) : gamma_(gamma), w_(w), n_(w.size()) {
    p_.assign(n_ * n_, Dyadic());
    m_.assign((n_ + 1) * (n_ + 1), Dyadic());
    for (std::size_t len = 1; len <= n_; ++len) {
      for (std::size_t i = 0; i + len <= n_; ++i) {
        const std::size_t j = i + len;
        p(i, j - 1) = head_cost(i, j - 1, m(i + 1, std::max(i + 1, j - 1)));
        Dyadic best = p(i, i) + m(i + 1, j);
        for (std::size_t k = i + 1; k < j; ++k) best = std::min(best, p(i, k) + m(k + 1, j));
        m(i, j) = best;
      }
    }
  }

  const Dyadic& value() const { return m_[n_]; }

  Match witness() const {
    std::vector<std::size_t> image(n_);
    const Dyadic target = value();
    build(0, n_, [&](const Dyadic& total) { return total <= target; }, image);
    return Match(0, std::move(image));
  }

 private:
  using Accept = std::function<bool(const Dyadic&)>;

  Dyadic& p(std::size_t i, std::size_t k) { return p_[i * n_ + k]; }
  const Dyadic& p(std::size_t i, std::size_t k) const { return p_[i * n_ + k]; }
  Dyadic& m(std::size_t i, std::size_t j) { return m_[i * (n_ + 1) + j]; }
  const Dyadic& m(std::size_t i, std::size_t j) const { return m_[i * (n_ + 1) + j]; }

  Dyadic head_cost(std::size_t i, std::size_t k, const Dyadic& inner) const {
    if (i == k) return ultrametric_d(Letter::identity(), w_[i]);
    const Letter a = w_[i].inverse();
    return ultrametric_d(a, w_[k]) + std::min(gamma_.evaluate(a, inner), gamma_.evaluate(w_[k], inner));
  }

  // Fills image on [i, j) with the lexicographically least match whose value
  // satisfies `accept`, a downward-closed predicate; returns that value.
  Dyadic build(std::size_t i, std::size_t j, const Accept& accept, std::vector<std::size_t>& image) const {
    if (i == j) return 0;
    for (std::size_t k = i; k < j; ++k) {
      if (!accept(p(i, k) + m(k + 1, j))) continue;
      Dyadic head;
      if (k == i) {
        image[i] = i;
        head = p(i, i);
      } else {
        image[i] = k;
        image[k] = i;
        const Letter a = w_[i].inverse();
        const Dyadic d = ultrametric_d(a, w_[k]);
        const Dyadic& rest = m(k + 1, j);
        Dyadic inner = build(
            i + 1, k,
            [&](const Dyadic& n) {
              return accept(d + std::min(gamma_.evaluate(a, n), gamma_.evaluate(w_[k], n)) + rest);
            },
            image);
        head = d + std::min(gamma_.evaluate(a, inner), gamma_.evaluate(w_[k], inner));
      }
      return head + build(k + 1, j, [&](const Dyadic& t) { return accept(head + t); }, image);
    }
    throw Error(ErrorCode::InvalidArgument, "internal: no acceptable match");
  }

  const Scale& gamma_;
  std::span<const Letter> w_;
  std::size_t n_;
  std::vector<Dyadic> p_;
  std::vector<Dyadic> m_;
};

Dyadic pre_norm_range(const Scale& gamma, const Word& w, const Match& theta, std::size_t i, std::size_t j) {
  Dyadic total = 0;
  while (i < j) {
    const std::size_t k = theta(i);
    if (k == i) {
      total += ultrametric_d(Letter::identity(), w[i]);
    } else {
      const Letter a = w[i].inverse();
      const Dyadic inner = pre_norm_range(gamma, w, theta, i + 1, k);
      total += ultrametric_d(a, w[k]) + std::min(gamma.evaluate(a, inner), gamma.evaluate(w[k], inner));
    }
    i = k + 1;
  }
  return total;
}

void require_cap(std::size_t length, const NormOptions& options) {
  if (length > options.cap)
    throw Error(ErrorCode::WordTooLong,
                "length " + std::to_string(length) + " exceeds cap " + std::to_string(options.cap));
}

// Every word reducing to w with at most `limit` letters, generated by
// inserting e anywhere and replacing an e by z z^-1.
std::vector<Word> trivial_extensions(const Word& w, std::size_t limit, const std::vector<Letter>& alphabet) {
  std::unordered_set<Word, WordHash> seen{w};
  std::vector<Word> frontier{w}, all{w};
  while (!frontier.empty()) {
    std::vector<Word> next;
    auto visit = [&](std::vector<Letter> letters) {
      Word v(std::move(letters));
      if (seen.insert(v).second) {
        next.push_back(v);
        all.push_back(std::move(v));
      }
    };
    for (const Word& u : frontier) {
      auto letters = u.letters();
      if (u.size() + 1 <= limit) {
        for (std::size_t pos = 0; pos <= u.size(); ++pos) {
          std::vector<Letter> v(letters.begin(), letters.end());
          v.insert(v.begin() + static_cast<std::ptrdiff_t>(pos), Letter::identity());
          visit(std::move(v));
        }
      }
      if (u.size() + 1 <= limit) {
        for (std::size_t pos = 0; pos < u.size(); ++pos) {
          if (!letters[pos].is_identity()) continue;
          for (const Letter& z : alphabet) {
            if (z.is_identity()) continue;
            std::vector<Letter> v(letters.begin(), letters.end());
            v[pos] = z;
            v.insert(v.begin() + static_cast<std::ptrdiff_t>(pos) + 1, z.inverse());
            visit(std::move(v));
          }
        }
      }
    }
    frontier = std::move(next);
  }
  return all;
}

}  // namespace

Dyadic pre_norm(const Scale& gamma, const Word& w, const Match& theta) {
  if (theta.lo() != 0 || theta.size() != w.size())
    throw Error(ErrorCode::MatchLengthMismatch, "match on [" + std::to_string(theta.lo()) + ", " +
                                                    std::to_string(theta.hi()) + "] for a word of length " +
                                                    std::to_string(w.size()));
  return pre_norm_range(gamma, w, theta, 0, w.size());
}

NormResult norm_exact(const Scale& gamma, const Word& w, const NormOptions& options) {
  if (!gamma.declared_adequate() && !options.unchecked)
    throw Error(ErrorCode::NotAdequate,
                "scale " + gamma.name() + " is not declared adequate; use norm_bounds or the unchecked flag");
  IntervalDp dp(gamma, w.letters());
  NormResult result;
  result.value = dp.value();
  result.witness_match = dp.witness();
  result.witness_word = w;
  result.exact = true;
  return result;
}

NormResult norm_by_enumeration(const Scale& gamma, const Word& w, const NormOptions& options) {
  require_cap(w.size(), options);
  std::optional<Dyadic> best;
  std::optional<Match> arg;
  for_each_match(0, w.size() - 1, [&](const Match& theta) {
    Dyadic v = pre_norm(gamma, w, theta);
    if (!best || v < *best) {
      best = v;
      arg = theta;
    }
  });
  NormResult result;
  result.value = *best;
  result.witness_match = *arg;
  result.witness_word = w;
  result.exact = gamma.declared_adequate();
  return result;
}

NormResult norm_bounds(const Scale& gamma, const Word& w, std::size_t budget, std::span<const Letter> extra,
                       const NormOptions& options) {
  require_cap(w.size() + budget, options);
  std::vector<Letter> alphabet{Letter::identity()};
  auto add = [&](const Letter& a) {
    if (std::find(alphabet.begin(), alphabet.end(), a) == alphabet.end()) alphabet.push_back(a);
  };
  for (const Letter& a : w.letters()) {
    add(a);
    add(a.inverse());
  }
  for (const Letter& a : extra) {
    add(a);
    add(a.inverse());
  }

  const Word* best_word = nullptr;
  std::optional<Dyadic> best;
  const std::vector<Word> candidates = trivial_extensions(w, w.size() + budget, alphabet);
  for (const Word& v : candidates) {
    IntervalDp dp(gamma, v.letters());
    if (!best || dp.value() < *best) {
      best = dp.value();
      best_word = &v;
    }
  }

  NormResult result;
  result.value = *best;
  result.witness_word = *best_word;
  result.witness_match = IntervalDp(gamma, best_word->letters()).witness();
  result.exact = gamma.declared_adequate();
  const Dyadic lower = IntervalDp(*graev_scale(), w.letters()).value();
  result.bounds = NormBounds{lower, result.value};
  return result;
}

Dyadic delta(const Scale& gamma, const Word& w, const Word& v, const NormOptions& options) {
  return norm_exact(gamma, group_multiply(invert(w), v), options).value;
}

Dyadic delta_big(const Scale& gamma, const Word& w, const Word& v, const NormOptions& options) {
  return std::max(delta(gamma, w, v, options), delta(gamma, invert(w), invert(v), options));
}

}  // namespace freenorm
