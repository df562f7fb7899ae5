#include "freenorm/checks.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <unordered_map>

#include "freenorm/error.hpp"

namespace freenorm {

void CheckReport::fail(std::string condition, std::string detail) {
  ++violation_count;
  if (violations.size() < kStoredViolations) violations.push_back({std::move(condition), std::move(detail)});
}

void CheckReport::note(std::string text) {
  if (std::find(notes.begin(), notes.end(), text) == notes.end()) notes.push_back(std::move(text));
}

void CheckReport::merge(const CheckReport& other) {
  cases += other.cases;
  violation_count += other.violation_count;
  for (const Violation& v : other.violations)
    if (violations.size() < kStoredViolations) violations.push_back(v);
  sampled = sampled || other.sampled;
  for (const std::string& n : other.notes) note(n);
}

Point witness_point(WitnessRule rule, const Point& x) {
  if (rule == WitnessRule::Zero || x.is_zero()) return Point();
  return project(x, x.support() - 1);
}

WitnessRule parse_witness_rule(std::string_view text) {
  if (text == "zero") return WitnessRule::Zero;
  if (text == "projection") return WitnessRule::Projection;
  throw Error(ErrorCode::InvalidArgument, "unknown witness rule '" + std::string(text) + "'");
}

DeskGrid standard_desk_grid() {
  DeskGrid g;
  g.points = points_up_to(3, 3);
  g.letters = letters_over(g.points);
  g.radii.push_back(0);
  for (int k = 0; k <= 20; ++k) g.radii.push_back(Dyadic::pow2(-k));
  for (int k = 2; k <= 20; ++k) g.radii.push_back(Dyadic::pow2(-k) * 3);
  std::sort(g.radii.begin(), g.radii.end());
  g.pair_radii.push_back(0);
  for (int k = 20; k >= 0; k -= 2) g.pair_radii.push_back(Dyadic::pow2(-k));
  return g;
}

namespace {

std::string show(const Rational& q) { return q.str(); }

std::string at(const Letter& x, const Dyadic& r) { return "x=" + x.to_string() + " r=" + r.to_string(); }

std::string at(const Letter& x, const PiecewiseAffine::Witness& w) {
  return "x=" + x.to_string() + " r=" + show(w.r) + " gap=" + show(w.value);
}

const char* kSampledNote = "NonPiecewiseLinear: no breakpoint oracle, sampled on the grid, not certified";

std::vector<Dyadic> sorted(std::span<const Dyadic> radii) {
  std::vector<Dyadic> out(radii.begin(), radii.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Evaluations and distances indexed by letter position.
struct Tables {
  std::size_t n;
  std::vector<Dyadic> dist;

  explicit Tables(std::span<const Letter> letters) : n(letters.size()), dist(n * n) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) dist[i * n + j] = ultrametric_d(letters[i], letters[j]);
  }
  const Dyadic& d(std::size_t i, std::size_t j) const { return dist[i * n + j]; }
};

std::vector<Dyadic> column(const Scale& gamma, std::span<const Letter> letters, const Dyadic& r) {
  std::vector<Dyadic> out;
  out.reserve(letters.size());
  for (const Letter& x : letters) out.push_back(gamma.evaluate(x, r));
  return out;
}

void exact_axioms(CheckReport& rep, const Letter& x, const PiecewiseAffine& f) {
  const PiecewiseAffine id = PiecewiseAffine::affine(0, std::nullopt, 1, 0);
  if (auto w = (f - id).find_negative()) rep.fail("(i)", at(x, *w));
  if (x.is_identity())
    if (auto w = (id - f).find_negative()) rep.fail("(i)", at(x, *w) + " (Gamma(e, r) != r)");
  if (f(0) != 0) rep.fail("(ii)", "x=" + x.to_string() + " Gamma(x, 0) = " + show(f(0)));
  if (auto w = f.find_nonpositive(false)) rep.fail("(ii)", at(x, *w));
  const auto& knots = f.knots();
  const auto& pieces = f.pieces();
  const auto& values = f.knot_values();
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (pieces[i].slope < 0) rep.fail("(iii)", "x=" + x.to_string() + " decreasing after r=" + show(knots[i]));
    if (pieces[i].at(knots[i]) < values[i])
      rep.fail("(iii)", "x=" + x.to_string() + " drops right of r=" + show(knots[i]));
    if (i > 0 && pieces[i - 1].at(knots[i]) > values[i])
      rep.fail("(iii)", "x=" + x.to_string() + " drops at r=" + show(knots[i]));
  }
  if (!pieces.empty() && pieces.front().at(0) != 0)
    rep.fail("(iv)", "x=" + x.to_string() + " limit at 0+ is " + show(pieces.front().at(0)));
  rep.cases += 4;
}

}  // namespace

CheckReport check_scale_axioms(const Scale& gamma, std::span<const Letter> letters, std::span<const Dyadic> radii,
                               const Dyadic& tolerance) {
  CheckReport rep;
  rep.check = "axioms";
  const std::vector<Dyadic> grid = sorted(radii);
  const Dyadic* smallest = nullptr;
  for (const Dyadic& r : grid)
    if (r.sign() > 0) {
      smallest = &r;
      break;
    }
  for (const Letter& x : letters) {
    std::optional<Dyadic> prev;
    for (const Dyadic& r : grid) {
      const Dyadic v = gamma.evaluate(x, r);
      ++rep.cases;
      if (x.is_identity() ? v != r : v < r) rep.fail("(i)", at(x, r) + " value=" + v.to_string());
      if ((r.sign() == 0) != (v.sign() == 0)) rep.fail("(ii)", at(x, r) + " value=" + v.to_string());
      if (prev && v < *prev) rep.fail("(iii)", at(x, r) + " value=" + v.to_string() + " below " + prev->to_string());
      prev = v;
    }
    if (auto f = gamma.profile(x, 0, std::nullopt)) {
      exact_axioms(rep, x, *f);
    } else {
      rep.sampled = true;
      rep.note(kSampledNote);
      rep.note("(iv) checked as Gamma(x, r_min) <= " + tolerance.to_string() + " at the smallest positive radius");
      if (smallest) {
        const Dyadic v = gamma.evaluate(x, *smallest);
        ++rep.cases;
        if (v > tolerance) rep.fail("(iv)", at(x, *smallest) + " value=" + v.to_string());
      }
    }
  }
  return rep;
}

CheckReport check_adequacy(const Scale& gamma, std::span<const Letter> letters, std::span<const Dyadic> radii,
                           std::span<const Dyadic> pair_radii) {
  CheckReport rep;
  rep.check = "adequacy";
  rep.sampled = true;
  rep.note("(A1)', (A1)'' and (A2) sampled on the radius grids");
  const std::size_t n = letters.size();
  const Tables t(letters);
  const std::vector<Dyadic> grid = sorted(radii), pairs = sorted(pair_radii);

  std::unordered_map<Letter, std::size_t, LetterHash> index;
  for (std::size_t i = 0; i < n; ++i) index.emplace(letters[i], i);

  // (A1)': Gamma(z,r) + d(x,z) + d(y,z) >= min{Gamma(x,r), Gamma(y,r)} + d(x,y).
  for (const Dyadic& r : grid) {
    const std::vector<Dyadic> g = column(gamma, letters, r);
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) {
        const Dyadic rhs = std::min(g[x], g[y]) + t.d(x, y);
        rep.cases += n;
        for (std::size_t z = 0; z < n; ++z) {
          const Dyadic lhs = g[z] + t.d(x, z) + t.d(y, z);
          if (lhs < rhs)
            rep.fail("(A1)'", "x=" + letters[x].to_string() + " y=" + letters[y].to_string() + " z=" +
                                  letters[z].to_string() + " r=" + r.to_string() + " lhs=" + lhs.to_string() +
                                  " rhs=" + rhs.to_string());
        }
      }
  }

  const std::size_t p = pairs.size();
  std::vector<std::vector<Dyadic>> pg(p);
  for (std::size_t i = 0; i < p; ++i) pg[i] = column(gamma, letters, pairs[i]);

  // (A1)'': min{G(x,r1),G(y,r1)} + min{G(x,r2),G(y,r2)} >= min{G(x,r1+r2),G(y,r1+r2)}.
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) {
      const std::vector<Dyadic> sum = column(gamma, letters, pairs[i] + pairs[j]);
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
          ++rep.cases;
          const Dyadic lhs = std::min(pg[i][x], pg[i][y]) + std::min(pg[j][x], pg[j][y]);
          const Dyadic rhs = std::min(sum[x], sum[y]);
          if (lhs < rhs)
            rep.fail("(A1)''", "x=" + letters[x].to_string() + " y=" + letters[y].to_string() + " r1=" +
                                   pairs[i].to_string() + " r2=" + pairs[j].to_string() + " lhs=" + lhs.to_string() +
                                   " rhs=" + rhs.to_string());
        }
    }

  // (A2): with r = r1 + min{G(y^-1,r2), G(z^-1,r2)} + d(y,z),
  // min{G(x,r),G(z,r)} + d(x,z) >= min{G(x,r1),G(y,r1)} + d(x,y) + r2.
  // Triples sharing the offset r - r1 share one column of evaluations.
  struct Item {
    std::size_t y, z, j;
  };
  std::map<Dyadic, std::vector<Item>> by_offset;
  for (std::size_t y = 0; y < n; ++y) {
    const std::size_t yi = index.count(letters[y].inverse()) ? index.at(letters[y].inverse()) : n;
    for (std::size_t z = 0; z < n; ++z) {
      const std::size_t zi = index.count(letters[z].inverse()) ? index.at(letters[z].inverse()) : n;
      for (std::size_t j = 0; j < p; ++j) {
        const Dyadic gy = yi < n ? pg[j][yi] : gamma.evaluate(letters[y].inverse(), pairs[j]);
        const Dyadic gz = zi < n ? pg[j][zi] : gamma.evaluate(letters[z].inverse(), pairs[j]);
        by_offset[std::min(gy, gz) + t.d(y, z)].push_back({y, z, j});
      }
    }
  }
  for (const auto& [offset, items] : by_offset) {
    for (std::size_t i = 0; i < p; ++i) {
      const Dyadic r = pairs[i] + offset;
      const std::vector<Dyadic> g = column(gamma, letters, r);
      for (const Item& it : items) {
        const Dyadic& r2 = pairs[it.j];
        rep.cases += n;
        for (std::size_t x = 0; x < n; ++x) {
          const Dyadic lhs = std::min(g[x], g[it.z]) + t.d(x, it.z);
          const Dyadic rhs = std::min(pg[i][x], pg[i][it.y]) + t.d(x, it.y) + r2;
          if (lhs < rhs)
            rep.fail("(A2)", "x=" + letters[x].to_string() + " y=" + letters[it.y].to_string() + " z=" +
                                 letters[it.z].to_string() + " r1=" + pairs[i].to_string() + " r2=" + r2.to_string() +
                                 " lhs=" + lhs.to_string() + " rhs=" + rhs.to_string());
        }
      }
    }
  }
  return rep;
}

CheckReport check_goodness(const Scale& gamma, std::span<const Letter> letters, std::span<const Dyadic> radii,
                           std::span<const Dyadic> pair_radii) {
  CheckReport rep;
  rep.check = "goodness";
  const std::size_t n = letters.size();
  const Tables t(letters);
  const std::vector<Dyadic> grid = sorted(radii), pairs = sorted(pair_radii);

  std::vector<std::optional<PiecewiseAffine>> prof;
  bool all_profiles = true;
  for (const Letter& x : letters) {
    prof.push_back(gamma.profile(x, 0, std::nullopt));
    all_profiles = all_profiles && prof.back().has_value();
  }
  if (!all_profiles) {
    rep.sampled = true;
    rep.note(kSampledNote);
  }
  std::vector<std::vector<Dyadic>> g;
  for (const Dyadic& r : grid) g.push_back(column(gamma, letters, r));

  // (G1): Gamma(y,r) + d(x,y) >= Gamma(x,r).
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      if (prof[x] && prof[y]) {
        ++rep.cases;
        if (auto w = (*prof[y] + t.d(x, y).to_rational() - *prof[x]).find_negative())
          rep.fail("(G1)", "y=" + letters[y].to_string() + " " + at(letters[x], *w));
        continue;
      }
      for (std::size_t i = 0; i < grid.size(); ++i) {
        ++rep.cases;
        if (g[i][y] + t.d(x, y) < g[i][x])
          rep.fail("(G1)", "y=" + letters[y].to_string() + " " + at(letters[x], grid[i]));
      }
    }

  // (G2): Gamma(x,r)/r non-increasing for r > 0.
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
      if (grid[i].sign() <= 0) continue;
      ++rep.cases;
      if (g[i][x] * grid[i + 1] < g[i + 1][x] * grid[i])
        rep.fail("(G2)", at(letters[x], grid[i]) + " ratio grows towards r=" + grid[i + 1].to_string());
    }
    if (!prof[x]) continue;
    const auto& knots = prof[x]->knots();
    const auto& pieces = prof[x]->pieces();
    const auto& values = prof[x]->knot_values();
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      ++rep.cases;
      if (pieces[i].intercept < 0)
        rep.fail("(G2)", "x=" + letters[x].to_string() + " piece from r=" + show(knots[i]) + " has intercept " +
                             show(pieces[i].intercept));
      if (knots[i] > 0 && (pieces[i].at(knots[i]) > values[i] || (i > 0 && pieces[i - 1].at(knots[i]) < values[i])))
        rep.fail("(G2)", "x=" + letters[x].to_string() + " jumps up at r=" + show(knots[i]));
    }
  }

  // (G3): Gamma(x, r1 + r2) >= Gamma(x, r1) + r2.
  rep.note("(G3) sampled on pairs of radii");
  rep.sampled = true;
  for (std::size_t x = 0; x < n; ++x)
    for (const Dyadic& r1 : pairs) {
      const Dyadic base = gamma.evaluate(letters[x], r1);
      for (const Dyadic& r2 : pairs) {
        ++rep.cases;
        if (gamma.evaluate(letters[x], r1 + r2) < base + r2)
          rep.fail("(G3)", "x=" + letters[x].to_string() + " r1=" + r1.to_string() + " r2=" + r2.to_string());
      }
    }
  return rep;
}

namespace {

// max{A - c, A - B - delta} >= 0 on (lo, hi], i.e.
// Gamma(x,r) >= min{c, Gamma(y,r) + delta}.
void s_inequality(CheckReport& rep, const Scale& gamma, const std::string& condition, const Letter& x,
                  const Letter& y, const Dyadic& c, const Dyadic& delta, const Dyadic& lo,
                  const std::optional<Dyadic>& hi, std::span<const Dyadic> fallback) {
  std::optional<Rational> hi_q;
  if (hi) hi_q = hi->to_rational();
  auto a = gamma.profile(x, lo.to_rational(), hi_q);
  auto b = gamma.profile(y, lo.to_rational(), hi_q);
  const std::string who = "x=" + x.to_string() + " y=" + y.to_string();
  if (a && b) {
    ++rep.cases;
    PiecewiseAffine f = max(*a + (-c.to_rational()), *a - *b + (-delta.to_rational()));
    if (auto w = f.find_negative(false)) rep.fail(condition, who + " r=" + show(w->r) + " gap=" + show(w->value));
    return;
  }
  rep.sampled = true;
  rep.note(kSampledNote);
  for (const Dyadic& r : fallback) {
    if (r <= lo || (hi && r > *hi)) continue;
    ++rep.cases;
    const Dyadic v = gamma.evaluate(x, r);
    if (v < std::min(c, gamma.evaluate(y, r) + delta)) rep.fail(condition, who + " r=" + r.to_string());
  }
}

}  // namespace

CheckReport check_universality_premises(const Scale& gamma, unsigned k_const, std::size_t m_max,
                                        std::span<const Point> points, WitnessRule rule,
                                        std::span<const Dyadic> fallback_radii) {
  CheckReport rep;
  rep.check = "universality";
  const auto k = static_cast<std::int64_t>(k_const);
  const Dyadic c = Dyadic::pow2(-(k + 3));
  std::size_t used = 0;
  for (const Point& p : points) {
    const std::size_t m = p.support();
    if (m == 0 || m > m_max) continue;
    ++used;
    const Letter x = Letter::pos(p), xi = Letter::neg(p);
    const Letter y = Letter::pos(witness_point(rule, p));
    const Dyadic bound = Dyadic::pow2(-(static_cast<std::int64_t>(m) + k + 5));
    const Dyadic delta = ultrametric_d(x, y).times_pow2(-k);

    // Symmetry in the sign of the letter.
    auto fp = gamma.profile(x, 0, std::nullopt), fn = gamma.profile(xi, 0, std::nullopt);
    if (fp && fn) {
      ++rep.cases;
      PiecewiseAffine diff = *fp - *fn;
      auto w = diff.find_negative();
      if (!w) w = (Rational(-1) * diff).find_negative();
      if (w) rep.fail("symmetry", at(x, *w));
    } else {
      for (const Dyadic& r : fallback_radii) {
        ++rep.cases;
        if (gamma.evaluate(x, r) != gamma.evaluate(xi, r)) rep.fail("symmetry", at(x, r));
      }
    }

    s_inequality(rep, gamma, "(S1)", x, y, c, delta, bound, std::nullopt, fallback_radii);

    // (S3): Gamma(x, r) >= 8r on (0, bound].
    if (auto f = gamma.profile(x, 0, bound.to_rational())) {
      ++rep.cases;
      if (auto w = (*f - PiecewiseAffine::affine(0, bound.to_rational(), 8, 0)).find_negative(false))
        rep.fail("(S3)", at(x, *w));
    } else {
      rep.sampled = true;
      rep.note(kSampledNote);
      for (const Dyadic& r : fallback_radii) {
        if (r.sign() <= 0 || r > bound) continue;
        ++rep.cases;
        if (gamma.evaluate(x, r) < r * 8) rep.fail("(S3)", at(x, r));
      }
    }
  }
  if (used == 0) rep.note("no points with support in 1.." + std::to_string(m_max));
  return rep;
}

CheckReport check_ekm_bound(const Scale& gamma, unsigned k_const, std::size_t m, std::size_t k,
                            std::span<const Point> candidates, WitnessRule rule, std::span<const Dyadic> fallback_radii) {
  if (m == 0 || k <= m + k_const + 5)
    throw Error(ErrorCode::InvalidArgument, "need m > 0 and k > m + K + 5");
  CheckReport rep;
  rep.check = "ekm";
  const auto kk = static_cast<std::int64_t>(k_const);
  const Dyadic c = Dyadic::pow2(-(kk + 3));
  const Dyadic lo = Dyadic::pow2(-static_cast<std::int64_t>(k));
  const Dyadic hi = Dyadic::pow2(-(static_cast<std::int64_t>(m) + kk + 5));
  std::size_t skipped = 0, certified = 0;
  for (const Point& p : candidates) {
    if (p.support() != m) {
      ++skipped;
      continue;
    }
    const Letter x = Letter::pos(p);
    const Letter y = Letter::pos(witness_point(rule, p));
    const std::size_t before = rep.violation_count;
    s_inequality(rep, gamma, "E^k_m", x, y, c, ultrametric_d(x, y).times_pow2(-kk), lo, hi, fallback_radii);
    if (rep.violation_count == before) ++certified;
  }
  rep.note("certified outside: " + std::to_string(certified));
  if (skipped) rep.note("skipped (support != m): " + std::to_string(skipped));
  return rep;
}

std::vector<Point> ekm_candidates(std::string_view scale_name, std::size_t m, std::size_t k, std::uint64_t cap) {
  if (m == 0) throw Error(ErrorCode::InvalidArgument, "m must be positive");
  const auto km = static_cast<std::int64_t>(k) - static_cast<std::int64_t>(m + 5);
  std::vector<Point> out;
  if (scale_name == "gamma1") {
    BigInt first = km >= 0 ? BigInt(1) << static_cast<unsigned>(km) : BigInt(1);
    for (BigInt i = first; i <= cap; ++i) {
      Point p = graded_unrank(i);
      if (p.support() == m) out.push_back(std::move(p));
    }
  } else if (scale_name == "gamma2") {
    const std::int64_t first = std::max<std::int64_t>(static_cast<std::int64_t>(k) - 6, 0);
    PointEnumeration zeta = canonical_zeta();
    for (std::int64_t i = first; i <= static_cast<std::int64_t>(cap); ++i) {
      Point p = zeta.backward(i);
      if (p.support() == m) out.push_back(std::move(p));
    }
  } else if (scale_name == "gamma0") {
    const std::uint64_t first = static_cast<std::uint64_t>(std::max<std::int64_t>(km, 1));
    std::vector<std::uint64_t> cur(m);
    for (std::uint64_t s = first; s <= cap; ++s) {
      // Entries summing to s with the top one positive.
      std::function<void(std::size_t, std::uint64_t)> rec = [&](std::size_t i, std::uint64_t left) {
        if (i + 1 == m) {
          if (left == 0) return;
          cur[i] = left;
          out.emplace_back(cur);
          return;
        }
        for (std::uint64_t v = 0; v <= left; ++v) {
          cur[i] = v;
          rec(i + 1, left - v);
        }
      };
      rec(0, s);
    }
  } else {
    throw Error(ErrorCode::InvalidArgument, "no E^k_m bound known for scale '" + std::string(scale_name) + "'");
  }
  return out;
}

}  // namespace freenorm
