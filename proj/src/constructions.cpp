#include "freenorm/constructions.hpp"

#include <algorithm>
#include <functional>
#include <istream>
#include <sstream>

#include "freenorm/error.hpp"

namespace freenorm {

DyadicNormWord build_dyadic_norm_word(std::uint64_t m, std::uint64_t n, std::uint64_t offset) {
  if (m == 0 || (n < 64 && m >> n != 0))
    throw Error(ErrorCode::OutOfRange,
                "need 0 < m < 2^n, got m=" + std::to_string(m) + " n=" + std::to_string(n));
  if (offset == 0) throw Error(ErrorCode::InvalidArgument, "first coordinates must be nonzero");

  DyadicNormWord out;
  out.target = Dyadic::from_parts(BigInt(m), static_cast<std::int64_t>(n));
  std::vector<Letter> letters;
  std::uint64_t first = offset;
  // Bit b of m contributes 2^-(n-b); walk from the high bits so n_i ascends.
  for (int b = 63; b >= 0; --b) {
    if (!((m >> b) & 1)) continue;
    std::uint64_t ni = n - static_cast<std::uint64_t>(b);
    std::vector<std::uint64_t> y(ni + 1, 0);
    y[0] = first;
    y[ni] = 1;
    Point x{first}, yp(std::move(y));
    letters.push_back(Letter::neg(x));
    letters.push_back(Letter::pos(yp));
    out.letter_pairs.emplace_back(std::move(x), std::move(yp));
    out.exponents.push_back(ni);
    ++first;
  }
  out.word = Word(std::move(letters));
  return out;
}

std::vector<Dyadic> default_threshold_grid() {
  std::vector<Dyadic> g;
  for (int k = 1; k <= 30; ++k) g.push_back(Dyadic::pow2(-k));
  return g;
}

Dyadic find_expansion_threshold(const Scale& gamma, const Point& x0, std::span<const Dyadic> grid) {
  std::vector<Dyadic> cands = grid.empty() ? default_threshold_grid() : std::vector<Dyadic>(grid.begin(), grid.end());
  std::sort(cands.begin(), cands.end(), std::greater<>());
  const Dyadic half = Dyadic::pow2(-1);
  const Letter x = Letter::pos(x0);
  for (const Dyadic& a : cands) {
    if (a.sign() <= 0 || a > half) continue;
    Rational hi = a.to_rational();
    auto f = gamma.profile(x, 0, hi);
    if (!f)
      throw Error(ErrorCode::NonPiecewiseLinear, gamma.name() + " has no breakpoint oracle at x0=" + x0.to_string());
    if (!(*f - PiecewiseAffine::affine(0, hi, 1, 0)).find_nonpositive(false)) return a;
  }
  throw Error(ErrorCode::NotExpanding, gamma.name() + " has no f(r) > r interval at x0=[" + x0.to_string() + "]");
}

namespace {

Word power(const Letter& x, std::uint64_t k) { return Word(std::vector<Letter>(k, x)); }

Word concat_all(std::initializer_list<Word> parts) {
  std::vector<Letter> out;
  for (const Word& w : parts)
    if (!w.is_identity()) out.insert(out.end(), w.letters().begin(), w.letters().end());
  return out.empty() ? Word::identity() : Word(std::move(out));
}

struct Iterate {
  const Scale& gamma;
  Letter x;
  Dyadic operator()(Dyadic r, std::uint64_t times) const {
    for (std::uint64_t i = 0; i < times; ++i) r = gamma(x, r);
    return r;
  }
};

// Number of even indices 2j <= depth, i.e. how many (m_j, n_j) are needed.
std::size_t fraction_count(std::size_t depth) { return depth / 2 + 1; }

std::string point_text(const Point& p) { return p.is_zero() ? "0" : p.to_string(); }

}  // namespace

CliWitness build_cli_witness(const ScalePtr& gamma, const Point& x0, const CliWitnessOptions& options) {
  if (!gamma) throw Error(ErrorCode::InvalidArgument, "no scale");
  CliWitness wit;
  wit.scale = gamma;
  wit.x0 = x0;
  wit.depth = options.depth;
  // A trivial scale is reported as such before the normalization of x0.
  wit.a = find_expansion_threshold(*gamma, x0);
  if (x0[0] != 0) throw Error(ErrorCode::InvalidArgument, "x0 must have x0(0) = 0");
  const Iterate f{*gamma, Letter::pos(x0)};

  // k_0 = 0, then k_(j+1) is the least k > k_j with f^k(2^-(j+2)) >= a.
  const std::size_t nf = fraction_count(options.depth);
  wit.k_indices.push_back(0);
  for (std::size_t j = 0; j < nf; ++j) {
    std::uint64_t prev = wit.k_indices.back();
    Dyadic r = Dyadic::pow2(-static_cast<std::int64_t>(j + 2));
    std::uint64_t k = 0;
    while (k <= prev || r < wit.a) {
      if (k >= prev + options.iteration_cap)
        throw Error(ErrorCode::IterationCap, "k_" + std::to_string(j + 1) + " not reached after " +
                                                 std::to_string(options.iteration_cap) + " iterations");
      r = f(r, 1);
      ++k;
    }
    wit.k_indices.push_back(k);
  }

  // Smallest n, then smallest m, with 2^-(j+1) <= f^D(m/2^n) < 2^-j.
  constexpr std::uint64_t kMaxN = 48;
  for (std::size_t j = 0; j < nf; ++j) {
    std::uint64_t delta = wit.k_indices[j + 1] - wit.k_indices[j];
    Dyadic lower = Dyadic::pow2(-static_cast<std::int64_t>(j + 1)), upper = Dyadic::pow2(-static_cast<std::int64_t>(j));
    auto g = [&](std::uint64_t m, std::uint64_t n) {
      return f(Dyadic::from_parts(BigInt(m), static_cast<std::int64_t>(n)), delta);
    };
    bool found = false;
    for (std::uint64_t n = 1; n <= kMaxN && !found; ++n) {
      std::uint64_t lo = 1, hi = (std::uint64_t{1} << n) - 1;
      if (g(hi, n) < lower) continue;
      while (lo < hi) {
        std::uint64_t mid = lo + (hi - lo) / 2;
        if (g(mid, n) >= lower) hi = mid;
        else lo = mid + 1;
      }
      if (g(lo, n) < upper) {
        wit.fractions.emplace_back(lo, n);
        found = true;
      }
    }
    if (!found)
      throw Error(ErrorCode::IterationCap, "no m/2^n with n <= " + std::to_string(kMaxN) + " for j=" + std::to_string(j));
  }

  std::uint64_t offset = 1;
  for (std::size_t l = 0; l <= options.depth; ++l) {
    std::size_t j = l / 2;
    DyadicNormWord u = l % 2 == 0 ? build_dyadic_norm_word(wit.fractions[j].first, wit.fractions[j].second, offset)
                                  : build_dyadic_norm_word(1, j + 2, offset);
    offset += u.letter_pairs.size();
    wit.u_words.push_back(u.word);
    if (l % 2 == 0) {
      std::uint64_t delta = wit.k_indices[j + 1] - wit.k_indices[j];
      wit.v_words.push_back(concat_all({power(Letter::neg(x0), delta), u.word, power(Letter::pos(x0), delta)}));
    } else {
      wit.v_words.push_back(u.word);
    }
    wit.w_words.push_back(l == 0 ? wit.v_words[0] : concat_all({wit.w_words.back(), wit.v_words.back()}));
    if (l >= 1) {
      std::size_t len = wit.w_words[l].size() + wit.w_words[l - 1].size();
      if (len > options.cap)
        throw Error(ErrorCode::WordTooLong, "w_" + std::to_string(l) + " w_" + std::to_string(l - 1) + "^-1 has " +
                                                std::to_string(len) + " letters, cap is " + std::to_string(options.cap));
    }
  }
  return wit;
}

CliWitnessReport verify_cli_witness(const CliWitness& wit) {
  if (!wit.scale) throw Error(ErrorCode::InvalidArgument, "witness has no scale");
  const Scale& gamma = *wit.scale;
  CliWitnessReport out;
  CheckReport& rep = out.report;
  rep.check = "cli-witness";
  const Iterate f{gamma, Letter::pos(wit.x0)};
  const std::size_t depth = wit.depth, nf = fraction_count(depth);

  auto expect = [&](bool ok, const char* cond, const std::string& detail) {
    ++rep.cases;
    if (!ok) rep.fail(cond, detail);
    return ok;
  };

  bool shape = expect(wit.u_words.size() == depth + 1 && wit.v_words.size() == depth + 1 &&
                          wit.w_words.size() == depth + 1 && wit.k_indices.size() >= nf + 1 &&
                          wit.fractions.size() >= nf,
                      "shape", "tables do not match depth " + std::to_string(depth));
  if (!shape) return out;

  expect(wit.x0[0] == 0, "x0", "x0(0) != 0");
  expect(wit.a.sign() > 0 && wit.a <= Dyadic::pow2(-1), "threshold", "a=" + wit.a.to_string() + " outside (0, 1/2]");
  if (auto p = gamma.profile(Letter::pos(wit.x0), 0, wit.a.to_rational())) {
    auto bad = (*p - PiecewiseAffine::affine(0, wit.a.to_rational(), 1, 0)).find_nonpositive(false);
    expect(!bad, "threshold", bad ? "f(r) <= r at r=" + bad->r.str() : "");
  } else {
    rep.note("NonPiecewiseLinear: f(r) > r on (0, a] not certified");
  }

  expect(wit.k_indices[0] == 0, "k", "k_0 != 0");
  for (std::size_t j = 0; j < wit.k_indices.size(); ++j) {
    if (j > 0) expect(wit.k_indices[j] > wit.k_indices[j - 1], "k", "k not increasing at j=" + std::to_string(j));
    Dyadic v = f(Dyadic::pow2(-static_cast<std::int64_t>(j + 1)), wit.k_indices[j]);
    expect(v >= wit.a, "k", "f^k_" + std::to_string(j) + "(2^-" + std::to_string(j + 1) + ")=" + v.to_string() + " < a");
  }
  for (std::size_t j = 0; j < nf; ++j) {
    auto [m, n] = wit.fractions[j];
    if (wit.k_indices[j + 1] < wit.k_indices[j] || m == 0 || n >= 64 || m >> n != 0) {
      expect(false, "sandwich", "bad fraction at j=" + std::to_string(j));
      continue;
    }
    Dyadic v = f(Dyadic::from_parts(BigInt(m), static_cast<std::int64_t>(n)), wit.k_indices[j + 1] - wit.k_indices[j]);
    expect(Dyadic::pow2(-static_cast<std::int64_t>(j + 1)) <= v && v < Dyadic::pow2(-static_cast<std::int64_t>(j)),
           "sandwich", "j=" + std::to_string(j) + " value " + v.to_string());
  }

  for (std::size_t l = 0; l <= depth; ++l) {
    const std::string at = "l=" + std::to_string(l);
    for (const Letter& x : wit.u_words[l].letters())
      expect(!x.is_identity() && x.point()[0] != 0, "u-letters", at + " letter " + x.to_string());
    std::size_t j = l / 2;
    Word v = wit.u_words[l];
    if (l % 2 == 0) {
      std::uint64_t delta = wit.k_indices[j + 1] - wit.k_indices[j];
      v = concat_all({power(Letter::neg(wit.x0), delta), wit.u_words[l], power(Letter::pos(wit.x0), delta)});
    }
    expect(v == wit.v_words[l], "v", at);
    Word w = l == 0 ? wit.v_words[0] : concat_all({wit.w_words[l - 1], wit.v_words[l]});
    expect(w == wit.w_words[l], "w", at);
    expect(wit.w_words[l].is_irreducible(), "irreducible", at);
  }

  for (std::size_t l = 0; l <= depth; ++l) {
    std::size_t j = l / 2;
    Dyadic nv = norm_exact(gamma, wit.v_words[l]).value;
    out.v_norms.push_back(nv);
    out.partial_sum += nv;
    const std::string at = "l=" + std::to_string(l) + " N(v)=" + nv.to_string();
    if (l % 2 == 0) {
      Dyadic bound = Dyadic::pow2(-static_cast<std::int64_t>(j));
      out.partial_bound += bound;
      expect(nv < bound, "cauchy", at);
      auto [m, n] = wit.fractions[j];
      Dyadic nu = norm_exact(gamma, wit.u_words[l]).value;
      expect(nu == Dyadic::from_parts(BigInt(m), static_cast<std::int64_t>(n)), "u-norm",
             at + " N(u)=" + nu.to_string());
    } else {
      Dyadic target = Dyadic::pow2(-static_cast<std::int64_t>(j + 2));
      out.partial_bound += target;
      expect(nv == target, "cauchy", at);
    }
  }
  expect(out.partial_sum < out.partial_bound, "summability",
         out.partial_sum.to_string() + " vs " + out.partial_bound.to_string());

  for (std::size_t l = 1; l <= depth; ++l) {
    Word step = group_multiply(wit.w_words[l], invert(wit.w_words[l - 1]));
    Dyadic ns = norm_exact(gamma, step).value;
    out.step_norms.push_back(ns);
    expect(ns >= wit.a, "divergence", "l=" + std::to_string(l) + " N=" + ns.to_string() + " a=" + wit.a.to_string());
  }
  if (depth == 0) rep.note("no divergence step checked");
  return out;
}

std::string serialize_witness(const CliWitness& wit, const CliWitnessReport* report) {
  std::ostringstream os;
  os << "scale " << (wit.scale ? wit.scale->name() : "") << "\n";
  os << "x0 " << point_text(wit.x0) << "\n";
  os << "a " << wit.a << "\n";
  os << "depth " << wit.depth << "\n";
  os << "k";
  for (auto k : wit.k_indices) os << " " << k;
  os << "\n";
  for (auto [m, n] : wit.fractions) os << "fraction " << m << " " << n << "\n";
  for (const Word& u : wit.u_words) os << "u " << u.to_string() << "\n";
  for (const Word& v : wit.v_words) os << "v " << v.to_string() << "\n";
  for (const Word& w : wit.w_words) os << "w " << w.to_string() << "\n";
  if (report) {
    for (std::size_t l = 0; l < report->v_norms.size(); ++l)
      os << "report norm_v " << l << " " << report->v_norms[l] << "\n";
    for (std::size_t l = 0; l < report->step_norms.size(); ++l)
      os << "report norm_step " << l + 1 << " " << report->step_norms[l] << "\n";
    os << "report partial_sum " << report->partial_sum << "\n";
    os << "report partial_bound " << report->partial_bound << "\n";
    os << "report cases " << report->report.cases << "\n";
    os << "report violations " << report->report.violation_count << "\n";
    for (const Violation& v : report->report.violations) os << "report violation " << v.condition << " " << v.detail << "\n";
    for (const std::string& n : report->report.notes) os << "report note " << n << "\n";
    os << "report outcome " << (report->passed() ? "pass" : "fail") << "\n";
  }
  return os.str();
}

CliWitness parse_witness(std::istream& in) {
  CliWitness wit;
  std::string line;
  std::size_t lineno = 0;
  bool have_scale = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto sp = line.find(' ');
    std::string key = line.substr(0, sp), rest = sp == std::string::npos ? "" : line.substr(sp + 1);
    try {
      if (key == "report") continue;
      if (key == "scale") {
        wit.scale = make_scale(rest);
        have_scale = true;
      } else if (key == "x0") {
        wit.x0 = Point::parse(rest);
      } else if (key == "a") {
        wit.a = Dyadic::parse(rest);
      } else if (key == "depth") {
        wit.depth = std::stoull(rest);
      } else if (key == "k") {
        std::istringstream ks(rest);
        std::uint64_t k;
        while (ks >> k) wit.k_indices.push_back(k);
      } else if (key == "fraction") {
        std::istringstream fs(rest);
        std::uint64_t m, n;
        if (!(fs >> m >> n)) throw Error(ErrorCode::ParseError, "fraction needs m n");
        wit.fractions.emplace_back(m, n);
      } else if (key == "u") {
        wit.u_words.push_back(Word::parse(rest));
      } else if (key == "v") {
        wit.v_words.push_back(Word::parse(rest));
      } else if (key == "w") {
        wit.w_words.push_back(Word::parse(rest));
      } else {
        throw Error(ErrorCode::ParseError, "unknown key '" + key + "'");
      }
    } catch (const Error& e) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": " + e.what());
    } catch (const std::exception& e) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!have_scale) throw Error(ErrorCode::ParseError, "bundle has no scale line");
  return wit;
}

std::size_t apply_homomorphism(const FiniteMetricGroup& group, const std::map<Letter, std::size_t>& phi,
                               const Word& w) {
  std::size_t g = group.identity();
  for (const Letter& x : w.letters()) {
    if (x.is_identity()) continue;
    auto it = phi.find(x);
    if (it == phi.end()) throw Error(ErrorCode::InvalidArgument, "letter " + x.to_string() + " outside the domain of phi");
    g = group.multiply(g, it->second);
  }
  return g;
}

HomomorphismReport extend_homomorphism(const Scale& gamma, const FiniteMetricGroup& group,
                                       const std::map<Letter, std::size_t>& phi,
                                       std::span<const std::pair<Word, Word>> samples, const NormOptions& options) {
  for (const auto& [x, g] : phi) {
    if (!phi.count(x.inverse())) throw Error(ErrorCode::NotClosedUnderInverse, "phi misses " + x.inverse().to_string());
    if (g >= group.size()) throw Error(ErrorCode::InvalidArgument, "phi(" + x.to_string() + ") is not an element");
  }
  // e belongs to every alphabet; Phi sends it to 1 whether listed or not.
  std::map<Letter, std::size_t> dom = phi;
  dom.emplace(Letter::identity(), group.identity());

  HomomorphismReport out;
  CheckReport& hyp = out.hypotheses;
  hyp.check = "homomorphism-hypotheses";
  auto elem = [&](std::size_t g) { return group.name(g); };

  ++hyp.cases;
  if (dom.at(Letter::identity()) != group.identity()) hyp.fail("(i)", "phi(e)=" + elem(dom.at(Letter::identity())));
  for (const auto& [x, g] : dom) {
    ++hyp.cases;
    if (dom.at(x.inverse()) != group.inverse(g))
      hyp.fail("(i)", "phi(" + x.inverse().to_string() + ") != phi(" + x.to_string() + ")^-1");
  }
  for (const auto& [x, g] : dom)
    for (const auto& [y, h] : dom) {
      ++hyp.cases;
      Dyadic dg = group.distance(g, h), d = ultrametric_d(x, y);
      if (dg > d) hyp.fail("(ii)", x.to_string() + " " + y.to_string() + " d_G=" + dg.to_string() + " d=" + d.to_string());
    }
  std::vector<Dyadic> radii = group.metric_values();
  for (const auto& [x, g] : dom)
    for (const Dyadic& r : radii) {
      ++hyp.cases;
      Dyadic lhs = conjugation_scale(group, g, r), rhs = gamma(x, r);
      if (lhs > rhs)
        hyp.fail("(iii)", x.to_string() + " r=" + r.to_string() + " Gamma_G=" + lhs.to_string() + " Gamma=" + rhs.to_string());
    }
  if (!hyp.passed()) return out;

  out.conclusion_attempted = true;
  CheckReport& con = out.conclusion;
  con.check = "homomorphism-conclusion";
  for (const auto& [w, v] : samples) {
    ++con.cases;
    Dyadic lhs = group.distance(apply_homomorphism(group, dom, w), apply_homomorphism(group, dom, v));
    Dyadic rhs = delta(gamma, w, v, options);
    if (lhs > rhs)
      con.fail("lipschitz", "w=" + w.to_string() + " v=" + v.to_string() + " d_G=" + lhs.to_string() +
                                " delta=" + rhs.to_string());
  }
  return out;
}

}  // namespace freenorm
