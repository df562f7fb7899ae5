#include <gtest/gtest.h>

#include <random>
#include <set>
#include <sstream>

#include "freenorm/constructions.hpp"
#include "freenorm/error.hpp"

using namespace freenorm;

namespace {

Dyadic frac(std::int64_t p, std::int64_t log2q) { return Dyadic::from_parts(BigInt(p), log2q); }

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidArgument;
}

// Klein four-group elements as bit masks: a = 1, b = 2. x goes to
// a^x(0) b^x(1), so letters agreeing on the first coordinate land at most
// d(1, b) = 1/4 apart.
std::map<Letter, std::size_t> klein_phi(std::span<const Point> pool) {
  std::map<Letter, std::size_t> phi;
  for (const Point& p : pool) {
    std::size_t g = (p[0] & 1) | ((p[1] & 1) << 1);
    phi[Letter::pos(p)] = g;
    phi[Letter::neg(p)] = g;
  }
  return phi;
}

}  // namespace

TEST(DyadicNormWord, Shape) {
  DyadicNormWord u = build_dyadic_norm_word(11, 4);
  // 11/16 = 1/2 + 1/8 + 1/16.
  EXPECT_EQ(u.exponents, (std::vector<std::uint64_t>{1, 3, 4}));
  EXPECT_EQ(u.word.to_string(), "X:1 x:1,1 X:2 x:2,0,0,1 X:3 x:3,0,0,0,1");
  EXPECT_EQ(u.target, frac(11, 4));
  for (std::size_t i = 0; i < u.letter_pairs.size(); ++i) {
    const auto& [x, y] = u.letter_pairs[i];
    EXPECT_EQ(x[0], i + 1);
    EXPECT_EQ(y[0], i + 1);
    EXPECT_EQ(ultrametric_d(Letter::pos(x), Letter::pos(y)), Dyadic::pow2(-static_cast<std::int64_t>(u.exponents[i])));
  }
  EXPECT_TRUE(u.word.is_irreducible());
  EXPECT_EQ(build_dyadic_norm_word(1, 1).word.to_string(), "X:1 x:1,1");
  EXPECT_EQ(build_dyadic_norm_word(3, 2, 5).word.to_string(), "X:5 x:5,1 X:6 x:6,0,1");
}

TEST(DyadicNormWord, RangeErrors) {
  EXPECT_EQ(code_of([] { build_dyadic_norm_word(0, 3); }), ErrorCode::OutOfRange);
  EXPECT_EQ(code_of([] { build_dyadic_norm_word(8, 3); }), ErrorCode::OutOfRange);
  EXPECT_EQ(code_of([] { build_dyadic_norm_word(1, 0); }), ErrorCode::OutOfRange);
}

TEST(DyadicNormWord, NormIsTheTargetUnderEveryScale) {
  // Every n <= 5 and every m: the value is scale independent, and the
  // enumeration oracle agrees with the dynamic program.
  for (const char* name : {"graev", "gamma0", "gamma1", "gamma2"}) {
    ScalePtr g = make_scale(name);
    NormOptions opt;
    opt.unchecked = true;
    for (std::uint64_t n = 1; n <= 4; ++n)
      for (std::uint64_t m = 1; m < (1u << n); ++m) {
        DyadicNormWord u = build_dyadic_norm_word(m, n);
        Dyadic want = frac(static_cast<std::int64_t>(m), static_cast<std::int64_t>(n));
        EXPECT_EQ(norm_exact(*g, u.word, opt).value, want) << name << " " << m << "/2^" << n;
        EXPECT_EQ(norm_by_enumeration(*g, u.word, opt).value, want) << name << " " << m << "/2^" << n;
      }
  }
}

TEST(ExpansionThreshold, Gamma0) {
  ScalePtr g0 = make_scale("gamma0");
  const Point x0{0, 1};
  EXPECT_EQ(find_expansion_threshold(*g0, x0), Dyadic::pow2(-1));
  // Independent reading of f: 2^5 (1 + 2^0 + 2^1) r against r + 2^-2.
  for (int k = 0; k <= 12; ++k) {
    Dyadic r = Dyadic::pow2(-k);
    Dyadic want = std::min(r * 128, r + Dyadic::pow2(-2));
    EXPECT_EQ((*g0)(Letter::pos(x0), r), want);
  }
  std::vector<Dyadic> coarse{Dyadic::pow2(-3), Dyadic::pow2(-5), Dyadic(1)};
  EXPECT_EQ(find_expansion_threshold(*g0, x0, coarse), Dyadic::pow2(-3));
}

TEST(ExpansionThreshold, TrivialScales) {
  EXPECT_EQ(code_of([] { find_expansion_threshold(*make_scale("graev"), Point{0, 1}); }), ErrorCode::NotExpanding);
  EXPECT_EQ(code_of([] { find_expansion_threshold(*make_scale("gamma0"), Point()); }), ErrorCode::NotExpanding);
  EXPECT_EQ(code_of([] { find_expansion_threshold(*make_scale("half"), Point{0, 1}); }), ErrorCode::NotExpanding);
  EXPECT_EQ(code_of([] { find_expansion_threshold(*make_scale("quadratic"), Point{0, 1}); }),
            ErrorCode::NonPiecewiseLinear);
}

TEST(CliWitness, DepthOneByHand) {
  CliWitness wit = build_cli_witness(make_scale("gamma0"), Point{0, 1});
  // f(1/4) = 1/2 gives k_1 = 1; f(1/2) = 3/4 lies in [1/2, 1) so (m_0, n_0) = (1, 1).
  EXPECT_EQ(wit.a, Dyadic::pow2(-1));
  EXPECT_EQ(wit.k_indices, (std::vector<std::uint64_t>{0, 1}));
  ASSERT_EQ(wit.fractions.size(), 1u);
  EXPECT_EQ(wit.fractions[0], std::make_pair(std::uint64_t{1}, std::uint64_t{1}));
  ASSERT_EQ(wit.w_words.size(), 2u);
  EXPECT_EQ(wit.v_words[0].to_string(), "X:0,1 X:1 x:1,1 x:0,1");
  EXPECT_EQ(wit.v_words[1].to_string(), "X:2 x:2,0,1");
  EXPECT_EQ(wit.w_words[1].size(), 6u);

  CliWitnessReport rep = verify_cli_witness(wit);
  EXPECT_TRUE(rep.passed()) << (rep.report.violations.empty() ? "" : rep.report.violations[0].detail);
  // N(v_0) is the outer x0 pair: f(1/2) = 3/4.
  EXPECT_EQ(rep.v_norms, (std::vector<Dyadic>{frac(3, 2), Dyadic::pow2(-2)}));
  ASSERT_EQ(rep.step_norms.size(), 1u);
  EXPECT_EQ(rep.step_norms[0], frac(7, 2));

  // Match enumeration as an independent oracle for the divergence step.
  Word step = group_multiply(wit.w_words[1], invert(wit.w_words[0]));
  EXPECT_EQ(step.size(), 10u);
  EXPECT_EQ(norm_by_enumeration(*wit.scale, step).value, rep.step_norms[0]);
}

TEST(CliWitness, DepthTwo) {
  CliWitnessOptions opt;
  opt.depth = 2;
  CliWitness wit = build_cli_witness(make_scale("gamma0"), Point{0, 1}, opt);
  // f^2(1/8) = f(3/8) = 5/8 gives k_2 = 2; f(m/2^n) in [1/4, 1/2) first at 1/8.
  EXPECT_EQ(wit.k_indices, (std::vector<std::uint64_t>{0, 1, 2}));
  ASSERT_EQ(wit.fractions.size(), 2u);
  EXPECT_EQ(wit.fractions[1], std::make_pair(std::uint64_t{1}, std::uint64_t{3}));
  CliWitnessReport rep = verify_cli_witness(wit);
  EXPECT_TRUE(rep.passed());
  EXPECT_EQ(rep.step_norms.size(), 2u);
  EXPECT_LT(rep.partial_sum, rep.partial_bound);

  opt.cap = 12;
  EXPECT_EQ(code_of([&] { build_cli_witness(make_scale("gamma0"), Point{0, 1}, opt); }), ErrorCode::WordTooLong);
}

TEST(CliWitness, Errors) {
  EXPECT_EQ(code_of([] { build_cli_witness(make_scale("graev"), Point{0, 1}); }), ErrorCode::NotExpanding);
  EXPECT_EQ(code_of([] { build_cli_witness(make_scale("gamma0"), Point()); }), ErrorCode::NotExpanding);
  EXPECT_EQ(code_of([] { build_cli_witness(make_scale("gamma0"), Point{1}); }), ErrorCode::InvalidArgument);
}

TEST(CliWitness, NegativeControls) {
  CliWitness wit = build_cli_witness(make_scale("gamma0"), Point{0, 1});
  auto conditions = [](const CliWitnessReport& r) {
    std::set<std::string> out;
    for (const Violation& v : r.report.violations) out.insert(v.condition);
    return out;
  };
  // Doubling a breaks the threshold and k invariants; the step norm 7/4
  // still clears a = 1, so divergence itself holds.
  CliWitness doubled = wit;
  doubled.a = wit.a * 2;
  CliWitnessReport rd = verify_cli_witness(doubled);
  EXPECT_FALSE(rd.passed());
  EXPECT_EQ(conditions(rd), (std::set<std::string>{"threshold", "k"}));
  EXPECT_EQ(rd.step_norms, std::vector<Dyadic>{frac(7, 2)});
  CliWitness inflated = wit;
  inflated.a = 2;
  EXPECT_TRUE(conditions(verify_cli_witness(inflated)).count("divergence"));

  CliWitness swapped = wit;
  std::swap(swapped.v_words[0], swapped.v_words[1]);
  EXPECT_FALSE(verify_cli_witness(swapped).passed());

  CliWitness shallow = wit;
  shallow.depth = 0;
  shallow.u_words.erase(shallow.u_words.begin() + 1, shallow.u_words.end());
  shallow.v_words.erase(shallow.v_words.begin() + 1, shallow.v_words.end());
  shallow.w_words.erase(shallow.w_words.begin() + 1, shallow.w_words.end());
  CliWitnessReport rep = verify_cli_witness(shallow);
  EXPECT_TRUE(rep.passed());
  EXPECT_TRUE(rep.step_norms.empty());
  EXPECT_NE(std::find(rep.report.notes.begin(), rep.report.notes.end(), "no divergence step checked"),
            rep.report.notes.end());
}

TEST(CliWitness, BundleRoundTrip) {
  CliWitness wit = build_cli_witness(make_scale("gamma0"), Point{0, 1});
  CliWitnessReport rep = verify_cli_witness(wit);
  std::string text = serialize_witness(wit, &rep);
  std::istringstream in(text);
  CliWitness back = parse_witness(in);
  EXPECT_EQ(back.scale->name(), wit.scale->name());
  EXPECT_EQ(back.x0, wit.x0);
  EXPECT_EQ(back.a, wit.a);
  EXPECT_EQ(back.k_indices, wit.k_indices);
  EXPECT_EQ(back.fractions, wit.fractions);
  EXPECT_EQ(back.w_words, wit.w_words);
  CliWitnessReport again = verify_cli_witness(back);
  EXPECT_EQ(serialize_witness(back, &again), text);

  std::istringstream bad("scale gamma0\nbogus 1\n");
  EXPECT_EQ(code_of([&] { parse_witness(bad); }), ErrorCode::ParseError);
}

TEST(Homomorphism, TrivialMap) {
  FiniteMetricGroup k4 = klein_four();
  std::vector<Point> pool = points_up_to(2, 2);
  std::map<Letter, std::size_t> phi;
  for (const Letter& x : letters_over(pool)) phi[x] = k4.identity();
  std::mt19937_64 rng(7);
  std::vector<std::pair<Word, Word>> pairs;
  for (int i = 0; i < 20; ++i)
    pairs.emplace_back(random_irreducible_word(rng, pool, 4), random_irreducible_word(rng, pool, 4));
  HomomorphismReport rep = extend_homomorphism(*make_scale("graev"), k4, phi, pairs);
  EXPECT_TRUE(rep.passed());
  EXPECT_EQ(rep.conclusion.cases, 20u);
}

TEST(Homomorphism, KleinContraction) {
  FiniteMetricGroup k4 = klein_four();
  std::vector<Point> pool = points_up_to(2, 2);
  std::map<Letter, std::size_t> phi = klein_phi(pool);
  EXPECT_EQ(apply_homomorphism(k4, phi, Word::parse("x:1 x:0,1")), 3u);
  EXPECT_EQ(apply_homomorphism(k4, phi, Word::parse("x:1 X:1")), k4.identity());
  std::mt19937_64 rng(11);
  std::vector<std::pair<Word, Word>> pairs;
  for (int i = 0; i < 40; ++i)
    pairs.emplace_back(random_irreducible_word(rng, pool, 5), random_irreducible_word(rng, pool, 5));
  for (const char* name : {"graev", "gamma0"}) {
    HomomorphismReport rep = extend_homomorphism(*make_scale(name), k4, phi, pairs);
    EXPECT_TRUE(rep.hypotheses.passed()) << name;
    EXPECT_TRUE(rep.conclusion_attempted);
    EXPECT_EQ(rep.conclusion.violation_count, 0u) << name;
  }
}

TEST(Homomorphism, HypothesisFailures) {
  FiniteMetricGroup k4 = klein_four();
  std::vector<Point> pool = points_up_to(2, 2);
  std::map<Letter, std::size_t> phi = klein_phi(pool);
  // [1] and [1,1] are 1/2 apart but a and b are 3/4 apart.
  phi[Letter::pos(Point{1})] = 1;
  phi[Letter::neg(Point{1})] = 1;
  phi[Letter::pos(Point{1, 1})] = 2;
  phi[Letter::neg(Point{1, 1})] = 2;
  std::vector<std::pair<Word, Word>> pairs{{Word::parse("x:1"), Word::parse("x:1,1")}};
  HomomorphismReport rep = extend_homomorphism(*make_scale("graev"), k4, phi, pairs);
  EXPECT_FALSE(rep.hypotheses.passed());
  EXPECT_EQ(rep.hypotheses.violations[0].condition, "(ii)");
  EXPECT_FALSE(rep.conclusion_attempted);
  EXPECT_FALSE(rep.passed());

  std::map<Letter, std::size_t> open{{Letter::pos(Point{1}), 0}};
  EXPECT_EQ(code_of([&] { extend_homomorphism(*make_scale("graev"), k4, open, pairs); }),
            ErrorCode::NotClosedUnderInverse);

  // S3 is nonabelian: sending x to a transposition breaks (iii) under Graev.
  FiniteMetricGroup s3 = symmetric_group_s3();
  std::map<Letter, std::size_t> conj{{Letter::pos(Point{1}), s3.index_of("(01)")},
                                     {Letter::neg(Point{1}), s3.index_of("(01)")}};
  HomomorphismReport r3 = extend_homomorphism(*make_scale("graev"), s3, conj, {});
  EXPECT_FALSE(r3.hypotheses.passed());
  EXPECT_EQ(r3.hypotheses.violations[0].condition, "(iii)");
}
