#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "freenorm/checks.hpp"
#include "freenorm/constructions.hpp"
#include "freenorm/error.hpp"
#include "freenorm/groups.hpp"
#include "freenorm/norms.hpp"
#include "freenorm/scales.hpp"

namespace freenorm::cli {

namespace {

using Json = nlohmann::ordered_json;

// Key/value report. Text output prints one `key: value` line per scalar and
// one line per array element; --json prints the object itself.
struct Report {
  Json body = Json::object();
  bool json = false;
  bool timing = false;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  template <class T>
  void set(const std::string& key, T&& value) {
    body[key] = std::forward<T>(value);
  }
  void add(const std::string& key, const std::string& line) {
    if (!body.contains(key)) body[key] = Json::array();
    body[key].push_back(line);
  }

  void print(std::ostream& out) {
    if (timing) {
      auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
      body["elapsed_ms"] = ms.count();
    }
    if (json) {
      out << body.dump(2) << "\n";
      return;
    }
    for (const auto& [key, value] : body.items()) {
      if (value.is_array()) {
        for (const Json& v : value) out << key << ": " << scalar(v) << "\n";
      } else {
        out << key << ": " << scalar(value) << "\n";
      }
    }
  }

  static std::string scalar(const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }
};

void add_violations(Report& rep, const CheckReport& c) {
  for (const Violation& v : c.violations) rep.add("violation", v.condition + " " + v.detail);
  if (c.violation_count > c.violations.size())
    rep.add("violation", "... " + std::to_string(c.violation_count - c.violations.size()) + " more");
  for (const std::string& n : c.notes) rep.add("note", n);
}

int outcome(Report& rep, bool pass, std::ostream& out) {
  rep.set("outcome", pass ? "pass" : "fail");
  rep.print(out);
  return pass ? kPass : kFail;
}

std::vector<Dyadic> radii_for(const std::string& grid, const DeskGrid& desk) {
  if (grid == "desk") return desk.radii;
  std::vector<Dyadic> r{0};
  for (int k = 0; k <= 8; ++k) r.push_back(Dyadic::pow2(-k));
  return r;
}

struct Options {
  bool json = false;
  bool timing = false;
  std::string scale = "gamma0";
  std::size_t cap = 16;
  std::uint64_t seed = 1;
  bool unchecked = false;

  NormOptions norm() const {
    NormOptions o;
    o.cap = cap;
    o.unchecked = unchecked;
    return o;
  }
};

void common_flags(CLI::App* sub, Options& o) {
  sub->add_flag("--json", o.json, "structured output");
  sub->add_flag("--timing", o.timing, "append elapsed time (not byte-stable)");
  sub->add_option("--cap", o.cap, "word-length cap for exponential routes")->capture_default_str();
  sub->add_flag("--unchecked", o.unchecked, "allow norm_exact on scales not declared adequate");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact norms and condition checks on free groups over the Baire space", "freenorm"};
  app.require_subcommand(1);
  Options o;

  // norm
  auto* norm = app.add_subcommand("norm", "norm of a word");
  std::string word_text;
  bool bounds = false;
  std::size_t budget = 4;
  norm->add_option("word", word_text, "word, e.g. \"X:1 x:1,1\"")->required();
  norm->add_option("--scale", o.scale)->capture_default_str();
  norm->add_flag("--bounds", bounds, "bracket via trivial extensions instead of the exact route");
  norm->add_option("--budget", budget, "extra letters for --bounds")->capture_default_str();
  common_flags(norm, o);

  // distance
  auto* dist = app.add_subcommand("distance", "delta(w, v) = N(w^-1 v) or Delta = max with inverses");
  std::string v_text, which = "delta";
  dist->add_option("w", word_text)->required();
  dist->add_option("v", v_text)->required();
  dist->add_option("--scale", o.scale)->capture_default_str();
  dist->add_option("--which", which)->check(CLI::IsMember({"delta", "Delta"}))->capture_default_str();
  common_flags(dist, o);

  // check
  auto* check = app.add_subcommand("check", "run a condition checker");
  std::vector<std::string> check_pos;
  std::optional<unsigned> k_const;
  std::size_t m = 1, k = 8, m_max = 3;
  std::uint64_t ekm_cap = 100;
  std::string rule_text, grid = "desk", group_path;
  check->add_option("target", check_pos, "<scale> <axioms|adequacy|goodness|universality|ekm> or lipschitz")
      ->required()
      ->expected(1, 2);
  check->add_option("--K", k_const, "universality constant (default: the scale's own)");
  check->add_option("--m", m, "support for ekm")->capture_default_str();
  check->add_option("--k", k, "radius exponent for ekm")->capture_default_str();
  check->add_option("--m-max", m_max, "largest support probed by universality")->capture_default_str();
  check->add_option("--limit", ekm_cap, "ekm enumeration bound (index or digit sum)")->capture_default_str();
  check->add_option("--rule", rule_text, "witness y: zero or projection (default by K)");
  check->add_option("--grid", grid, "desk or small")->check(CLI::IsMember({"desk", "small"}))->capture_default_str();
  check->add_option("--group", group_path, "finite metric group file for lipschitz");
  common_flags(check, o);
  // `--cap` doubles as the ekm bound, matching the usual spelling.
  check->callback([&] {
    if (check->count("--cap") && !check->count("--limit")) ekm_cap = o.cap;
  });

  // oracle
  auto* oracle = app.add_subcommand("oracle", "compare the extension search against the exact norm");
  std::size_t count = 100, max_length = 6, support = 2;
  std::uint64_t entries = 2;
  oracle->add_option("--scale", o.scale)->capture_default_str();
  oracle->add_option("--count", count)->capture_default_str();
  oracle->add_option("--max-length", max_length)->capture_default_str();
  oracle->add_option("--support", support, "point pool support bound")->capture_default_str();
  oracle->add_option("--entries", entries, "point pool entry bound")->capture_default_str();
  oracle->add_option("--budget", budget)->capture_default_str();
  oracle->add_option("--seed", o.seed)->capture_default_str();
  common_flags(oracle, o);

  // witness
  auto* witness = app.add_subcommand("witness", "build or re-verify a Cauchy/divergence witness");
  std::vector<std::string> wit_pos;
  std::string x0_text = "0,1", verify_path, out_path;
  std::size_t depth = 1;
  witness->add_option("name", wit_pos, "scale (same as --scale)")->expected(0, 1);
  witness->add_option("--scale", o.scale)->capture_default_str();
  witness->add_option("--x0", x0_text)->capture_default_str();
  witness->add_option("--depth", depth)->capture_default_str();
  witness->add_option("--verify", verify_path, "bundle file to re-verify");
  witness->add_option("--out", out_path, "also write the bundle here");
  common_flags(witness, o);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kPass : kError;
  }

  Report rep;
  rep.json = o.json;
  rep.timing = o.timing;
  try {
    if (*norm) {
      ScalePtr g = make_scale(o.scale);
      Word w = Word::parse(word_text);
      rep.set("command", "norm");
      rep.set("scale", g->name());
      rep.set("word", w.to_string());
      if (bounds) {
        NormResult r = norm_bounds(*g, w, budget, {}, o.norm());
        rep.set("budget", budget);
        rep.set("lower", r.bounds->lower.to_string());
        rep.set("upper", r.bounds->upper.to_string());
        rep.set("value", r.value.to_string());
        rep.set("witness_word", r.witness_word.to_string());
        rep.set("witness_match", r.witness_match.to_string());
        rep.set("exact", r.exact);
      } else {
        NormResult r = norm_exact(*g, w, o.norm());
        rep.set("value", r.value.to_string());
        rep.set("witness_match", r.witness_match.to_string());
        rep.set("exact", r.exact);
      }
      rep.set("outcome", "value");
      rep.print(out);
      return kPass;
    }

    if (*dist) {
      ScalePtr g = make_scale(o.scale);
      Word w = Word::parse(word_text), v = Word::parse(v_text);
      Dyadic d = which == "delta" ? delta(*g, w, v, o.norm()) : delta_big(*g, w, v, o.norm());
      rep.set("command", "distance");
      rep.set("scale", g->name());
      rep.set("which", which);
      rep.set("w", w.to_string());
      rep.set("v", v.to_string());
      rep.set("value", d.to_string());
      rep.set("outcome", "value");
      rep.print(out);
      return kPass;
    }

    if (*check) {
      std::string what = check_pos.size() == 2 ? check_pos[1] : check_pos[0];
      rep.set("command", "check");
      if (what == "lipschitz") {
        if (group_path.empty()) throw Error(ErrorCode::InvalidArgument, "lipschitz needs --group <file>");
        FiniteMetricGroup G = FiniteMetricGroup::load(group_path);
        rep.set("what", what);
        rep.set("group_size", G.size());
        CheckReport c = verify_gamma_G_lipschitz(G);
        rep.set("cases", c.cases);
        rep.set("violations", c.violation_count);
        add_violations(rep, c);
        return outcome(rep, c.passed(), out);
      }
      if (check_pos.size() != 2) throw Error(ErrorCode::InvalidArgument, "check needs <scale> <what>");
      ScalePtr g = make_scale(check_pos[0]);
      rep.set("scale", g->name());
      rep.set("what", what);
      DeskGrid desk = standard_desk_grid();
      if (grid == "small") {
        desk.points = points_up_to(2, 2);
        desk.letters = letters_over(desk.points);
        desk.pair_radii = {0, Dyadic::pow2(-4), Dyadic::pow2(-2), Dyadic(1)};
      }
      std::vector<Dyadic> radii = radii_for(grid, desk);
      unsigned K = k_const.value_or(g->declared_k());
      WitnessRule rule = rule_text.empty() ? (K >= 1 ? WitnessRule::Projection : WitnessRule::Zero)
                                           : parse_witness_rule(rule_text);
      CheckReport c;
      if (what == "axioms") {
        c = check_scale_axioms(*g, desk.letters, radii);
      } else if (what == "adequacy") {
        c = check_adequacy(*g, desk.letters, radii, desk.pair_radii);
      } else if (what == "goodness") {
        c = check_goodness(*g, desk.letters, radii, desk.pair_radii);
      } else if (what == "universality") {
        rep.set("K", K);
        rep.set("rule", rule == WitnessRule::Zero ? "zero" : "projection");
        c = check_universality_premises(*g, K, m_max, desk.points, rule, radii);
      } else if (what == "ekm") {
        rep.set("K", K);
        rep.set("m", m);
        rep.set("k", k);
        rep.set("rule", rule == WitnessRule::Zero ? "zero" : "projection");
        std::vector<Point> cands = ekm_candidates(g->name(), m, k, ekm_cap);
        rep.set("candidates", cands.size());
        c = check_ekm_bound(*g, K, m, k, cands, rule, radii);
      } else {
        throw Error(ErrorCode::InvalidArgument, "unknown check '" + what + "'");
      }
      rep.set("cases", c.cases);
      rep.set("violations", c.violation_count);
      rep.set("sampled", c.sampled);
      add_violations(rep, c);
      return outcome(rep, c.passed(), out);
    }

    if (*oracle) {
      ScalePtr g = make_scale(o.scale);
      // Findings against an unadequate scale are expected, not failures.
      const bool findings_only = !g->declared_adequate();
      if (findings_only && !o.unchecked)
        throw Error(ErrorCode::NotAdequate, g->name() + " is not declared adequate; pass --unchecked to run anyway");
      std::vector<Point> pool = points_up_to(support, entries);
      std::mt19937_64 rng(o.seed);
      rep.set("command", "oracle");
      rep.set("scale", g->name());
      rep.set("count", count);
      rep.set("max_length", max_length);
      rep.set("budget", budget);
      rep.set("seed", o.seed);
      std::size_t bad = 0;
      for (std::size_t i = 0; i < count; ++i) {
        Word w = random_irreducible_word(rng, pool, max_length);
        NormResult ex = norm_exact(*g, w, o.norm());
        NormResult bd = norm_bounds(*g, w, budget, {}, o.norm());
        if (ex.value == bd.value) continue;
        ++bad;
        rep.add(findings_only ? "finding" : "discrepancy",
                "word=" + w.to_string() + " exact=" + ex.value.to_string() + " match=" + ex.witness_match.to_string() +
                    " bounds=" + bd.value.to_string() + " on=" + bd.witness_word.to_string() +
                    " match=" + bd.witness_match.to_string());
      }
      rep.set("discrepancies", bad);
      return outcome(rep, findings_only || bad == 0, out);
    }

    if (*witness) {
      CliWitness wit;
      if (!verify_path.empty()) {
        std::ifstream in(verify_path);
        if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open " + verify_path);
        wit = parse_witness(in);
      } else {
        CliWitnessOptions wo;
        wo.depth = depth;
        wo.cap = o.cap;
        wit = build_cli_witness(make_scale(wit_pos.empty() ? o.scale : wit_pos[0]), Point::parse(x0_text), wo);
      }
      CliWitnessReport wr = verify_cli_witness(wit);
      std::string bundle = serialize_witness(wit, &wr);
      if (!out_path.empty()) {
        std::ofstream f(out_path);
        f << bundle;
        if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + out_path);
      }
      if (o.json) {
        rep.set("command", "witness");
        rep.set("scale", wit.scale->name());
        rep.set("x0", wit.x0.to_string());
        rep.set("a", wit.a.to_string());
        rep.set("depth", wit.depth);
        rep.set("k", wit.k_indices);
        Json fr = Json::array();
        for (auto [fm, fn] : wit.fractions) fr.push_back({fm, fn});
        rep.set("fractions", fr);
        for (const Word& w : wit.w_words) rep.add("w", w.to_string());
        for (const Dyadic& d : wr.v_norms) rep.add("norm_v", d.to_string());
        for (const Dyadic& d : wr.step_norms) rep.add("norm_step", d.to_string());
        rep.set("partial_sum", wr.partial_sum.to_string());
        rep.set("partial_bound", wr.partial_bound.to_string());
        add_violations(rep, wr.report);
        return outcome(rep, wr.passed(), out);
      }
      out << bundle;
      return wr.passed() ? kPass : kFail;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    if (o.json) out << Json{{"error", to_string(e.code())}, {"message", e.what()}}.dump(2) << "\n";
    return kError;
  }
  return kError;
}

}  // namespace freenorm::cli
