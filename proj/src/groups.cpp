#include "freenorm/groups.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <optional>
#include <queue>
#include <set>
#include <sstream>

#include "freenorm/error.hpp"

namespace freenorm {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::InvalidGroup, what); }

}  // namespace

FiniteMetricGroup::FiniteMetricGroup(std::vector<std::string> names, std::vector<std::vector<std::size_t>> table,
                                     std::vector<std::vector<Dyadic>> metric)
    : names_(std::move(names)), table_(std::move(table)), metric_(std::move(metric)) {
  const std::size_t n = names_.size();
  if (n == 0) invalid("no elements");
  if (std::set<std::string>(names_.begin(), names_.end()).size() != n) invalid("duplicate element names");
  if (table_.size() != n || metric_.size() != n) invalid("tables must be " + std::to_string(n) + "x" + std::to_string(n));
  for (std::size_t a = 0; a < n; ++a) {
    if (table_[a].size() != n || metric_[a].size() != n) invalid("row " + std::to_string(a) + " has the wrong length");
    for (std::size_t b = 0; b < n; ++b)
      if (table_[a][b] >= n) invalid("product " + names_[a] + "*" + names_[b] + " out of range");
  }

  auto& t = table_;
  bool found = false;
  for (std::size_t e = 0; e < n && !found; ++e) {
    found = true;
    for (std::size_t a = 0; a < n && found; ++a) found = t[e][a] == a && t[a][e] == a;
    if (found) identity_ = e;
  }
  if (!found) invalid("no identity element");
  inverse_.assign(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b)
      if (t[a][b] == identity_ && t[b][a] == identity_) inverse_[a] = b;
    if (inverse_[a] == n) invalid(names_[a] + " has no inverse");
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (t[t[a][b]][c] != t[a][t[b][c]])
          invalid("not associative at (" + names_[a] + ", " + names_[b] + ", " + names_[c] + ")");

  const auto& d = metric_;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b ? d[a][b] != 0 : d[a][b].sign() <= 0)
        invalid("d(" + names_[a] + ", " + names_[b] + ") = " + d[a][b].to_string() + " breaks positivity");
      if (d[a][b] != d[b][a]) invalid("metric not symmetric at (" + names_[a] + ", " + names_[b] + ")");
      for (std::size_t c = 0; c < n; ++c) {
        if (d[a][c] > d[a][b] + d[b][c])
          invalid("triangle inequality fails at (" + names_[a] + ", " + names_[b] + ", " + names_[c] + ")");
        if (d[t[c][a]][t[c][b]] != d[a][b])
          invalid("metric not left-invariant: d(" + names_[c] + names_[a] + ", " + names_[c] + names_[b] + ") != d(" +
                  names_[a] + ", " + names_[b] + ")");
      }
    }
}

std::size_t FiniteMetricGroup::index_of(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw Error(ErrorCode::InvalidArgument, "no element named '" + name + "'");
  return static_cast<std::size_t>(it - names_.begin());
}

std::vector<Dyadic> FiniteMetricGroup::metric_values() const {
  std::set<Dyadic> values;
  for (const auto& row : metric_) values.insert(row.begin(), row.end());
  return {values.begin(), values.end()};
}

bool FiniteMetricGroup::is_abelian() const {
  for (std::size_t a = 0; a < size(); ++a)
    for (std::size_t b = 0; b < size(); ++b)
      if (table_[a][b] != table_[b][a]) return false;
  return true;
}

FiniteMetricGroup FiniteMetricGroup::parse(std::istream& in) {
  std::vector<std::vector<std::string>> lines;
  std::vector<std::size_t> line_numbers;
  std::string raw;
  for (std::size_t no = 1; std::getline(in, raw); ++no) {
    raw = raw.substr(0, raw.find('#'));
    std::istringstream ss(raw);
    std::vector<std::string> tokens;
    for (std::string tok; ss >> tok;) tokens.push_back(tok);
    if (!tokens.empty()) {
      lines.push_back(std::move(tokens));
      line_numbers.push_back(no);
    }
  }
  auto fail = [&](std::size_t i, const std::string& what) -> void {
    const std::size_t no = i < line_numbers.size() ? line_numbers[i] : line_numbers.empty() ? 0 : line_numbers.back();
    throw Error(ErrorCode::ParseError, "group file line " + std::to_string(no) + ": " + what);
  };
  if (lines.empty() || lines[0][0] != "elements" || lines[0].size() < 2) fail(0, "expected 'elements <names>'");
  std::vector<std::string> names(lines[0].begin() + 1, lines[0].end());
  const std::size_t n = names.size();
  std::size_t i = 1;
  auto expect = [&](const char* keyword) {
    if (i >= lines.size() || lines[i].size() != 1 || lines[i][0] != keyword)
      fail(i, std::string("expected '") + keyword + "'");
    ++i;
  };
  auto row = [&](std::size_t r) -> const std::vector<std::string>& {
    if (i >= lines.size() || lines[i].size() != n) fail(i, "expected a row of " + std::to_string(n) + " entries");
    (void)r;
    return lines[i++];
  };

  expect("table");
  std::vector<std::vector<std::size_t>> table(n);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t at = i;
    for (const std::string& tok : row(r)) {
      auto it = std::find(names.begin(), names.end(), tok);
      if (it != names.end()) {
        table[r].push_back(static_cast<std::size_t>(it - names.begin()));
      } else if (!tok.empty() && std::all_of(tok.begin(), tok.end(), ::isdigit)) {
        table[r].push_back(std::stoul(tok));
      } else {
        fail(at, "unknown element '" + tok + "'");
      }
    }
  }
  expect("metric");
  std::vector<std::vector<Dyadic>> metric(n);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t at = i;
    for (const std::string& tok : row(r)) {
      try {
        metric[r].push_back(Dyadic::parse(tok));
      } catch (const Error&) {
        fail(at, "bad distance '" + tok + "'");
      }
    }
  }
  if (i != lines.size()) fail(i, "trailing content");
  return FiniteMetricGroup(std::move(names), std::move(table), std::move(metric));
}

FiniteMetricGroup FiniteMetricGroup::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open group file " + path);
  return parse(in);
}

std::string FiniteMetricGroup::to_text() const {
  std::ostringstream out;
  out << "elements";
  for (const auto& nm : names_) out << ' ' << nm;
  out << "\ntable\n";
  for (const auto& r : table_) {
    for (std::size_t j = 0; j < r.size(); ++j) out << (j ? " " : "") << names_[r[j]];
    out << '\n';
  }
  out << "metric\n";
  for (const auto& r : metric_) {
    for (std::size_t j = 0; j < r.size(); ++j) out << (j ? " " : "") << r[j];
    out << '\n';
  }
  return out.str();
}

FiniteMetricGroup with_word_metric(std::vector<std::string> names, std::vector<std::vector<std::size_t>> table,
                                   const std::map<std::size_t, Dyadic>& generator_weights) {
  const std::size_t n = names.size();
  // Find the identity and inverses directly; the constructor re-validates.
  std::size_t e = n;
  for (std::size_t c = 0; c < n && e == n; ++c) {
    bool ok = true;
    for (std::size_t a = 0; a < n && ok; ++a) ok = table.at(c).at(a) == a;
    if (ok) e = c;
  }
  if (e == n) invalid("no identity element");
  std::vector<std::pair<std::size_t, Dyadic>> steps;
  for (const auto& [g, w] : generator_weights) {
    if (g >= n || w.sign() <= 0) invalid("bad generator weight");
    steps.emplace_back(g, w);
    for (std::size_t b = 0; b < n; ++b)
      if (table[g][b] == e) steps.emplace_back(b, w);
  }
  std::vector<std::optional<Dyadic>> length(n);
  using Entry = std::pair<Dyadic, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  queue.emplace(0, e);
  while (!queue.empty()) {
    auto [dist, g] = queue.top();
    queue.pop();
    if (length[g]) continue;
    length[g] = dist;
    for (const auto& [s, w] : steps)
      if (!length[table[g][s]]) queue.emplace(dist + w, table[g][s]);
  }
  std::vector<std::size_t> inv(n);
  for (std::size_t a = 0; a < n; ++a) {
    if (!length[a]) invalid("generators do not reach " + names[a]);
    for (std::size_t b = 0; b < n; ++b)
      if (table[a][b] == e) inv[a] = b;
  }
  std::vector<std::vector<Dyadic>> metric(n, std::vector<Dyadic>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) metric[a][b] = *length[table[inv[a]][b]];
  return FiniteMetricGroup(std::move(names), std::move(table), std::move(metric));
}

FiniteMetricGroup symmetric_group_s3() {
  using Perm = std::array<std::size_t, 3>;
  const std::vector<Perm> perms{{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  const std::vector<std::string> names{"e", "(12)", "(01)", "(012)", "(021)", "(02)"};
  std::vector<std::vector<std::size_t>> table(6, std::vector<std::size_t>(6));
  for (std::size_t a = 0; a < 6; ++a)
    for (std::size_t b = 0; b < 6; ++b) {
      Perm ab{perms[a][perms[b][0]], perms[a][perms[b][1]], perms[a][perms[b][2]]};
      table[a][b] = static_cast<std::size_t>(std::find(perms.begin(), perms.end(), ab) - perms.begin());
    }
  return with_word_metric(names, table, {{2, Dyadic(1)}, {1, Dyadic::pow2(-1)}});
}

FiniteMetricGroup klein_four() {
  std::vector<std::vector<std::size_t>> table(4, std::vector<std::size_t>(4));
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b) table[a][b] = a ^ b;
  return with_word_metric({"e", "a", "b", "ab"}, table, {{1, Dyadic::pow2(-1)}, {2, Dyadic::pow2(-2)}});
}

Dyadic conjugation_scale(const FiniteMetricGroup& g, std::size_t element, const Dyadic& r) {
  if (r.sign() < 0) throw Error(ErrorCode::InvalidArgument, "negative radius");
  const std::size_t one = g.identity(), inv = g.inverse(element);
  Dyadic best = r;
  for (std::size_t h = 0; h < g.size(); ++h) {
    if (g.distance(one, h) > r) continue;
    best = std::max(best, g.distance(one, g.multiply(g.multiply(inv, h), element)));
  }
  return best;
}

CheckReport verify_gamma_G_lipschitz(const FiniteMetricGroup& g, std::span<const Dyadic> radii) {
  CheckReport rep;
  rep.check = "lipschitz";
  std::set<Dyadic> rs(radii.begin(), radii.end());
  for (const Dyadic& v : g.metric_values()) rs.insert(v);
  rs.insert(Dyadic(0));
  const std::size_t n = g.size();
  for (const Dyadic& r : rs) {
    std::vector<Dyadic> gamma(n);
    for (std::size_t a = 0; a < n; ++a) gamma[a] = conjugation_scale(g, a, r);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        ++rep.cases;
        const Dyadic gap = gamma[a] > gamma[b] ? gamma[a] - gamma[b] : gamma[b] - gamma[a];
        if (gap > g.distance(a, b) * 2)
          rep.fail("Lipschitz", "g1=" + g.name(a) + " g2=" + g.name(b) + " r=" + r.to_string() +
                                    " gap=" + gap.to_string() + " bound=" + (g.distance(a, b) * 2).to_string());
      }
  }
  rep.note("radii checked: " + std::to_string(rs.size()) + " (grid plus every metric value and 0)");
  return rep;
}

}  // namespace freenorm
