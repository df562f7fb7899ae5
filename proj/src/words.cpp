#include "freenorm/words.hpp"

#include <cctype>
#include <algorithm>
#include <charconv>

#include "freenorm/error.hpp"

namespace freenorm {

Point::Point(std::vector<std::uint64_t> entries) : entries_(std::move(entries)) {
  while (!entries_.empty() && entries_.back() == 0) entries_.pop_back();
}

std::string Point::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(entries_[i]);
  }
  return out;
}

Point Point::parse(std::string_view text) {
  std::vector<std::uint64_t> entries;
  if (text.empty()) return Point();
  std::size_t pos = 0;
  while (true) {
    std::size_t comma = text.find(',', pos);
    std::string_view tok = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    std::uint64_t v = 0;
    auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || end != tok.data() + tok.size())
      throw Error(ErrorCode::ParseError, "bad coordinate '" + std::string(tok) + "' in point '" + std::string(text) + "'");
    entries.push_back(v);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return Point(std::move(entries));
}

Point project(const Point& x, std::size_t n) {
  if (x.support() <= n) return x;
  auto e = x.entries();
  return Point(std::vector<std::uint64_t>(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(n)));
}

Letter Letter::inverse() const {
  switch (kind_) {
    case Kind::Pos: return neg(point_);
    case Kind::Neg: return pos(point_);
    case Kind::Identity: break;
  }
  return identity();
}

std::string Letter::to_string() const {
  switch (kind_) {
    case Kind::Pos: return "x:" + point_.to_string();
    case Kind::Neg: return "X:" + point_.to_string();
    case Kind::Identity: break;
  }
  return "e";
}

Letter Letter::parse(std::string_view text) {
  if (text == "e") return identity();
  if (text.size() >= 2 && text[1] == ':' && (text[0] == 'x' || text[0] == 'X')) {
    Point p = Point::parse(text.substr(2));
    return text[0] == 'x' ? pos(std::move(p)) : neg(std::move(p));
  }
  throw Error(ErrorCode::ParseError, "bad letter '" + std::string(text) + "'");
}

Dyadic ultrametric_d(const Letter& a, const Letter& b) {
  if (a == b) return Dyadic(0);
  if (a.kind() != b.kind() || a.is_identity()) return Dyadic(1);
  const Point& x = a.point();
  const Point& y = b.point();
  std::size_t n = 0;
  while (x[n] == y[n]) ++n;
  return Dyadic::pow2(-static_cast<std::int64_t>(n));
}

Word::Word(std::vector<Letter> letters) : letters_(std::move(letters)) {
  if (letters_.empty()) throw Error(ErrorCode::InvalidArgument, "words are nonempty; the identity is `e`");
}

bool Word::is_irreducible() const {
  if (is_identity()) return true;
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (letters_[i].is_identity()) return false;
    if (i + 1 < letters_.size() && letters_[i + 1] == letters_[i].inverse()) return false;
  }
  return true;
}

std::string Word::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (i) out += ' ';
    out += letters_[i].to_string();
  }
  return out;
}

Word Word::parse(std::string_view text) {
  std::vector<Letter> letters;
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    try {
      letters.push_back(Letter::parse(text.substr(i, j - i)));
    } catch (const Error& err) {
      throw Error(ErrorCode::ParseError, "at offset " + std::to_string(i) + ": " + err.what());
    }
    i = j;
  }
  if (letters.empty()) throw Error(ErrorCode::ParseError, "empty word; write `e` for the identity");
  return Word(std::move(letters));
}

Word reduce(const Word& w) {
  // A stack scan reaches the same fixed point as repeated local rewriting.
  std::vector<Letter> out;
  out.reserve(w.size());
  for (const Letter& l : w.letters()) {
    if (l.is_identity()) continue;
    if (!out.empty() && out.back() == l.inverse()) {
      out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  if (out.empty()) return Word::identity();
  return Word(std::move(out));
}

Word concat(const Word& w, const Word& v) {
  std::vector<Letter> out(w.letters().begin(), w.letters().end());
  out.insert(out.end(), v.letters().begin(), v.letters().end());
  return Word(std::move(out));
}

Word group_multiply(const Word& w, const Word& v) { return reduce(concat(w, v)); }

Word invert(const Word& w) {
  std::vector<Letter> out;
  out.reserve(w.size());
  for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it) out.push_back(it->inverse());
  return Word(std::move(out));
}

std::size_t PointHash::operator()(const Point& p) const noexcept {
  std::size_t h = p.support();
  for (std::uint64_t v : p.entries()) h = h * 1000003u ^ std::hash<std::uint64_t>{}(v);
  return h;
}

std::size_t LetterHash::operator()(const Letter& l) const noexcept {
  return PointHash{}(l.point()) * 3 + static_cast<std::size_t>(l.kind());
}

std::size_t WordHash::operator()(const Word& w) const noexcept {
  std::size_t h = w.size();
  for (const Letter& l : w.letters()) h = h * 0x100000001b3ULL ^ LetterHash{}(l);
  return h;
}

std::vector<Point> points_up_to(std::size_t max_support, std::uint64_t max_entry) {
  std::vector<Point> out{Point()};
  if (max_entry == 0) return out;
  for (std::size_t s = 1; s <= max_support; ++s) {
    std::vector<std::uint64_t> cur(s, 0);
    cur[s - 1] = 1;
    while (true) {
      out.emplace_back(cur);
      // Odometer over the first s - 1 entries, then the top entry from 1.
      std::size_t i = 0;
      for (; i < s; ++i) {
        if (cur[i] < max_entry) {
          ++cur[i];
          break;
        }
        cur[i] = (i + 1 == s) ? 1 : 0;
      }
      if (i == s) break;
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Point& a, const Point& b) {
    if (a.support() != b.support()) return a.support() < b.support();
    return a < b;
  });
  return out;
}

std::vector<Letter> letters_over(std::span<const Point> pool) {
  std::vector<Letter> out{Letter::identity()};
  for (const Point& p : pool) {
    out.push_back(Letter::pos(p));
    out.push_back(Letter::neg(p));
  }
  return out;
}

Word random_irreducible_word(std::mt19937_64& rng, std::span<const Point> pool, std::size_t max_length) {
  if (pool.empty() || max_length == 0) throw Error(ErrorCode::InvalidArgument, "empty pool or zero length");
  std::uniform_int_distribution<std::size_t> length(1, max_length);
  std::uniform_int_distribution<std::size_t> pick(0, 2 * pool.size() - 1);
  const std::size_t n = length(rng);
  while (true) {
    std::vector<Letter> letters;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t c = pick(rng);
      letters.push_back(c % 2 ? Letter::neg(pool[c / 2]) : Letter::pos(pool[c / 2]));
    }
    Word w(std::move(letters));
    if (w.is_irreducible()) return w;
  }
}

}  // namespace freenorm
