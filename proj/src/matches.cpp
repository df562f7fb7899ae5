#include "freenorm/matches.hpp"

#include <charconv>

#include "freenorm/error.hpp"

namespace freenorm {

bool is_match(std::size_t lo, std::span<const std::size_t> image) {
  const std::size_t n = image.size();
  if (n == 0) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if (image[i] < lo || image[i] - lo >= n) return false;
    if (image[image[i] - lo] != i + lo) return false;
  }
  // i < j < theta(i) < theta(j): j sits inside arc i and escapes it.
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t ti = image[i] - lo;
    for (std::size_t j = i + 1; j < ti; ++j) {
      std::size_t tj = image[j] - lo;
      if (tj > ti) return false;
    }
  }
  return true;
}

Match::Match(std::size_t lo, std::vector<std::size_t> image) : lo_(lo), image_(std::move(image)) {
  if (!is_match(lo_, image_)) throw Error(ErrorCode::InvalidArgument, "mapping is not a match");
}

Match Match::identity(std::size_t lo, std::size_t hi) {
  std::vector<std::size_t> image(hi - lo + 1);
  for (std::size_t i = 0; i < image.size(); ++i) image[i] = lo + i;
  return Match(Unchecked{}, lo, std::move(image));
}

std::string Match::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < image_.size(); ++i) {
    std::size_t a = lo_ + i;
    if (image_[i] <= a) continue;
    if (!out.empty()) out += ',';
    out += std::to_string(a) + '-' + std::to_string(image_[i]);
  }
  return out.empty() ? "id" : out;
}

Match Match::parse(std::string_view text, std::size_t lo, std::size_t hi) {
  if (hi < lo) throw Error(ErrorCode::InvalidArgument, "empty interval");
  std::vector<std::size_t> image(hi - lo + 1);
  for (std::size_t i = 0; i < image.size(); ++i) image[i] = lo + i;
  if (text.empty() || text == "id") return Match(lo, std::move(image));
  auto read = [&](std::string_view tok) {
    std::size_t v = 0;
    auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || end != tok.data() + tok.size() || v < lo || v > hi)
      throw Error(ErrorCode::ParseError, "bad arc endpoint '" + std::string(tok) + "'");
    return v;
  };
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string_view arc = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    std::size_t dash = arc.find('-');
    if (dash == std::string_view::npos) throw Error(ErrorCode::ParseError, "arc '" + std::string(arc) + "' lacks '-'");
    std::size_t a = read(arc.substr(0, dash));
    std::size_t b = read(arc.substr(dash + 1));
    if (a == b || image[a - lo] != a || image[b - lo] != b)
      throw Error(ErrorCode::ParseError, "arc '" + std::string(arc) + "' reuses an index");
    image[a - lo] = b;
    image[b - lo] = a;
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (!is_match(lo, image)) throw Error(ErrorCode::ParseError, "arcs '" + std::string(text) + "' cross");
  return Match(lo, std::move(image));
}

namespace {

// Branch on theta(a): a fixed point first, then a paired with k = a+1..b.
// Pairing a with k splits the interval into the inner {a+1..k-1} and the
// outer {k+1..b}, enumerated inner-major to keep lexicographic order.
void generate(std::vector<std::size_t>& image, std::size_t lo, std::size_t a, std::size_t b,
              const std::function<void()>& cont) {
  if (a > b) {
    cont();
    return;
  }
  image[a - lo] = a;
  generate(image, lo, a + 1, b, cont);
  for (std::size_t k = a + 1; k <= b; ++k) {
    image[a - lo] = k;
    image[k - lo] = a;
    generate(image, lo, a + 1, k - 1, [&] { generate(image, lo, k + 1, b, cont); });
    image[k - lo] = k;
  }
  image[a - lo] = a;
}

}  // namespace

void for_each_match(std::size_t lo, std::size_t hi, const std::function<void(const Match&)>& visit) {
  if (hi < lo) throw Error(ErrorCode::InvalidArgument, "empty interval");
  std::vector<std::size_t> image(hi - lo + 1);
  for (std::size_t i = 0; i < image.size(); ++i) image[i] = lo + i;
  generate(image, lo, lo, hi, [&] { visit(Match(Match::Unchecked{}, lo, image)); });
}

std::vector<Match> enumerate_matches(std::size_t lo, std::size_t hi) {
  std::vector<Match> out;
  for_each_match(lo, hi, [&](const Match& m) { out.push_back(m); });
  return out;
}

bool is_closed(const Match& theta, std::size_t k, std::size_t l) {
  if (k < theta.lo() || l > theta.hi() || k > l) return false;
  for (std::size_t i = k; i <= l; ++i) {
    std::size_t t = theta(i);
    if (t < k || t > l) return false;
  }
  return true;
}

Match restrict_match(const Match& theta, std::size_t k, std::size_t l) {
  if (k < theta.lo() || l > theta.hi() || k > l)
    throw Error(ErrorCode::InvalidArgument, "restriction range outside the match domain");
  if (!is_closed(theta, k, l))
    throw Error(ErrorCode::NotClosed, "match does not restrict to {" + std::to_string(k) + ".." + std::to_string(l) + "}");
  auto img = theta.image();
  return Match(Match::Unchecked{}, k,
               std::vector<std::size_t>(img.begin() + static_cast<std::ptrdiff_t>(k - theta.lo()),
                                        img.begin() + static_cast<std::ptrdiff_t>(l - theta.lo() + 1)));
}

namespace {

void fill_random(std::mt19937_64& rng, std::vector<std::size_t>& image, std::size_t lo, std::size_t a, std::size_t b) {
  while (a <= b) {
    std::uniform_int_distribution<std::size_t> pick(a, b);
    const std::size_t k = pick(rng);
    image[a - lo] = k;
    image[k - lo] = a;
    if (k > a + 1) fill_random(rng, image, lo, a + 1, k - 1);
    a = k + 1;
  }
}

}  // namespace

Match random_match(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  if (hi < lo) throw Error(ErrorCode::InvalidArgument, "empty match interval");
  std::vector<std::size_t> image(hi - lo + 1);
  fill_random(rng, image, lo, lo, hi);
  return Match(lo, std::move(image));
}

}  // namespace freenorm
