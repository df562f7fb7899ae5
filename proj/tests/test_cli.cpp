#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = freenorm::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

bool has_line(const std::string& text, const std::string& line) {
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);)
    if (l == line) return true;
  return false;
}

std::string data_file(const std::string& name) { return std::string(FREENORM_TEST_DATA) + "/" + name; }

}  // namespace

TEST(Cli, NormValues) {
  Outcome r = run({"norm", "--scale", "graev", "X:1 x:1,1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has_line(r.out, "value: 1/2^1")) << r.out;
  EXPECT_TRUE(has_line(r.out, "witness_match: 0-1"));

  r = run({"norm", "--scale", "gamma0", "e"});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has_line(r.out, "value: 0"));

  // Three matches for X:1 x:1,1 x:0,1: all fixed costs 3, 0-1 costs 3/2.
  r = run({"norm", "--scale", "gamma0", "--bounds", "--budget", "4", "X:1 x:1,1 x:0,1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has_line(r.out, "lower: 3/2^1")) << r.out;
  EXPECT_TRUE(has_line(r.out, "upper: 3/2^1"));
}

TEST(Cli, NormJson) {
  Outcome r = run({"norm", "--scale", "graev", "--json", "X:1 x:1,1"});
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["value"], "1/2^1");
  EXPECT_EQ(j["outcome"], "value");
  EXPECT_EQ(j["exact"], true);
}

TEST(Cli, Errors) {
  Outcome r = run({"norm", "--scale", "graev", "x:1 q:2"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("ParseError"), std::string::npos) << r.err;

  r = run({"norm", "--scale", "nope", "x:1"});
  EXPECT_EQ(r.code, 2);

  std::string long_word = "x:1";
  for (int i = 0; i < 9; ++i) long_word += " x:1";
  r = run({"norm", "--scale", "gamma0", "--bounds", "--cap", "8", long_word});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("WordTooLong"), std::string::npos);
  EXPECT_NE(r.err.find("8"), std::string::npos);

  r = run({"norm", "--scale", "quadratic", "x:1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("NotAdequate"), std::string::npos);

  EXPECT_EQ(run({"bogus"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, Distances) {
  Outcome r = run({"distance", "--scale", "gamma0", "x:1 X:0,2", "x:1 X:0,2"});
  EXPECT_TRUE(has_line(r.out, "value: 0"));
  r = run({"distance", "--scale", "graev", "x:1", "x:1,1"});
  EXPECT_TRUE(has_line(r.out, "value: 1/2^1"));
  Outcome a = run({"distance", "--scale", "gamma0", "--which", "Delta", "x:1 x:2", "X:0,1"});
  Outcome b = run({"distance", "--scale", "gamma0", "--which", "Delta", "X:0,1", "x:1 x:2"});
  auto value = [](const std::string& s) { return s.substr(s.find("value: ")); };
  EXPECT_EQ(value(a.out), value(b.out));
}

TEST(Cli, Checks) {
  Outcome r = run({"check", "gamma0", "goodness"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(has_line(r.out, "outcome: pass"));

  r = run({"check", "graev", "universality", "--K", "0"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("violation: (S3)"), std::string::npos) << r.out;

  r = run({"check", "gamma1", "ekm", "--m", "1", "--k", "8", "--cap", "100"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(has_line(r.out, "candidates: 5"));

  r = run({"check", "gamma1", "adequacy", "--grid", "small"});
  EXPECT_EQ(r.code, 1);

  r = run({"check", "quadratic", "axioms", "--grid", "small"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(has_line(r.out, "sampled: true"));

  r = run({"check", "lipschitz", "--group", data_file("s3.txt")});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_TRUE(has_line(r.out, "group_size: 6"));

  EXPECT_EQ(run({"check", "gamma0", "sideways"}).code, 2);
}

TEST(Cli, Oracle) {
  Outcome r = run({"oracle", "--scale", "graev", "--count", "40", "--seed", "3"});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(has_line(r.out, "discrepancies: 0"));
  // Same seed, same bytes.
  EXPECT_EQ(run({"oracle", "--scale", "graev", "--count", "40", "--seed", "3"}).out, r.out);

  // r/2 undercuts r, so extensions by e beat every plain match.
  r = run({"oracle", "--scale", "half", "--count", "20", "--unchecked"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("finding: "), std::string::npos);
  EXPECT_EQ(run({"oracle", "--scale", "half", "--count", "1"}).code, 2);
}

TEST(Cli, Witness) {
  namespace fs = std::filesystem;
  fs::path bundle = fs::temp_directory_path() / "freenorm_cli_witness.txt";
  Outcome r = run({"witness", "gamma0", "--x0", "0,1", "--depth", "1", "--out", bundle.string()});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_TRUE(has_line(r.out, "report outcome pass"));
  EXPECT_TRUE(has_line(r.out, "report norm_step 1 7/2^2"));
  Outcome again = run({"witness", "--verify", bundle.string()});
  EXPECT_EQ(again.code, 0);
  EXPECT_EQ(again.out, r.out);

  // a = 2 breaks the threshold, k and divergence checks.
  std::string text = r.out;
  text.replace(text.find("a 1/2^1"), 7, "a 2");
  std::ofstream(bundle) << text;
  EXPECT_EQ(run({"witness", "--verify", bundle.string()}).code, 1);
  fs::remove(bundle);

  r = run({"witness", "graev", "--x0", "1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("NotExpanding"), std::string::npos);
  r = run({"witness", "gamma0", "--depth", "3"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("WordTooLong"), std::string::npos);
}
