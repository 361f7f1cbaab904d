#include <gtest/gtest.h>

#include <random>
#include <set>

#include "delib/json_extract.hpp"
#include "malformed_cases.hpp"

namespace delib {
namespace {

TEST(ExtractJson, WholeText) {
  EXPECT_EQ(extract_json("  {\"a\": 1}\n"), Json({{"a", 1}}));
}

TEST(ExtractJson, FencedBlock) {
  EXPECT_EQ(extract_json("Here:\n```json\n{\"a\": [1, 2]}\n```\nDone."), Json({{"a", {1, 2}}}));
  EXPECT_EQ(extract_json("```JSON\n{\"b\": true}\n```"), Json({{"b", true}}));
}

TEST(ExtractJson, ProseWrapped) {
  EXPECT_EQ(extract_json("Sure thing {not json} then {\"k\": \"v\"} and more {\"x\": 2}"), Json({{"k", "v"}}));
}

TEST(ExtractJson, BracesAndEscapesInsideStrings) {
  const Json j = extract_json(R"(prefix {"s": "a } b { \" c", "n": {"m": 1}} suffix)");
  EXPECT_EQ(j["s"], "a } b { \" c");
  EXPECT_EQ(j["n"]["m"], 1);
}

TEST(ExtractJson, RejectsArraysAndScalars) {
  EXPECT_THROW(extract_json("[1, 2, 3]"), NoJsonFound);
  EXPECT_THROW(extract_json("42"), NoJsonFound);
  EXPECT_THROW(extract_json(""), NoJsonFound);
  EXPECT_THROW(extract_json("{\"unterminated\": 1"), NoJsonFound);
}

TEST(MatchingBrace, Basics) {
  EXPECT_EQ(matching_brace("{}", 0), 2u);
  EXPECT_EQ(matching_brace("x{\"}\"}y", 1), 6u);
  EXPECT_EQ(matching_brace("{{}", 0), std::nullopt);
  EXPECT_EQ(matching_brace(R"({"\\"})", 0), 6u);
}

TEST(MalformedFixtures, AtLeastTwelveCoveringEveryCategory) {
  const auto cases = testing::load_malformed_cases();
  EXPECT_GE(cases.size(), 12u);
  std::set<std::string> kinds;
  for (const auto& c : cases) kinds.insert(c.expect_accept ? "accept" : c.expect_kind);
  for (const char* k : {"accept", "WrongCount", "BadEnum", "MissingField", "NoJson"}) {
    EXPECT_TRUE(kinds.count(k)) << k;
  }
}

TEST(MalformedFixtures, EachIsRepairedOrRejectedWithPath) {
  const auto context = testing::fixture_context();
  AssemblyContext roster = context;
  for (const auto& c : testing::load_malformed_cases()) {
    SCOPED_TRACE(c.name);
    const auto outcome = testing::run_malformed_case(c, roster);
    EXPECT_TRUE(outcome.crash.empty()) << outcome.crash;
    EXPECT_TRUE(testing::outcome_matches(c, outcome))
        << (outcome.accepted ? "accepted" : to_string(outcome.issues.empty() ? IssueKind::NoJson
                                                                                        : outcome.issues[0].kind));
  }
}

// Arbitrary text never escapes as anything but NoJsonFound, and any returned
// value is an object.
TEST(Fuzz, NeverCrashes) {
  std::mt19937 rng(99);
  const std::string alphabet = "{}[]\":,\\ abc123`\njson\t-.eE";
  for (int trial = 0; trial < 5000; ++trial) {
    std::string s;
    const std::size_t n = rng() % 80;
    for (std::size_t i = 0; i < n; ++i) s += alphabet[rng() % alphabet.size()];
    try {
      EXPECT_TRUE(extract_json(s).is_object());
    } catch (const NoJsonFound&) {
    }
  }
}

// Random JSON trees shaped loosely like real outputs.
Json random_json(std::mt19937& rng, int depth) {
  static const std::vector<std::string> keys = {
      "stakeholders", "name", "description", "demographics", "age", "gender", "income", "education",
      "profession", "political_leaning", "sustainability_interest", "agree_explanation",
      "disagree_explanation", "missing_perspectives", "question", "explanation", "expert"};
  static const std::vector<Json> leaves = {nullptr, true, 0, -3, 41, 200, 2.5, "", " ", "Low", "left",
                                           "Prof. Lena Fischer", "x"};
  const unsigned pick = depth <= 0 ? 0 : rng() % 4;
  if (pick == 0) return leaves[rng() % leaves.size()];
  if (pick == 1) {
    Json a = Json::array();
    const int n = static_cast<int>(rng() % 5);
    for (int i = 0; i < n; ++i) a.push_back(random_json(rng, depth - 1));
    return a;
  }
  Json o = Json::object();
  const int n = static_cast<int>(rng() % 8);
  for (int i = 0; i < n; ++i) o[keys[rng() % keys.size()]] = random_json(rng, depth - 1);
  return o;
}

TEST(Fuzz, ValidatorsOnlyRaiseValidationErrors) {
  std::mt19937 rng(5);
  const auto context = testing::fixture_context();
  for (int trial = 0; trial < 3000; ++trial) {
    const std::string raw = random_json(rng, 4).dump();
    for (const char* stage : {"stakeholder_generation", "reflection", "question"}) {
      testing::MalformedCase c{"fuzz", stage, raw, false, {}, {}};
      const auto outcome = testing::run_malformed_case(c, context);
      EXPECT_TRUE(outcome.crash.empty()) << raw << " -> " << outcome.crash;
      for (const auto& issue : outcome.issues) EXPECT_FALSE(issue.path.empty()) << raw;
    }
  }
}

}  // namespace
}  // namespace delib
