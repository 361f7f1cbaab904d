#include <gtest/gtest.h>

#include <random>

#include "delib/validation.hpp"
#include "test_support.hpp"

namespace delib {
namespace {

using testing::batch_without_low_json;
using testing::persona_json;
using testing::valid_batch_json;

Json linda() {
  return Json{{"name", "Linda"},
              {"description", "Works nights maintaining the science buildings."},
              {"demographics",
               {{"age", 52},
                {"gender", "Female"},
                {"income", "$40k"},
                {"education", "High school"},
                {"profession", "Facilities staff"},
                {"political_leaning", "center"},
                {"sustainability_interest", "low"}}}};
}

template <class F>
ValidationError expect_invalid(F&& f) {
  try {
    f();
  } catch (const ValidationError& e) {
    return e;
  }
  ADD_FAILURE() << "expected ValidationError";
  return ValidationError({});
}

TEST(Enums, ParseIsCaseInsensitiveAndTrims) {
  EXPECT_EQ(parse_political_leaning(" LEFT "), PoliticalLeaning::Left);
  EXPECT_EQ(parse_political_leaning("center"), PoliticalLeaning::Center);
  EXPECT_EQ(parse_sustainability_interest("hIgH"), SustainabilityInterest::High);
  EXPECT_FALSE(parse_sustainability_interest("Very High"));
  EXPECT_FALSE(parse_political_leaning(""));
  EXPECT_EQ(to_string(SustainabilityInterest::Low), "Low");
}

TEST(ValidatePersona, CanonicalizesEnumCasing) {
  const auto p = validate_persona(linda());
  EXPECT_EQ(p.name, "Linda");
  EXPECT_EQ(p.demographics.age, 52);
  EXPECT_EQ(p.demographics.political_leaning, PoliticalLeaning::Center);
  EXPECT_EQ(p.demographics.sustainability_interest, SustainabilityInterest::Low);
  const Json out = p.demographics;
  EXPECT_EQ(out["political_leaning"], "Center");
  EXPECT_EQ(out["sustainability_interest"], "Low");
}

TEST(ValidatePersona, CoercesNumericAgeString) {
  Json raw = linda();
  raw["demographics"]["age"] = " 47 ";
  EXPECT_EQ(validate_persona(raw).demographics.age, 47);
  raw["demographics"]["age"] = 47.0;
  EXPECT_EQ(validate_persona(raw).demographics.age, 47);
}

TEST(ValidatePersona, AcceptsNumericIncome) {
  Json raw = linda();
  raw["demographics"]["income"] = 42000;
  EXPECT_EQ(validate_persona(raw).demographics.income, "42000");
}

TEST(ValidatePersona, MissingDemographics) {
  Json raw = linda();
  raw.erase("demographics");
  const auto e = expect_invalid([&] { validate_persona(raw); });
  EXPECT_TRUE(e.has(IssueKind::MissingField, "demographics"));
}

TEST(ValidatePersona, BadEnumListsAllowedValues) {
  Json raw = linda();
  raw["demographics"]["sustainability_interest"] = "Very High";
  const auto e = expect_invalid([&] { validate_persona(raw); });
  ASSERT_TRUE(e.has(IssueKind::BadEnum, "demographics.sustainability_interest"));
  const auto& issue = e.issues().front();
  EXPECT_EQ(issue.got, "Very High");
  EXPECT_EQ(issue.allowed, (std::vector<std::string>{"Low", "Medium", "High"}));
}

TEST(ValidatePersona, AgeOutOfRangeAndNonInteger) {
  Json raw = linda();
  raw["demographics"]["age"] = 9;
  EXPECT_TRUE(expect_invalid([&] { validate_persona(raw); }).has(IssueKind::BadRange, "demographics.age"));
  raw["demographics"]["age"] = 101;
  EXPECT_TRUE(expect_invalid([&] { validate_persona(raw); }).has(IssueKind::BadRange, "demographics.age"));
  raw["demographics"]["age"] = 30.5;
  EXPECT_TRUE(expect_invalid([&] { validate_persona(raw); }).has(IssueKind::BadType, "demographics.age"));
  raw["demographics"]["age"] = "thirty";
  EXPECT_TRUE(expect_invalid([&] { validate_persona(raw); }).has(IssueKind::BadType, "demographics.age"));
  raw["demographics"]["age"] = kMinAge;
  EXPECT_EQ(validate_persona(raw).demographics.age, kMinAge);
  raw["demographics"]["age"] = kMaxAge;
  EXPECT_EQ(validate_persona(raw).demographics.age, kMaxAge);
}

TEST(ValidatePersona, ReportsEveryViolation) {
  Json raw = linda();
  raw["name"] = "";
  raw["demographics"].erase("gender");
  raw["demographics"]["political_leaning"] = 3;
  const auto e = expect_invalid([&] { validate_persona(raw); });
  EXPECT_TRUE(e.has(IssueKind::EmptyField, "name"));
  EXPECT_TRUE(e.has(IssueKind::MissingField, "demographics.gender"));
  EXPECT_TRUE(e.has(IssueKind::BadEnum, "demographics.political_leaning"));
  EXPECT_EQ(e.issues().size(), 3u);
}

TEST(ValidateBatch, AcceptsThreeWithOneLow) {
  const auto batch = validate_stakeholder_batch(valid_batch_json());
  ASSERT_EQ(batch.size(), 3u);
  EXPECT_EQ(batch[0].demographics.sustainability_interest, SustainabilityInterest::Low);
}

TEST(ValidateBatch, WrongCount) {
  Json raw = valid_batch_json();
  raw["stakeholders"].erase(2);
  const auto e = expect_invalid([&] { validate_stakeholder_batch(raw); });
  EXPECT_TRUE(e.has(IssueKind::WrongCount, "stakeholders"));
  EXPECT_NE(e.issues().front().detail.find("got 2"), std::string::npos);
}

TEST(ValidateBatch, LowInterestConstraint) {
  const auto e = expect_invalid([&] { validate_stakeholder_batch(batch_without_low_json()); });
  EXPECT_TRUE(e.has(IssueKind::ConstraintLowInterestMissing, "stakeholders"));
}

TEST(ValidateBatch, MutatingTheLowPersonaTriggersConstraint) {
  // Every single-field mutation of the only Low persona to Medium/High must be rejected.
  for (const char* replacement : {"Medium", "High", "medium"}) {
    Json raw = valid_batch_json();
    raw["stakeholders"][0]["demographics"]["sustainability_interest"] = replacement;
    EXPECT_TRUE(expect_invalid([&] { validate_stakeholder_batch(raw); })
                    .has(IssueKind::ConstraintLowInterestMissing));
  }
}

TEST(ValidateBatch, PerPersonaPathsAreIndexed) {
  Json raw = valid_batch_json();
  raw["stakeholders"][1]["demographics"]["political_leaning"] = "Libertarian";
  raw["stakeholders"][2].erase("description");
  const auto e = expect_invalid([&] { validate_stakeholder_batch(raw); });
  EXPECT_TRUE(e.has(IssueKind::BadEnum, "stakeholders[1].demographics.political_leaning"));
  EXPECT_TRUE(e.has(IssueKind::MissingField, "stakeholders[2].description"));
}

TEST(ValidateBatch, ShapeErrors) {
  EXPECT_TRUE(expect_invalid([] { validate_stakeholder_batch(Json::array()); }).has(IssueKind::BadType, "$"));
  EXPECT_TRUE(
      expect_invalid([] { validate_stakeholder_batch(Json::object()); }).has(IssueKind::MissingField, "stakeholders"));
  EXPECT_TRUE(expect_invalid([] { validate_stakeholder_batch(Json{{"stakeholders", 3}}); })
                  .has(IssueKind::BadType, "stakeholders"));
}

TEST(ValidateReflection, AcceptsAndWarnsOnLength) {
  const auto ok = validate_reflection(testing::valid_reflection_json(), "p1");
  EXPECT_EQ(ok.value.persona_id, "p1");
  EXPECT_TRUE(ok.warnings.empty());

  Json shortish = testing::valid_reflection_json();
  shortish["agree_explanation"] = "Too short.";
  const auto warned = validate_reflection(shortish, "p1");
  ASSERT_EQ(warned.warnings.size(), 1u);
  EXPECT_NE(warned.warnings[0].find("agree_explanation"), std::string::npos);
}

TEST(ValidateReflection, MissingAndEmpty) {
  Json raw = testing::valid_reflection_json();
  raw.erase("missing_perspectives");
  EXPECT_TRUE(expect_invalid([&] { validate_reflection(raw, "p1"); })
                  .has(IssueKind::MissingField, "missing_perspectives"));
  raw = testing::valid_reflection_json();
  raw["agree_explanation"] = "";
  EXPECT_TRUE(
      expect_invalid([&] { validate_reflection(raw, "p1"); }).has(IssueKind::EmptyField, "agree_explanation"));
}

AssemblyContext smith_roster() {
  AssemblyContext c;
  c.theme = "Net zero";
  c.experts = {{"Dr. Smith", "energy"}, {"Ana Gómez", "transport"}};
  return c;
}

TEST(ValidateQuestion, ResolvesExpertCaseInsensitively) {
  const auto q = validate_question(Json{{"question", "Q?"}, {"explanation", "E"}, {"expert", "dr. smith"}},
                                   smith_roster(), "p1");
  EXPECT_EQ(q.expert, "Dr. Smith");
  EXPECT_TRUE(q.expert_resolved);
  EXPECT_EQ(q.persona_id, "p1");
}

TEST(ValidateQuestion, ResolvesRenderedRosterForm) {
  const auto q = validate_question(Json{{"question", "Q?"}, {"explanation", "E"}, {"expert", "Dr. Smith (energy)"}},
                                   smith_roster(), std::nullopt);
  EXPECT_EQ(q.expert, "Dr. Smith");
  EXPECT_TRUE(q.expert_resolved);
}

TEST(ValidateQuestion, CaseFoldOracleOverRoster) {
  // Independent oracle: ASCII lower-casing both sides.
  auto fold = [](std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
  };
  const auto roster = smith_roster();
  std::mt19937 rng(7);
  for (int i = 0; i < 200; ++i) {
    std::string name = roster.experts[i % 2].name;
    for (auto& c : name) {
      if (rng() % 2) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    const auto q = validate_question(Json{{"question", "Q"}, {"explanation", "E"}, {"expert", name}}, roster, "p1");
    EXPECT_TRUE(q.expert_resolved);
    EXPECT_EQ(fold(q.expert), fold(name));
  }
}

TEST(ValidateQuestion, UnresolvedKeptAndFlagged) {
  const auto q = validate_question(Json{{"question", "Q?"}, {"explanation", "E"}, {"expert", "Nobody"}},
                                   smith_roster(), "p1");
  EXPECT_EQ(q.expert, "Nobody");
  EXPECT_FALSE(q.expert_resolved);
}

TEST(ValidateQuestion, MissingExplanation) {
  EXPECT_TRUE(expect_invalid([] {
                validate_question(Json{{"question", "Q?"}, {"expert", "Dr. Smith"}}, smith_roster(), "p1");
              }).has(IssueKind::MissingField, "explanation"));
}

TEST(ValidateContext, StringsOrObjectsAndDuplicates) {
  const auto c = validate_context(Json{{"theme", "T"}, {"experts", Json::array({"A", Json{{"name", "B"}}})}});
  ASSERT_EQ(c.experts.size(), 2u);
  EXPECT_EQ(c.experts[0].name, "A");

  const auto e = expect_invalid(
      [] { validate_context(Json{{"theme", "T"}, {"experts", Json::array({"Dr. X", "dr. x"})}}); });
  EXPECT_TRUE(e.has(IssueKind::Duplicate, "experts[1].name"));
  EXPECT_TRUE(expect_invalid([] { validate_context(Json{{"theme", " "}}); }).has(IssueKind::EmptyField, "theme"));
}

TEST(Invariants, ValidationIsIdempotent) {
  const auto batch = validate_stakeholder_batch(valid_batch_json());
  const auto again = validate_stakeholder_batch(Json{{"stakeholders", batch}});
  EXPECT_EQ(batch, again);

  const auto p = validate_persona(linda());
  EXPECT_EQ(validate_persona(Json(p)), p);

  const auto r = validate_reflection(testing::valid_reflection_json(), "p1").value;
  EXPECT_EQ(validate_reflection(Json(r), "p1").value, r);

  const auto q = validate_question(testing::valid_question_json("dr. smith"), smith_roster(), "p1");
  EXPECT_EQ(validate_question(Json(q), smith_roster(), "p1"), q);
}

TEST(Invariants, SerializationRoundTrips) {
  StakeholderPersona p = validate_persona(linda());
  p.id = "p7";
  p.batch = 2;
  p.superseded = true;
  EXPECT_EQ(Json::parse(Json(p).dump()).get<StakeholderPersona>(), p);

  StakeholderQuestion facilitator{std::nullopt, "Q", "E", "X", false};
  const Json j = facilitator;
  EXPECT_TRUE(j["persona_id"].is_null());
  EXPECT_EQ(Json::parse(j.dump()).get<StakeholderQuestion>(), facilitator);

  const auto context = testing::fixture_context();
  EXPECT_EQ(Json::parse(Json(context).dump()).get<AssemblyContext>(), context);
}

TEST(Invariants, DemographicsKeyOrderIsCanonical) {
  const Json j = validate_persona(linda()).demographics;
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"age", "gender", "income", "education", "profession",
                                            "political_leaning", "sustainability_interest"}));
}

TEST(Invariants, AcceptedBatchesAlwaysHaveThreeAndALow) {
  std::mt19937 rng(11);
  const char* interests[] = {"Low", "Medium", "High"};
  int accepted = 0;
  for (int trial = 0; trial < 500; ++trial) {
    Json list = Json::array();
    const int n = 1 + static_cast<int>(rng() % 5);
    for (int i = 0; i < n; ++i) {
      list.push_back(persona_json("P" + std::to_string(i), interests[rng() % 3]));
    }
    try {
      const auto batch = validate_stakeholder_batch(Json{{"stakeholders", list}});
      ++accepted;
      ASSERT_EQ(batch.size(), 3u);
      bool low = false;
      for (const auto& p : batch) low = low || p.demographics.sustainability_interest == SustainabilityInterest::Low;
      EXPECT_TRUE(low);
    } catch (const ValidationError& e) {
      EXPECT_FALSE(e.issues().empty());
    }
  }
  EXPECT_GT(accepted, 0);
}

TEST(Invariants, EveryErrorNamesAPath) {
  std::mt19937 rng(3);
  const Json junk[] = {Json(), Json(1), Json("s"), Json::array(), Json::object(), Json{{"stakeholders", nullptr}},
                       Json{{"name", 5}}, Json{{"demographics", "x"}}};
  for (const auto& j : junk) {
    for (int which = 0; which < 4; ++which) {
      try {
        switch (which) {
          case 0: validate_persona(j); break;
          case 1: validate_stakeholder_batch(j); break;
          case 2: validate_reflection(j, "p1"); break;
          default: validate_question(j, smith_roster(), "p1"); break;
        }
      } catch (const ValidationError& e) {
        ASSERT_FALSE(e.issues().empty());
        for (const auto& issue : e.issues()) EXPECT_FALSE(issue.path.empty());
      }
    }
  }
  // Randomly drop fields from a valid batch.
  for (int trial = 0; trial < 200; ++trial) {
    Json raw = valid_batch_json();
    auto& target = raw["stakeholders"][rng() % 3];
    const char* keys[] = {"name", "description", "demographics"};
    target.erase(keys[rng() % 3]);
    const auto e = expect_invalid([&] { validate_stakeholder_batch(raw); });
    for (const auto& issue : e.issues()) EXPECT_NE(issue.path.find("stakeholders["), std::string::npos);
  }
}

TEST(Helpers, WordCountAndTrim) {
  EXPECT_EQ(word_count("  one two\tthree\n"), 3u);
  EXPECT_EQ(word_count(""), 0u);
  EXPECT_EQ(trim("  a b  "), "a b");
  EXPECT_TRUE(iequals("AbC", "aBc"));
}

}  // namespace
}  // namespace delib
