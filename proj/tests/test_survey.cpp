#include <gtest/gtest.h>

#include <map>
#include <random>

#include "delib/survey.hpp"
#include "test_support.hpp"

namespace delib::survey {
namespace {

namespace oracle = delib::testing::oracle;

MeanInterval ci(std::vector<double> v) { return mean_ci(v); }

TEST(MeanCi, ZeroVariance) {
  const auto r = ci({5, 5, 5, 5});
  EXPECT_DOUBLE_EQ(r.mean, 5.0);
  EXPECT_DOUBLE_EQ(r.ci_low, 5.0);
  EXPECT_DOUBLE_EQ(r.ci_high, 5.0);
  EXPECT_EQ(r.n, 4u);
}

TEST(MeanCi, TextbookDf4) {
  // t(0.975, 4) = 2.776445105197793 from printed tables; s = sqrt(2.5).
  const double half = 2.776445105197793 * std::sqrt(2.5) / std::sqrt(5.0);
  const auto r = ci({1, 2, 3, 4, 5});
  EXPECT_DOUBLE_EQ(r.mean, 3.0);
  EXPECT_NEAR(r.ci_low, 3.0 - half, 1e-12);
  EXPECT_NEAR(r.ci_high, 3.0 + half, 1e-12);
  EXPECT_NEAR(half, 1.963243, 1e-6);
}

TEST(MeanCi, SingleValueIsDegenerate) {
  const auto r = ci({4.5});
  EXPECT_EQ(r.ci_low, 4.5);
  EXPECT_EQ(r.ci_high, 4.5);
}

TEST(MeanCi, EmptyInput) {
  try {
    ci({});
    FAIL();
  } catch (const SurveyError& e) {
    EXPECT_EQ(e.kind(), SurveyError::Kind::EmptyInput);
  }
}

TEST(MeanCi, TCriticalMatchesIntegrationOracle) {
  for (double df : {1.0, 2.0, 4.0, 9.0, 17.0, 18.0, 30.0, 120.0}) {
    for (double conf : {0.9, 0.95, 0.99}) {
      EXPECT_NEAR(t_critical(df, conf), oracle::t_critical(df, conf), 1e-9) << df << " " << conf;
    }
  }
}

TEST(MeanCi, MatchesOracleOnRandomSamples) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(2 + rng() % 30);
    for (auto& x : v) x = 1 + rng() % 7;
    const auto got = mean_ci(v);
    const auto want = oracle::mean_ci(v);
    EXPECT_NEAR(got.mean, want.mean, 1e-9);
    EXPECT_NEAR(got.ci_low, want.low, 1e-9);
    EXPECT_NEAR(got.ci_high, want.high, 1e-9);
  }
}

TEST(MeanCi, SyntheticSampleReportsPublishedMean) {
  // 18 Likert answers summing to 105.
  std::vector<double> v{7, 7, 7, 7, 6, 6, 6, 6, 6, 6, 6, 6, 5, 5, 5, 5, 5, 4};
  ASSERT_EQ(v.size(), 18u);
  EXPECT_NEAR(mean_ci(v).mean, 5.83, 0.005);
}

TEST(MeanCi, ShiftEquivariance) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(1 + rng() % 20);
    for (auto& x : v) x = u(rng);
    const double c = u(rng);
    std::vector<double> shifted = v;
    for (auto& x : shifted) x += c;
    const auto a = mean_ci(v);
    const auto b = mean_ci(shifted);
    EXPECT_NEAR(b.mean, a.mean + c, 1e-9);
    EXPECT_NEAR(b.ci_low, a.ci_low + c, 1e-9);
    EXPECT_NEAR(b.ci_high, a.ci_high + c, 1e-9);
  }
}

TEST(MeanCi, InvariantOrdering) {
  std::mt19937 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(1 + rng() % 20);
    for (auto& x : v) x = 1 + rng() % 7;
    const auto r = mean_ci(v);
    EXPECT_LE(r.ci_low, r.mean);
    EXPECT_LE(r.mean, r.ci_high);
  }
}

TEST(MeanCi, EmpiricalCoverage) {
  std::mt19937 rng(20240601);
  std::normal_distribution<double> normal(4.0, 1.3);
  const int reps = 4000;
  int covered = 0;
  for (int r = 0; r < reps; ++r) {
    std::vector<double> v(12);
    for (auto& x : v) x = normal(rng);
    const auto c = mean_ci(v);
    covered += c.ci_low <= 4.0 && 4.0 <= c.ci_high;
  }
  const double coverage = static_cast<double>(covered) / reps;
  EXPECT_GE(coverage, 0.90);
  EXPECT_LE(coverage, 0.99);
}

std::vector<Observation> obs(const std::vector<std::pair<std::string, double>>& v) {
  std::vector<Observation> out;
  for (const auto& [id, x] : v) out.push_back({id, x});
  return out;
}

TEST(PairedDelta, IdenticalIsZero) {
  const auto pre = obs({{"a", 3}, {"b", 5}});
  const auto d = paired_delta(pre, pre);
  EXPECT_EQ(d.delta, 0.0);
  EXPECT_EQ(d.pairs, 2u);
}

TEST(PairedDelta, DropsUnpaired) {
  const auto d = paired_delta(obs({{"a", 3}, {"b", 5}, {"c", 1}}), obs({{"b", 6}, {"a", 4}, {"z", 7}}));
  EXPECT_EQ(d.pairs, 2u);
  EXPECT_EQ(d.dropped, 2u);
  EXPECT_DOUBLE_EQ(d.mean_pre, 4.0);
  EXPECT_DOUBLE_EQ(d.mean_post, 5.0);
  EXPECT_DOUBLE_EQ(d.delta, 1.0);
}

TEST(PairedDelta, Errors) {
  try {
    paired_delta(obs({{"a", 1}}), obs({{"b", 1}}));
    FAIL();
  } catch (const SurveyError& e) {
    EXPECT_EQ(e.kind(), SurveyError::Kind::NoCompletePairs);
  }
  EXPECT_THROW(paired_delta(obs({{"a", 1}, {"a", 2}}), obs({{"a", 1}})), SurveyError);
}

TEST(PairedDelta, PublishedMeansAreArithmeticallyConsistent) {
  struct Row {
    double pre, post, reported;
  };
  const Row rows[] = {{5.47, 6.11, 0.63}, {4.84, 5.53, 0.68}, {5.32, 4.89, -0.42}, {5.37, 6.00, 0.63}};
  for (const auto& row : rows) {
    // Nineteen respondents spread symmetrically around each published mean.
    std::vector<Observation> pre, post;
    for (int i = 0; i < 19; ++i) {
      const double jitter = (i - 9) * 0.05;
      pre.push_back({"r" + std::to_string(i), row.pre + jitter});
      post.push_back({"r" + std::to_string(i), row.post - jitter});
    }
    const auto d = paired_delta(pre, post);
    EXPECT_NEAR(d.mean_pre, row.pre, 1e-9);
    EXPECT_NEAR(d.mean_post, row.post, 1e-9);
    EXPECT_NEAR(d.delta, row.reported, 0.02);
  }
}

TEST(PairedDelta, BruteForceAndAntisymmetry) {
  std::mt19937 rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Observation> pre, post;
    for (int i = 0; i < 25; ++i) {
      if (rng() % 4) pre.push_back({"r" + std::to_string(i), double(1 + rng() % 7)});
      if (rng() % 4) post.push_back({"r" + std::to_string(i), double(1 + rng() % 7)});
    }
    std::shuffle(post.begin(), post.end(), rng);
    // Brute force: nested loops over both lists.
    double sp = 0, sq = 0;
    std::size_t pairs = 0;
    for (const auto& a : pre) {
      for (const auto& b : post) {
        if (a.respondent_id == b.respondent_id) {
          sp += a.value;
          sq += b.value;
          ++pairs;
        }
      }
    }
    if (pairs == 0) {
      EXPECT_THROW(paired_delta(pre, post), SurveyError);
      continue;
    }
    const auto d = paired_delta(pre, post);
    EXPECT_EQ(d.pairs, pairs);
    EXPECT_EQ(d.dropped, pre.size() + post.size() - 2 * pairs);
    EXPECT_NEAR(d.delta, sq / pairs - sp / pairs, 1e-12);
    EXPECT_NEAR(paired_delta(post, pre).delta, -d.delta, 1e-12);
  }
}

std::size_t csv_error_line(const std::string& text) {
  try {
    parse_csv(text);
  } catch (const SurveyError& e) {
    EXPECT_EQ(e.kind(), SurveyError::Kind::BadInput);
    EXPECT_NE(std::string(e.what()).find("line " + std::to_string(e.line())), std::string::npos);
    return e.line();
  }
  return 0;
}

TEST(Csv, ParsesRows) {
  const auto rows = parse_csv("respondent_id,item_id,phase,value\nd1,useful,activity,6\n\"d,2\",useful,PRE,3\n");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], (LikertResponse{"d1", "useful", Phase::Activity, 6}));
  EXPECT_EQ(rows[1].respondent_id, "d,2");
  EXPECT_EQ(rows[1].phase, Phase::Pre);
}

TEST(Csv, EmptyInputIsEmptyReport) {
  EXPECT_TRUE(parse_csv("").empty());
  EXPECT_TRUE(parse_csv("respondent_id,item_id,phase,value\n").empty());
  const auto report = summarize_items({});
  EXPECT_TRUE(report.items.empty());
  EXPECT_TRUE(report.paired.empty());
  EXPECT_EQ(to_json(report)["items"], Json::array());
}

TEST(Csv, ErrorsNameTheLine) {
  const std::string h = "respondent_id,item_id,phase,value\n";
  EXPECT_EQ(csv_error_line("id,item,phase,value\n"), 1u);
  EXPECT_EQ(csv_error_line(h + "d1,x,pre,3\nd1,x,during,3\n"), 3u);
  EXPECT_EQ(csv_error_line(h + "d1,x,pre,8\n"), 2u);
  EXPECT_EQ(csv_error_line(h + "d1,x,pre,0\n"), 2u);
  EXPECT_EQ(csv_error_line(h + "d1,x,pre,4.5\n"), 2u);
  EXPECT_EQ(csv_error_line(h + "d1,x,pre\n"), 2u);
  EXPECT_EQ(csv_error_line(h + "d1,x,pre,3\nd1,x,pre,4\n"), 3u);
  EXPECT_EQ(csv_error_line(h + "\"d1,x,pre,3\n"), 2u);
}

TEST(Summary, SingleItemTwoPhasesGivesOnePairedRow) {
  const std::vector<LikertResponse> rows{{"a", "x", Phase::Pre, 3}, {"a", "x", Phase::Post, 5}};
  const auto report = summarize_items(rows);
  ASSERT_EQ(report.items.size(), 2u);
  EXPECT_EQ(report.items[0].phase, Phase::Pre);
  ASSERT_EQ(report.paired.size(), 1u);
  EXPECT_DOUBLE_EQ(report.paired[0].delta.delta, 2.0);
}

// Expected values computed outside this codebase with exact rational means
// and scipy's t quantile.
struct Expected {
  const char* item;
  Phase phase;
  std::size_t n;
  double mean, low, high;
};

const Expected kFixtureItems[] = {
    {"easy_to_use", Phase::Activity, 19, 5.684210526316, 5.040508314854, 6.327912737778},
    {"empathy_disagree", Phase::Pre, 19, 5.210526315789, 4.556356715361, 5.864695916218},
    {"empathy_disagree", Phase::Post, 19, 5.315789473684, 4.561319269772, 6.070259677596},
    {"empathy_general", Phase::Pre, 19, 4.631578947368, 3.965065435859, 5.298092458878},
    {"empathy_general", Phase::Post, 18, 4.666666666667, 4.028457853672, 5.304875479661},
    {"engaging", Phase::Activity, 18, 5.833333333333, 5.314569553957, 6.352097112710},
    {"harm_belief", Phase::Pre, 18, 5.055555555556, 4.363286569437, 5.747824541674},
    {"harm_belief", Phase::Post, 19, 5.157894736842, 4.399831797355, 5.915957676330},
    {"respect_conflict", Phase::Pre, 19, 5.157894736842, 4.452754293775, 5.863035179910},
    {"respect_conflict", Phase::Post, 19, 5.052631578947, 4.381041729734, 5.724221428161},
    {"spark_discussion", Phase::Activity, 19, 5.947368421053, 5.403162417763, 6.491574424342},
    {"useful", Phase::Activity, 19, 5.473684210526, 4.908657455887, 6.038710965165},
};

TEST(Summary, FixtureMatchesExternalComputation) {
  const auto rows = parse_csv(testing::read_file(testing::data_path("survey.csv")));
  std::set<std::string> respondents;
  for (const auto& r : rows) respondents.insert(r.respondent_id);
  EXPECT_EQ(respondents.size(), 19u);

  const auto report = summarize_items(rows);
  ASSERT_EQ(report.items.size(), std::size(kFixtureItems));
  for (std::size_t i = 0; i < report.items.size(); ++i) {
    const auto& got = report.items[i];
    const auto& want = kFixtureItems[i];
    SCOPED_TRACE(want.item);
    EXPECT_EQ(got.item_id, want.item);
    EXPECT_EQ(got.phase, want.phase);
    EXPECT_EQ(got.n, want.n);
    EXPECT_NEAR(got.mean, want.mean, 1e-9);
    EXPECT_NEAR(got.ci_low, want.low, 1e-9);
    EXPECT_NEAR(got.ci_high, want.high, 1e-9);
  }

  struct Pair {
    const char* item;
    std::size_t pairs, dropped;
    double pre, post, delta, pre_low, pre_high;
  };
  const Pair pairs[] = {
      {"empathy_disagree", 19, 0, 5.2105263157894735, 5.315789473684211, 0.10526315789473684, 4.556356715361,
       5.864695916218},
      {"empathy_general", 18, 1, 4.5, 4.666666666666667, 0.16666666666666666, 3.856118108212, 5.143881891788},
      {"harm_belief", 18, 1, 5.055555555555555, 5.111111111111111, 0.05555555555555555, 4.363286569437,
       5.747824541674},
      {"respect_conflict", 19, 0, 5.157894736842105, 5.052631578947368, -0.10526315789473684, 4.452754293775,
       5.863035179910},
  };
  ASSERT_EQ(report.paired.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& got = report.paired[i];
    SCOPED_TRACE(pairs[i].item);
    EXPECT_EQ(got.item_id, pairs[i].item);
    EXPECT_EQ(got.delta.pairs, pairs[i].pairs);
    EXPECT_EQ(got.delta.dropped, pairs[i].dropped);
    EXPECT_NEAR(got.delta.mean_pre, pairs[i].pre, 1e-12);
    EXPECT_NEAR(got.delta.mean_post, pairs[i].post, 1e-12);
    EXPECT_NEAR(got.delta.delta, pairs[i].delta, 1e-12);
    EXPECT_NEAR(got.pre.ci_low, pairs[i].pre_low, 1e-9);
    EXPECT_NEAR(got.pre.ci_high, pairs[i].pre_high, 1e-9);
  }

  const Json j = to_json(report);
  EXPECT_EQ(j["confidence"], 0.95);
  EXPECT_EQ(j["items"].size(), 12u);
  EXPECT_EQ(j["paired"][1]["dropped"], 1);
  const std::string table = to_table(report);
  EXPECT_NE(table.find("engaging"), std::string::npos);
  EXPECT_NE(table.find("5.83"), std::string::npos);
}

}  // namespace
}  // namespace delib::survey
