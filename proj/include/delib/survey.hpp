#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "delib/domain.hpp"

namespace delib::survey {

enum class Phase { Pre, Post, Activity };

std::string_view to_string(Phase phase);
std::optional<Phase> parse_phase(std::string_view text);  // case-insensitive

inline constexpr int kLikertMin = 1;
inline constexpr int kLikertMax = 7;

struct LikertResponse {
  std::string respondent_id;
  std::string item_id;
  Phase phase = Phase::Activity;
  int value = 0;

  bool operator==(const LikertResponse&) const = default;
};

class SurveyError : public std::runtime_error {
 public:
  enum class Kind { EmptyInput, NoCompletePairs, BadInput };

  SurveyError(Kind kind, const std::string& message, std::size_t line = 0)
      : std::runtime_error(message), kind_(kind), line_(line) {}

  Kind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }  // 1-based CSV line for BadInput, else 0

 private:
  Kind kind_;
  std::size_t line_;
};

struct MeanInterval {
  double mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t n = 0;
};

// Arithmetic mean with a two-sided Student-t interval, mean +- t(df=n-1) * s / sqrt(n).
// n == 1 yields the degenerate interval [v, v]. Throws SurveyError(EmptyInput).
MeanInterval mean_ci(std::span<const double> values, double confidence = 0.95);

// Two-sided critical value of Student's t.
double t_critical(double degrees_of_freedom, double confidence);

struct Observation {
  std::string respondent_id;
  double value = 0.0;
};

struct PairedDelta {
  double mean_pre = 0.0;
  double mean_post = 0.0;
  double delta = 0.0;         // mean_post - mean_pre over complete pairs
  std::size_t pairs = 0;
  std::size_t dropped = 0;    // observations without a partner
};

// Pairs by respondent id; unpaired observations are dropped and counted.
// Throws SurveyError(NoCompletePairs), or SurveyError(BadInput) on a repeated respondent.
PairedDelta paired_delta(std::span<const Observation> pre, std::span<const Observation> post);

struct ItemSummary {
  std::string item_id;
  Phase phase = Phase::Activity;
  std::size_t n = 0;
  double mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

struct PairedRow {
  std::string item_id;
  PairedDelta delta;
  MeanInterval pre;   // over the complete pairs
  MeanInterval post;  // over the complete pairs
};

struct SurveyReport {
  std::vector<ItemSummary> items;  // ordered by item id, then phase
  std::vector<PairedRow> paired;   // items with both Pre and Post responses
};

// Header `respondent_id,item_id,phase,value`. Throws SurveyError(BadInput) naming the line.
std::vector<LikertResponse> parse_csv(std::string_view text);

SurveyReport summarize_items(std::span<const LikertResponse> responses);

Json to_json(const SurveyReport& report);
std::string to_table(const SurveyReport& report);

}  // namespace delib::survey
