#include "delib/survey.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <tuple>

namespace delib::survey {

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::Pre: return "Pre";
    case Phase::Post: return "Post";
    case Phase::Activity: return "Activity";
  }
  return "Activity";
}

std::optional<Phase> parse_phase(std::string_view text) {
  const std::string t = trim(text);
  for (auto p : {Phase::Pre, Phase::Post, Phase::Activity}) {
    if (iequals(t, to_string(p))) return p;
  }
  return std::nullopt;
}

double t_critical(double degrees_of_freedom, double confidence) {
  boost::math::students_t dist(degrees_of_freedom);
  return boost::math::quantile(boost::math::complement(dist, (1.0 - confidence) / 2.0));
}

MeanInterval mean_ci(std::span<const double> values, double confidence) {
  if (values.empty()) throw SurveyError(SurveyError::Kind::EmptyInput, "mean_ci needs at least one value");
  if (!(confidence > 0.0 && confidence < 1.0)) throw std::invalid_argument("confidence must be in (0, 1)");
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  MeanInterval out{mean, mean, mean, values.size()};
  if (values.size() == 1) return out;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  const double half = t_critical(n - 1.0, confidence) * sd / std::sqrt(n);
  out.ci_low = mean - half;
  out.ci_high = mean + half;
  return out;
}

PairedDelta paired_delta(std::span<const Observation> pre, std::span<const Observation> post) {
  auto index = [](std::span<const Observation> obs, const char* which) {
    std::map<std::string, double> by_id;
    for (const auto& o : obs) {
      if (!by_id.emplace(o.respondent_id, o.value).second) {
        throw SurveyError(SurveyError::Kind::BadInput,
                          std::string(which) + ": respondent \"" + o.respondent_id + "\" appears twice");
      }
    }
    return by_id;
  };
  const auto pre_by_id = index(pre, "pre");
  const auto post_by_id = index(post, "post");

  PairedDelta out;
  double pre_sum = 0.0;
  double post_sum = 0.0;
  for (const auto& [id, before] : pre_by_id) {
    const auto it = post_by_id.find(id);
    if (it == post_by_id.end()) continue;
    pre_sum += before;
    post_sum += it->second;
    ++out.pairs;
  }
  out.dropped = pre_by_id.size() + post_by_id.size() - 2 * out.pairs;
  if (out.pairs == 0) throw SurveyError(SurveyError::Kind::NoCompletePairs, "no respondent answered both phases");
  out.mean_pre = pre_sum / static_cast<double>(out.pairs);
  out.mean_post = post_sum / static_cast<double>(out.pairs);
  out.delta = out.mean_post - out.mean_pre;
  return out;
}

namespace {

std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(trim(field));
      field.clear();
    } else {
      field += c;
    }
  }
  if (quoted) throw SurveyError(SurveyError::Kind::BadInput, "line " + std::to_string(line_no) + ": unterminated quote", line_no);
  fields.push_back(trim(field));
  return fields;
}

}  // namespace

std::vector<LikertResponse> parse_csv(std::string_view text) {
  std::vector<LikertResponse> out;
  std::set<std::tuple<std::string, std::string, Phase>> seen;
  bool header_seen = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;

    auto bad = [line_no](const std::string& why) {
      return SurveyError(SurveyError::Kind::BadInput, "line " + std::to_string(line_no) + ": " + why, line_no);
    };
    const auto fields = split_csv_line(line, line_no);
    if (!header_seen) {
      if (fields != std::vector<std::string>{"respondent_id", "item_id", "phase", "value"}) {
        throw bad("expected header respondent_id,item_id,phase,value");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 4) throw bad("expected 4 fields, got " + std::to_string(fields.size()));
    LikertResponse r;
    r.respondent_id = fields[0];
    r.item_id = fields[1];
    if (r.respondent_id.empty()) throw bad("empty respondent_id");
    if (r.item_id.empty()) throw bad("empty item_id");
    const auto phase = parse_phase(fields[2]);
    if (!phase) throw bad("phase must be Pre, Post or Activity, got \"" + fields[2] + "\"");
    r.phase = *phase;
    std::size_t used = 0;
    try {
      r.value = std::stoi(fields[3], &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != fields[3].size()) throw bad("value must be an integer, got \"" + fields[3] + "\"");
    if (r.value < kLikertMin || r.value > kLikertMax) {
      throw bad("value " + fields[3] + " outside [" + std::to_string(kLikertMin) + ", " + std::to_string(kLikertMax) + "]");
    }
    if (!seen.emplace(r.respondent_id, r.item_id, r.phase).second) {
      throw bad("duplicate response for respondent \"" + r.respondent_id + "\", item \"" + r.item_id + "\", phase " +
                std::string(to_string(r.phase)));
    }
    out.push_back(std::move(r));
  }
  return out;
}

SurveyReport summarize_items(std::span<const LikertResponse> responses) {
  std::map<std::string, std::map<Phase, std::vector<Observation>>> grouped;
  for (const auto& r : responses) {
    grouped[r.item_id][r.phase].push_back(Observation{r.respondent_id, static_cast<double>(r.value)});
  }

  SurveyReport report;
  for (const auto& [item, phases] : grouped) {
    for (const auto& [phase, observations] : phases) {
      std::vector<double> values;
      for (const auto& o : observations) values.push_back(o.value);
      const auto ci = mean_ci(values);
      report.items.push_back(ItemSummary{item, phase, ci.n, ci.mean, ci.ci_low, ci.ci_high});
    }
    const auto pre = phases.find(Phase::Pre);
    const auto post = phases.find(Phase::Post);
    if (pre == phases.end() || post == phases.end()) continue;
    PairedDelta delta;
    try {
      delta = paired_delta(pre->second, post->second);
    } catch (const SurveyError& e) {
      if (e.kind() == SurveyError::Kind::NoCompletePairs) continue;
      throw;
    }
    std::map<std::string, double> post_by_id;
    for (const auto& o : post->second) post_by_id.emplace(o.respondent_id, o.value);
    std::vector<double> pre_values;
    std::vector<double> post_values;
    for (const auto& o : pre->second) {
      if (auto it = post_by_id.find(o.respondent_id); it != post_by_id.end()) {
        pre_values.push_back(o.value);
        post_values.push_back(it->second);
      }
    }
    report.paired.push_back(PairedRow{item, delta, mean_ci(pre_values), mean_ci(post_values)});
  }
  return report;
}

Json to_json(const SurveyReport& report) {
  Json items = Json::array();
  for (const auto& s : report.items) {
    items.push_back(Json{{"item_id", s.item_id},
                         {"phase", to_string(s.phase)},
                         {"n", s.n},
                         {"mean", s.mean},
                         {"ci_low", s.ci_low},
                         {"ci_high", s.ci_high}});
  }
  Json paired = Json::array();
  for (const auto& p : report.paired) {
    paired.push_back(Json{{"item_id", p.item_id},
                          {"pairs", p.delta.pairs},
                          {"dropped", p.delta.dropped},
                          {"mean_pre", p.delta.mean_pre},
                          {"mean_post", p.delta.mean_post},
                          {"delta", p.delta.delta},
                          {"pre_ci", Json::array({p.pre.ci_low, p.pre.ci_high})},
                          {"post_ci", Json::array({p.post.ci_low, p.post.ci_high})}});
  }
  return Json{{"confidence", 0.95}, {"items", std::move(items)}, {"paired", std::move(paired)}};
}

std::string to_table(const SurveyReport& report) {
  std::size_t width = 7;
  for (const auto& s : report.items) width = std::max(width, s.item_id.size());
  auto pad = [](std::string s, std::size_t w) {
    s.resize(std::max(w, s.size()), ' ');
    return s;
  };
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%7.2f", v);
    return std::string(buf);
  };

  std::string out = pad("item_id", width) + "  phase        n    mean  ci_low ci_high\n";
  for (const auto& s : report.items) {
    char n[16];
    std::snprintf(n, sizeof n, "%4zu", s.n);
    out += pad(s.item_id, width) + "  " + pad(std::string(to_string(s.phase)), 8) + " " + n + " " + num(s.mean) +
           " " + num(s.ci_low) + " " + num(s.ci_high) + "\n";
  }
  if (!report.paired.empty()) {
    out += "\n" + pad("item_id", width) + "  pairs dropped     pre    post   delta\n";
    for (const auto& p : report.paired) {
      char counts[32];
      std::snprintf(counts, sizeof counts, "%5zu %7zu", p.delta.pairs, p.delta.dropped);
      out += pad(p.item_id, width) + "  " + counts + " " + num(p.delta.mean_pre) + " " + num(p.delta.mean_post) +
             " " + num(p.delta.delta) + "\n";
    }
  }
  return out;
}

}  // namespace delib::survey
