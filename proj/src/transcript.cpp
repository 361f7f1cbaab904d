#include "delib/transcript.hpp"

#include <cmath>

namespace delib {

namespace {

std::size_t line_length(const TranscriptSegment& s) { return s.speaker.size() + 2 + s.text.size(); }

void append_line(std::string& out, const TranscriptSegment& s) {
  out += s.speaker;
  out += ": ";
  out += s.text;
}

// Enforces the log invariants on already-built segments.
void check_segments(const std::vector<TranscriptSegment>& segments) {
  double previous = 0.0;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& s = segments[i];
    const std::size_t line = i + 1;
    if (s.seq != static_cast<std::int64_t>(line)) {
      throw TranscriptError(TranscriptError::Kind::BadLine,
                            "line " + std::to_string(line) + ": expected seq " + std::to_string(line), line);
    }
    if (!std::isfinite(s.timestamp) || s.timestamp < previous) {
      throw TranscriptError(TranscriptError::Kind::BadLine,
                            "line " + std::to_string(line) + ": timestamp out of order", line);
    }
    if (trim(s.text).empty()) {
      throw TranscriptError(TranscriptError::Kind::BadLine, "line " + std::to_string(line) + ": empty text", line);
    }
    previous = s.timestamp;
  }
}

}  // namespace

std::string render_segments(std::span<const TranscriptSegment> segments) {
  std::string out;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (i) out += '\n';
    append_line(out, segments[i]);
  }
  return out;
}

Transcript::AppendResult Transcript::append(std::string speaker, std::string text, double timestamp) {
  if (trim(text).empty()) throw TranscriptError(TranscriptError::Kind::EmptyText, "segment text is empty");
  const double floor = last_timestamp();
  AppendResult result;
  result.clamped = !std::isfinite(timestamp) || timestamp < floor;
  result.timestamp = result.clamped ? floor : timestamp;
  result.seq = static_cast<std::int64_t>(segments_.size()) + 1;
  segments_.push_back(TranscriptSegment{result.seq, result.timestamp, std::move(speaker), std::move(text)});
  return result;
}

std::string Transcript::window(std::size_t char_budget) const {
  if (char_budget == 0) throw std::invalid_argument("window budget must be at least 1");
  std::size_t used = 0;
  std::size_t first = segments_.size();
  while (first > 0) {
    const std::size_t extra = line_length(segments_[first - 1]) + (first == segments_.size() ? 0 : 1);
    if (used + extra > char_budget) break;
    used += extra;
    --first;
  }
  std::string body = render_segments(std::span(segments_).subspan(first));
  if (first == 0) return body;
  return std::string(kElisionMarker) + body;
}

std::string Transcript::to_jsonl() const {
  std::string out;
  for (const auto& s : segments_) {
    out += Json(s).dump();
    out += '\n';
  }
  return out;
}

Transcript Transcript::from_jsonl(std::string_view data) {
  std::vector<TranscriptSegment> segments;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < data.size()) {
    std::size_t end = data.find('\n', pos);
    if (end == std::string_view::npos) end = data.size();
    std::string_view line = data.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;

    auto bad = [line_no](const std::string& why) {
      return TranscriptError(TranscriptError::Kind::BadLine,
                             "line " + std::to_string(line_no) + ": " + why, line_no);
    };
    Json parsed = Json::parse(line.begin(), line.end(), nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object()) throw bad("not a JSON object");
    TranscriptSegment s;
    try {
      const Json& seq = parsed.at("seq");
      const Json& ts = parsed.at("ts");
      if (!seq.is_number_integer() || !ts.is_number() || !parsed.at("speaker").is_string() ||
          !parsed.at("text").is_string()) {
        throw bad("field has the wrong type");
      }
      s = parsed.get<TranscriptSegment>();
    } catch (const TranscriptError&) {
      throw;
    } catch (const std::exception&) {
      throw bad("expected fields seq, ts, speaker, text");
    }
    const auto expected = static_cast<std::int64_t>(segments.size()) + 1;
    if (s.seq != expected) throw bad("expected seq " + std::to_string(expected));
    if (!std::isfinite(s.timestamp) || s.timestamp < 0.0 ||
        (!segments.empty() && s.timestamp < segments.back().timestamp)) {
      throw bad("timestamp out of order");
    }
    if (trim(s.text).empty()) throw bad("empty text");
    segments.push_back(std::move(s));
  }
  Transcript t;
  t.segments_ = std::move(segments);
  return t;
}

Transcript Transcript::from_segments(std::vector<TranscriptSegment> segments) {
  check_segments(segments);
  Transcript t;
  t.segments_ = std::move(segments);
  return t;
}

void to_json(Json& j, const Transcript& t) { j = Json{{"segments", t.segments()}}; }

void from_json(const Json& j, Transcript& t) {
  t = Transcript::from_segments(j.at("segments").get<std::vector<TranscriptSegment>>());
}

}  // namespace delib
