#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "delib/domain.hpp"

namespace delib {

class TranscriptError : public std::runtime_error {
 public:
  enum class Kind { EmptyText, BadLine };

  TranscriptError(Kind kind, const std::string& message, std::size_t line = 0)
      : std::runtime_error(message), kind_(kind), line_(line) {}

  Kind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }  // 1-based; BadLine only

 private:
  Kind kind_;
  std::size_t line_;
};

// Prefix line emitted by window() when older segments were dropped.
inline constexpr std::string_view kElisionMarker = "[... earlier discussion omitted ...]\n";
inline constexpr std::size_t kDefaultWindowChars = 24000;

// "Speaker: text" per segment, newline separated, no trailing newline.
std::string render_segments(std::span<const TranscriptSegment> segments);

// Append-only, seq-dense (1..n) utterance log.
class Transcript {
 public:
  struct AppendResult {
    std::int64_t seq = 0;
    double timestamp = 0.0;
    bool clamped = false;  // timestamp was raised to keep the log non-decreasing
  };

  Transcript() = default;

  // Throws TranscriptError(EmptyText) when `text` is blank after trimming.
  // Timestamps below the previous one (or negative, or non-finite) are clamped.
  AppendResult append(std::string speaker, std::string text, double timestamp);

  const std::vector<TranscriptSegment>& segments() const noexcept { return segments_; }
  std::size_t size() const noexcept { return segments_.size(); }
  bool empty() const noexcept { return segments_.empty(); }
  double last_timestamp() const noexcept { return segments_.empty() ? 0.0 : segments_.back().timestamp; }

  std::string render() const { return render_segments(segments_); }

  // Rendered text of the longest suffix of whole segments fitting in
  // `char_budget` bytes, prefixed with kElisionMarker if anything was dropped.
  std::string window(std::size_t char_budget = kDefaultWindowChars) const;

  // One {"seq","ts","speaker","text"} object per line, each line terminated by '\n'.
  std::string to_jsonl() const;
  // Throws TranscriptError(BadLine) naming the first offending 1-based line.
  static Transcript from_jsonl(std::string_view data);

  static Transcript from_segments(std::vector<TranscriptSegment> segments);

  bool operator==(const Transcript&) const = default;

 private:
  std::vector<TranscriptSegment> segments_;
};

void to_json(Json& j, const Transcript& t);
void from_json(const Json& j, Transcript& t);

}  // namespace delib
