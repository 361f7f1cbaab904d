#include "delib/json_extract.hpp"

namespace delib {

namespace {

std::optional<Json> parse_object(std::string_view text) {
  Json parsed = Json::parse(text.begin(), text.end(), nullptr, /*allow_exceptions=*/false);
  if (parsed.is_discarded() || !parsed.is_object()) return std::nullopt;
  return parsed;
}

std::optional<Json> from_fences(std::string_view text) {
  std::size_t pos = 0;
  while ((pos = text.find("```", pos)) != std::string_view::npos) {
    // Skip the info string ("json", "JSON", ...) up to the end of the line.
    std::size_t body = text.find('\n', pos + 3);
    if (body == std::string_view::npos) return std::nullopt;
    ++body;
    const std::size_t close = text.find("```", body);
    if (close == std::string_view::npos) return std::nullopt;
    if (auto parsed = parse_object(trim(text.substr(body, close - body)))) return parsed;
    pos = close + 3;
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::size_t> matching_brace(std::string_view text, std::size_t open) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = open; i < text.size(); ++i) {
    const char c = text[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return i + 1;
    }
  }
  return std::nullopt;
}

Json extract_json(std::string_view raw_text) {
  if (auto whole = parse_object(trim(raw_text))) return *whole;
  if (auto fenced = from_fences(raw_text)) return *fenced;

  for (std::size_t open = raw_text.find('{'); open != std::string_view::npos;
       open = raw_text.find('{', open + 1)) {
    const auto end = matching_brace(raw_text, open);
    if (!end) continue;
    if (auto parsed = parse_object(raw_text.substr(open, *end - open))) return *parsed;
  }
  throw NoJsonFound();
}

}  // namespace delib
