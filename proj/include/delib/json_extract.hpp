#pragma once

#include <optional>
#include <stdexcept>
#include <string_view>

#include "delib/domain.hpp"

namespace delib {

class NoJsonFound : public std::runtime_error {
 public:
  NoJsonFound() : std::runtime_error("no JSON object found in model output") {}
};

// Pulls the first JSON object out of model text. Tries, in order: the whole
// trimmed text, the body of each ``` fenced block, then a string-aware
// balanced-brace scan over the raw text. Only objects are returned; anything
// after the first complete object is ignored.
Json extract_json(std::string_view raw_text);

// One past the '}' that closes the '{' at `open`, honoring string literals and
// escapes. nullopt if the braces never balance.
std::optional<std::size_t> matching_brace(std::string_view text, std::size_t open);

}  // namespace delib
