#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace delib {

class MissingBinding : public std::runtime_error {
 public:
  explicit MissingBinding(std::string binding)
      : std::runtime_error("missing prompt binding: " + binding), binding_(std::move(binding)) {}
  const std::string& binding() const noexcept { return binding_; }

 private:
  std::string binding_;
};

// Where a bound value landed in rendered text.
struct BindingSpan {
  std::size_t offset = 0;
  std::size_t length = 0;
  std::string placeholder;

  bool operator==(const BindingSpan&) const = default;
};

struct RenderedText {
  std::string text;
  std::vector<BindingSpan> spans;  // ordered by offset, non-overlapping
};

using Bindings = std::map<std::string, std::string, std::less<>>;

// A template with `{{NAME}}` markers (NAME is [A-Z0-9_]+). Everything else is
// literal text and is reproduced byte for byte. Values are inserted as-is,
// never re-scanned for markers.
class PromptTemplate {
 public:
  static PromptTemplate parse(std::string_view source);

  RenderedText render(const Bindings& bindings) const;

  // Literal text with every marker removed.
  std::string skeleton() const;
  std::vector<std::string> placeholders() const;

 private:
  struct Piece {
    bool is_placeholder = false;
    std::string text;  // literal text, or the placeholder name
  };
  std::vector<Piece> pieces_;
};

// Removes every span from `rendered`, leaving the literal skeleton.
std::string strip_spans(std::string_view rendered, const std::vector<BindingSpan>& spans);

}  // namespace delib
