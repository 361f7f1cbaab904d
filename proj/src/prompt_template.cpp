#include "delib/prompt_template.hpp"

#include <cctype>

namespace delib {

namespace {

bool is_marker_char(char c) {
  return std::isupper(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) ||
         c == '_';
}

}  // namespace

PromptTemplate PromptTemplate::parse(std::string_view source) {
  PromptTemplate tpl;
  std::string literal;
  std::size_t i = 0;
  while (i < source.size()) {
    if (source.compare(i, 2, "{{") == 0) {
      std::size_t j = i + 2;
      while (j < source.size() && is_marker_char(source[j])) ++j;
      if (j > i + 2 && source.compare(j, 2, "}}") == 0) {
        if (!literal.empty()) tpl.pieces_.push_back({false, std::move(literal)});
        literal.clear();
        tpl.pieces_.push_back({true, std::string(source.substr(i + 2, j - i - 2))});
        i = j + 2;
        continue;
      }
    }
    literal.push_back(source[i]);
    ++i;
  }
  if (!literal.empty()) tpl.pieces_.push_back({false, std::move(literal)});
  return tpl;
}

RenderedText PromptTemplate::render(const Bindings& bindings) const {
  RenderedText out;
  for (const auto& piece : pieces_) {
    if (!piece.is_placeholder) {
      out.text += piece.text;
      continue;
    }
    const auto it = bindings.find(piece.text);
    if (it == bindings.end()) throw MissingBinding(piece.text);
    out.spans.push_back(BindingSpan{out.text.size(), it->second.size(), piece.text});
    out.text += it->second;
  }
  return out;
}

std::string PromptTemplate::skeleton() const {
  std::string out;
  for (const auto& piece : pieces_) {
    if (!piece.is_placeholder) out += piece.text;
  }
  return out;
}

std::vector<std::string> PromptTemplate::placeholders() const {
  std::vector<std::string> out;
  for (const auto& piece : pieces_) {
    if (piece.is_placeholder) out.push_back(piece.text);
  }
  return out;
}

std::string strip_spans(std::string_view rendered, const std::vector<BindingSpan>& spans) {
  std::string out;
  std::size_t cursor = 0;
  for (const auto& span : spans) {
    out.append(rendered.substr(cursor, span.offset - cursor));
    cursor = span.offset + span.length;
  }
  out.append(rendered.substr(cursor));
  return out;
}

}  // namespace delib
