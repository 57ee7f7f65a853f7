#pragma once

// Internal maximal-munch scanner for C-ish source text. Shared by the
// mutation engine (which needs byte offsets for splicing) and the feature
// lexer (which only keeps token texts). Not installed.

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace fixlab::detail {

enum class CTokenKind { Identifier, Number, String, CharLit, Operator, Punct, Directive, Other };

struct CToken {
  std::string text;
  std::size_t offset = 0;
  CTokenKind kind = CTokenKind::Other;
};

// Multi-character operators, longest first so maximal munch falls out of
// a linear prefix scan.
inline const std::vector<std::string>& multi_char_operators() {
  static const std::vector<std::string> ops = {
      "<<=", ">>=", "...",
      "==", "!=", "<=", ">=", "&&", "||", "++", "--",
      "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=",
      "->", "<<", ">>",
  };
  return ops;
}

inline bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

inline bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// Scans source into tokens. Whitespace and comments are skipped. A
// preprocessor directive (a line whose first non-blank byte is '#') becomes
// one Directive token spanning the rest of the line. Unterminated string or
// character literals run to end of line. Any byte that fits nothing else
// becomes a single-character Other token, so the scan is total.
inline std::vector<CToken> scan_c_tokens(std::string_view source) {
  std::vector<CToken> out;
  std::size_t i = 0;
  const std::size_t n = source.size();
  bool at_line_start = true;
  while (i < n) {
    char c = source[i];
    if (c == '\n') {
      at_line_start = true;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && source[i + 1] == '/') {
      while (i < n && source[i] != '\n') ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && source[i + 1] == '*') {
      std::size_t end = source.find("*/", i + 2);
      i = end == std::string_view::npos ? n : end + 2;
      continue;
    }
    if (c == '#' && at_line_start) {
      std::size_t start = i;
      while (i < n && source[i] != '\n') ++i;
      out.push_back({std::string(source.substr(start, i - start)), start, CTokenKind::Directive});
      continue;
    }
    at_line_start = false;
    if (is_ident_start(c)) {
      std::size_t start = i;
      while (i < n && is_ident_char(source[i])) ++i;
      out.push_back({std::string(source.substr(start, i - start)), start, CTokenKind::Identifier});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = i;
      while (i < n && (is_ident_char(source[i]) || source[i] == '.')) ++i;
      out.push_back({std::string(source.substr(start, i - start)), start, CTokenKind::Number});
      continue;
    }
    if (c == '"' || c == '\'') {
      std::size_t start = i;
      char quote = c;
      ++i;
      while (i < n && source[i] != quote && source[i] != '\n') {
        if (source[i] == '\\' && i + 1 < n) ++i;
        ++i;
      }
      if (i < n && source[i] == quote) ++i;
      out.push_back({std::string(source.substr(start, i - start)), start,
                     quote == '"' ? CTokenKind::String : CTokenKind::CharLit});
      continue;
    }
    bool matched = false;
    for (const std::string& op : multi_char_operators()) {
      if (source.substr(i, op.size()) == op) {
        out.push_back({op, i, CTokenKind::Operator});
        i += op.size();
        matched = true;
        break;
      }
    }
    if (matched) continue;
    CTokenKind kind = std::ispunct(static_cast<unsigned char>(c)) ? CTokenKind::Punct : CTokenKind::Other;
    if (std::string_view("+-*/%<>=!&|^~?").find(c) != std::string_view::npos) kind = CTokenKind::Operator;
    out.push_back({std::string(1, c), i, kind});
    ++i;
  }
  return out;
}

} // namespace fixlab::detail
