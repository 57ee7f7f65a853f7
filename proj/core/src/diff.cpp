#include "fixlab/structured.hpp"

#include <algorithm>
#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include "fixlab/error.hpp"

namespace fixlab {
namespace {

struct Lines {
  std::vector<std::string> lines; // without their trailing '\n'
  bool final_newline = true;      // whether the text ended with '\n'
};

Lines split_lines(const std::string& text) {
  Lines out;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string::npos) {
      out.lines.push_back(text.substr(start));
      out.final_newline = false;
      return out;
    }
    out.lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return out;
}

std::string join_lines(const std::vector<std::string>& lines, bool final_newline) {
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    out += lines[i];
    if (i + 1 < lines.size() || final_newline) out += '\n';
  }
  return out;
}

struct Hunk {
  std::size_t old_start = 0; // 1-based; 0 only for an insertion at the top
  std::size_t old_count = 0;
  std::size_t new_start = 0;
  std::size_t new_count = 0;
  std::vector<std::string> body; // lines with their ' '/'-'/'+' prefix
};

[[noreturn]] void malformed(const std::string& what) {
  raise(ErrorCode::MalformedDiff, "diff: " + what);
}

// Parses "@@ -A[,B] +C[,D] @@"; counts default to 1 when omitted.
void parse_hunk_header(const std::string& line, Hunk& hunk) {
  std::size_t pos = 0;
  auto expect = [&](const std::string& token) {
    if (line.compare(pos, token.size(), token) != 0)
      malformed("bad hunk header '" + line + "'");
    pos += token.size();
  };
  auto number = [&]() -> std::size_t {
    std::size_t begin = pos;
    while (pos < line.size() && line[pos] >= '0' && line[pos] <= '9') ++pos;
    if (pos == begin) malformed("bad hunk header '" + line + "'");
    return static_cast<std::size_t>(std::stoull(line.substr(begin, pos - begin)));
  };
  auto range = [&](std::size_t& start, std::size_t& count) {
    start = number();
    count = 1;
    if (pos < line.size() && line[pos] == ',') {
      ++pos;
      count = number();
    }
  };
  expect("@@ -");
  range(hunk.old_start, hunk.old_count);
  expect(" +");
  range(hunk.new_start, hunk.new_count);
  expect(" @@");
  if (pos != line.size()) malformed("trailing text in hunk header '" + line + "'");
}

Hunk parse_single_hunk(const std::string& diff) {
  Lines d = split_lines(diff);
  const auto& lines = d.lines;
  if (lines.size() < 3) malformed("expected ---/+++ headers and one hunk");
  if (lines[0].rfind("--- ", 0) != 0) malformed("missing '--- ' header");
  if (lines[1].rfind("+++ ", 0) != 0) malformed("missing '+++ ' header");
  if (lines[2].rfind("@@ -", 0) != 0) malformed("missing hunk header");

  Hunk hunk;
  parse_hunk_header(lines[2], hunk);
  std::size_t old_seen = 0;
  std::size_t new_seen = 0;
  for (std::size_t i = 3; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.rfind("@@", 0) == 0) malformed("multiple hunks; only one is supported");
    if (line.empty()) malformed("empty body line (context lines start with a space)");
    char tag = line[0];
    if (tag == ' ') {
      ++old_seen;
      ++new_seen;
    } else if (tag == '-') {
      ++old_seen;
    } else if (tag == '+') {
      ++new_seen;
    } else {
      malformed(std::string("bad body line prefix '") + tag + "'");
    }
    hunk.body.push_back(line);
  }
  if (old_seen != hunk.old_count || new_seen != hunk.new_count)
    malformed("hunk body does not match the header counts");
  return hunk;
}

} // namespace

std::string make_unified_diff(const std::string& before, const std::string& after,
                              std::size_t context) {
  if (before == after) return "";
  Lines a = split_lines(before);
  Lines b = split_lines(after);
  // The single-hunk subset models newline-terminated files (every rendered
  // program is); "\ No newline at end of file" is out of scope.
  if ((!before.empty() && !a.final_newline) || (!after.empty() && !b.final_newline))
    raise(ErrorCode::ConfigError, "diff: inputs must be newline-terminated");

  std::size_t prefix = 0;
  while (prefix < a.lines.size() && prefix < b.lines.size() &&
         a.lines[prefix] == b.lines[prefix])
    ++prefix;
  std::size_t suffix = 0;
  while (suffix < a.lines.size() - prefix && suffix < b.lines.size() - prefix &&
         a.lines[a.lines.size() - 1 - suffix] == b.lines[b.lines.size() - 1 - suffix])
    ++suffix;

  std::size_t ctx_before = std::min(context, prefix);
  std::size_t ctx_after = std::min(context, suffix);
  std::size_t old_begin = prefix - ctx_before; // 0-based first hunk line
  std::size_t old_count = (a.lines.size() - suffix - prefix) + ctx_before + ctx_after;
  std::size_t new_count = (b.lines.size() - suffix - prefix) + ctx_before + ctx_after;
  // A zero-count side states the line *before* the hunk instead of the first
  // hunk line, per the unified format.
  std::size_t old_start = old_count == 0 ? old_begin : old_begin + 1;
  std::size_t new_start = new_count == 0 ? old_begin : old_begin + 1;

  std::ostringstream out;
  out << "--- buggy.c\n+++ fixed.c\n";
  out << "@@ -" << old_start << ',' << old_count << " +" << new_start << ',' << new_count
      << " @@\n";
  for (std::size_t i = old_begin; i < prefix; ++i) out << ' ' << a.lines[i] << '\n';
  for (std::size_t i = prefix; i < a.lines.size() - suffix; ++i) out << '-' << a.lines[i] << '\n';
  for (std::size_t i = prefix; i < b.lines.size() - suffix; ++i) out << '+' << b.lines[i] << '\n';
  for (std::size_t i = a.lines.size() - suffix; i < a.lines.size() - suffix + ctx_after; ++i)
    out << ' ' << a.lines[i] << '\n';
  return out.str();
}

std::string apply_patch(const std::string& source, const std::string& diff) {
  if (diff.empty()) return source;
  Hunk hunk = parse_single_hunk(diff);
  Lines src = split_lines(source);

  if (hunk.old_count > 0 && hunk.old_start == 0)
    malformed("old start 0 with a nonzero count");
  // 0-based index where the hunk's old side must sit (== insertion point
  // when the old side is empty).
  std::size_t at = hunk.old_count == 0 ? hunk.old_start : hunk.old_start - 1;
  if (at + hunk.old_count > src.lines.size())
    raise(ErrorCode::ContextMismatch,
          "patch: hunk extends past line " + std::to_string(src.lines.size()));

  std::vector<std::string> result(src.lines.begin(),
                                  src.lines.begin() + static_cast<std::ptrdiff_t>(at));
  std::size_t cursor = at;
  for (const std::string& line : hunk.body) {
    char tag = line[0];
    std::string text = line.substr(1);
    if (tag == ' ' || tag == '-') {
      if (src.lines[cursor] != text)
        raise(ErrorCode::ContextMismatch, "patch: line " + std::to_string(cursor + 1) +
                                              " is '" + src.lines[cursor] + "', expected '" +
                                              text + "'");
      ++cursor;
      if (tag == ' ') result.push_back(text);
    } else { // '+'
      result.push_back(text);
    }
  }
  result.insert(result.end(), src.lines.begin() + static_cast<std::ptrdiff_t>(cursor),
                src.lines.end());
  return join_lines(result, src.final_newline);
}

} // namespace fixlab
