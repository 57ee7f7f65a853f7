#include "fixlab/encode.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "fixlab/error.hpp"
#include "ctoken.hpp"

namespace fixlab {

std::vector<std::string> lex_c(std::string_view source) {
  std::vector<std::string> out;
  for (detail::CToken& tok : detail::scan_c_tokens(source)) {
    out.push_back(std::move(tok.text));
  }
  return out;
}

std::string behavior_text(const Example& example) {
  std::string out;
  for (const FailingBehavior& b : example.failing_behavior) {
    out += "input " + b.input + " expected " + b.expected_output + " observed " + b.observed + "\n";
  }
  return out;
}

Vocabulary::Vocabulary(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    auto [it, inserted] = index_.emplace(tokens_[i], static_cast<int>(kNumReservedIds + i));
    if (!inserted) {
      raise(ErrorCode::FormatError, "duplicate vocabulary token '" + tokens_[i] + "'");
    }
  }
}

int Vocabulary::id(const std::string& token) const {
  auto it = index_.find(token);
  return it == index_.end() ? kUnkId : it->second;
}

Vocabulary build_vocab(const Dataset& dataset, std::size_t min_count) {
  std::map<std::string, std::size_t> counts;
  bool any_train = false;
  for (const Example& ex : dataset.examples) {
    if (ex.split != Split::Train) continue;
    any_train = true;
    for (const std::string& tok : lex_c(ex.buggy_source)) ++counts[tok];
    for (const std::string& tok : lex_c(behavior_text(ex))) ++counts[tok];
  }
  if (!any_train) {
    raise(ErrorCode::EmptyTrainSplit, "vocabulary needs at least one train example");
  }
  std::vector<std::pair<std::string, std::size_t>> kept;
  for (const auto& [tok, count] : counts) {
    if (count >= min_count) kept.emplace_back(tok, count);
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::string> tokens;
  tokens.reserve(kept.size());
  for (auto& [tok, count] : kept) tokens.push_back(std::move(tok));
  return Vocabulary(std::move(tokens));
}

void save_vocabulary(const Vocabulary& vocab, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
  for (const std::string& tok : vocab.tokens()) out << tok << '\n';
  if (!out) raise(ErrorCode::IoError, "failed writing '" + path.string() + "'");
}

Vocabulary load_vocabulary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  std::vector<std::string> tokens;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      raise(ErrorCode::FormatError,
            path.string() + ":" + std::to_string(line_no) + ": empty vocabulary line");
    }
    tokens.push_back(line);
  }
  return Vocabulary(std::move(tokens));
}

TokenSequence encode_example(const Example& example, const Vocabulary& vocab,
                             std::size_t max_len) {
  if (max_len == 0) raise(ErrorCode::ConfigError, "max_len must be positive");
  TokenSequence seq;
  seq.ids.reserve(max_len);
  for (const std::string& tok : lex_c(example.buggy_source)) {
    if (seq.ids.size() == max_len) break;
    seq.ids.push_back(vocab.id(tok));
  }
  if (seq.ids.size() < max_len) seq.ids.push_back(Vocabulary::kSepId);
  for (const std::string& tok : lex_c(behavior_text(example))) {
    if (seq.ids.size() == max_len) break;
    seq.ids.push_back(vocab.id(tok));
  }
  seq.attention_length = seq.ids.size();
  seq.ids.resize(max_len, Vocabulary::kPadId);
  return seq;
}

double oov_rate(const Dataset& dataset, const Vocabulary& vocab, Split split) {
  std::size_t total = 0;
  std::size_t unknown = 0;
  for (const Example& ex : dataset.examples) {
    if (ex.split != split) continue;
    for (const std::string& tok : lex_c(ex.buggy_source)) {
      ++total;
      if (vocab.id(tok) == Vocabulary::kUnkId) ++unknown;
    }
    for (const std::string& tok : lex_c(behavior_text(ex))) {
      ++total;
      if (vocab.id(tok) == Vocabulary::kUnkId) ++unknown;
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(unknown) / static_cast<double>(total);
}

} // namespace fixlab
