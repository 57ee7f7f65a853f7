#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fixlab/corpus.hpp"

namespace fixlab {

/// Maximal-munch token texts for C-ish source. Whitespace and comments are
/// dropped; a preprocessor directive is one opaque token; string and char
/// literals are single tokens; every other byte falls back to a
/// single-character token, so no input can fail to lex.
std::vector<std::string> lex_c(std::string_view source);

/// The textual rendering of an example's failing behavior that gets lexed
/// into the second half of the model input.
std::string behavior_text(const Example& example);

/// Token-to-id map. Ids 0..2 are reserved (PAD, UNK, SEP) and have no
/// surface form; real tokens start at id 3 in frequency-then-lexicographic
/// order.
class Vocabulary {
 public:
  static constexpr int kPadId = 0;
  static constexpr int kUnkId = 1;
  static constexpr int kSepId = 2;
  static constexpr std::size_t kNumReservedIds = 3;

  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> tokens);

  int id(const std::string& token) const; // kUnkId for unknown tokens
  const std::vector<std::string>& tokens() const { return tokens_; }
  std::size_t size() const { return kNumReservedIds + tokens_.size(); }

  bool operator==(const Vocabulary& other) const { return tokens_ == other.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

/// Counts tokens over the train split only (buggy source plus rendered
/// behavior), keeps those with count >= min_count, orders by descending
/// frequency then ascending lexicographic. Throws EmptyTrainSplit when the
/// dataset has no train examples.
Vocabulary build_vocab(const Dataset& dataset, std::size_t min_count = 1);

void save_vocabulary(const Vocabulary& vocab, const std::filesystem::path& path);
Vocabulary load_vocabulary(const std::filesystem::path& path);

struct TokenSequence {
  std::vector<int> ids;              // exactly max_len entries
  std::size_t attention_length = 0;  // leading non-PAD count, always >= 1

  bool operator==(const TokenSequence&) const = default;
};

/// tokens(buggy) ++ SEP ++ tokens(behavior), truncated then right-padded to
/// max_len. Throws ConfigError when max_len is zero.
TokenSequence encode_example(const Example& example, const Vocabulary& vocab, std::size_t max_len);

/// Fraction of this split's tokens that fall outside the vocabulary.
double oov_rate(const Dataset& dataset, const Vocabulary& vocab, Split split);

} // namespace fixlab
