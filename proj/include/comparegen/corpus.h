#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace comparegen {

// Error in user-supplied data or options. Maps to exit code 1 in the CLIs.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Sentence = std::vector<std::string>;

// A tokenized corpus: one sentence per line, tokens split on runs of ASCII
// whitespace. Tokens never contain whitespace; sentences may be empty.
struct TokenCorpus {
  std::vector<Sentence> sentences;

  std::size_t size() const { return sentences.size(); }
  const Sentence& operator[](std::size_t i) const { return sentences[i]; }
  std::size_t total_tokens() const;

  bool operator==(const TokenCorpus&) const = default;
};

// One label per token of a companion TokenCorpus (e.g. POS tags).
struct LabelCorpus {
  std::vector<std::vector<std::string>> labels;

  std::size_t size() const { return labels.size(); }
  const std::vector<std::string>& operator[](std::size_t i) const {
    return labels[i];
  }

  bool operator==(const LabelCorpus&) const = default;
};

struct AlignmentPair {
  std::size_t src = 0;
  std::size_t tgt = 0;
  auto operator<=>(const AlignmentPair&) const = default;
};

// Pharaoh-format word alignments, one sentence per line. Pairs are unique
// and sorted within each sentence; indices are validated against the
// companion source/target sentences at load time.
struct AlignmentCorpus {
  std::vector<std::vector<AlignmentPair>> sentences;

  std::size_t size() const { return sentences.size(); }
  const std::vector<AlignmentPair>& operator[](std::size_t i) const {
    return sentences[i];
  }
};

// One natural-log likelihood per token of a reference corpus.
struct LikelihoodCorpus {
  std::vector<std::vector<double>> values;

  std::size_t size() const { return values.size(); }
  const std::vector<double>& operator[](std::size_t i) const {
    return values[i];
  }
};

// Parsers work on in-memory text; `name` is used in error messages.
// The load_* variants read the named file and delegate.
TokenCorpus parse_token_corpus(std::string_view text, std::string_view name,
                               bool lowercase = false);
TokenCorpus load_token_corpus(const std::string& path, bool lowercase = false);

LabelCorpus parse_label_corpus(std::string_view text, std::string_view name,
                               const TokenCorpus& companion);
LabelCorpus load_label_corpus(const std::string& path,
                              const TokenCorpus& companion);

AlignmentCorpus parse_alignment_corpus(std::string_view text,
                                       std::string_view name,
                                       const TokenCorpus& src,
                                       const TokenCorpus& tgt);
AlignmentCorpus load_alignment_corpus(const std::string& path,
                                      const TokenCorpus& src,
                                      const TokenCorpus& tgt);

LikelihoodCorpus parse_likelihood_corpus(std::string_view text,
                                         std::string_view name,
                                         const TokenCorpus& ref);
LikelihoodCorpus load_likelihood_corpus(const std::string& path,
                                        const TokenCorpus& ref);

// Succeeds iff all corpora have the same sentence count; the error message
// lists every count.
void validate_parallel(const std::vector<const TokenCorpus*>& corpora);

// Single-space join of a sentence's tokens.
std::string join_tokens(const Sentence& sent);

// Canonical serialization: single-space joins, one sentence per line,
// trailing newline. Reloading the result yields an equal corpus.
std::string to_text(const TokenCorpus& corpus);

// Decodes valid UTF-8 into code points. Input must already be validated
// (loaders reject invalid UTF-8).
std::u32string decode_utf8(std::string_view text);

}  // namespace comparegen
