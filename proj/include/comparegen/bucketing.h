#pragma once

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "comparegen/corpus.h"
#include "comparegen/metrics.h"

namespace comparegen {

inline const std::vector<long long> kDefaultFrequencyCutoffs = {
    1, 2, 3, 5, 10, 100, 1000};
inline const std::vector<double> kDefaultLengthCutoffs = {10, 20, 30,
                                                          40, 50, 60};
inline const std::vector<double> kDefaultLengthDiffCutoffs = {
    -20, -10, -5, -2, -1, 0, 1, 2, 5, 10, 20};
inline const std::vector<double> kDefaultScoreCutoffs = {10, 20, 30, 40, 50,
                                                         60, 70, 80, 90};

// Maps word types to ordered buckets, either by training-corpus frequency
// or by an externally supplied label. Immutable once built.
class WordBucketer {
 public:
  enum class Kind { frequency, label };

  Kind kind() const { return kind_; }
  const std::vector<std::string>& bucket_labels() const { return labels_; }
  std::size_t num_buckets() const { return labels_.size(); }

  // Frequency kind only: bucket of a word by its training count (0 if
  // the word never occurs in the training corpus).
  std::size_t bucket_of_word(const std::string& word) const;

  // Label kind only: bucket of a token's label. Labels excluded by a
  // label_set filter land in the trailing "other" bucket.
  std::size_t bucket_of_label(const std::string& label) const;

  // Default-constructed bucketers are placeholders; use the builders below.
  WordBucketer() = default;

  friend WordBucketer build_frequency_bucketer(
      const TokenCorpus& train, const std::vector<long long>& cutoffs);
  friend WordBucketer build_label_bucketer(
      const std::vector<std::string>& label_set);
  friend WordBucketer build_label_bucketer(
      const std::vector<const LabelCorpus*>& corpora);

 private:
  Kind kind_ = Kind::frequency;
  std::vector<std::string> labels_;
  std::vector<long long> cutoffs_;
  std::unordered_map<std::string, long long> frequencies_;
  std::unordered_map<std::string, std::size_t> label_index_;
  bool has_other_ = false;
};

WordBucketer build_frequency_bucketer(
    const TokenCorpus& train,
    const std::vector<long long>& cutoffs = kDefaultFrequencyCutoffs);

// One bucket per label in label_set (order preserved), plus "other" for
// everything outside the set.
WordBucketer build_label_bucketer(const std::vector<std::string>& label_set);

// One bucket per distinct label, ordered by first appearance across the
// given corpora (scanned in the order given).
WordBucketer build_label_bucketer(
    const std::vector<const LabelCorpus*>& corpora);

enum class SentenceBucketKind { length, lengthdiff, score };

// Partitions sentences into left-closed right-open intervals over a
// per-sentence value: reference length, output-minus-reference length, or
// a scorer's sentence score.
class SentenceBucketer {
 public:
  SentenceBucketKind kind() const { return kind_; }
  const std::vector<std::string>& bucket_labels() const { return labels_; }
  std::size_t num_buckets() const { return labels_.size(); }
  const std::vector<double>& cutoffs() const { return cutoffs_; }
  const std::shared_ptr<const Scorer>& scorer() const { return scorer_; }

  double value_of(const Sentence& ref, const Sentence& sys) const;
  std::size_t assign(const Sentence& ref, const Sentence& sys) const;
  std::size_t bucket_of_value(double v) const;

  friend SentenceBucketer build_sentence_bucketer(
      SentenceBucketKind kind, const std::vector<double>& cutoffs,
      std::shared_ptr<const Scorer> scorer);

 private:
  SentenceBucketer() = default;

  SentenceBucketKind kind_ = SentenceBucketKind::length;
  std::vector<double> cutoffs_;
  std::vector<std::string> labels_;
  std::shared_ptr<const Scorer> scorer_;
};

// Empty cutoffs select the kind's defaults. kind=score requires a scorer.
SentenceBucketer build_sentence_bucketer(
    SentenceBucketKind kind, const std::vector<double>& cutoffs = {},
    std::shared_ptr<const Scorer> scorer = nullptr);

std::string sentence_bucket_kind_name(SentenceBucketKind kind);

}  // namespace comparegen
