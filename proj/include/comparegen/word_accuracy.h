#pragma once

#include <optional>
#include <string>
#include <vector>

#include "comparegen/bucketing.h"
#include "comparegen/corpus.h"

namespace comparegen {

struct AccuracyCounts {
  long long matches = 0;
  long long sys_count = 0;
  long long ref_count = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;

  bool operator==(const AccuracyCounts&) const = default;
};

struct BucketAccuracy {
  std::string bucket_label;
  std::vector<AccuracyCounts> systems;

  bool operator==(const BucketAccuracy&) const = default;
};

struct LikelihoodBucketStat {
  std::string bucket_label;
  long long token_count = 0;
  std::optional<double> mean_log_likelihood;

  bool operator==(const LikelihoodBucketStat&) const = default;
};

struct BucketSentenceExample {
  std::size_t sentence_index = 0;
  double f_a = 0.0;
  double f_b = 0.0;

  bool operator==(const BucketSentenceExample&) const = default;
};

struct BucketExampleReport {
  std::string bucket_label;
  std::vector<BucketSentenceExample> favoring_a;
  std::vector<BucketSentenceExample> favoring_b;
};

// Bucketed word accuracy of each system against the reference. Matching
// is clipped-count per sentence over word types (frequency buckets) or
// (word, label) pairs (label buckets); positions play no role. Label
// bucketing requires one label corpus for the reference and one per
// system, all parallel.
std::vector<BucketAccuracy> word_accuracy_report(
    const TokenCorpus& ref, const std::vector<const TokenCorpus*>& sys_list,
    const WordBucketer& bucketer, const LabelCorpus* ref_labels = nullptr,
    const std::vector<const LabelCorpus*>& sys_labels = {});

// Source-side accuracy: for each source token, the multisets of reference
// and system tokens aligned to it are compared (multiset intersection).
// Source tokens with no reference alignment contribute nothing. Buckets
// come from the source word (frequency kind) or its label.
std::vector<BucketAccuracy> source_word_accuracy_report(
    const TokenCorpus& src, const TokenCorpus& ref,
    const std::vector<const TokenCorpus*>& sys_list,
    const AlignmentCorpus& ref_align,
    const std::vector<const AlignmentCorpus*>& sys_aligns,
    const WordBucketer& bucketer, const LabelCorpus* src_labels = nullptr);

// Mean natural-log likelihood of reference tokens per bucket, one list
// per system. Empty buckets report token_count 0 and no mean.
std::vector<std::vector<LikelihoodBucketStat>> likelihood_report(
    const TokenCorpus& ref,
    const std::vector<const LikelihoodCorpus*>& likelihoods,
    const WordBucketer& bucketer, const LabelCorpus* ref_labels = nullptr);

// For exactly two systems: rank sentences by the difference of their
// per-sentence F-measures over keys in the chosen bucket only, and return
// the top k for each direction. Ties break toward earlier sentences.
BucketExampleReport bucket_example_sentences(
    const TokenCorpus& ref, const std::vector<const TokenCorpus*>& sys_list,
    const WordBucketer& bucketer, const std::string& bucket_label,
    std::size_t k, const LabelCorpus* ref_labels = nullptr,
    const std::vector<const LabelCorpus*>& sys_labels = {});

}  // namespace comparegen
