#pragma once

#include <optional>
#include <string>
#include <vector>

#include "comparegen/bucketing.h"
#include "comparegen/corpus.h"
#include "comparegen/metrics.h"

namespace comparegen {

enum class SentenceStatistic { score, count };

// Per-bucket, per-system sentence statistics. For lengthdiff and score
// bucketers a sentence's bucket depends on the system output, so the same
// sentence may land in different buckets per system; length bucketing
// depends on the reference only. `scores` entries are empty for buckets
// with no member sentences.
struct SentenceBucketReport {
  SentenceBucketKind bucket_kind = SentenceBucketKind::length;
  SentenceStatistic statistic = SentenceStatistic::count;
  std::string score_name;  // set when statistic == score
  std::vector<std::string> bucket_labels;
  std::vector<std::vector<long long>> counts;                 // [system][bucket]
  std::vector<std::vector<std::optional<double>>> scores;     // [system][bucket]
};

struct SentenceExample {
  std::size_t sentence_index = 0;
  std::string ref_text;
  std::string text_a;
  std::string text_b;
  double score_a = 0.0;
  double score_b = 0.0;
  double difference = 0.0;  // score_a - score_b

  bool operator==(const SentenceExample&) const = default;
};

struct SentenceExampleReport {
  std::string score_name;
  std::vector<SentenceExample> favoring_a;
  std::vector<SentenceExample> favoring_b;
};

// statistic == score applies the scorer's corpus formula jointly to each
// bucket's member sentences (sufficient-statistic recombination), not a
// mean of sentence scores.
SentenceBucketReport sentence_bucket_report(
    const TokenCorpus& ref, const std::vector<const TokenCorpus*>& sys_list,
    const SentenceBucketer& bucketer, SentenceStatistic statistic,
    std::shared_ptr<const Scorer> scorer = nullptr);

// For exactly two systems: sentences ranked by the difference of their
// sentence scores, top k in each direction. Ties break toward earlier
// sentences, so the two orderings are exact mirror images under a system
// swap.
SentenceExampleReport sentence_example_report(const TokenCorpus& ref,
                                              const TokenCorpus& sys_a,
                                              const TokenCorpus& sys_b,
                                              const Scorer& scorer,
                                              std::size_t k = 10);

}  // namespace comparegen
