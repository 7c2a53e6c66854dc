#include "comparegen/sentence_analysis.h"

#include <algorithm>

namespace comparegen {

SentenceBucketReport sentence_bucket_report(
    const TokenCorpus& ref, const std::vector<const TokenCorpus*>& sys_list,
    const SentenceBucketer& bucketer, SentenceStatistic statistic,
    std::shared_ptr<const Scorer> scorer) {
  std::vector<const TokenCorpus*> all{&ref};
  all.insert(all.end(), sys_list.begin(), sys_list.end());
  validate_parallel(all);
  if (statistic == SentenceStatistic::score && !scorer)
    throw InputError("statistic=score requires a scorer");

  SentenceBucketReport report;
  report.bucket_kind = bucketer.kind();
  report.statistic = statistic;
  report.bucket_labels = bucketer.bucket_labels();
  if (scorer) report.score_name = scorer->name();

  std::size_t num_buckets = bucketer.num_buckets();
  report.counts.assign(sys_list.size(),
                       std::vector<long long>(num_buckets, 0));
  std::vector<std::vector<SufficientStats>> stats;
  if (statistic == SentenceStatistic::score)
    stats.assign(sys_list.size(),
                 std::vector<SufficientStats>(
                     num_buckets, SufficientStats(scorer->stats_size())));

  for (std::size_t s = 0; s < sys_list.size(); ++s) {
    const TokenCorpus& sys = *sys_list[s];
    for (std::size_t i = 0; i < ref.size(); ++i) {
      std::size_t b = bucketer.assign(ref[i], sys[i]);
      ++report.counts[s][b];
      if (statistic == SentenceStatistic::score)
        stats[s][b] += scorer->sentence_stats(ref[i], sys[i]);
    }
  }

  if (statistic == SentenceStatistic::score) {
    report.scores.assign(sys_list.size(),
                         std::vector<std::optional<double>>(num_buckets));
    for (std::size_t s = 0; s < sys_list.size(); ++s)
      for (std::size_t b = 0; b < num_buckets; ++b)
        if (report.counts[s][b] > 0)
          report.scores[s][b] = scorer->finalize(stats[s][b]);
  }
  return report;
}

SentenceExampleReport sentence_example_report(const TokenCorpus& ref,
                                              const TokenCorpus& sys_a,
                                              const TokenCorpus& sys_b,
                                              const Scorer& scorer,
                                              std::size_t k) {
  validate_parallel({&ref, &sys_a, &sys_b});

  std::vector<SentenceExample> examples(ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) {
    SentenceExample& ex = examples[i];
    ex.sentence_index = i;
    ex.ref_text = join_tokens(ref[i]);
    ex.text_a = join_tokens(sys_a[i]);
    ex.text_b = join_tokens(sys_b[i]);
    ex.score_a = scorer.sentence_score(ref[i], sys_a[i]);
    ex.score_b = scorer.sentence_score(ref[i], sys_b[i]);
    ex.difference = ex.score_a - ex.score_b;
  }

  SentenceExampleReport report;
  report.score_name = scorer.name();
  k = std::min(k, examples.size());

  std::vector<SentenceExample> ranked = examples;
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const SentenceExample& x, const SentenceExample& y) {
                     return x.difference > y.difference;
                   });
  report.favoring_a.assign(ranked.begin(), ranked.begin() + k);

  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const SentenceExample& x, const SentenceExample& y) {
                     return x.difference < y.difference;
                   });
  report.favoring_b.assign(ranked.begin(), ranked.begin() + k);
  return report;
}

}  // namespace comparegen
