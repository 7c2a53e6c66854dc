#include "comparegen/word_accuracy.h"

#include <algorithm>
#include <unordered_map>

namespace comparegen {

namespace {

void derive_prf(AccuracyCounts& c) {
  c.precision = c.sys_count > 0 ? (double)c.matches / (double)c.sys_count : 0.0;
  c.recall = c.ref_count > 0 ? (double)c.matches / (double)c.ref_count : 0.0;
  c.f_measure = c.precision + c.recall > 0
                    ? 2.0 * c.precision * c.recall / (c.precision + c.recall)
                    : 0.0;
}

// Matching key of one token: the word itself for frequency buckets, the
// word and its label for label buckets. '\t' can never occur inside a
// token or label, so the join is unambiguous.
std::string token_key(const WordBucketer& bucketer, const std::string& word,
                      const std::string* label) {
  if (bucketer.kind() == WordBucketer::Kind::frequency) return word;
  return word + '\t' + *label;
}

std::size_t key_bucket(const WordBucketer& bucketer, const std::string& key) {
  if (bucketer.kind() == WordBucketer::Kind::frequency)
    return bucketer.bucket_of_word(key);
  return bucketer.bucket_of_label(key.substr(key.find('\t') + 1));
}

std::unordered_map<std::string, long long> sentence_key_counts(
    const WordBucketer& bucketer, const Sentence& sent,
    const std::vector<std::string>* labels) {
  std::unordered_map<std::string, long long> counts;
  for (std::size_t t = 0; t < sent.size(); ++t)
    ++counts[token_key(bucketer, sent[t],
                       labels ? &(*labels)[t] : nullptr)];
  return counts;
}

void require_labels(const WordBucketer& bucketer, const LabelCorpus* ref_labels,
                    const std::vector<const LabelCorpus*>& sys_labels,
                    std::size_t num_systems) {
  if (bucketer.kind() != WordBucketer::Kind::label) return;
  if (!ref_labels || sys_labels.size() != num_systems)
    throw InputError(
        "label bucketing requires label files for the reference and every "
        "system");
  for (const LabelCorpus* l : sys_labels)
    if (!l) throw InputError("missing system label corpus");
}

long long multiset_intersection(
    const std::unordered_map<std::string, long long>& a,
    const std::unordered_map<std::string, long long>& b) {
  long long total = 0;
  for (const auto& [key, count] : a)
    if (auto it = b.find(key); it != b.end())
      total += std::min(count, it->second);
  return total;
}

}  // namespace

std::vector<BucketAccuracy> word_accuracy_report(
    const TokenCorpus& ref, const std::vector<const TokenCorpus*>& sys_list,
    const WordBucketer& bucketer, const LabelCorpus* ref_labels,
    const std::vector<const LabelCorpus*>& sys_labels) {
  std::vector<const TokenCorpus*> all{&ref};
  all.insert(all.end(), sys_list.begin(), sys_list.end());
  validate_parallel(all);
  require_labels(bucketer, ref_labels, sys_labels, sys_list.size());

  std::vector<BucketAccuracy> report(bucketer.num_buckets());
  for (std::size_t b = 0; b < report.size(); ++b) {
    report[b].bucket_label = bucketer.bucket_labels()[b];
    report[b].systems.resize(sys_list.size());
  }

  for (std::size_t i = 0; i < ref.size(); ++i) {
    auto ref_counts = sentence_key_counts(
        bucketer, ref[i], ref_labels ? &ref_labels->labels[i] : nullptr);
    for (const auto& [key, count] : ref_counts) {
      std::size_t b = key_bucket(bucketer, key);
      for (auto& sys : report[b].systems) sys.ref_count += count;
    }
    for (std::size_t s = 0; s < sys_list.size(); ++s) {
      auto sys_counts = sentence_key_counts(
          bucketer, (*sys_list[s])[i],
          bucketer.kind() == WordBucketer::Kind::label
              ? &sys_labels[s]->labels[i]
              : nullptr);
      for (const auto& [key, count] : sys_counts) {
        std::size_t b = key_bucket(bucketer, key);
        auto& acc = report[b].systems[s];
        acc.sys_count += count;
        if (auto it = ref_counts.find(key); it != ref_counts.end())
          acc.matches += std::min(count, it->second);
      }
    }
  }

  for (auto& bucket : report)
    for (auto& sys : bucket.systems) derive_prf(sys);
  return report;
}

std::vector<BucketAccuracy> source_word_accuracy_report(
    const TokenCorpus& src, const TokenCorpus& ref,
    const std::vector<const TokenCorpus*>& sys_list,
    const AlignmentCorpus& ref_align,
    const std::vector<const AlignmentCorpus*>& sys_aligns,
    const WordBucketer& bucketer, const LabelCorpus* src_labels) {
  std::vector<const TokenCorpus*> all{&src, &ref};
  all.insert(all.end(), sys_list.begin(), sys_list.end());
  validate_parallel(all);
  if (sys_aligns.size() != sys_list.size())
    throw InputError("one alignment corpus required per system");
  if (ref_align.size() != src.size())
    throw InputError("reference alignment does not match the corpus");
  for (const AlignmentCorpus* a : sys_aligns)
    if (!a || a->size() != src.size())
      throw InputError("system alignment does not match the corpus");
  if (bucketer.kind() == WordBucketer::Kind::label && !src_labels)
    throw InputError("label bucketing requires a source label file");

  std::vector<BucketAccuracy> report(bucketer.num_buckets());
  for (std::size_t b = 0; b < report.size(); ++b) {
    report[b].bucket_label = bucketer.bucket_labels()[b];
    report[b].systems.resize(sys_list.size());
  }

  // Tokens of `target` aligned to each source position.
  auto aligned_tokens = [](const std::vector<AlignmentPair>& pairs,
                           const Sentence& source, const Sentence& target) {
    std::vector<std::unordered_map<std::string, long long>> by_src(
        source.size());
    for (const AlignmentPair& p : pairs) {
      if (p.src >= source.size() || p.tgt >= target.size())
        throw InputError("alignment index out of range");
      ++by_src[p.src][target[p.tgt]];
    }
    return by_src;
  };

  for (std::size_t i = 0; i < src.size(); ++i) {
    auto ref_by_src = aligned_tokens(ref_align[i], src[i], ref[i]);
    for (std::size_t s = 0; s < sys_list.size(); ++s) {
      auto sys_by_src =
          aligned_tokens((*sys_aligns[s])[i], src[i], (*sys_list[s])[i]);
      for (std::size_t t = 0; t < src[i].size(); ++t) {
        // Unaligned-in-reference source tokens say nothing about accuracy.
        if (ref_by_src[t].empty()) continue;
        std::size_t b =
            bucketer.kind() == WordBucketer::Kind::frequency
                ? bucketer.bucket_of_word(src[i][t])
                : bucketer.bucket_of_label(src_labels->labels[i][t]);
        auto& acc = report[b].systems[s];
        for (const auto& [tok, count] : ref_by_src[t]) {
          (void)tok;
          acc.ref_count += count;
        }
        for (const auto& [tok, count] : sys_by_src[t]) {
          (void)tok;
          acc.sys_count += count;
        }
        acc.matches += multiset_intersection(ref_by_src[t], sys_by_src[t]);
      }
    }
  }

  for (auto& bucket : report)
    for (auto& sys : bucket.systems) derive_prf(sys);
  return report;
}

std::vector<std::vector<LikelihoodBucketStat>> likelihood_report(
    const TokenCorpus& ref,
    const std::vector<const LikelihoodCorpus*>& likelihoods,
    const WordBucketer& bucketer, const LabelCorpus* ref_labels) {
  if (bucketer.kind() == WordBucketer::Kind::label && !ref_labels)
    throw InputError("label bucketing requires a reference label file");
  for (const LikelihoodCorpus* ll : likelihoods) {
    if (!ll || ll->values.size() != ref.size())
      throw InputError("likelihood file does not match the reference");
    for (std::size_t i = 0; i < ref.size(); ++i)
      if (ll->values[i].size() != ref[i].size())
        throw InputError("likelihood file does not match the reference");
  }

  std::vector<std::vector<LikelihoodBucketStat>> report(likelihoods.size());
  for (auto& per_system : report) {
    per_system.resize(bucketer.num_buckets());
    for (std::size_t b = 0; b < per_system.size(); ++b)
      per_system[b].bucket_label = bucketer.bucket_labels()[b];
  }

  std::vector<std::vector<double>> sums(
      likelihoods.size(), std::vector<double>(bucketer.num_buckets(), 0.0));
  for (std::size_t i = 0; i < ref.size(); ++i) {
    for (std::size_t t = 0; t < ref[i].size(); ++t) {
      std::size_t b = bucketer.kind() == WordBucketer::Kind::frequency
                          ? bucketer.bucket_of_word(ref[i][t])
                          : bucketer.bucket_of_label(ref_labels->labels[i][t]);
      for (std::size_t s = 0; s < likelihoods.size(); ++s) {
        sums[s][b] += likelihoods[s]->values[i][t];
        ++report[s][b].token_count;
      }
    }
  }
  for (std::size_t s = 0; s < report.size(); ++s)
    for (std::size_t b = 0; b < report[s].size(); ++b)
      if (report[s][b].token_count > 0)
        report[s][b].mean_log_likelihood =
            sums[s][b] / (double)report[s][b].token_count;
  return report;
}

BucketExampleReport bucket_example_sentences(
    const TokenCorpus& ref, const std::vector<const TokenCorpus*>& sys_list,
    const WordBucketer& bucketer, const std::string& bucket_label,
    std::size_t k, const LabelCorpus* ref_labels,
    const std::vector<const LabelCorpus*>& sys_labels) {
  if (sys_list.size() != 2)
    throw InputError("bucket examples need exactly two systems");
  std::vector<const TokenCorpus*> all{&ref};
  all.insert(all.end(), sys_list.begin(), sys_list.end());
  validate_parallel(all);
  require_labels(bucketer, ref_labels, sys_labels, sys_list.size());

  const auto& labels = bucketer.bucket_labels();
  auto pos = std::find(labels.begin(), labels.end(), bucket_label);
  if (pos == labels.end())
    throw InputError("unknown bucket label: " + bucket_label);
  std::size_t target = pos - labels.begin();

  std::vector<BucketSentenceExample> examples(ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) {
    examples[i].sentence_index = i;
    auto ref_counts = sentence_key_counts(
        bucketer, ref[i], ref_labels ? &ref_labels->labels[i] : nullptr);
    for (std::size_t s = 0; s < 2; ++s) {
      auto sys_counts = sentence_key_counts(
          bucketer, (*sys_list[s])[i],
          bucketer.kind() == WordBucketer::Kind::label
              ? &sys_labels[s]->labels[i]
              : nullptr);
      AccuracyCounts acc;
      for (const auto& [key, count] : ref_counts)
        if (key_bucket(bucketer, key) == target) acc.ref_count += count;
      for (const auto& [key, count] : sys_counts) {
        if (key_bucket(bucketer, key) != target) continue;
        acc.sys_count += count;
        if (auto it = ref_counts.find(key); it != ref_counts.end())
          acc.matches += std::min(count, it->second);
      }
      derive_prf(acc);
      (s == 0 ? examples[i].f_a : examples[i].f_b) = acc.f_measure;
    }
  }

  BucketExampleReport report;
  report.bucket_label = bucket_label;
  k = std::min(k, examples.size());

  auto take_top = [&](bool favor_a) {
    std::vector<BucketSentenceExample> ranked = examples;
    std::stable_sort(ranked.begin(), ranked.end(),
                     [&](const BucketSentenceExample& x,
                         const BucketSentenceExample& y) {
                       double dx = favor_a ? x.f_a - x.f_b : x.f_b - x.f_a;
                       double dy = favor_a ? y.f_a - y.f_b : y.f_b - y.f_a;
                       return dx > dy;
                     });
    ranked.resize(k);
    return ranked;
  };
  report.favoring_a = take_top(true);
  report.favoring_b = take_top(false);
  return report;
}

}  // namespace comparegen
