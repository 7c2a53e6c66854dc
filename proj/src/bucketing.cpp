#include "comparegen/bucketing.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_set>

namespace comparegen {

namespace {

std::string num_label(double v) {
  if (v == std::floor(v) && std::abs(v) < 1e15) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%lld", (long long)v);
    return buf;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

void check_increasing(const std::vector<double>& cutoffs) {
  if (cutoffs.empty()) throw InputError("bucket cutoffs must be non-empty");
  for (std::size_t i = 1; i < cutoffs.size(); ++i)
    if (cutoffs[i] <= cutoffs[i - 1])
      throw InputError("bucket cutoffs must be strictly increasing");
}

}  // namespace

// ------------------------------------------------------------ word buckets

std::size_t WordBucketer::bucket_of_word(const std::string& word) const {
  if (kind_ != Kind::frequency)
    throw std::logic_error("bucket_of_word on a label bucketer");
  long long freq = 0;
  if (auto it = frequencies_.find(word); it != frequencies_.end())
    freq = it->second;
  return std::upper_bound(cutoffs_.begin(), cutoffs_.end(), freq) -
         cutoffs_.begin();
}

std::size_t WordBucketer::bucket_of_label(const std::string& label) const {
  if (kind_ != Kind::label)
    throw std::logic_error("bucket_of_label on a frequency bucketer");
  if (auto it = label_index_.find(label); it != label_index_.end())
    return it->second;
  if (has_other_) return labels_.size() - 1;
  throw InputError("label not seen when the bucketer was built: " + label);
}

WordBucketer build_frequency_bucketer(const TokenCorpus& train,
                                      const std::vector<long long>& cutoffs) {
  if (train.total_tokens() == 0)
    throw InputError("empty frequency training corpus");
  if (cutoffs.empty() || cutoffs.front() < 1)
    throw InputError("frequency cutoffs must start at 1 or higher");
  for (std::size_t i = 1; i < cutoffs.size(); ++i)
    if (cutoffs[i] <= cutoffs[i - 1])
      throw InputError("bucket cutoffs must be strictly increasing");

  WordBucketer b;
  b.kind_ = WordBucketer::Kind::frequency;
  b.cutoffs_ = cutoffs;
  for (const auto& sent : train.sentences)
    for (const auto& tok : sent) ++b.frequencies_[tok];

  // Interval [lo, hi) renders as a single integer when it holds one value,
  // as "lo-(hi-1)" otherwise; the top bucket is open-ended.
  std::vector<long long> bounds;
  bounds.push_back(0);
  bounds.insert(bounds.end(), cutoffs.begin(), cutoffs.end());
  for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
    long long lo = bounds[i], hi = bounds[i + 1];
    if (hi == lo + 1)
      b.labels_.push_back(std::to_string(lo));
    else
      b.labels_.push_back(std::to_string(lo) + "-" + std::to_string(hi - 1));
  }
  b.labels_.push_back("≥" + std::to_string(bounds.back()));
  return b;
}

WordBucketer build_label_bucketer(const std::vector<std::string>& label_set) {
  if (label_set.empty()) throw InputError("label_set must be non-empty");
  WordBucketer b;
  b.kind_ = WordBucketer::Kind::label;
  b.has_other_ = true;
  for (const auto& label : label_set) {
    if (!b.label_index_.emplace(label, b.labels_.size()).second)
      throw InputError("duplicate label in label_set: " + label);
    b.labels_.push_back(label);
  }
  b.labels_.push_back("other");
  return b;
}

WordBucketer build_label_bucketer(
    const std::vector<const LabelCorpus*>& corpora) {
  WordBucketer b;
  b.kind_ = WordBucketer::Kind::label;
  b.has_other_ = false;
  for (const LabelCorpus* corpus : corpora)
    for (const auto& sent : corpus->labels)
      for (const auto& label : sent)
        if (b.label_index_.emplace(label, b.labels_.size()).second)
          b.labels_.push_back(label);
  if (b.labels_.empty())
    throw InputError("no labels found to build label buckets from");
  return b;
}

// -------------------------------------------------------- sentence buckets

double SentenceBucketer::value_of(const Sentence& ref,
                                  const Sentence& sys) const {
  switch (kind_) {
    case SentenceBucketKind::length:
      return (double)ref.size();
    case SentenceBucketKind::lengthdiff:
      return (double)sys.size() - (double)ref.size();
    case SentenceBucketKind::score:
      return scorer_->sentence_score(ref, sys);
  }
  throw std::logic_error("unreachable bucket kind");
}

std::size_t SentenceBucketer::bucket_of_value(double v) const {
  return std::upper_bound(cutoffs_.begin(), cutoffs_.end(), v) -
         cutoffs_.begin();
}

std::size_t SentenceBucketer::assign(const Sentence& ref,
                                     const Sentence& sys) const {
  return bucket_of_value(value_of(ref, sys));
}

SentenceBucketer build_sentence_bucketer(SentenceBucketKind kind,
                                         const std::vector<double>& cutoffs,
                                         std::shared_ptr<const Scorer> scorer) {
  SentenceBucketer b;
  b.kind_ = kind;
  if (!cutoffs.empty()) {
    b.cutoffs_ = cutoffs;
  } else {
    switch (kind) {
      case SentenceBucketKind::length:
        b.cutoffs_ = kDefaultLengthCutoffs;
        break;
      case SentenceBucketKind::lengthdiff:
        b.cutoffs_ = kDefaultLengthDiffCutoffs;
        break;
      case SentenceBucketKind::score:
        b.cutoffs_ = kDefaultScoreCutoffs;
        break;
    }
  }
  check_increasing(b.cutoffs_);
  if (kind == SentenceBucketKind::score) {
    if (!scorer) throw InputError("score bucketing requires a scorer");
    b.scorer_ = std::move(scorer);
  }

  b.labels_.push_back("<" + num_label(b.cutoffs_.front()));
  for (std::size_t i = 0; i + 1 < b.cutoffs_.size(); ++i)
    b.labels_.push_back("[" + num_label(b.cutoffs_[i]) + "," +
                        num_label(b.cutoffs_[i + 1]) + ")");
  b.labels_.push_back("≥" + num_label(b.cutoffs_.back()));
  return b;
}

std::string sentence_bucket_kind_name(SentenceBucketKind kind) {
  switch (kind) {
    case SentenceBucketKind::length:
      return "length";
    case SentenceBucketKind::lengthdiff:
      return "lengthdiff";
    case SentenceBucketKind::score:
      return "score";
  }
  throw std::logic_error("unreachable bucket kind");
}

}  // namespace comparegen
