#include "comparegen/metrics.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace comparegen {

namespace {

// n-gram counts keyed by space-joined tokens; tokens never contain
// whitespace, so the join is unambiguous.
std::unordered_map<std::string, long long> ngram_counts(const Sentence& sent,
                                                        int n) {
  std::unordered_map<std::string, long long> counts;
  if ((int)sent.size() < n) return counts;
  for (std::size_t i = 0; i + n <= sent.size(); ++i) {
    std::string key = sent[i];
    for (int k = 1; k < n; ++k) {
      key += ' ';
      key += sent[i + k];
    }
    ++counts[key];
  }
  return counts;
}

// Clipped matches and system-side total for order n of one sentence pair.
std::pair<long long, long long> clipped_matches(const Sentence& ref,
                                                const Sentence& sys, int n) {
  long long total = (int)sys.size() >= n ? (long long)sys.size() - n + 1 : 0;
  if (total == 0) return {0, 0};
  auto ref_counts = ngram_counts(ref, n);
  long long matches = 0;
  for (const auto& [key, count] : ngram_counts(sys, n))
    if (auto it = ref_counts.find(key); it != ref_counts.end())
      matches += std::min(count, it->second);
  return {matches, total};
}

double brevity_penalty(double ref_len, double sys_len) {
  if (sys_len >= ref_len) return 1.0;
  return std::exp(1.0 - ref_len / sys_len);
}

}  // namespace

Score Scorer::corpus_score(const TokenCorpus& ref,
                           const TokenCorpus& sys) const {
  validate_parallel({&ref, &sys});
  SufficientStats total(stats_size());
  for (std::size_t i = 0; i < ref.size(); ++i)
    total += sentence_stats(ref[i], sys[i]);
  return Score{finalize(total), name()};
}

std::vector<SufficientStats> Scorer::per_sentence_stats(
    const TokenCorpus& ref, const TokenCorpus& sys) const {
  validate_parallel({&ref, &sys});
  std::vector<SufficientStats> all;
  all.reserve(ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i)
    all.push_back(sentence_stats(ref[i], sys[i]));
  return all;
}

// ---------------------------------------------------------------- BLEU

BleuScorer::BleuScorer(int max_n) : max_n_(max_n), name_("bleu") {
  if (max_n_ < 1) throw std::invalid_argument("BLEU max_n must be >= 1");
}

std::size_t BleuScorer::stats_size() const { return 2 * max_n_ + 2; }

// Layout: [matches 1..max_n][totals 1..max_n][sys_len][ref_len].
SufficientStats BleuScorer::sentence_stats(const Sentence& ref,
                                           const Sentence& sys) const {
  SufficientStats stats(stats_size());
  for (int n = 1; n <= max_n_; ++n) {
    auto [m, t] = clipped_matches(ref, sys, n);
    stats.v[n - 1] = (double)m;
    stats.v[max_n_ + n - 1] = (double)t;
  }
  stats.v[2 * max_n_] = (double)sys.size();
  stats.v[2 * max_n_ + 1] = (double)ref.size();
  return stats;
}

double BleuScorer::finalize(const SufficientStats& stats) const {
  double sys_len = stats.v[2 * max_n_];
  double ref_len = stats.v[2 * max_n_ + 1];
  if (sys_len <= 0) return ref_len <= 0 ? 100.0 : 0.0;
  double log_sum = 0.0;
  for (int n = 1; n <= max_n_; ++n) {
    double m = stats.v[n - 1];
    double t = stats.v[max_n_ + n - 1];
    if (m <= 0 || t <= 0) return 0.0;
    log_sum += std::log(m / t);
  }
  return 100.0 * brevity_penalty(ref_len, sys_len) *
         std::exp(log_sum / max_n_);
}

double BleuScorer::sentence_score(const Sentence& ref,
                                  const Sentence& sys) const {
  return sentence_bleu_smoothed(ref, sys);
}

double sentence_bleu_smoothed(const Sentence& ref, const Sentence& sys) {
  constexpr int kMaxN = 4;
  if (sys.empty()) return ref.empty() ? 100.0 : 0.0;
  double log_sum = 0.0;
  for (int n = 1; n <= kMaxN; ++n) {
    auto [m, t] = clipped_matches(ref, sys, n);
    // Add-one smoothing on higher orders only, so single-word matches
    // still gate the score while short sentences stay comparable.
    double p = n == 1 ? (double)m / (double)t
                      : (double)(m + 1) / (double)(t + 1);
    if (p <= 0) return 0.0;
    log_sum += std::log(p);
  }
  return 100.0 * brevity_penalty((double)ref.size(), (double)sys.size()) *
         std::exp(log_sum / kMaxN);
}

Score corpus_bleu(const TokenCorpus& ref, const TokenCorpus& sys, int max_n) {
  return BleuScorer(max_n).corpus_score(ref, sys);
}

// ---------------------------------------------------------------- chrF

namespace {

std::unordered_map<std::u32string, long long> char_ngram_counts(
    const std::u32string& chars, int n) {
  std::unordered_map<std::u32string, long long> counts;
  if ((int)chars.size() < n) return counts;
  for (std::size_t i = 0; i + n <= chars.size(); ++i)
    ++counts[chars.substr(i, n)];
  return counts;
}

std::u32string sentence_chars(const Sentence& sent) {
  std::string joined;
  for (const auto& tok : sent) joined += tok;
  return decode_utf8(joined);
}

}  // namespace

ChrfScorer::ChrfScorer(double beta, int max_n)
    : max_n_(max_n), beta_(beta), name_("chrf") {
  if (max_n_ < 1) throw std::invalid_argument("chrF max_n must be >= 1");
  if (beta_ <= 0) throw std::invalid_argument("chrF beta must be positive");
}

std::size_t ChrfScorer::stats_size() const { return 3 * max_n_; }

// Layout: [matches 1..max_n][sys totals 1..max_n][ref totals 1..max_n].
SufficientStats ChrfScorer::sentence_stats(const Sentence& ref,
                                           const Sentence& sys) const {
  SufficientStats stats(stats_size());
  std::u32string ref_chars = sentence_chars(ref);
  std::u32string sys_chars = sentence_chars(sys);
  for (int n = 1; n <= max_n_; ++n) {
    auto ref_counts = char_ngram_counts(ref_chars, n);
    long long matches = 0;
    for (const auto& [key, count] : char_ngram_counts(sys_chars, n))
      if (auto it = ref_counts.find(key); it != ref_counts.end())
        matches += std::min(count, it->second);
    long long sys_total =
        (int)sys_chars.size() >= n ? (long long)sys_chars.size() - n + 1 : 0;
    long long ref_total =
        (int)ref_chars.size() >= n ? (long long)ref_chars.size() - n + 1 : 0;
    stats.v[n - 1] = (double)matches;
    stats.v[max_n_ + n - 1] = (double)sys_total;
    stats.v[2 * max_n_ + n - 1] = (double)ref_total;
  }
  return stats;
}

double ChrfScorer::finalize(const SufficientStats& stats) const {
  double beta_sq = beta_ * beta_;
  double sum = 0.0;
  for (int n = 1; n <= max_n_; ++n) {
    double m = stats.v[n - 1];
    double s = stats.v[max_n_ + n - 1];
    double r = stats.v[2 * max_n_ + n - 1];
    double prec = s > 0 ? m / s : 0.0;
    double rec = r > 0 ? m / r : 0.0;
    double denom = beta_sq * prec + rec;
    if (denom > 0) sum += (1.0 + beta_sq) * prec * rec / denom;
  }
  return 100.0 * sum / max_n_;
}

double ChrfScorer::sentence_score(const Sentence& ref,
                                  const Sentence& sys) const {
  return finalize(sentence_stats(ref, sys));
}

Score chrf(const TokenCorpus& ref, const TokenCorpus& sys, double beta,
           int max_n) {
  return ChrfScorer(beta, max_n).corpus_score(ref, sys);
}

// ---------------------------------------------------------------- RIBES

namespace {

// Align each sys token to a reference position: directly when the token
// is unique in both sentences, otherwise by growing left/right word
// context until exactly one candidate survives on each side. Tokens that
// stay ambiguous are skipped. Returns aligned ref positions in sys order.
std::vector<int> ribes_alignment(const Sentence& ref, const Sentence& sys) {
  std::unordered_map<std::string, std::vector<int>> ref_pos, sys_pos;
  for (int i = 0; i < (int)ref.size(); ++i) ref_pos[ref[i]].push_back(i);
  for (int i = 0; i < (int)sys.size(); ++i) sys_pos[sys[i]].push_back(i);

  std::vector<int> aligned;
  int sys_len = (int)sys.size();
  int ref_len = (int)ref.size();
  for (int i = 0; i < sys_len; ++i) {
    auto it = ref_pos.find(sys[i]);
    if (it == ref_pos.end()) continue;
    const std::vector<int>& ref_match = it->second;
    const std::vector<int>& sys_match = sys_pos[sys[i]];
    if (ref_match.size() == 1 && sys_match.size() == 1) {
      aligned.push_back(ref_match[0]);
      continue;
    }
    std::vector<int> left_ref = ref_match, left_sys = sys_match;
    std::vector<int> right_ref = ref_match, right_sys = sys_match;
    for (int window = 1; window < std::max(i + 1, sys_len - i); ++window) {
      if (window <= i) {
        std::vector<int> new_ref, new_sys;
        for (int j : left_ref)
          if (window <= j && ref[j - window] == sys[i - window])
            new_ref.push_back(j);
        for (int j : left_sys)
          if (window <= j && sys[j - window] == sys[i - window])
            new_sys.push_back(j);
        if (new_ref.size() == 1 && new_sys.size() == 1) {
          aligned.push_back(new_ref[0]);
          break;
        }
        left_ref = std::move(new_ref);
        left_sys = std::move(new_sys);
      }
      if (i + window < sys_len) {
        std::vector<int> new_ref, new_sys;
        for (int j : right_ref)
          if (j + window < ref_len && ref[j + window] == sys[i + window])
            new_ref.push_back(j);
        for (int j : right_sys)
          if (j + window < sys_len && sys[j + window] == sys[i + window])
            new_sys.push_back(j);
        if (new_ref.size() == 1 && new_sys.size() == 1) {
          aligned.push_back(new_ref[0]);
          break;
        }
        right_ref = std::move(new_ref);
        right_sys = std::move(new_sys);
      }
    }
  }
  return aligned;
}

double ribes_sentence(const Sentence& ref, const Sentence& sys, double alpha,
                      double beta) {
  if (ref.empty()) return sys.empty() ? 1.0 : 0.0;
  if (sys.empty()) return 0.0;

  double bp = brevity_penalty((double)ref.size(), (double)sys.size());
  std::vector<int> aligned = ribes_alignment(ref, sys);
  int k = (int)aligned.size();

  double nkt, precision;
  if (k == 1 && ref.size() == 1) {
    nkt = 1.0;
    precision = 1.0 / (double)sys.size();
  } else if (k < 2) {
    return 0.0;
  } else {
    long long ascending = 0;
    for (int i = 0; i < k - 1; ++i)
      for (int j = i + 1; j < k; ++j)
        if (aligned[i] < aligned[j]) ++ascending;
    nkt = (double)ascending / (double)((long long)k * (k - 1) / 2);
    precision = (double)k / (double)sys.size();
  }
  return nkt * std::pow(precision, alpha) * std::pow(bp, beta);
}

}  // namespace

RibesScorer::RibesScorer(double alpha, double beta)
    : alpha_(alpha), beta_(beta), name_("ribes") {}

// Layout: [sum of sentence scores in 0..1][sentence count].
SufficientStats RibesScorer::sentence_stats(const Sentence& ref,
                                            const Sentence& sys) const {
  SufficientStats stats(2);
  stats.v[0] = ribes_sentence(ref, sys, alpha_, beta_);
  stats.v[1] = 1.0;
  return stats;
}

double RibesScorer::finalize(const SufficientStats& stats) const {
  if (stats.v[1] <= 0) return 0.0;
  return 100.0 * stats.v[0] / stats.v[1];
}

double RibesScorer::sentence_score(const Sentence& ref,
                                   const Sentence& sys) const {
  return 100.0 * ribes_sentence(ref, sys, alpha_, beta_);
}

Score ribes(const TokenCorpus& ref, const TokenCorpus& sys, double alpha,
            double beta) {
  return RibesScorer(alpha, beta).corpus_score(ref, sys);
}

// ---------------------------------------------------------------- length

SufficientStats LengthRatioScorer::sentence_stats(const Sentence& ref,
                                                  const Sentence& sys) const {
  SufficientStats stats(2);
  stats.v[0] = (double)sys.size();
  stats.v[1] = (double)ref.size();
  return stats;
}

double LengthRatioScorer::finalize(const SufficientStats& stats) const {
  double sys_len = stats.v[0];
  double ref_len = stats.v[1];
  if (ref_len <= 0) return sys_len <= 0 ? 100.0 : 0.0;
  return 100.0 * sys_len / ref_len;
}

double LengthRatioScorer::sentence_score(const Sentence& ref,
                                         const Sentence& sys) const {
  double denom = ref.empty() ? 1.0 : (double)ref.size();
  return 100.0 * (double)sys.size() / denom;
}

Score length_ratio(const TokenCorpus& ref, const TokenCorpus& sys) {
  if (ref.total_tokens() == 0)
    throw InputError("reference corpus has no tokens");
  return LengthRatioScorer().corpus_score(ref, sys);
}

// ---------------------------------------------------------------- factory

namespace {

// Same statistics as BLEU; sentence_score (already the smoothed sentence
// BLEU) is what callers of this name are after.
class SentBleuScorer final : public BleuScorer {
 public:
  SentBleuScorer() : name_("sentbleu") {}
  const std::string& name() const override { return name_; }

 private:
  std::string name_;
};

}  // namespace

std::shared_ptr<const Scorer> make_scorer(const std::string& score_type) {
  if (score_type == "bleu") return std::make_shared<BleuScorer>();
  if (score_type == "sentbleu") return std::make_shared<SentBleuScorer>();
  if (score_type == "chrf") return std::make_shared<ChrfScorer>();
  if (score_type == "ribes") return std::make_shared<RibesScorer>();
  if (score_type == "length") return std::make_shared<LengthRatioScorer>();
  throw InputError("unknown score_type: " + score_type);
}

Score score_corpus(const Scorer& scorer, const TokenCorpus& ref,
                   const TokenCorpus& sys) {
  return scorer.corpus_score(ref, sys);
}

}  // namespace comparegen
