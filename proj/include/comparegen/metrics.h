#pragma once

#include <memory>
#include <string>
#include <vector>

#include "comparegen/corpus.h"

namespace comparegen {

// A metric score on a 0-100 scale (length ratio may exceed 100).
struct Score {
  double value = 0.0;
  std::string name;

  bool operator==(const Score&) const = default;
};

// Per-sentence additive statistics. Addition is the combine operation:
// associative, commutative, with the all-zeros vector as identity.
struct SufficientStats {
  std::vector<double> v;

  SufficientStats() = default;
  explicit SufficientStats(std::size_t n) : v(n, 0.0) {}

  SufficientStats& operator+=(const SufficientStats& o) {
    if (v.size() < o.v.size()) v.resize(o.v.size(), 0.0);
    for (std::size_t i = 0; i < o.v.size(); ++i) v[i] += o.v[i];
    return *this;
  }
  friend SufficientStats operator+(SufficientStats a,
                                   const SufficientStats& b) {
    a += b;
    return a;
  }
  bool operator==(const SufficientStats&) const = default;
};

// Uniform scorer contract: a corpus score is finalize() of the sum of
// per-sentence stats, so bootstrap resampling never revisits sentences.
// sentence_score() is a 0-100 value usable for ranking individual
// sentences (smoothed where the corpus formula would degenerate).
class Scorer {
 public:
  virtual ~Scorer() = default;

  virtual const std::string& name() const = 0;
  virtual std::size_t stats_size() const = 0;
  virtual SufficientStats sentence_stats(const Sentence& ref,
                                         const Sentence& sys) const = 0;
  virtual double finalize(const SufficientStats& stats) const = 0;
  virtual double sentence_score(const Sentence& ref,
                                const Sentence& sys) const = 0;

  Score corpus_score(const TokenCorpus& ref, const TokenCorpus& sys) const;
  std::vector<SufficientStats> per_sentence_stats(const TokenCorpus& ref,
                                                  const TokenCorpus& sys) const;
};

// Standard corpus BLEU: geometric mean of clipped n-gram precisions times
// the brevity penalty. No smoothing at corpus level; any zero precision
// gives 0. sentence_score() is add-one smoothed sentence BLEU.
class BleuScorer : public Scorer {
 public:
  explicit BleuScorer(int max_n = 4);
  const std::string& name() const override { return name_; }
  std::size_t stats_size() const override;
  SufficientStats sentence_stats(const Sentence& ref,
                                 const Sentence& sys) const override;
  double finalize(const SufficientStats& stats) const override;
  double sentence_score(const Sentence& ref,
                        const Sentence& sys) const override;

 private:
  int max_n_;
  std::string name_;
};

// chrF: character n-gram F-beta averaged arithmetically over n-gram
// orders; characters come from the sentence's tokens joined without
// separators (whitespace never participates).
class ChrfScorer : public Scorer {
 public:
  explicit ChrfScorer(double beta = 2.0, int max_n = 6);
  const std::string& name() const override { return name_; }
  std::size_t stats_size() const override;
  SufficientStats sentence_stats(const Sentence& ref,
                                 const Sentence& sys) const override;
  double finalize(const SufficientStats& stats) const override;
  double sentence_score(const Sentence& ref,
                        const Sentence& sys) const override;

 private:
  int max_n_;
  double beta_;
  std::string name_;
};

// RIBES: normalized Kendall's tau over aligned word positions, times
// unigram precision^alpha and brevity penalty^beta; corpus score is the
// mean over sentences.
class RibesScorer : public Scorer {
 public:
  explicit RibesScorer(double alpha = 0.25, double beta = 0.10);
  const std::string& name() const override { return name_; }
  std::size_t stats_size() const override { return 2; }
  SufficientStats sentence_stats(const Sentence& ref,
                                 const Sentence& sys) const override;
  double finalize(const SufficientStats& stats) const override;
  double sentence_score(const Sentence& ref,
                        const Sentence& sys) const override;

 private:
  double alpha_;
  double beta_;
  std::string name_;
};

// Output-to-reference token length ratio, x100.
class LengthRatioScorer : public Scorer {
 public:
  LengthRatioScorer() : name_("length") {}
  const std::string& name() const override { return name_; }
  std::size_t stats_size() const override { return 2; }
  SufficientStats sentence_stats(const Sentence& ref,
                                 const Sentence& sys) const override;
  double finalize(const SufficientStats& stats) const override;
  double sentence_score(const Sentence& ref,
                        const Sentence& sys) const override;

 private:
  std::string name_;
};

// score_type values: bleu, sentbleu (BLEU used for sentence-level
// ranking), chrf, ribes, length. Unknown names raise InputError.
std::shared_ptr<const Scorer> make_scorer(const std::string& score_type);

Score corpus_bleu(const TokenCorpus& ref, const TokenCorpus& sys,
                  int max_n = 4);
double sentence_bleu_smoothed(const Sentence& ref, const Sentence& sys);
Score chrf(const TokenCorpus& ref, const TokenCorpus& sys, double beta = 2.0,
           int max_n = 6);
Score ribes(const TokenCorpus& ref, const TokenCorpus& sys,
            double alpha = 0.25, double beta = 0.10);
Score length_ratio(const TokenCorpus& ref, const TokenCorpus& sys);
Score score_corpus(const Scorer& scorer, const TokenCorpus& ref,
                   const TokenCorpus& sys);

}  // namespace comparegen
