#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "comparegen/metrics.h"

namespace comparegen {

inline constexpr int kDefaultBootstrapSamples = 1000;
inline constexpr std::uint64_t kDefaultSeed = 12345;
inline constexpr double kDefaultConfidence = 0.95;
inline constexpr double kDefaultSignificanceThreshold = 0.05;

enum class Winner { A, B, none };

struct SignificanceResult {
  Score system_a_score;
  Score system_b_score;
  std::pair<double, double> ci_a{0.0, 0.0};
  std::pair<double, double> ci_b{0.0, 0.0};
  Winner winner = Winner::none;
  double p_value = 1.0;
  int num_samples = 0;
  std::uint64_t seed = 0;

  bool operator==(const SignificanceResult&) const = default;
};

// Stateless 64-bit mixer used to derive independent per-resample seeds.
std::uint64_t splitmix64(std::uint64_t x);

// Sentence indices (with replacement) for one resample. Each resample's
// stream depends only on (seed, resample), never on evaluation order, so
// parallel and serial runs agree bit for bit.
std::vector<std::size_t> resample_indices(std::size_t corpus_size,
                                          std::uint64_t seed,
                                          std::uint64_t resample);

// Empirical quantile with linear interpolation; input must be sorted.
double percentile(const std::vector<double>& sorted_values, double q);

// Finalized score of each resample, recombining precomputed per-sentence
// stats. Never re-evaluates sentence_stats.
std::vector<double> bootstrap_scores(
    const Scorer& scorer, const std::vector<SufficientStats>& stats,
    int n_samples, std::uint64_t seed);

// Central percentile interval from a set of resample scores.
std::pair<double, double> interval_from_scores(std::vector<double> scores,
                                               double confidence);

std::pair<double, double> bootstrap_interval(
    const Scorer& scorer, const TokenCorpus& ref, const TokenCorpus& sys,
    int n_samples = kDefaultBootstrapSamples, std::uint64_t seed = kDefaultSeed,
    double confidence = kDefaultConfidence);

// Paired bootstrap test: the same resample index streams are applied to
// both systems; the provisional winner is the system with the higher
// full-corpus score, and the p-value is the fraction of resamples where
// it fails to strictly outscore the other (ties count against it). The
// winner is reported only when p_value <= threshold.
SignificanceResult paired_bootstrap_test(
    const Scorer& scorer, const TokenCorpus& ref, const TokenCorpus& sys_a,
    const TokenCorpus& sys_b, int n_samples = kDefaultBootstrapSamples,
    std::uint64_t seed = kDefaultSeed,
    double threshold = kDefaultSignificanceThreshold,
    double confidence = kDefaultConfidence);

}  // namespace comparegen
