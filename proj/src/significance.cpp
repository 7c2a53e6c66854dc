#include "comparegen/significance.h"

#include <algorithm>
#include <cmath>
#include <random>

namespace comparegen {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<std::size_t> resample_indices(std::size_t corpus_size,
                                          std::uint64_t seed,
                                          std::uint64_t resample) {
  // mt19937_64's output sequence is fixed by the standard, and the modulo
  // keeps index draws platform-independent (unlike uniform_int_distribution).
  std::mt19937_64 engine(splitmix64(splitmix64(seed) + resample));
  std::vector<std::size_t> indices(corpus_size);
  for (auto& idx : indices) idx = engine() % corpus_size;
  return indices;
}

double percentile(const std::vector<double>& sorted_values, double q) {
  if (sorted_values.empty())
    throw std::invalid_argument("percentile of empty sample");
  if (q <= 0.0) return sorted_values.front();
  if (q >= 1.0) return sorted_values.back();
  double h = q * (double)(sorted_values.size() - 1);
  std::size_t lo = (std::size_t)h;
  double frac = h - (double)lo;
  if (frac == 0.0 || lo + 1 >= sorted_values.size()) return sorted_values[lo];
  return sorted_values[lo] + frac * (sorted_values[lo + 1] - sorted_values[lo]);
}

std::vector<double> bootstrap_scores(
    const Scorer& scorer, const std::vector<SufficientStats>& stats,
    int n_samples, std::uint64_t seed) {
  if (stats.empty()) throw InputError("bootstrap requires a non-empty corpus");
  if (n_samples < 1) throw InputError("bootstrap sample count must be >= 1");
  std::vector<double> scores;
  scores.reserve(n_samples);
  for (int r = 0; r < n_samples; ++r) {
    SufficientStats total(scorer.stats_size());
    for (std::size_t idx : resample_indices(stats.size(), seed, r))
      total += stats[idx];
    scores.push_back(scorer.finalize(total));
  }
  return scores;
}

std::pair<double, double> interval_from_scores(std::vector<double> scores,
                                               double confidence) {
  if (confidence <= 0.0 || confidence >= 1.0)
    throw InputError("confidence must be in (0, 1)");
  std::sort(scores.begin(), scores.end());
  double tail = (1.0 - confidence) / 2.0;
  return {percentile(scores, tail), percentile(scores, 1.0 - tail)};
}

std::pair<double, double> bootstrap_interval(
    const Scorer& scorer, const TokenCorpus& ref, const TokenCorpus& sys,
    int n_samples, std::uint64_t seed, double confidence) {
  auto stats = scorer.per_sentence_stats(ref, sys);
  return interval_from_scores(bootstrap_scores(scorer, stats, n_samples, seed),
                              confidence);
}

SignificanceResult paired_bootstrap_test(
    const Scorer& scorer, const TokenCorpus& ref, const TokenCorpus& sys_a,
    const TokenCorpus& sys_b, int n_samples, std::uint64_t seed,
    double threshold, double confidence) {
  validate_parallel({&ref, &sys_a, &sys_b});
  if (ref.size() == 0) throw InputError("bootstrap requires a non-empty corpus");
  auto stats_a = scorer.per_sentence_stats(ref, sys_a);
  auto stats_b = scorer.per_sentence_stats(ref, sys_b);

  SignificanceResult result;
  result.num_samples = n_samples;
  result.seed = seed;

  SufficientStats total_a(scorer.stats_size()), total_b(scorer.stats_size());
  for (const auto& s : stats_a) total_a += s;
  for (const auto& s : stats_b) total_b += s;
  result.system_a_score = Score{scorer.finalize(total_a), scorer.name()};
  result.system_b_score = Score{scorer.finalize(total_b), scorer.name()};

  // Same index streams for both systems: pairing is what gives the test
  // its power, so the resamples must not be drawn independently.
  std::vector<double> scores_a = bootstrap_scores(scorer, stats_a, n_samples, seed);
  std::vector<double> scores_b = bootstrap_scores(scorer, stats_b, n_samples, seed);

  bool a_provisional = result.system_a_score.value >= result.system_b_score.value;
  int losses = 0;
  for (int r = 0; r < n_samples; ++r) {
    double lead = a_provisional ? scores_a[r] - scores_b[r]
                                : scores_b[r] - scores_a[r];
    if (lead <= 0.0) ++losses;
  }
  result.p_value = (double)losses / (double)n_samples;
  if (result.p_value <= threshold)
    result.winner = a_provisional ? Winner::A : Winner::B;

  result.ci_a = interval_from_scores(scores_a, confidence);
  result.ci_b = interval_from_scores(scores_b, confidence);
  return result;
}

}  // namespace comparegen
