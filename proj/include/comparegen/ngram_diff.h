#pragma once

#include <map>
#include <string>
#include <vector>

#include "comparegen/corpus.h"

namespace comparegen {

// An n-gram that one of two systems matches against the reference more
// often than the other: p = (m1 + alpha)/(m1 + m2 + 2*alpha), so p > 0.5
// characterizes system 1 and p < 0.5 system 2.
struct NgramRecord {
  std::vector<std::string> ngram;
  long long m1 = 0;
  long long m2 = 0;
  double p = 0.5;

  bool operator==(const NgramRecord&) const = default;
};

struct NgramDifferenceReport {
  double alpha = 1.0;
  int min_n = 1;
  int max_n = 4;
  std::vector<NgramRecord> favoring_a;  // largest p first
  std::vector<NgramRecord> favoring_b;  // smallest p first
};

// Clipped per-sentence matches: each distinct n-gram counts
// min(occurrences in sys, occurrences in ref).
std::map<std::vector<std::string>, long long> clipped_ngram_matches(
    const Sentence& ref, const Sentence& sys, int n);

// Top-k n-grams characteristic of each system. Matches are accumulated
// over the corpus for every order in [min_n, max_n]; n-grams neither
// system ever matches are excluded. Ties in p break toward more total
// evidence (m1 + m2), then lexicographically.
NgramDifferenceReport ngram_difference_report(
    const TokenCorpus& ref, const TokenCorpus& sys1, const TokenCorpus& sys2,
    int min_n = 1, int max_n = 4, double alpha = 1.0, std::size_t k = 10);

}  // namespace comparegen
