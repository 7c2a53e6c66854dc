#include "comparegen/ngram_diff.h"

#include <algorithm>

namespace comparegen {

std::map<std::vector<std::string>, long long> clipped_ngram_matches(
    const Sentence& ref, const Sentence& sys, int n) {
  if (n < 1) throw InputError("n-gram order must be >= 1");
  auto count = [n](const Sentence& sent) {
    std::map<std::vector<std::string>, long long> counts;
    for (std::size_t i = 0; i + n <= sent.size(); ++i)
      ++counts[std::vector<std::string>(sent.begin() + i,
                                        sent.begin() + i + n)];
    return counts;
  };
  auto ref_counts = count(ref);
  std::map<std::vector<std::string>, long long> matches;
  for (const auto& [gram, c] : count(sys))
    if (auto it = ref_counts.find(gram); it != ref_counts.end())
      matches[gram] = std::min(c, it->second);
  return matches;
}

NgramDifferenceReport ngram_difference_report(const TokenCorpus& ref,
                                              const TokenCorpus& sys1,
                                              const TokenCorpus& sys2,
                                              int min_n, int max_n,
                                              double alpha, std::size_t k) {
  validate_parallel({&ref, &sys1, &sys2});
  if (alpha <= 0) throw InputError("alpha must be positive");
  if (min_n < 1 || min_n > max_n)
    throw InputError("need 1 <= min_ngram_length <= max_ngram_length");

  // Only matched n-grams ever enter the map, so m1 + m2 > 0 holds for
  // every record without an explicit filter.
  std::map<std::vector<std::string>, std::pair<long long, long long>> counts;
  for (int n = min_n; n <= max_n; ++n) {
    for (std::size_t i = 0; i < ref.size(); ++i) {
      for (const auto& [gram, c] : clipped_ngram_matches(ref[i], sys1[i], n))
        counts[gram].first += c;
      for (const auto& [gram, c] : clipped_ngram_matches(ref[i], sys2[i], n))
        counts[gram].second += c;
    }
  }

  std::vector<NgramRecord> records;
  records.reserve(counts.size());
  for (const auto& [gram, ms] : counts) {
    NgramRecord rec;
    rec.ngram = gram;
    rec.m1 = ms.first;
    rec.m2 = ms.second;
    rec.p = ((double)rec.m1 + alpha) /
            ((double)rec.m1 + (double)rec.m2 + 2.0 * alpha);
    records.push_back(std::move(rec));
  }

  // Cross-multiplied comparison keeps the ordering exact (integer counts
  // with alpha=1 stay below 2^53), so swapping the systems reverses it
  // exactly instead of up-to-rounding.
  auto p_greater = [alpha](const NgramRecord& a, const NgramRecord& b) {
    double sa = (double)a.m1 + (double)a.m2 + 2.0 * alpha;
    double sb = (double)b.m1 + (double)b.m2 + 2.0 * alpha;
    double lhs = ((double)a.m1 + alpha) * sb;
    double rhs = ((double)b.m1 + alpha) * sa;
    if (lhs != rhs) return lhs > rhs ? 1 : -1;
    return 0;
  };
  auto tie_break = [](const NgramRecord& a, const NgramRecord& b) {
    if (a.m1 + a.m2 != b.m1 + b.m2) return a.m1 + a.m2 > b.m1 + b.m2;
    return a.ngram < b.ngram;
  };

  NgramDifferenceReport report;
  report.alpha = alpha;
  report.min_n = min_n;
  report.max_n = max_n;
  k = std::min(k, records.size());

  std::vector<NgramRecord> by_p = records;
  std::sort(by_p.begin(), by_p.end(),
            [&](const NgramRecord& a, const NgramRecord& b) {
              int cmp = p_greater(a, b);
              return cmp != 0 ? cmp > 0 : tie_break(a, b);
            });
  report.favoring_a.assign(by_p.begin(), by_p.begin() + k);

  std::sort(by_p.begin(), by_p.end(),
            [&](const NgramRecord& a, const NgramRecord& b) {
              int cmp = p_greater(a, b);
              return cmp != 0 ? cmp < 0 : tie_break(a, b);
            });
  report.favoring_b.assign(by_p.begin(), by_p.begin() + k);
  return report;
}

}  // namespace comparegen
