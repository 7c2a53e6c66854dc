#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "comparegen/metrics.h"

using namespace comparegen;

namespace {

// Brute-force corpus BLEU used as an oracle: n-grams are compared
// positionally with std::equal, never hashed or keyed, so it shares no
// machinery with the production scorer.
double oracle_corpus_bleu(const std::vector<Sentence>& refs,
                          const std::vector<Sentence>& syss, int max_n = 4) {
  long long ref_len = 0, sys_len = 0;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    ref_len += (long long)refs[i].size();
    sys_len += (long long)syss[i].size();
  }
  if (sys_len <= 0) return ref_len <= 0 ? 100.0 : 0.0;
  double log_sum = 0.0;
  for (int n = 1; n <= max_n; ++n) {
    long long matches = 0, total = 0;
    for (std::size_t i = 0; i < refs.size(); ++i) {
      const Sentence& ref = refs[i];
      const Sentence& sys = syss[i];
      if ((int)sys.size() < n) continue;
      total += (long long)sys.size() - n + 1;
      std::vector<bool> counted(sys.size(), false);
      for (std::size_t p = 0; p + n <= sys.size(); ++p) {
        if (counted[p]) continue;
        long long in_sys = 0, in_ref = 0;
        for (std::size_t q = 0; q + n <= sys.size(); ++q) {
          if (std::equal(sys.begin() + p, sys.begin() + p + n,
                         sys.begin() + q)) {
            ++in_sys;
            counted[q] = true;
          }
        }
        for (std::size_t q = 0; q + n <= ref.size(); ++q)
          if (std::equal(sys.begin() + p, sys.begin() + p + n,
                         ref.begin() + q))
            ++in_ref;
        matches += std::min(in_sys, in_ref);
      }
    }
    if (matches <= 0 || total <= 0) return 0.0;
    log_sum += std::log((double)matches / (double)total);
  }
  double bp = sys_len >= ref_len
                  ? 1.0
                  : std::exp(1.0 - (double)ref_len / (double)sys_len);
  return 100.0 * bp * std::exp(log_sum / max_n);
}

Sentence random_sentence(std::mt19937& rng, int max_len,
                         const std::vector<std::string>& vocab) {
  std::uniform_int_distribution<int> len_dist(0, max_len);
  std::uniform_int_distribution<std::size_t> word_dist(0, vocab.size() - 1);
  Sentence s;
  int len = len_dist(rng);
  for (int i = 0; i < len; ++i) s.push_back(vocab[word_dist(rng)]);
  return s;
}

SufficientStats stats_of(std::vector<double> v) {
  SufficientStats s;
  s.v = std::move(v);
  return s;
}

TokenCorpus corpus_of(std::vector<Sentence> sents) {
  return TokenCorpus{std::move(sents)};
}

}  // namespace

TEST_CASE("corpus BLEU matches a hand-computed value") {
  TokenCorpus ref = corpus_of({{"the", "cat", "sat", "on", "the", "mat"}});
  TokenCorpus sys = corpus_of({{"the", "cat", "sat", "on", "mat"}});
  CHECK(corpus_bleu(ref, sys).value ==
        doctest::Approx(57.89300674674098).epsilon(1e-12));
}

TEST_CASE("corpus BLEU agrees with a brute-force oracle on random pairs") {
  std::mt19937 rng(321);
  std::vector<std::string> vocab{"a", "b", "c", "d", "e", "f", "g", "h"};
  std::uniform_int_distribution<int> n_sents(1, 8);
  BleuScorer scorer;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Sentence> refs, syss;
    int n = n_sents(rng);
    for (int i = 0; i < n; ++i) {
      refs.push_back(random_sentence(rng, 12, vocab));
      // Mix a copy of the reference in sometimes so high-order n-grams match.
      if (trial % 3 == 0 && i % 2 == 0)
        syss.push_back(refs.back());
      else
        syss.push_back(random_sentence(rng, 12, vocab));
    }
    double expected = oracle_corpus_bleu(refs, syss);
    double actual = scorer.corpus_score(corpus_of(refs), corpus_of(syss)).value;
    CHECK(std::fabs(actual - expected) < 1e-9);
  }
}

TEST_CASE("corpus BLEU edge conventions") {
  BleuScorer scorer;
  // Empty system output against a non-empty reference.
  CHECK(scorer.corpus_score(corpus_of({{"a"}}), corpus_of({{}})).value == 0.0);
  // Both sides empty.
  CHECK(scorer.corpus_score(corpus_of({{}}), corpus_of({{}})).value == 100.0);
  // No 4-gram match anywhere -> 0 (no smoothing at corpus level).
  CHECK(scorer
            .corpus_score(corpus_of({{"a", "b", "c", "d"}}),
                          corpus_of({{"a", "b", "c", "x"}}))
            .value == 0.0);
}

TEST_CASE("BLEU sufficient statistics decompose additively") {
  std::mt19937 rng(99);
  std::vector<std::string> vocab{"a", "b", "c", "d"};
  BleuScorer scorer;
  std::vector<Sentence> refs, syss;
  for (int i = 0; i < 40; ++i) {
    refs.push_back(random_sentence(rng, 10, vocab));
    syss.push_back(random_sentence(rng, 10, vocab));
  }
  TokenCorpus ref = corpus_of(refs), sys = corpus_of(syss);
  auto per_sent = scorer.per_sentence_stats(ref, sys);
  SufficientStats sum(scorer.stats_size());
  for (const auto& st : per_sent) sum += st;
  CHECK(scorer.finalize(sum) == scorer.corpus_score(ref, sys).value);
}

TEST_CASE("smoothed sentence BLEU") {
  // add-one smoothing applies to n >= 2 only; unigram precision is exact.
  CHECK(sentence_bleu_smoothed({"a", "b", "c"}, {"a", "b"}) ==
        doctest::Approx(60.65306597126334).epsilon(1e-12));
  CHECK(sentence_bleu_smoothed({"a"}, {}) == 0.0);
  CHECK(sentence_bleu_smoothed({}, {}) == 100.0);
  CHECK(sentence_bleu_smoothed({"x", "y"}, {"a", "b"}) == 0.0);  // p1 = 0
  CHECK(sentence_bleu_smoothed({"a", "b"}, {"a", "b"}) == 100.0);
}

TEST_CASE("sentbleu scorer aggregates like corpus BLEU but scores per sentence") {
  auto scorer = make_scorer("sentbleu");
  CHECK(scorer->name() == "sentbleu");
  CHECK(scorer->sentence_score({"a", "b", "c"}, {"a", "b"}) ==
        doctest::Approx(60.65306597126334));
  TokenCorpus ref = corpus_of({{"the", "cat", "sat", "on", "the", "mat"}});
  TokenCorpus sys = corpus_of({{"the", "cat", "sat", "on", "mat"}});
  CHECK(scorer->corpus_score(ref, sys).value == corpus_bleu(ref, sys).value);
}

TEST_CASE("chrF matches hand-computed values") {
  // "ab" vs "ba": unigram F = 1, all higher orders miss -> mean = 1/6.
  CHECK(chrf(corpus_of({{"ab"}}), corpus_of({{"ba"}})).value ==
        doctest::Approx(100.0 / 6).epsilon(1e-12));
  // Tokens are joined with no separator before character n-grams: both
  // sides become "abcd", so n = 1..4 match perfectly and n = 5..6 have no
  // n-grams at all and contribute 0 to the mean over the 6 orders.
  CHECK(chrf(corpus_of({{"ab", "cd"}}), corpus_of({{"abcd"}})).value ==
        doctest::Approx(400.0 / 6).epsilon(1e-12));
  CHECK(chrf(corpus_of({{"a"}}), corpus_of({{}})).value == 0.0);
  CHECK(chrf(corpus_of({{}}), corpus_of({{}})).value == 0.0);  // all denominators 0
}

TEST_CASE("chrF operates on code points, not bytes") {
  // é is 2 bytes; as a code point the pair of one-char tokens must match.
  CHECK(chrf(corpus_of({{"é"}}), corpus_of({{"é"}})).value ==
        doctest::Approx(100.0 / 6).epsilon(1e-12));
}

TEST_CASE("RIBES matches hand-computed values") {
  // Full inversion of two tokens: no ascending pair -> 0.
  CHECK(ribes(corpus_of({{"a", "b"}}), corpus_of({{"b", "a"}})).value == 0.0);
  // One transposition in three tokens: 2 of 3 pairs ascending.
  CHECK(ribes(corpus_of({{"a", "b", "c"}}), corpus_of({{"a", "c", "b"}})).value ==
        doctest::Approx(200.0 / 3).epsilon(1e-12));
  // Single-token sentences align trivially.
  CHECK(ribes(corpus_of({{"a"}}), corpus_of({{"a"}})).value == 100.0);
  CHECK(ribes(corpus_of({{"a"}}), corpus_of({{"b"}})).value == 0.0);
  // Empty conventions.
  CHECK(ribes(corpus_of({{}}), corpus_of({{}})).value == 100.0);
  CHECK(ribes(corpus_of({{"a"}}), corpus_of({{}})).value == 0.0);
  CHECK(ribes(corpus_of({{}}), corpus_of({{"a"}})).value == 0.0);
}

TEST_CASE("RIBES resolves repeated tokens through context") {
  // "a" is ambiguous; its left/right neighbours disambiguate both copies,
  // including at the edges of the sentence.
  TokenCorpus ref = corpus_of({{"a", "b", "a"}});
  CHECK(ribes(ref, ref).value == 100.0);
  TokenCorpus ref2 = corpus_of({{"a", "a", "b"}});
  CHECK(ribes(ref2, ref2).value == 100.0);
}

TEST_CASE("RIBES is 100 on identical corpora with distinct tokens") {
  std::mt19937 rng(7);
  std::vector<std::string> vocab;
  for (int i = 0; i < 40; ++i) vocab.push_back("w" + std::to_string(i));
  std::vector<Sentence> sents;
  for (int i = 0; i < 30; ++i) {
    std::shuffle(vocab.begin(), vocab.end(), rng);
    sents.emplace_back(vocab.begin(), vocab.begin() + 4 + (i % 10));
  }
  TokenCorpus c = corpus_of(sents);
  CHECK(ribes(c, c).value == 100.0);
}

TEST_CASE("RIBES averages per-sentence scores") {
  TokenCorpus ref = corpus_of({{"a", "b"}, {"a", "b"}});
  TokenCorpus sys = corpus_of({{"a", "b"}, {"b", "a"}});
  CHECK(ribes(ref, sys).value == doctest::Approx(50.0).epsilon(1e-12));
}

TEST_CASE("length ratio") {
  CHECK(length_ratio(corpus_of({{"a", "b"}}), corpus_of({{"a"}})).value == 50.0);
  CHECK(length_ratio(corpus_of({{"a"}}), corpus_of({{"a", "b"}})).value == 200.0);
  CHECK_THROWS_AS(length_ratio(corpus_of({{}}), corpus_of({{"a"}})).value,
                  InputError);
  LengthRatioScorer scorer;
  CHECK(scorer.finalize(stats_of({0.0, 0.0})) == 100.0);
  CHECK(scorer.finalize(stats_of({3.0, 0.0})) == 0.0);
}

TEST_CASE("every scorer reports 100 on identical corpora") {
  std::mt19937 rng(11);
  std::vector<std::string> vocab;
  for (int i = 0; i < 60; ++i) vocab.push_back("tok" + std::to_string(i));
  std::vector<Sentence> sents;
  for (int i = 0; i < 25; ++i) {
    std::shuffle(vocab.begin(), vocab.end(), rng);
    sents.emplace_back(vocab.begin(), vocab.begin() + 5 + (i % 8));
  }
  TokenCorpus c = corpus_of(sents);
  for (const char* name : {"bleu", "sentbleu", "chrf", "ribes", "length"}) {
    auto scorer = make_scorer(name);
    CHECK(scorer->corpus_score(c, c).value == 100.0);
  }
}

TEST_CASE("scores never exceed 100 or drop below 0 on random data") {
  std::mt19937 rng(2024);
  std::vector<std::string> vocab{"a", "b", "c", "d", "e"};
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Sentence> refs, syss;
    for (int i = 0; i < 6; ++i) {
      refs.push_back(random_sentence(rng, 9, vocab));
      syss.push_back(random_sentence(rng, 9, vocab));
    }
    // Length ratio is a diagnostic, not a bounded score; skip it here.
    for (const char* name : {"bleu", "sentbleu", "chrf", "ribes"}) {
      auto scorer = make_scorer(name);
      double v = scorer->corpus_score(corpus_of(refs), corpus_of(syss)).value;
      CHECK(v >= 0.0);
      CHECK(v <= 100.0);
    }
  }
}

TEST_CASE("sufficient stats resize on +=") {
  SufficientStats a;
  SufficientStats b = stats_of({1.0, 2.0});
  a += b;
  CHECK(a == b);
  SufficientStats c = stats_of({1.0});
  c += b;
  CHECK(c == stats_of({2.0, 2.0}));
}

TEST_CASE("make_scorer rejects unknown score types") {
  CHECK_THROWS_AS(make_scorer("wer"), InputError);
  CHECK(make_scorer("bleu")->stats_size() == 10);
  CHECK(make_scorer("chrf")->stats_size() == 18);
  CHECK(make_scorer("ribes")->stats_size() == 2);
  CHECK(make_scorer("length")->stats_size() == 2);
}
