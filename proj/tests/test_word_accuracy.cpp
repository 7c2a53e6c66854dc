#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "comparegen/word_accuracy.h"

using namespace comparegen;

namespace {

TokenCorpus corpus_of(std::vector<Sentence> sents) {
  return TokenCorpus{std::move(sents)};
}

// Oracle for bucketed word accuracy, written as literally as possible:
// build explicit per-sentence multisets with std::map, intersect them by
// iterating, and accumulate per bucket. No clipping shortcuts shared with
// the implementation.
struct OracleCounts {
  long long matches = 0, sys = 0, ref = 0;
};

std::map<std::string, OracleCounts> oracle_accuracy(
    const std::vector<Sentence>& refs, const std::vector<Sentence>& syss,
    const WordBucketer& bucketer) {
  std::map<std::string, OracleCounts> per_bucket;
  for (const std::string& label : bucketer.bucket_labels())
    per_bucket[label];  // ensure all buckets exist
  for (std::size_t i = 0; i < refs.size(); ++i) {
    std::map<std::string, long long> ref_bag, sys_bag;
    for (const auto& w : refs[i]) ++ref_bag[w];
    for (const auto& w : syss[i]) ++sys_bag[w];
    for (const auto& [word, count] : ref_bag) {
      auto& c = per_bucket[bucketer.bucket_labels()[bucketer.bucket_of_word(
          word)]];
      c.ref += count;
      auto it = sys_bag.find(word);
      if (it != sys_bag.end()) c.matches += std::min(count, it->second);
    }
    for (const auto& [word, count] : sys_bag)
      per_bucket[bucketer.bucket_labels()[bucketer.bucket_of_word(word)]]
          .sys += count;
  }
  return per_bucket;
}

Sentence random_sentence(std::mt19937& rng, int max_len,
                         const std::vector<std::string>& vocab) {
  Sentence s;
  int len = (int)(rng() % (max_len + 1));
  for (int i = 0; i < len; ++i) s.push_back(vocab[rng() % vocab.size()]);
  return s;
}

}  // namespace

TEST_CASE("word accuracy matches an exhaustive multiset oracle") {
  std::vector<std::string> vocab{"a", "b", "c", "d"};
  TokenCorpus train = corpus_of({{"a"}, {"b", "b"}, {"c", "c", "c", "c", "c"}});
  WordBucketer bucketer = build_frequency_bucketer(train, {1, 2, 5});
  std::mt19937 rng(4242);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Sentence> refs, syss;
    int n = 1 + (int)(rng() % 5);
    for (int i = 0; i < n; ++i) {
      refs.push_back(random_sentence(rng, 8, vocab));
      syss.push_back(random_sentence(rng, 8, vocab));
    }
    TokenCorpus ref = corpus_of(refs), sys = corpus_of(syss);
    auto report = word_accuracy_report(ref, {&sys}, bucketer);
    auto expected = oracle_accuracy(refs, syss, bucketer);
    REQUIRE(report.size() == bucketer.num_buckets());
    for (const auto& bucket : report) {
      const OracleCounts& want = expected.at(bucket.bucket_label);
      const AccuracyCounts& got = bucket.systems[0];
      CHECK(got.matches == want.matches);
      CHECK(got.sys_count == want.sys);
      CHECK(got.ref_count == want.ref);
      double p = want.sys > 0 ? (double)want.matches / want.sys : 0.0;
      double r = want.ref > 0 ? (double)want.matches / want.ref : 0.0;
      double f = p + r > 0 ? 2 * p * r / (p + r) : 0.0;
      CHECK(got.precision == doctest::Approx(p).epsilon(1e-12));
      CHECK(got.recall == doctest::Approx(r).epsilon(1e-12));
      CHECK(got.f_measure == doctest::Approx(f).epsilon(1e-12));
    }
  }
}

TEST_CASE("bucket counts conserve corpus totals") {
  std::vector<std::string> vocab{"a", "b", "c", "d", "e", "f"};
  std::mt19937 rng(777);
  TokenCorpus train =
      corpus_of({{"a", "b", "b", "c", "c", "c", "d", "d", "d", "d"}});
  WordBucketer bucketer = build_frequency_bucketer(train);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Sentence> refs, syss;
    for (int i = 0; i < 10; ++i) {
      refs.push_back(random_sentence(rng, 12, vocab));
      syss.push_back(random_sentence(rng, 12, vocab));
    }
    TokenCorpus ref = corpus_of(refs), sys = corpus_of(syss);
    auto report = word_accuracy_report(ref, {&sys}, bucketer);
    long long sys_total = 0, ref_total = 0;
    for (const auto& bucket : report) {
      sys_total += bucket.systems[0].sys_count;
      ref_total += bucket.systems[0].ref_count;
    }
    CHECK(sys_total == (long long)sys.total_tokens());
    CHECK(ref_total == (long long)ref.total_tokens());
  }
}

TEST_CASE("system order only permutes report columns") {
  TokenCorpus ref = corpus_of({{"a", "b", "c"}, {"d", "a"}});
  TokenCorpus s1 = corpus_of({{"a", "b"}, {"d", "d"}});
  TokenCorpus s2 = corpus_of({{"c", "c", "b"}, {"a"}});
  WordBucketer bucketer = build_frequency_bucketer(ref);
  auto fwd = word_accuracy_report(ref, {&s1, &s2}, bucketer);
  auto rev = word_accuracy_report(ref, {&s2, &s1}, bucketer);
  REQUIRE(fwd.size() == rev.size());
  for (std::size_t b = 0; b < fwd.size(); ++b) {
    CHECK(fwd[b].bucket_label == rev[b].bucket_label);
    CHECK(fwd[b].systems[0] == rev[b].systems[1]);
    CHECK(fwd[b].systems[1] == rev[b].systems[0]);
  }
}

TEST_CASE("label buckets key on word and label jointly") {
  TokenCorpus ref = corpus_of({{"run", "fast"}});
  TokenCorpus sys = corpus_of({{"run", "run"}});
  LabelCorpus ref_labels = parse_label_corpus("V ADV\n", "rl", ref);
  // The system tagged its first "run" as V and the second as N.
  LabelCorpus sys_labels = parse_label_corpus("V N\n", "sl", sys);
  WordBucketer bucketer =
      build_label_bucketer(std::vector<std::string>{"V", "ADV", "N"});
  auto report =
      word_accuracy_report(ref, {&sys}, bucketer, &ref_labels, {&sys_labels});
  REQUIRE(report.size() == 4);  // V, ADV, N, other
  CHECK(report[0].systems[0].matches == 1);   // (run, V)
  CHECK(report[0].systems[0].sys_count == 1);
  CHECK(report[0].systems[0].ref_count == 1);
  CHECK(report[1].systems[0].matches == 0);   // (fast, ADV) missed
  CHECK(report[1].systems[0].ref_count == 1);
  CHECK(report[2].systems[0].sys_count == 1);  // spurious (run, N)
  CHECK(report[2].systems[0].matches == 0);
}

TEST_CASE("label bucketing requires label corpora") {
  TokenCorpus ref = corpus_of({{"a"}});
  TokenCorpus sys = corpus_of({{"a"}});
  WordBucketer bucketer = build_label_bucketer(std::vector<std::string>{"N"});
  CHECK_THROWS_AS(word_accuracy_report(ref, {&sys}, bucketer), InputError);
}

TEST_CASE("source word accuracy compares aligned multisets") {
  // src: x y ; ref: a b c with x->{a,b}, y->{c}
  TokenCorpus src = corpus_of({{"x", "y"}});
  TokenCorpus ref = corpus_of({{"a", "b", "c"}});
  TokenCorpus sys = corpus_of({{"a", "d", "c"}});
  AlignmentCorpus ref_align =
      parse_alignment_corpus("0-0 0-1 1-2\n", "ra", src, ref);
  // sys aligns x->{a,d}, y->{c}
  AlignmentCorpus sys_align =
      parse_alignment_corpus("0-0 0-1 1-2\n", "sa", src, sys);
  WordBucketer bucketer = build_frequency_bucketer(src, {1});
  auto report = source_word_accuracy_report(src, ref, {&sys}, ref_align,
                                            {&sys_align}, bucketer);
  // Both x and y occur once in src -> bucket "1".
  long long matches = 0, sys_count = 0, ref_count = 0;
  for (const auto& bucket : report) {
    matches += bucket.systems[0].matches;
    sys_count += bucket.systems[0].sys_count;
    ref_count += bucket.systems[0].ref_count;
  }
  CHECK(matches == 2);    // x: {a} of {a,b}; y: {c}
  CHECK(sys_count == 3);  // aligned system tokens
  CHECK(ref_count == 3);
}

TEST_CASE("source tokens without reference alignment are skipped entirely") {
  TokenCorpus src = corpus_of({{"x", "y"}});
  TokenCorpus ref = corpus_of({{"a"}});
  TokenCorpus sys = corpus_of({{"b", "c"}});
  // y has no reference alignment but does have a system alignment; the
  // spurious system tokens for y must not count anywhere.
  AlignmentCorpus ref_align = parse_alignment_corpus("0-0\n", "ra", src, ref);
  AlignmentCorpus sys_align =
      parse_alignment_corpus("0-0 1-1\n", "sa", src, sys);
  WordBucketer bucketer = build_frequency_bucketer(src, {1});
  auto report = source_word_accuracy_report(src, ref, {&sys}, ref_align,
                                            {&sys_align}, bucketer);
  long long sys_count = 0, ref_count = 0;
  for (const auto& bucket : report) {
    sys_count += bucket.systems[0].sys_count;
    ref_count += bucket.systems[0].ref_count;
  }
  CHECK(ref_count == 1);
  CHECK(sys_count == 1);  // only x's aligned token "b"
}

TEST_CASE("likelihood report averages natural logs per bucket") {
  TokenCorpus ref = corpus_of({{"a", "b"}, {"a"}});
  LikelihoodCorpus ll =
      parse_likelihood_corpus("-1.0 -3.0\n-2.0\n", "ll", ref);
  // a occurs twice in ref, b once; bucket by frequency in ref itself.
  WordBucketer bucketer = build_frequency_bucketer(ref, {1, 2});
  auto report = likelihood_report(ref, {&ll}, bucketer);
  REQUIRE(report.size() == 1);
  REQUIRE(report[0].size() == bucketer.num_buckets());
  // Bucket "1" holds b, bucket "≥2" holds both a occurrences.
  for (const auto& stat : report[0]) {
    if (stat.bucket_label == "1") {
      CHECK(stat.token_count == 1);
      CHECK(*stat.mean_log_likelihood == -3.0);
    } else if (stat.bucket_label == "≥2") {
      CHECK(stat.token_count == 2);
      CHECK(*stat.mean_log_likelihood == doctest::Approx(-1.5));
    } else {
      CHECK(stat.token_count == 0);
      CHECK(!stat.mean_log_likelihood.has_value());
    }
  }
}

TEST_CASE("bucket examples order and clamp") {
  // Sentence 0: sys1 perfect, sys2 misses. Sentence 1: tie.
  // Sentence 2: sys2 better.
  TokenCorpus ref = corpus_of({{"a", "a"}, {"a"}, {"a", "a", "a"}});
  TokenCorpus s1 = corpus_of({{"a", "a"}, {"a"}, {"b"}});
  TokenCorpus s2 = corpus_of({{"b", "b"}, {"a"}, {"a", "a", "a"}});
  // Train corpus where "a" occurs once -> bucket "≥1" holds every ref token.
  TokenCorpus train = corpus_of({{"a"}});
  WordBucketer bucketer = build_frequency_bucketer(train, {1});
  auto report =
      bucket_example_sentences(ref, {&s1, &s2}, bucketer, "≥1", 10);
  // All three sentences appear in both lists (no filtering), ordered by
  // F difference: favoring_a leads with sentence 0 (+1), then the tie
  // (sentence 1), then sentence 2 (-1); favoring_b is the reverse.
  REQUIRE(report.favoring_a.size() == 3);
  REQUIRE(report.favoring_b.size() == 3);
  CHECK(report.favoring_a[0].sentence_index == 0);
  CHECK(report.favoring_a[1].sentence_index == 1);
  CHECK(report.favoring_a[2].sentence_index == 2);
  CHECK(report.favoring_b[0].sentence_index == 2);
  CHECK(report.favoring_b[1].sentence_index == 1);
  CHECK(report.favoring_b[2].sentence_index == 0);
  CHECK(report.favoring_a[0].f_a == 1.0);
  CHECK(report.favoring_a[0].f_b == 0.0);
  // k clamps.
  auto clamped =
      bucket_example_sentences(ref, {&s1, &s2}, bucketer, "≥1", 2);
  CHECK(clamped.favoring_a.size() == 2);
  CHECK(clamped.favoring_a[0].sentence_index == 0);
}

TEST_CASE("bucket examples require exactly two systems") {
  TokenCorpus ref = corpus_of({{"a"}});
  TokenCorpus sys = corpus_of({{"a"}});
  WordBucketer bucketer = build_frequency_bucketer(ref);
  CHECK_THROWS_AS(
      bucket_example_sentences(ref, {&sys}, bucketer, "1", 3), InputError);
}
