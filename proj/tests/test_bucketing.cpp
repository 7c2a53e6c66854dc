#include <doctest.h>

#include <random>

#include "comparegen/bucketing.h"

using namespace comparegen;

namespace {

TokenCorpus corpus_of(std::vector<Sentence> sents) {
  return TokenCorpus{std::move(sents)};
}

}  // namespace

TEST_CASE("default frequency buckets carry the documented labels") {
  TokenCorpus train = corpus_of({{"a"}});
  WordBucketer b = build_frequency_bucketer(train);
  CHECK(b.bucket_labels() ==
        std::vector<std::string>{"0", "1", "2", "3-4", "5-9", "10-99",
                                 "100-999", "≥1000"});
}

TEST_CASE("frequency bucket assignment counts the training corpus") {
  // a: 1, b: 2, c: 5, d: 12 occurrences.
  std::vector<Sentence> sents{{"a", "b", "c", "d", "d", "d", "d"},
                              {"b", "c", "c", "c", "c", "d", "d"},
                              {"d", "d", "d", "d", "d", "d"}};
  WordBucketer b = build_frequency_bucketer(corpus_of(sents));
  CHECK(b.kind() == WordBucketer::Kind::frequency);
  CHECK(b.bucket_labels()[b.bucket_of_word("unseen")] == "0");
  CHECK(b.bucket_labels()[b.bucket_of_word("a")] == "1");
  CHECK(b.bucket_labels()[b.bucket_of_word("b")] == "2");
  CHECK(b.bucket_labels()[b.bucket_of_word("c")] == "5-9");
  CHECK(b.bucket_labels()[b.bucket_of_word("d")] == "10-99");
}

TEST_CASE("custom frequency cutoffs label single-value and open intervals") {
  TokenCorpus train = corpus_of({{"x", "x", "x", "y"}});
  WordBucketer b = build_frequency_bucketer(train, {1, 2, 3, 10});
  CHECK(b.bucket_labels() ==
        std::vector<std::string>{"0", "1", "2", "3-9", "≥10"});
  CHECK(b.bucket_labels()[b.bucket_of_word("x")] == "3-9");
  CHECK(b.bucket_labels()[b.bucket_of_word("y")] == "1");
}

TEST_CASE("frequency cutoffs must start at >= 1 and increase strictly") {
  TokenCorpus train = corpus_of({{"a"}});
  CHECK_THROWS_AS(build_frequency_bucketer(train, {0, 1}), InputError);
  CHECK_THROWS_AS(build_frequency_bucketer(train, {1, 1}), InputError);
  CHECK_THROWS_AS(build_frequency_bucketer(train, {2, 1}), InputError);
}

TEST_CASE("label bucketer from an explicit set appends other") {
  WordBucketer b = build_label_bucketer(std::vector<std::string>{"N", "V"});
  CHECK(b.kind() == WordBucketer::Kind::label);
  CHECK(b.bucket_labels() == std::vector<std::string>{"N", "V", "other"});
  CHECK(b.bucket_of_label("N") == 0);
  CHECK(b.bucket_of_label("V") == 1);
  CHECK(b.bucket_of_label("ADJ") == 2);
  CHECK_THROWS_AS(build_label_bucketer(std::vector<std::string>{"N", "N"}),
                  InputError);
}

TEST_CASE("label bucketer discovery orders by first appearance") {
  TokenCorpus c1 = corpus_of({{"w", "w"}, {"w"}});
  TokenCorpus c2 = corpus_of({{"w", "w"}, {"w"}});
  LabelCorpus l1 = parse_label_corpus("B A\nB\n", "l1", c1);
  LabelCorpus l2 = parse_label_corpus("C A\nB\n", "l2", c2);
  WordBucketer b =
      build_label_bucketer(std::vector<const LabelCorpus*>{&l1, &l2});
  CHECK(b.bucket_labels() == std::vector<std::string>{"B", "A", "C"});
  // Without a filtering set there is no catch-all bucket.
  CHECK_THROWS_AS(b.bucket_of_label("unknown"), InputError);
}

TEST_CASE("word bucketer rejects lookups of the wrong kind") {
  WordBucketer freq = build_frequency_bucketer(corpus_of({{"a"}}));
  WordBucketer label = build_label_bucketer(std::vector<std::string>{"N"});
  CHECK_THROWS_AS(freq.bucket_of_label("N"), std::logic_error);
  CHECK_THROWS_AS(label.bucket_of_word("a"), std::logic_error);
}

TEST_CASE("sentence bucketers use the documented default cutoffs") {
  SentenceBucketer len = build_sentence_bucketer(SentenceBucketKind::length);
  CHECK(len.bucket_labels().front() == "<10");
  CHECK(len.bucket_labels().back() == "≥60");
  CHECK(len.num_buckets() == 7);

  SentenceBucketer diff =
      build_sentence_bucketer(SentenceBucketKind::lengthdiff);
  CHECK(diff.num_buckets() == 12);
  CHECK(diff.bucket_labels().front() == "<-20");
  CHECK(diff.bucket_labels()[1] == "[-20,-10)");
  CHECK(diff.bucket_labels().back() == "≥20");

  SentenceBucketer score = build_sentence_bucketer(
      SentenceBucketKind::score, {}, make_scorer("sentbleu"));
  CHECK(score.num_buckets() == 10);
  CHECK(score.bucket_labels()[1] == "[10,20)");
}

TEST_CASE("length buckets use the reference sentence") {
  SentenceBucketer b = build_sentence_bucketer(SentenceBucketKind::length);
  Sentence ref(12, "w"), sys(40, "w");
  CHECK(b.value_of(ref, sys) == 12.0);
  CHECK(b.bucket_labels()[b.assign(ref, sys)] == "[10,20)");
}

TEST_CASE("lengthdiff buckets use output minus reference") {
  SentenceBucketer b = build_sentence_bucketer(SentenceBucketKind::lengthdiff);
  Sentence ref(10, "w"), sys(7, "w");
  CHECK(b.value_of(ref, sys) == -3.0);
  CHECK(b.bucket_labels()[b.assign(ref, sys)] == "[-5,-2)");
  CHECK(b.bucket_labels()[b.assign(ref, ref)] == "[0,1)");
}

TEST_CASE("score buckets ask the scorer for a sentence score") {
  SentenceBucketer b = build_sentence_bucketer(SentenceBucketKind::score, {},
                                               make_scorer("sentbleu"));
  Sentence ref{"a", "b", "c"};
  CHECK(b.value_of(ref, ref) == 100.0);
  CHECK(b.bucket_labels()[b.assign(ref, ref)] == "≥90");
  CHECK(b.bucket_labels()[b.assign(ref, {"x"})] == "<10");
}

TEST_CASE("score bucketing without a scorer is an input error") {
  CHECK_THROWS_AS(build_sentence_bucketer(SentenceBucketKind::score),
                  InputError);
}

TEST_CASE("interval buckets partition the real line") {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> value_dist(-50.0, 120.0);
  std::uniform_int_distribution<int> cut_dist(-20, 100);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> cutoffs;
    int n = 1 + (int)(rng() % 6);
    for (int i = 0; i < n; ++i) cutoffs.push_back(cut_dist(rng));
    std::sort(cutoffs.begin(), cutoffs.end());
    cutoffs.erase(std::unique(cutoffs.begin(), cutoffs.end()), cutoffs.end());
    SentenceBucketer b =
        build_sentence_bucketer(SentenceBucketKind::lengthdiff, cutoffs);
    for (int probe = 0; probe < 50; ++probe) {
      double v = value_dist(rng);
      std::size_t idx = b.bucket_of_value(v);
      CHECK(idx < b.num_buckets());
      // Left-closed, right-open: the bucket of a cutoff is the one it opens.
      for (std::size_t c = 0; c < cutoffs.size(); ++c)
        CHECK(b.bucket_of_value(cutoffs[c]) == c + 1);
    }
  }
}

TEST_CASE("non-increasing sentence cutoffs are rejected") {
  CHECK_THROWS_AS(
      build_sentence_bucketer(SentenceBucketKind::length, {10, 10}),
      InputError);
  CHECK_THROWS_AS(
      build_sentence_bucketer(SentenceBucketKind::length, {20, 10}),
      InputError);
}

TEST_CASE("fractional cutoffs keep decimal labels") {
  SentenceBucketer b =
      build_sentence_bucketer(SentenceBucketKind::score, {33.5, 66.5},
                              make_scorer("sentbleu"));
  CHECK(b.bucket_labels() ==
        std::vector<std::string>{"<33.5", "[33.5,66.5)", "≥66.5"});
}

TEST_CASE("kind names") {
  CHECK(sentence_bucket_kind_name(SentenceBucketKind::length) == "length");
  CHECK(sentence_bucket_kind_name(SentenceBucketKind::lengthdiff) ==
        "lengthdiff");
  CHECK(sentence_bucket_kind_name(SentenceBucketKind::score) == "score");
}

TEST_CASE("empty frequency training corpus is rejected") {
  CHECK_THROWS_AS(build_frequency_bucketer(corpus_of({{}})), InputError);
}
