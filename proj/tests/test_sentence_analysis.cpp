#include <doctest.h>

#include <random>

#include "comparegen/sentence_analysis.h"

using namespace comparegen;

namespace {

TokenCorpus corpus_of(std::vector<Sentence> sents) {
  return TokenCorpus{std::move(sents)};
}

TokenCorpus random_corpus(std::mt19937& rng, int n, int max_len,
                          const std::vector<std::string>& vocab) {
  std::vector<Sentence> sents;
  for (int i = 0; i < n; ++i) {
    Sentence s;
    int len = (int)(rng() % (max_len + 1));
    for (int j = 0; j < len; ++j) s.push_back(vocab[rng() % vocab.size()]);
    sents.push_back(std::move(s));
  }
  return corpus_of(std::move(sents));
}

}  // namespace

TEST_CASE("bucket counts conserve the corpus size per system") {
  std::mt19937 rng(5);
  std::vector<std::string> vocab{"a", "b", "c", "d"};
  TokenCorpus ref = random_corpus(rng, 40, 30, vocab);
  TokenCorpus s1 = random_corpus(rng, 40, 30, vocab);
  TokenCorpus s2 = random_corpus(rng, 40, 30, vocab);
  for (auto kind : {SentenceBucketKind::length, SentenceBucketKind::lengthdiff,
                    SentenceBucketKind::score}) {
    SentenceBucketer bucketer = build_sentence_bucketer(
        kind, {}, kind == SentenceBucketKind::score ? make_scorer("sentbleu")
                                                    : nullptr);
    auto report = sentence_bucket_report(ref, {&s1, &s2}, bucketer,
                                         SentenceStatistic::count);
    for (std::size_t s = 0; s < 2; ++s) {
      long long total = 0;
      for (long long c : report.counts[s]) total += c;
      CHECK(total == (long long)ref.size());
    }
  }
}

TEST_CASE("length bucket membership is identical across systems") {
  std::mt19937 rng(6);
  std::vector<std::string> vocab{"a", "b"};
  TokenCorpus ref = random_corpus(rng, 30, 25, vocab);
  TokenCorpus s1 = random_corpus(rng, 30, 25, vocab);
  TokenCorpus s2 = random_corpus(rng, 30, 25, vocab);
  SentenceBucketer bucketer =
      build_sentence_bucketer(SentenceBucketKind::length);
  auto report = sentence_bucket_report(ref, {&s1, &s2}, bucketer,
                                       SentenceStatistic::count);
  CHECK(report.counts[0] == report.counts[1]);
}

TEST_CASE("score statistic applies the corpus formula per bucket") {
  // One bucket spanning everything -> bucket score == corpus score.
  std::mt19937 rng(7);
  std::vector<std::string> vocab{"a", "b", "c"};
  TokenCorpus ref = random_corpus(rng, 25, 12, vocab);
  TokenCorpus sys = random_corpus(rng, 25, 12, vocab);
  auto scorer = make_scorer("bleu");
  SentenceBucketer one_bucket =
      build_sentence_bucketer(SentenceBucketKind::length, {100000});
  auto report = sentence_bucket_report(ref, {&sys}, one_bucket,
                                       SentenceStatistic::score, scorer);
  REQUIRE(report.scores[0].size() == 2);
  REQUIRE(report.scores[0][0].has_value());
  CHECK(*report.scores[0][0] == scorer->corpus_score(ref, sys).value);
  CHECK(!report.scores[0][1].has_value());  // nothing is >= 100000 long
  CHECK(report.counts[0][1] == 0);
  // A bucket's score is NOT the mean of its member sentence scores: the
  // corpus formula over summed statistics is what decomposability promises.
}

TEST_CASE("empty buckets keep counts but report no score") {
  TokenCorpus ref = corpus_of({{"a", "b"}});
  TokenCorpus sys = corpus_of({{"a", "b"}});
  SentenceBucketer bucketer =
      build_sentence_bucketer(SentenceBucketKind::length, {10, 20});
  auto report = sentence_bucket_report(ref, {&sys}, bucketer,
                                       SentenceStatistic::score,
                                       make_scorer("bleu"));
  CHECK(report.counts[0] == std::vector<long long>{1, 0, 0});
  CHECK(report.scores[0][0].has_value());
  CHECK(!report.scores[0][1].has_value());
  CHECK(!report.scores[0][2].has_value());
}

TEST_CASE("score statistic without a scorer is rejected") {
  TokenCorpus ref = corpus_of({{"a"}});
  SentenceBucketer bucketer =
      build_sentence_bucketer(SentenceBucketKind::length);
  CHECK_THROWS_AS(sentence_bucket_report(ref, {&ref}, bucketer,
                                         SentenceStatistic::score, nullptr),
                  InputError);
}

TEST_CASE("sentence examples rank by score difference") {
  // Scores (sentbleu): s1 wins sentence 0 big, sentence 1 is a tie,
  // s2 wins sentence 2.
  TokenCorpus ref =
      corpus_of({{"a", "b", "c", "d"}, {"e", "f"}, {"g", "h", "i", "j"}});
  TokenCorpus s1 =
      corpus_of({{"a", "b", "c", "d"}, {"e", "f"}, {"x", "y", "z", "w"}});
  TokenCorpus s2 =
      corpus_of({{"x", "y", "z", "w"}, {"e", "f"}, {"g", "h", "i", "j"}});
  auto scorer = make_scorer("sentbleu");
  auto report = sentence_example_report(ref, s1, s2, *scorer, 2);
  CHECK(report.score_name == "sentbleu");
  REQUIRE(report.favoring_a.size() == 2);
  CHECK(report.favoring_a[0].sentence_index == 0);
  CHECK(report.favoring_a[0].score_a == 100.0);
  CHECK(report.favoring_a[0].score_b == 0.0);
  CHECK(report.favoring_a[0].difference == 100.0);
  CHECK(report.favoring_a[1].sentence_index == 1);  // the tie ranks next
  REQUIRE(report.favoring_b.size() == 2);
  CHECK(report.favoring_b[0].sentence_index == 2);
  CHECK(report.favoring_b[0].difference == -100.0);
  CHECK(report.favoring_b[1].sentence_index == 1);
  // Rendered text uses single-space joins.
  CHECK(report.favoring_a[0].ref_text == "a b c d");
  CHECK(report.favoring_a[0].text_a == "a b c d");
  CHECK(report.favoring_a[0].text_b == "x y z w");
}

TEST_CASE("swapping systems mirrors the example report") {
  std::mt19937 rng(8);
  std::vector<std::string> vocab{"a", "b", "c", "d", "e"};
  TokenCorpus ref = random_corpus(rng, 20, 10, vocab);
  TokenCorpus s1 = random_corpus(rng, 20, 10, vocab);
  TokenCorpus s2 = random_corpus(rng, 20, 10, vocab);
  auto scorer = make_scorer("sentbleu");
  auto fwd = sentence_example_report(ref, s1, s2, *scorer, 5);
  auto rev = sentence_example_report(ref, s2, s1, *scorer, 5);
  REQUIRE(fwd.favoring_a.size() == rev.favoring_b.size());
  for (std::size_t i = 0; i < fwd.favoring_a.size(); ++i) {
    const SentenceExample& f = fwd.favoring_a[i];
    const SentenceExample& r = rev.favoring_b[i];
    CHECK(f.sentence_index == r.sentence_index);
    CHECK(f.score_a == r.score_b);
    CHECK(f.score_b == r.score_a);
    CHECK(f.difference == -r.difference);
    CHECK(f.text_a == r.text_b);
    CHECK(f.text_b == r.text_a);
  }
}

TEST_CASE("k clamps to the corpus size") {
  TokenCorpus ref = corpus_of({{"a"}, {"b"}});
  auto scorer = make_scorer("sentbleu");
  auto report = sentence_example_report(ref, ref, ref, *scorer, 99);
  CHECK(report.favoring_a.size() == 2);
  CHECK(report.favoring_b.size() == 2);
}

TEST_CASE("stable order for equal differences") {
  // All sentences tie -> both lists are in corpus order.
  TokenCorpus ref = corpus_of({{"a"}, {"b"}, {"c"}});
  auto scorer = make_scorer("sentbleu");
  auto report = sentence_example_report(ref, ref, ref, *scorer, 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(report.favoring_a[i].sentence_index == i);
    CHECK(report.favoring_b[i].sentence_index == i);
  }
}
