#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>

#include <json.hpp>

#include "comparegen/bucketing.h"
#include "comparegen/cli.h"
#include "comparegen/metrics.h"
#include "comparegen/ngram_diff.h"
#include "comparegen/report.h"
#include "comparegen/sentence_analysis.h"
#include "comparegen/significance.h"
#include "comparegen/word_accuracy.h"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace comparegen {

namespace {

// --------------------------------------------------------- option parsing

long long opt_int(const AnalysisSpec& spec, const std::string& key,
                  long long fallback) {
  const std::string* text = spec.find(key);
  if (!text) return fallback;
  long long value = 0;
  auto [ptr, ec] =
      std::from_chars(text->data(), text->data() + text->size(), value);
  if (ec != std::errc() || ptr != text->data() + text->size())
    throw InputError("invalid integer for '" + key + "': " + *text);
  return value;
}

double opt_double(const AnalysisSpec& spec, const std::string& key,
                  double fallback) {
  const std::string* text = spec.find(key);
  if (!text) return fallback;
  double value = 0;
  auto [ptr, ec] =
      std::from_chars(text->data(), text->data() + text->size(), value);
  if (ec != std::errc() || ptr != text->data() + text->size())
    throw InputError("invalid number for '" + key + "': " + *text);
  return value;
}

std::vector<std::string> split_list(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string current;
  for (char c : text) {
    if (c == sep) {
      out.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  out.push_back(current);
  return out;
}

std::vector<double> opt_cutoffs(const AnalysisSpec& spec) {
  const std::string* text = spec.find("bucket_cutoffs");
  if (!text) return {};
  std::vector<double> cutoffs;
  for (const std::string& piece : split_list(*text, ',')) {
    double value = 0;
    auto [ptr, ec] =
        std::from_chars(piece.data(), piece.data() + piece.size(), value);
    if (ec != std::errc() || ptr != piece.data() + piece.size())
      throw InputError("invalid bucket_cutoffs entry: " + piece);
    cutoffs.push_back(value);
  }
  return cutoffs;
}

std::vector<long long> opt_int_cutoffs(const AnalysisSpec& spec,
                                       const std::vector<long long>& fallback) {
  const std::string* text = spec.find("bucket_cutoffs");
  if (!text) return fallback;
  std::vector<long long> cutoffs;
  for (const std::string& piece : split_list(*text, ',')) {
    long long value = 0;
    auto [ptr, ec] =
        std::from_chars(piece.data(), piece.data() + piece.size(), value);
    if (ec != std::errc() || ptr != piece.data() + piece.size())
      throw InputError("invalid bucket_cutoffs entry: " + piece);
    cutoffs.push_back(value);
  }
  return cutoffs;
}

std::string require_opt(const AnalysisSpec& spec, const std::string& key,
                        const std::string& context) {
  const std::string* value = spec.find(key);
  if (!value || value->empty())
    throw InputError(context + " requires the '" + key + "' option");
  return *value;
}

// ------------------------------------------------------------ input state

struct Inputs {
  TokenCorpus ref;
  std::vector<TokenCorpus> systems;
  std::vector<LikelihoodCorpus> likelihoods;

  std::vector<const TokenCorpus*> system_ptrs() const {
    std::vector<const TokenCorpus*> ptrs;
    for (const auto& sys : systems) ptrs.push_back(&sys);
    return ptrs;
  }
};

Inputs load_inputs(const RunConfig& cfg) {
  Inputs in;
  in.ref = load_token_corpus(cfg.ref_path, cfg.lowercase);
  if (cfg.tool == Tool::compare_ll) {
    for (const std::string& path : cfg.sys_paths)
      in.likelihoods.push_back(load_likelihood_corpus(path, in.ref));
    return in;
  }
  for (const std::string& path : cfg.sys_paths)
    in.systems.push_back(load_token_corpus(path, cfg.lowercase));
  std::vector<const TokenCorpus*> all{&in.ref};
  for (const auto& sys : in.systems) all.push_back(&sys);
  validate_parallel(all);
  return in;
}

// ----------------------------------------------------------- small helpers

std::string win_label(Winner winner, std::size_t a, std::size_t b) {
  if (winner == Winner::A)
    return "s" + std::to_string(a + 1) + ">s" + std::to_string(b + 1);
  if (winner == Winner::B)
    return "s" + std::to_string(b + 1) + ">s" + std::to_string(a + 1);
  return "-";
}

std::string ci_string(const std::pair<double, double>& ci, int dp) {
  return "[" + fmt_fixed(ci.first, dp) + "," + fmt_fixed(ci.second, dp) + "]";
}

std::string signed_fixed(double v, int dp) {
  return (v >= 0 ? "+" : "") + fmt_fixed(v, dp);
}

const char* winner_json(Winner w) {
  switch (w) {
    case Winner::A: return "a";
    case Winner::B: return "b";
    case Winner::none: return "none";
  }
  return "none";
}

struct Context {
  const RunConfig& cfg;
  const Inputs& in;
  int dp;

  const std::vector<std::string>& names() const { return cfg.sys_names; }
  std::size_t num_systems() const { return cfg.sys_paths.size(); }
};

// A word bucketer plus the label corpora it may need at lookup time.
struct WordBucketSetup {
  WordBucketer bucketer;
  bool has_labels = false;
  LabelCorpus ref_labels;
  std::vector<LabelCorpus> sys_labels;

  const LabelCorpus* ref_labels_ptr() const {
    return has_labels ? &ref_labels : nullptr;
  }
  std::vector<const LabelCorpus*> sys_label_ptrs() const {
    std::vector<const LabelCorpus*> ptrs;
    for (const auto& l : sys_labels) ptrs.push_back(&l);
    return ptrs;
  }
};

// Shared by target-side word accuracy and likelihood bucketing: build a
// frequency bucketer from the configured corpus or a label bucketer from
// reference (+ system) label files.
WordBucketSetup make_word_bucketer(const Context& ctx,
                                   const AnalysisSpec& spec,
                                   const char* analysis_name,
                                   bool with_system_labels,
                                   const TokenCorpus* freq_fallback) {
  WordBucketSetup setup;
  std::string bucket_type = spec.get("bucket_type", "freq");
  if (bucket_type == "freq") {
    std::string path = spec.get("freq_corpus_file", ctx.cfg.freq_corpus_file);
    TokenCorpus train;
    const TokenCorpus* source = nullptr;
    if (!path.empty()) {
      train = load_token_corpus(path, ctx.cfg.lowercase);
      source = &train;
    } else if (freq_fallback) {
      source = freq_fallback;
    } else {
      throw InputError(std::string(analysis_name) +
                       " with bucket_type=freq requires the "
                       "'freq_corpus_file' option (or --freq_corpus_file)");
    }
    setup.bucketer = build_frequency_bucketer(
        *source, opt_int_cutoffs(spec, kDefaultFrequencyCutoffs));
  } else if (bucket_type == "label") {
    std::string ref_path = require_opt(spec, "ref_labels",
                                       std::string(analysis_name) +
                                           " with bucket_type=label");
    setup.has_labels = true;
    setup.ref_labels = load_label_corpus(ref_path, ctx.in.ref);
    if (with_system_labels) {
      std::string out_paths = require_opt(spec, "out_labels",
                                          std::string(analysis_name) +
                                              " with bucket_type=label");
      std::vector<std::string> paths = split_list(out_paths, ';');
      if (paths.size() != ctx.num_systems())
        throw InputError("out_labels needs one file per system");
      for (std::size_t s = 0; s < paths.size(); ++s)
        setup.sys_labels.push_back(
            load_label_corpus(paths[s], ctx.in.systems[s]));
    }
    if (const std::string* set = spec.find("label_set")) {
      setup.bucketer = build_label_bucketer(split_list(*set, '+'));
    } else {
      std::vector<const LabelCorpus*> discovery{&setup.ref_labels};
      for (const auto& l : setup.sys_labels) discovery.push_back(&l);
      setup.bucketer = build_label_bucketer(discovery);
    }
  } else {
    throw InputError("unknown bucket_type: " + bucket_type);
  }
  return setup;
}

struct AccStat {
  std::string key;    // acc_type value
  std::string label;  // column/axis description
  double (*get)(const AccuracyCounts&);
};

AccStat acc_stat(const AnalysisSpec& spec) {
  std::string type = spec.get("acc_type", "fmeas");
  if (type == "fmeas")
    return {type, "F-measure",
            [](const AccuracyCounts& c) { return c.f_measure; }};
  if (type == "prec")
    return {type, "Precision",
            [](const AccuracyCounts& c) { return c.precision; }};
  if (type == "rec")
    return {type, "Recall", [](const AccuracyCounts& c) { return c.recall; }};
  throw InputError("unknown acc_type: " + type + " (fmeas, prec, or rec)");
}

ordered_json accuracy_json(const Context& ctx,
                           const std::vector<BucketAccuracy>& report) {
  ordered_json buckets = ordered_json::array();
  for (const auto& bucket : report) {
    ordered_json systems = ordered_json::array();
    for (std::size_t s = 0; s < bucket.systems.size(); ++s) {
      const AccuracyCounts& c = bucket.systems[s];
      systems.push_back({{"name", ctx.names()[s]},
                         {"matches", c.matches},
                         {"sys_count", c.sys_count},
                         {"ref_count", c.ref_count},
                         {"precision", c.precision},
                         {"recall", c.recall},
                         {"f_measure", c.f_measure}});
    }
    buckets.push_back(
        {{"bucket", bucket.bucket_label}, {"systems", std::move(systems)}});
  }
  return buckets;
}

// ------------------------------------------------------------- scores

AnalysisSection scores_section(const Context& ctx,
                               const std::vector<const AnalysisSpec*>& specs,
                               ordered_json& out_json) {
  AnalysisSection section;
  section.title = "Aggregate scores";
  std::size_t n = ctx.num_systems();
  bool win_column = n == 2;

  TableData table;
  table.id = "scores";
  table.header.push_back("Metric");
  for (const auto& name : ctx.names()) table.header.push_back(name);
  if (win_column) table.header.push_back("Win?");

  TableData pair_table;
  pair_table.id = "scores_pairwise";
  pair_table.title = "Pairwise significance";
  pair_table.header = {"Metric", "Pair", "Win?", "p-value"};

  ordered_json metrics = ordered_json::array();
  bool any_bootstrap = false;

  for (const AnalysisSpec* spec : specs) {
    std::string score_type = spec->get("score_type", "bleu");
    std::shared_ptr<const Scorer> scorer = make_scorer(score_type);
    long long n_samples = opt_int(*spec, "bootstrap", kDefaultBootstrapSamples);
    if (n_samples < 0) throw InputError("bootstrap must be >= 0");
    if (n_samples > 0) any_bootstrap = true;

    std::vector<double> full_scores(n);
    std::vector<std::vector<double>> resampled(n);
    std::vector<std::pair<double, double>> cis(n);
    for (std::size_t s = 0; s < n; ++s) {
      auto stats = scorer->per_sentence_stats(ctx.in.ref, ctx.in.systems[s]);
      SufficientStats total(scorer->stats_size());
      for (const auto& st : stats) total += st;
      full_scores[s] = scorer->finalize(total);
      if (n_samples > 0) {
        resampled[s] =
            bootstrap_scores(*scorer, stats, (int)n_samples, ctx.cfg.seed);
        cis[s] = interval_from_scores(resampled[s], kDefaultConfidence);
      }
    }

    struct PairOutcome {
      std::size_t a, b;
      Winner winner;
      double p_value;
    };
    std::vector<PairOutcome> pairs;
    if (n_samples > 0) {
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
          bool a_provisional = full_scores[a] >= full_scores[b];
          int losses = 0;
          for (long long r = 0; r < n_samples; ++r) {
            double lead = a_provisional ? resampled[a][r] - resampled[b][r]
                                        : resampled[b][r] - resampled[a][r];
            if (lead <= 0.0) ++losses;
          }
          double p = (double)losses / (double)n_samples;
          Winner w = Winner::none;
          if (p <= kDefaultSignificanceThreshold)
            w = a_provisional ? Winner::A : Winner::B;
          pairs.push_back({a, b, w, p});
        }
      }
    }

    std::vector<std::string> row{score_type};
    for (std::size_t s = 0; s < n; ++s)
      row.push_back(fmt_fixed(full_scores[s], ctx.dp));
    if (win_column)
      row.push_back(pairs.empty() ? "-"
                                  : win_label(pairs[0].winner, 0, 1));
    table.rows.push_back(std::move(row));

    if (n_samples > 0) {
      std::vector<std::string> ci_row{""};
      for (std::size_t s = 0; s < n; ++s)
        ci_row.push_back(ci_string(cis[s], ctx.dp));
      if (win_column) ci_row.push_back(fmt_p_value(pairs[0].p_value));
      table.rows.push_back(std::move(ci_row));
    }
    for (const PairOutcome& pair : pairs)
      if (n > 2)
        pair_table.rows.push_back(
            {score_type,
             ctx.names()[pair.a] + " vs " + ctx.names()[pair.b],
             win_label(pair.winner, pair.a, pair.b),
             fmt_p_value(pair.p_value)});

    ordered_json systems = ordered_json::array();
    for (std::size_t s = 0; s < n; ++s) {
      ordered_json entry = {{"name", ctx.names()[s]},
                            {"score", full_scores[s]}};
      if (n_samples > 0)
        entry["ci"] = {cis[s].first, cis[s].second};
      else
        entry["ci"] = nullptr;
      systems.push_back(std::move(entry));
    }
    ordered_json pair_json = ordered_json::array();
    for (const PairOutcome& pair : pairs)
      pair_json.push_back({{"a", pair.a},
                           {"b", pair.b},
                           {"winner", winner_json(pair.winner)},
                           {"p_value", pair.p_value}});
    metrics.push_back({{"metric", score_type},
                       {"bootstrap", n_samples},
                       {"systems", std::move(systems)},
                       {"pairs", std::move(pair_json)}});
  }

  section.tables.push_back(std::move(table));
  if (!pair_table.rows.empty())
    section.tables.push_back(std::move(pair_table));
  if (any_bootstrap)
    section.notes.push_back(
        "Bootstrap resampling with seed " + std::to_string(ctx.cfg.seed) +
        "; 95% confidence intervals; significance threshold p<=0.05, ties "
        "count against the leader.");
  if (n == 1)
    section.notes.push_back(
        "Pairwise significance needs at least two systems; skipped.");

  out_json.push_back({{"kind", "scores"},
                      {"seed", ctx.cfg.seed},
                      {"metrics", std::move(metrics)}});
  return section;
}

// ------------------------------------------------------- word accuracies

AnalysisSection word_accuracy_section(const Context& ctx,
                                      const AnalysisSpec& spec,
                                      std::size_t index,
                                      ordered_json& out_json) {
  std::string bucket_type = spec.get("bucket_type", "freq");
  WordBucketSetup setup = make_word_bucketer(
      ctx, spec, "--compare_word_accuracies", /*with_system_labels=*/true,
      /*freq_fallback=*/nullptr);
  AccStat stat = acc_stat(spec);
  std::size_t k = (std::size_t)std::max<long long>(
      0, opt_int(spec, "report_length", 10));

  auto report =
      word_accuracy_report(ctx.in.ref, ctx.in.system_ptrs(), setup.bucketer,
                           setup.ref_labels_ptr(), setup.sys_label_ptrs());

  AnalysisSection section;
  section.title = bucket_type == "freq" ? "Word accuracy by frequency"
                                        : "Word accuracy by label";
  std::string id = "word_acc_" + std::to_string(index);

  TableData table;
  table.id = id;
  table.title = stat.label + " per bucket";
  table.header.push_back("Bucket");
  for (const auto& name : ctx.names()) table.header.push_back(name);

  BarChartData chart;
  chart.id = id;
  chart.title = section.title;
  chart.y_label = stat.label;
  chart.series.resize(ctx.num_systems());
  for (std::size_t s = 0; s < ctx.num_systems(); ++s)
    chart.series[s].name = ctx.names()[s];

  bool drilldowns = ctx.num_systems() == 2;
  for (std::size_t b = 0; b < report.size(); ++b) {
    const BucketAccuracy& bucket = report[b];
    std::vector<std::string> row{bucket.bucket_label};
    for (std::size_t s = 0; s < bucket.systems.size(); ++s) {
      row.push_back(fmt_fixed(stat.get(bucket.systems[s]), 4));
      chart.series[s].values.push_back(stat.get(bucket.systems[s]));
    }
    chart.group_labels.push_back(bucket.bucket_label);
    table.rows.push_back(std::move(row));
    if (drilldowns) table.row_link_ids.push_back(id + "_b" + std::to_string(b));
  }

  if (drilldowns) {
    for (std::size_t b = 0; b < report.size(); ++b) {
      auto examples = bucket_example_sentences(
          ctx.in.ref, ctx.in.system_ptrs(), setup.bucketer,
          report[b].bucket_label, k, setup.ref_labels_ptr(),
          setup.sys_label_ptrs());
      DrilldownPage page;
      page.id = id + "_b" + std::to_string(b);
      page.title = section.title + " - bucket " + report[b].bucket_label;
      auto add_blocks = [&](const std::vector<BucketSentenceExample>& list,
                            std::size_t better) {
        for (const auto& ex : list) {
          ExampleBlock block;
          block.title = "better for " + ctx.names()[better] + " - sentence " +
                        std::to_string(ex.sentence_index + 1) + " (F " +
                        fmt_fixed(ex.f_a, 4) + " vs " + fmt_fixed(ex.f_b, 4) +
                        ")";
          block.lines.push_back(
              {"ref", join_tokens(ctx.in.ref[ex.sentence_index])});
          for (std::size_t s = 0; s < 2; ++s)
            block.lines.push_back(
                {ctx.names()[s],
                 join_tokens(ctx.in.systems[s][ex.sentence_index])});
          page.examples.push_back(std::move(block));
        }
      };
      add_blocks(examples.favoring_a, 0);
      add_blocks(examples.favoring_b, 1);
      section.drilldowns.push_back(std::move(page));
    }
  } else {
    section.notes.push_back(
        "Per-bucket example pages need exactly two systems; skipped.");
  }

  section.notes.push_back(
      "Matching by clipped counts per sentence over " +
      std::string(bucket_type == "freq" ? "words" : "(word, label) pairs") +
      "; statistic: " + stat.label + ".");
  section.tables.push_back(std::move(table));
  section.charts.push_back(std::move(chart));

  out_json.push_back({{"kind", "word_accuracies"},
                      {"bucket_type", bucket_type},
                      {"acc_type", stat.key},
                      {"buckets", accuracy_json(ctx, report)}});
  return section;
}

// --------------------------------------------------- source word accuracy

AnalysisSection src_word_accuracy_section(const Context& ctx,
                                          const AnalysisSpec& spec,
                                          std::size_t index,
                                          ordered_json& out_json) {
  std::string src_path =
      require_opt(spec, "src", "--compare_src_word_accuracies");
  TokenCorpus src = load_token_corpus(src_path, ctx.cfg.lowercase);

  std::string ref_align_path =
      require_opt(spec, "ref_align", "--compare_src_word_accuracies");
  AlignmentCorpus ref_align =
      load_alignment_corpus(ref_align_path, src, ctx.in.ref);
  std::vector<std::string> align_paths = split_list(
      require_opt(spec, "out_aligns", "--compare_src_word_accuracies"), ';');
  if (align_paths.size() != ctx.num_systems())
    throw InputError("out_aligns needs one file per system");
  std::vector<AlignmentCorpus> sys_aligns;
  for (std::size_t s = 0; s < align_paths.size(); ++s)
    sys_aligns.push_back(
        load_alignment_corpus(align_paths[s], src, ctx.in.systems[s]));
  std::vector<const AlignmentCorpus*> align_ptrs;
  for (const auto& a : sys_aligns) align_ptrs.push_back(&a);

  // Bucketing is over source words; labels, if any, come from src_labels.
  std::string bucket_type = spec.get("bucket_type", "freq");
  WordBucketer bucketer;
  LabelCorpus src_labels;
  bool has_labels = false;
  if (bucket_type == "freq") {
    std::string path = spec.get("freq_corpus_file", ctx.cfg.freq_corpus_file);
    TokenCorpus train;
    const TokenCorpus* source = &src;
    if (!path.empty()) {
      train = load_token_corpus(path, ctx.cfg.lowercase);
      source = &train;
    }
    bucketer = build_frequency_bucketer(
        *source, opt_int_cutoffs(spec, kDefaultFrequencyCutoffs));
  } else if (bucket_type == "label") {
    std::string labels_path = require_opt(
        spec, "src_labels", "--compare_src_word_accuracies with "
                            "bucket_type=label");
    src_labels = load_label_corpus(labels_path, src);
    has_labels = true;
    if (const std::string* set = spec.find("label_set"))
      bucketer = build_label_bucketer(split_list(*set, '+'));
    else
      bucketer = build_label_bucketer(
          std::vector<const LabelCorpus*>{&src_labels});
  } else {
    throw InputError("unknown bucket_type: " + bucket_type);
  }

  AccStat stat = acc_stat(spec);
  auto report = source_word_accuracy_report(
      src, ctx.in.ref, ctx.in.system_ptrs(), ref_align, align_ptrs, bucketer,
      has_labels ? &src_labels : nullptr);

  AnalysisSection section;
  section.title = bucket_type == "freq"
                      ? "Source word accuracy by frequency"
                      : "Source word accuracy by label";
  std::string id = "src_word_acc_" + std::to_string(index);

  TableData table;
  table.id = id;
  table.title = stat.label + " per bucket";
  table.header.push_back("Bucket");
  for (const auto& name : ctx.names()) table.header.push_back(name);

  BarChartData chart;
  chart.id = id;
  chart.title = section.title;
  chart.y_label = stat.label;
  chart.series.resize(ctx.num_systems());
  for (std::size_t s = 0; s < ctx.num_systems(); ++s)
    chart.series[s].name = ctx.names()[s];

  for (const BucketAccuracy& bucket : report) {
    std::vector<std::string> row{bucket.bucket_label};
    for (std::size_t s = 0; s < bucket.systems.size(); ++s) {
      row.push_back(fmt_fixed(stat.get(bucket.systems[s]), 4));
      chart.series[s].values.push_back(stat.get(bucket.systems[s]));
    }
    chart.group_labels.push_back(bucket.bucket_label);
    table.rows.push_back(std::move(row));
  }

  section.notes.push_back(
      "Each source token is scored by comparing the multisets of reference "
      "and system tokens aligned to it; source tokens with no reference "
      "alignment are skipped.");
  section.tables.push_back(std::move(table));
  section.charts.push_back(std::move(chart));

  out_json.push_back({{"kind", "src_word_accuracies"},
                      {"bucket_type", bucket_type},
                      {"acc_type", stat.key},
                      {"src", src_path},
                      {"buckets", accuracy_json(ctx, report)}});
  return section;
}

// -------------------------------------------------------- sentence buckets

AnalysisSection sentence_bucket_section(const Context& ctx,
                                        const AnalysisSpec& spec,
                                        std::size_t index,
                                        ordered_json& out_json) {
  std::string kind_name = spec.get("bucket_type", "length");
  SentenceBucketKind kind;
  if (kind_name == "length")
    kind = SentenceBucketKind::length;
  else if (kind_name == "lengthdiff")
    kind = SentenceBucketKind::lengthdiff;
  else if (kind_name == "score")
    kind = SentenceBucketKind::score;
  else
    throw InputError("unknown bucket_type: " + kind_name);

  std::string stat_name = spec.get(
      "statistic", kind == SentenceBucketKind::length ? "score" : "count");
  SentenceStatistic statistic;
  if (stat_name == "score")
    statistic = SentenceStatistic::score;
  else if (stat_name == "count")
    statistic = SentenceStatistic::count;
  else
    throw InputError("unknown statistic: " + stat_name);

  // One score_type option serves both roles: assigning sentences to score
  // buckets (sentence-level) and scoring bucket members (corpus-level).
  std::shared_ptr<const Scorer> assign_scorer;
  if (kind == SentenceBucketKind::score)
    assign_scorer = make_scorer(spec.get("score_type", "sentbleu"));
  std::shared_ptr<const Scorer> stat_scorer;
  if (statistic == SentenceStatistic::score)
    stat_scorer = make_scorer(spec.get("score_type", "bleu"));

  SentenceBucketer bucketer =
      build_sentence_bucketer(kind, opt_cutoffs(spec), assign_scorer);
  SentenceBucketReport report = sentence_bucket_report(
      ctx.in.ref, ctx.in.system_ptrs(), bucketer, statistic, stat_scorer);

  AnalysisSection section;
  std::string what = statistic == SentenceStatistic::score
                         ? "Sentence " + stat_scorer->name()
                         : "Sentence counts";
  section.title = what + " by " + kind_name;
  if (kind == SentenceBucketKind::score)
    section.title += " (" + assign_scorer->name() + ")";
  std::string id = "sent_buckets_" + std::to_string(index);

  TableData table;
  table.id = id;
  table.header.push_back("Bucket");
  for (const auto& name : ctx.names()) table.header.push_back(name);

  BarChartData chart;
  chart.id = id;
  chart.title = section.title;
  chart.y_label = statistic == SentenceStatistic::score
                      ? stat_scorer->name()
                      : "sentences";
  chart.series.resize(ctx.num_systems());
  for (std::size_t s = 0; s < ctx.num_systems(); ++s)
    chart.series[s].name = ctx.names()[s];

  bool drilldowns = ctx.num_systems() == 2;
  for (std::size_t b = 0; b < report.bucket_labels.size(); ++b) {
    std::vector<std::string> row{report.bucket_labels[b]};
    for (std::size_t s = 0; s < ctx.num_systems(); ++s) {
      if (statistic == SentenceStatistic::count) {
        row.push_back(std::to_string(report.counts[s][b]));
        chart.series[s].values.push_back((double)report.counts[s][b]);
      } else {
        const auto& score = report.scores[s][b];
        row.push_back(score ? fmt_fixed(*score, ctx.dp) : "-");
        chart.series[s].values.push_back(score.value_or(0.0));
      }
    }
    chart.group_labels.push_back(report.bucket_labels[b]);
    table.rows.push_back(std::move(row));
    if (drilldowns) table.row_link_ids.push_back(id + "_b" + std::to_string(b));
  }

  if (drilldowns) {
    constexpr std::size_t kMembersShown = 10;
    for (std::size_t b = 0; b < report.bucket_labels.size(); ++b) {
      DrilldownPage page;
      page.id = id + "_b" + std::to_string(b);
      page.title =
          section.title + " - bucket " + report.bucket_labels[b];
      if (kind == SentenceBucketKind::length) {
        // Membership depends only on the reference, so one listing with
        // both outputs covers the bucket.
        std::size_t shown = 0;
        for (std::size_t i = 0;
             i < ctx.in.ref.size() && shown < kMembersShown; ++i) {
          if (bucketer.assign(ctx.in.ref[i], ctx.in.systems[0][i]) != b)
            continue;
          ++shown;
          ExampleBlock block;
          block.title = "sentence " + std::to_string(i + 1);
          block.lines.push_back({"ref", join_tokens(ctx.in.ref[i])});
          for (std::size_t s = 0; s < 2; ++s)
            block.lines.push_back(
                {ctx.names()[s], join_tokens(ctx.in.systems[s][i])});
          page.examples.push_back(std::move(block));
        }
      } else {
        for (std::size_t s = 0; s < 2; ++s) {
          std::size_t shown = 0;
          for (std::size_t i = 0;
               i < ctx.in.ref.size() && shown < kMembersShown; ++i) {
            if (bucketer.assign(ctx.in.ref[i], ctx.in.systems[s][i]) != b)
              continue;
            ++shown;
            ExampleBlock block;
            block.title = "sentence " + std::to_string(i + 1) + " (" +
                          ctx.names()[s] + ")";
            block.lines.push_back({"ref", join_tokens(ctx.in.ref[i])});
            block.lines.push_back(
                {ctx.names()[s], join_tokens(ctx.in.systems[s][i])});
            page.examples.push_back(std::move(block));
          }
        }
      }
      section.drilldowns.push_back(std::move(page));
    }
  }

  section.tables.push_back(std::move(table));
  section.charts.push_back(std::move(chart));

  ordered_json buckets = ordered_json::array();
  for (std::size_t b = 0; b < report.bucket_labels.size(); ++b) {
    ordered_json systems = ordered_json::array();
    for (std::size_t s = 0; s < ctx.num_systems(); ++s) {
      ordered_json entry = {{"name", ctx.names()[s]},
                            {"count", report.counts[s][b]}};
      if (statistic == SentenceStatistic::score) {
        if (report.scores[s][b])
          entry["score"] = *report.scores[s][b];
        else
          entry["score"] = nullptr;
      }
      systems.push_back(std::move(entry));
    }
    buckets.push_back({{"bucket", report.bucket_labels[b]},
                       {"systems", std::move(systems)}});
  }
  ordered_json entry = {{"kind", "sentence_buckets"},
                        {"bucket_type", kind_name},
                        {"statistic", stat_name}};
  if (stat_scorer) entry["score_type"] = stat_scorer->name();
  if (assign_scorer) entry["assign_score_type"] = assign_scorer->name();
  entry["buckets"] = std::move(buckets);
  out_json.push_back(std::move(entry));
  return section;
}

// ------------------------------------------------------- sentence examples

AnalysisSection sentence_example_section(const Context& ctx,
                                         const AnalysisSpec& spec,
                                         ordered_json& out_json) {
  std::string score_type = spec.get("score_type", "sentbleu");
  AnalysisSection section;
  section.title = "Sentence examples (" + score_type + ")";
  if (ctx.num_systems() != 2) {
    section.notes.push_back(
        "Ranked sentence examples need exactly two systems; skipped.");
    out_json.push_back({{"kind", "sentence_examples"},
                        {"skipped", "needs exactly two systems"}});
    return section;
  }
  std::shared_ptr<const Scorer> scorer = make_scorer(score_type);
  std::size_t k = (std::size_t)std::max<long long>(
      0, opt_int(spec, "report_length", 10));
  SentenceExampleReport report = sentence_example_report(
      ctx.in.ref, ctx.in.systems[0], ctx.in.systems[1], *scorer, k);

  auto add_blocks = [&](const std::vector<SentenceExample>& list,
                        std::size_t better) {
    for (const SentenceExample& ex : list) {
      ExampleBlock block;
      block.title = "better for " + ctx.names()[better] + " - sentence " +
                    std::to_string(ex.sentence_index + 1) + ": " + score_type +
                    " " + fmt_fixed(ex.score_a, ctx.dp) + " vs " +
                    fmt_fixed(ex.score_b, ctx.dp) + " (diff " +
                    signed_fixed(ex.difference, ctx.dp) + ")";
      block.lines.push_back({"ref", ex.ref_text});
      block.lines.push_back({ctx.names()[0], ex.text_a});
      block.lines.push_back({ctx.names()[1], ex.text_b});
      section.examples.push_back(std::move(block));
    }
  };
  add_blocks(report.favoring_a, 0);
  add_blocks(report.favoring_b, 1);

  auto examples_json = [&](const std::vector<SentenceExample>& list) {
    ordered_json arr = ordered_json::array();
    for (const SentenceExample& ex : list)
      arr.push_back({{"index", ex.sentence_index},
                     {"ref", ex.ref_text},
                     {"outputs", {ex.text_a, ex.text_b}},
                     {"scores", {ex.score_a, ex.score_b}},
                     {"difference", ex.difference}});
    return arr;
  };
  out_json.push_back({{"kind", "sentence_examples"},
                      {"score_type", score_type},
                      {"favoring_a", examples_json(report.favoring_a)},
                      {"favoring_b", examples_json(report.favoring_b)}});
  return section;
}

// ----------------------------------------------------------------- ngrams

AnalysisSection ngram_section(const Context& ctx, const AnalysisSpec& spec,
                              std::size_t index, ordered_json& out_json) {
  AnalysisSection section;
  section.title = "Characteristic n-grams";
  if (ctx.num_systems() != 2) {
    section.notes.push_back(
        "The n-gram comparison needs exactly two systems; skipped.");
    out_json.push_back(
        {{"kind", "ngrams"}, {"skipped", "needs exactly two systems"}});
    return section;
  }
  std::string compare_type = spec.get("compare_type", "match");
  if (compare_type != "match")
    throw InputError("unsupported compare_type: " + compare_type +
                     " (only 'match')");
  double alpha = opt_double(spec, "alpha", 1.0);
  int min_n = (int)opt_int(spec, "min_ngram_length", 1);
  int max_n = (int)opt_int(spec, "max_ngram_length", 4);
  std::size_t k = (std::size_t)std::max<long long>(
      0, opt_int(spec, "report_length", 10));

  // With label files the same machinery runs over label sequences
  // (which POS patterns does each system produce correctly?).
  const TokenCorpus* ref = &ctx.in.ref;
  const TokenCorpus* sys_a = &ctx.in.systems[0];
  const TokenCorpus* sys_b = &ctx.in.systems[1];
  TokenCorpus ref_seq, a_seq, b_seq;
  bool label_mode = spec.find("ref_labels") || spec.find("out_labels");
  if (label_mode) {
    std::string ref_path =
        require_opt(spec, "ref_labels", "--compare_ngrams over labels");
    std::vector<std::string> out_paths = split_list(
        require_opt(spec, "out_labels", "--compare_ngrams over labels"), ';');
    if (out_paths.size() != 2)
      throw InputError("out_labels needs one file per system");
    ref_seq.sentences = load_label_corpus(ref_path, ctx.in.ref).labels;
    a_seq.sentences =
        load_label_corpus(out_paths[0], ctx.in.systems[0]).labels;
    b_seq.sentences =
        load_label_corpus(out_paths[1], ctx.in.systems[1]).labels;
    ref = &ref_seq;
    sys_a = &a_seq;
    sys_b = &b_seq;
    section.title += " (label sequences)";
  }

  NgramDifferenceReport report =
      ngram_difference_report(*ref, *sys_a, *sys_b, min_n, max_n, alpha, k);

  std::string id = "ngrams_" + std::to_string(index);
  auto make_table = [&](const std::vector<NgramRecord>& records,
                        const std::string& suffix, const std::string& name) {
    TableData table;
    table.id = id + "_" + suffix;
    table.title = "n-grams characteristic of " + name;
    table.header = {"n-gram", "m1", "m2", "s"};
    for (const NgramRecord& rec : records)
      table.rows.push_back({join_tokens(rec.ngram), std::to_string(rec.m1),
                            std::to_string(rec.m2), fmt_fixed(rec.p, 3)});
    return table;
  };
  section.tables.push_back(make_table(report.favoring_a, "a", ctx.names()[0]));
  section.tables.push_back(make_table(report.favoring_b, "b", ctx.names()[1]));
  section.notes.push_back(
      "s = (m1+a)/(m1+m2+2a) with a=" + fmt_fixed(alpha, 2) + "; m1 = " +
      ctx.names()[0] + " matches, m2 = " + ctx.names()[1] +
      " matches, n-gram lengths " + std::to_string(min_n) + ".." +
      std::to_string(max_n) + ".");

  auto records_json = [](const std::vector<NgramRecord>& records) {
    ordered_json arr = ordered_json::array();
    for (const NgramRecord& rec : records)
      arr.push_back({{"ngram", join_tokens(rec.ngram)},
                     {"m1", rec.m1},
                     {"m2", rec.m2},
                     {"p", rec.p}});
    return arr;
  };
  out_json.push_back({{"kind", "ngrams"},
                      {"alpha", alpha},
                      {"min_ngram_length", min_n},
                      {"max_ngram_length", max_n},
                      {"label_mode", label_mode},
                      {"favoring_a", records_json(report.favoring_a)},
                      {"favoring_b", records_json(report.favoring_b)}});
  return section;
}

// ------------------------------------------------------- word likelihoods

AnalysisSection word_likelihood_section(const Context& ctx,
                                        const AnalysisSpec& spec,
                                        std::size_t index,
                                        ordered_json& out_json) {
  std::string bucket_type = spec.get("bucket_type", "freq");
  // Without a frequency corpus the reference itself provides the counts.
  WordBucketSetup setup = make_word_bucketer(
      ctx, spec, "--compare_word_likelihoods", /*with_system_labels=*/false,
      /*freq_fallback=*/&ctx.in.ref);

  std::vector<const LikelihoodCorpus*> ll_ptrs;
  for (const auto& ll : ctx.in.likelihoods) ll_ptrs.push_back(&ll);
  auto report = likelihood_report(ctx.in.ref, ll_ptrs, setup.bucketer,
                                  setup.ref_labels_ptr());

  AnalysisSection section;
  section.title = bucket_type == "freq"
                      ? "Word log likelihood by frequency"
                      : "Word log likelihood by label";
  std::string id = "word_ll_" + std::to_string(index);

  TableData table;
  table.id = id;
  table.title = "Mean log likelihood per bucket";
  table.header = {"Bucket", "Tokens"};
  for (const auto& name : ctx.names()) table.header.push_back(name);

  BarChartData chart;
  chart.id = id;
  chart.title = section.title;
  chart.y_label = "mean log likelihood";
  chart.series.resize(ctx.num_systems());
  for (std::size_t s = 0; s < ctx.num_systems(); ++s)
    chart.series[s].name = ctx.names()[s];

  std::size_t num_buckets = setup.bucketer.num_buckets();
  for (std::size_t b = 0; b < num_buckets; ++b) {
    std::vector<std::string> row{setup.bucketer.bucket_labels()[b],
                                 std::to_string(report[0][b].token_count)};
    for (std::size_t s = 0; s < ctx.num_systems(); ++s) {
      const auto& mean = report[s][b].mean_log_likelihood;
      row.push_back(mean ? fmt_fixed(*mean, 4) : "-");
      chart.series[s].values.push_back(mean.value_or(0.0));
    }
    chart.group_labels.push_back(setup.bucketer.bucket_labels()[b]);
    table.rows.push_back(std::move(row));
  }

  section.notes.push_back(
      "Mean natural-log likelihood of reference tokens per bucket.");
  section.tables.push_back(std::move(table));
  section.charts.push_back(std::move(chart));

  ordered_json buckets = ordered_json::array();
  for (std::size_t b = 0; b < num_buckets; ++b) {
    ordered_json systems = ordered_json::array();
    for (std::size_t s = 0; s < ctx.num_systems(); ++s) {
      ordered_json entry = {{"name", ctx.names()[s]},
                            {"token_count", report[s][b].token_count}};
      if (report[s][b].mean_log_likelihood)
        entry["mean_log_likelihood"] = *report[s][b].mean_log_likelihood;
      else
        entry["mean_log_likelihood"] = nullptr;
      systems.push_back(std::move(entry));
    }
    buckets.push_back({{"bucket", setup.bucketer.bucket_labels()[b]},
                       {"systems", std::move(systems)}});
  }
  out_json.push_back({{"kind", "word_likelihoods"},
                      {"bucket_type", bucket_type},
                      {"buckets", std::move(buckets)}});
  return section;
}

// ------------------------------------------------------------ assembly

ReportDocument build_document(const Context& ctx, ordered_json& analyses_json) {
  ReportDocument doc;
  std::string joined;
  for (std::size_t s = 0; s < ctx.names().size(); ++s) {
    if (s > 0) joined += " vs ";
    joined += ctx.names()[s];
  }
  doc.title = (ctx.cfg.tool == Tool::compare_ll ? "Likelihood comparison: "
                                                : "System comparison: ") +
              joined;

  std::vector<const AnalysisSpec*> score_specs;
  for (const AnalysisSpec& spec : ctx.cfg.analyses)
    if (spec.kind == AnalysisKind::scores) score_specs.push_back(&spec);
  if (!score_specs.empty())
    doc.sections.push_back(scores_section(ctx, score_specs, analyses_json));

  std::size_t index = 0;
  for (const AnalysisSpec& spec : ctx.cfg.analyses) {
    ++index;
    switch (spec.kind) {
      case AnalysisKind::scores:
        break;  // merged above
      case AnalysisKind::word_accuracies:
        doc.sections.push_back(
            word_accuracy_section(ctx, spec, index, analyses_json));
        break;
      case AnalysisKind::src_word_accuracies:
        doc.sections.push_back(
            src_word_accuracy_section(ctx, spec, index, analyses_json));
        break;
      case AnalysisKind::sentence_buckets:
        doc.sections.push_back(
            sentence_bucket_section(ctx, spec, index, analyses_json));
        break;
      case AnalysisKind::sentence_examples:
        doc.sections.push_back(
            sentence_example_section(ctx, spec, analyses_json));
        break;
      case AnalysisKind::ngrams:
        doc.sections.push_back(ngram_section(ctx, spec, index, analyses_json));
        break;
      case AnalysisKind::word_likelihoods:
        doc.sections.push_back(
            word_likelihood_section(ctx, spec, index, analyses_json));
        break;
    }
  }
  return doc;
}

void write_tree(const std::map<std::string, std::string>& tree,
                const fs::path& root, bool full_tree) {
  std::vector<fs::path> written;
  try {
    for (const auto& [rel, content] : tree) {
      if (!full_tree && rel != "report.txt" && rel != "results.json") continue;
      fs::path path = root / rel;
      if (path.has_parent_path()) fs::create_directories(path.parent_path());
      std::ofstream file(path, std::ios::binary);
      if (!file) throw InputError("cannot write " + path.string());
      file << content;
      file.close();
      if (!file) throw InputError("write failed: " + path.string());
      written.push_back(path);
    }
  } catch (...) {
    // Never leave a half-written report behind.
    for (const fs::path& path : written) {
      std::error_code ec;
      fs::remove(path, ec);
    }
    throw;
  }
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.sys_paths.empty())
      throw InputError("no system files given");
    if (cfg.sys_names.size() != cfg.sys_paths.size())
      throw InputError("need one system name per system file");
    for (const AnalysisSpec& spec : cfg.analyses)
      if ((spec.kind == AnalysisKind::word_likelihoods) !=
          (cfg.tool == Tool::compare_ll))
        throw InputError("analysis not supported by this tool");

    Inputs in = load_inputs(cfg);
    Context ctx{cfg, in, cfg.decimal_precision};

    ordered_json results;
    results["tool"] =
        cfg.tool == Tool::compare_ll ? "compare-ll" : "compare-gen";
    results["reference"] = cfg.ref_path;
    ordered_json systems = ordered_json::array();
    for (std::size_t s = 0; s < cfg.sys_paths.size(); ++s)
      systems.push_back(
          {{"name", cfg.sys_names[s]}, {"path", cfg.sys_paths[s]}});
    results["systems"] = std::move(systems);
    results["options"] = {{"seed", cfg.seed},
                          {"lowercase", cfg.lowercase},
                          {"decimal_precision", cfg.decimal_precision}};
    results["analyses"] = ordered_json::array();

    ReportDocument doc = build_document(ctx, results["analyses"]);
    std::map<std::string, std::string> tree = render_report_tree(doc);
    tree["results.json"] = results.dump(2) + "\n";

    bool full_tree = !cfg.output_directory.empty();
    fs::path root = full_tree ? fs::path(cfg.output_directory) : fs::path(".");
    write_tree(tree, root, full_tree);

    out << tree.at("report.txt");
    return 0;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace comparegen
