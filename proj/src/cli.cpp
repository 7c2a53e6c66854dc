#include "comparegen/cli.h"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <map>
#include <set>

namespace comparegen {

namespace {

struct FlagInfo {
  AnalysisKind kind;
  std::set<std::string, std::less<>> keys;
};

const std::map<std::string, FlagInfo, std::less<>>& analysis_flags() {
  static const std::map<std::string, FlagInfo, std::less<>> flags = {
      {"--compare_scores", {AnalysisKind::scores, {"score_type", "bootstrap"}}},
      {"--compare_word_accuracies",
       {AnalysisKind::word_accuracies,
        {"bucket_type", "freq_corpus_file", "bucket_cutoffs", "ref_labels",
         "out_labels", "label_set", "acc_type", "report_length"}}},
      {"--compare_src_word_accuracies",
       {AnalysisKind::src_word_accuracies,
        {"src", "ref_align", "out_aligns", "bucket_type", "freq_corpus_file",
         "bucket_cutoffs", "src_labels", "label_set", "acc_type"}}},
      {"--compare_sentence_buckets",
       {AnalysisKind::sentence_buckets,
        {"bucket_type", "statistic", "score_type", "bucket_cutoffs"}}},
      {"--compare_sentence_examples",
       {AnalysisKind::sentence_examples, {"score_type", "report_length"}}},
      {"--compare_ngrams",
       {AnalysisKind::ngrams,
        {"compare_type", "alpha", "min_ngram_length", "max_ngram_length",
         "report_length", "ref_labels", "out_labels"}}},
      {"--compare_word_likelihoods",
       {AnalysisKind::word_likelihoods,
        {"bucket_type", "freq_corpus_file", "bucket_cutoffs", "ref_labels",
         "label_set"}}},
  };
  return flags;
}

const char* flag_for_kind(AnalysisKind kind) {
  for (const auto& [flag, info] : analysis_flags())
    if (info.kind == kind) return flag.c_str();
  throw std::logic_error("unmapped analysis kind");
}

bool kind_allowed(Tool tool, AnalysisKind kind) {
  if (tool == Tool::compare_ll) return kind == AnalysisKind::word_likelihoods;
  return kind != AnalysisKind::word_likelihoods;
}

// Split on commas that are outside double quotes.
std::vector<std::string> split_spec_pieces(const std::string& text) {
  std::vector<std::string> pieces;
  std::string current;
  bool in_quotes = false;
  for (char c : text) {
    if (c == '"') in_quotes = !in_quotes;
    if (c == ',' && !in_quotes) {
      pieces.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  pieces.push_back(current);
  return pieces;
}

std::string strip_quotes(const std::string& value) {
  if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
    return value.substr(1, value.size() - 2);
  return value;
}

std::uint64_t parse_seed(const std::string& text) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(),
                                   value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw UsageError("invalid seed: " + text);
  return value;
}

}  // namespace

const std::string* AnalysisSpec::find(const std::string& key) const {
  for (const auto& [k, v] : options)
    if (k == key) return &v;
  return nullptr;
}

std::string AnalysisSpec::get(const std::string& key,
                              const std::string& fallback) const {
  const std::string* value = find(key);
  return value ? *value : fallback;
}

AnalysisSpec parse_spec_string(AnalysisKind kind, const std::string& text) {
  const FlagInfo* info = nullptr;
  for (const auto& [flag, fi] : analysis_flags())
    if (fi.kind == kind) info = &fi;
  AnalysisSpec spec;
  spec.kind = kind;
  if (text.empty()) return spec;  // all defaults, e.g. --compare_ngrams ""
  for (const std::string& piece : split_spec_pieces(text)) {
    std::size_t eq = piece.find('=');
    if (eq == std::string::npos) {
      // Continuation of the previous value: bucket_cutoffs=1,2,3 arrives
      // as the pieces "bucket_cutoffs=1", "2", "3".
      if (spec.options.empty())
        throw UsageError("expected key=value in '" + text + "'");
      spec.options.back().second += ',' + piece;
      continue;
    }
    std::string key = piece.substr(0, eq);
    std::string value = strip_quotes(piece.substr(eq + 1));
    if (!info->keys.count(key))
      throw UsageError(std::string("unknown option '") + key + "' for " +
                       flag_for_kind(kind));
    if (spec.find(key))
      throw UsageError(std::string("duplicate option '") + key + "' for " +
                       flag_for_kind(kind));
    spec.options.emplace_back(std::move(key), std::move(value));
  }
  return spec;
}

std::string format_spec_string(const AnalysisSpec& spec) {
  std::string out;
  for (const auto& [key, value] : spec.options) {
    if (!out.empty()) out += ',';
    out += key;
    out += '=';
    bool quote = value.find_first_of(",; \"") != std::string::npos;
    out += quote ? '"' + value + '"' : value;
  }
  return out;
}

RunConfig parse_args(const std::vector<std::string>& args, Tool tool) {
  RunConfig cfg;
  cfg.tool = tool;
  if (const char* env = std::getenv("COMPARE_GEN_SEED"))
    cfg.seed = parse_seed(env);

  std::vector<std::string> positionals;
  auto is_flag = [](const std::string& s) {
    return s.size() >= 2 && s[0] == '-' && s[1] == '-';
  };

  std::size_t i = 0;
  auto take_values = [&](const std::string& flag, std::size_t min_count) {
    std::vector<std::string> values;
    while (i + 1 < args.size() && !is_flag(args[i + 1])) values.push_back(args[++i]);
    if (values.size() < min_count)
      throw UsageError(flag + " needs " + std::to_string(min_count) +
                       (min_count == 1 ? " value" : " values"));
    return values;
  };
  auto take_one = [&](const std::string& flag) {
    if (i + 1 >= args.size() || is_flag(args[i + 1]))
      throw UsageError(flag + " needs a value");
    return args[++i];
  };

  for (; i < args.size(); ++i) {
    const std::string& arg = args[i];
    if (!is_flag(arg)) {
      positionals.push_back(arg);
      continue;
    }
    if (auto it = analysis_flags().find(arg); it != analysis_flags().end()) {
      if (!kind_allowed(tool, it->second.kind))
        throw UsageError("unknown flag: " + arg);
      for (const std::string& text : take_values(arg, 1))
        cfg.analyses.push_back(parse_spec_string(it->second.kind, text));
    } else if (arg == "--sys_names") {
      cfg.sys_names = take_values(arg, 1);
    } else if (arg == "--output_directory") {
      cfg.output_directory = take_one(arg);
    } else if (arg == "--seed") {
      cfg.seed = parse_seed(take_one(arg));
    } else if (arg == "--decimal_precision") {
      const std::string text = take_one(arg);
      int value = 0;
      auto [ptr, ec] =
          std::from_chars(text.data(), text.data() + text.size(), value);
      if (ec != std::errc() || ptr != text.data() + text.size() || value < 0 ||
          value > 10)
        throw UsageError("invalid decimal_precision: " + text);
      cfg.decimal_precision = value;
    } else if (arg == "--freq_corpus_file") {
      cfg.freq_corpus_file = take_one(arg);
    } else if (arg == "--lowercase") {
      cfg.lowercase = true;
    } else {
      throw UsageError("unknown flag: " + arg);
    }
  }

  const char* what = tool == Tool::compare_ll ? "likelihood file" : "system output";
  if (positionals.size() < 2)
    throw UsageError(std::string("expected a reference file and at least one ") +
                     what);
  cfg.ref_path = positionals[0];
  cfg.sys_paths.assign(positionals.begin() + 1, positionals.end());

  if (cfg.sys_names.empty()) {
    for (std::size_t s = 1; s <= cfg.sys_paths.size(); ++s)
      cfg.sys_names.push_back("sys" + std::to_string(s));
  } else if (cfg.sys_names.size() != cfg.sys_paths.size()) {
    throw UsageError("--sys_names needs one name per system (" +
                     std::to_string(cfg.sys_paths.size()) + " given as " +
                     std::to_string(cfg.sys_names.size()) + " names)");
  }

  if (cfg.analyses.empty()) {
    auto add = [&cfg](AnalysisKind kind,
                      std::vector<std::pair<std::string, std::string>> opts) {
      AnalysisSpec spec;
      spec.kind = kind;
      spec.options = std::move(opts);
      cfg.analyses.push_back(std::move(spec));
    };
    if (tool == Tool::compare_ll) {
      add(AnalysisKind::word_likelihoods, {{"bucket_type", "freq"}});
    } else {
      add(AnalysisKind::scores, {{"score_type", "bleu"}});
      add(AnalysisKind::scores, {{"score_type", "length"}});
      if (!cfg.freq_corpus_file.empty())
        add(AnalysisKind::word_accuracies, {{"bucket_type", "freq"}});
      add(AnalysisKind::sentence_buckets,
          {{"bucket_type", "length"}, {"statistic", "score"}});
      add(AnalysisKind::sentence_buckets,
          {{"bucket_type", "lengthdiff"}, {"statistic", "count"}});
      add(AnalysisKind::sentence_buckets,
          {{"bucket_type", "score"}, {"statistic", "count"}});
      add(AnalysisKind::ngrams, {});
      add(AnalysisKind::sentence_examples, {});
    }
  }
  return cfg;
}

std::vector<std::string> to_argv(const RunConfig& config) {
  std::vector<std::string> argv;
  argv.push_back(config.ref_path);
  for (const auto& path : config.sys_paths) argv.push_back(path);
  for (const auto& spec : config.analyses) {
    argv.push_back(flag_for_kind(spec.kind));
    argv.push_back(format_spec_string(spec));
  }
  argv.push_back("--sys_names");
  for (const auto& name : config.sys_names) argv.push_back(name);
  if (!config.output_directory.empty()) {
    argv.push_back("--output_directory");
    argv.push_back(config.output_directory);
  }
  if (!config.freq_corpus_file.empty()) {
    argv.push_back("--freq_corpus_file");
    argv.push_back(config.freq_corpus_file);
  }
  argv.push_back("--seed");
  argv.push_back(std::to_string(config.seed));
  argv.push_back("--decimal_precision");
  argv.push_back(std::to_string(config.decimal_precision));
  if (config.lowercase) argv.push_back("--lowercase");
  return argv;
}

std::string usage_text(Tool tool) {
  if (tool == Tool::compare_ll) {
    return
        "usage: compare-ll REF LL1 [LL2 ...] [options]\n"
        "\n"
        "Bucketed aggregate statistics over per-token log likelihoods.\n"
        "Positional arguments: a tokenized reference file and one\n"
        "whitespace-separated log-likelihood file per system (one value\n"
        "per reference token).\n"
        "\n"
        "  --compare_word_likelihoods SPEC...\n"
        "        bucket_type=freq|label, freq_corpus_file=FILE,\n"
        "        bucket_cutoffs=N,N,..., ref_labels=FILE,\n"
        "        label_set=A+B+C\n"
        "  --sys_names NAME...        display names (default sys1, sys2, ...)\n"
        "  --output_directory DIR     write the HTML/LaTeX report tree\n"
        "  --freq_corpus_file FILE    default frequency-counting corpus\n"
        "  --decimal_precision N      score decimals (default 2)\n"
        "  --lowercase                lowercase ASCII before comparing\n"
        "  --seed N                   (accepted for interface parity)\n";
  }
  return
      "usage: compare-gen REF SYS1 [SYS2 ...] [options]\n"
      "\n"
      "Compares language-generation system outputs against a reference:\n"
      "aggregate scores with significance tests, bucketed accuracies,\n"
      "characteristic n-grams, and ranked sentence examples.\n"
      "\n"
      "Analysis flags take one or more comma-separated key=value specs\n"
      "(quote values containing commas or semicolons):\n"
      "  --compare_scores score_type=bleu|ribes|chrf|length,bootstrap=N\n"
      "  --compare_word_accuracies bucket_type=freq|label,\n"
      "        freq_corpus_file=FILE, bucket_cutoffs=N,N,...,\n"
      "        ref_labels=FILE, out_labels=\"FILE;FILE\", label_set=A+B+C,\n"
      "        acc_type=fmeas|prec|rec, report_length=N\n"
      "  --compare_src_word_accuracies src=FILE, ref_align=FILE,\n"
      "        out_aligns=\"FILE;FILE\", bucket_type=..., src_labels=FILE\n"
      "  --compare_sentence_buckets bucket_type=length|lengthdiff|score,\n"
      "        statistic=score|count, score_type=..., bucket_cutoffs=...\n"
      "  --compare_sentence_examples score_type=sentbleu,report_length=N\n"
      "  --compare_ngrams compare_type=match, alpha=A,\n"
      "        min_ngram_length=N, max_ngram_length=N, report_length=N,\n"
      "        ref_labels=FILE, out_labels=\"FILE;FILE\"\n"
      "\n"
      "Global options:\n"
      "  --sys_names NAME...        display names (default sys1, sys2, ...)\n"
      "  --output_directory DIR     write the HTML/LaTeX report tree\n"
      "  --freq_corpus_file FILE    default frequency-counting corpus\n"
      "  --seed N                   bootstrap seed (default 12345,\n"
      "                             or $COMPARE_GEN_SEED)\n"
      "  --decimal_precision N      score decimals (default 2)\n"
      "  --lowercase                lowercase ASCII before comparing\n"
      "\n"
      "Without analysis flags a default suite runs: BLEU and length\n"
      "scores, frequency word accuracy (when a frequency corpus is\n"
      "given), three sentence-bucket analyses, characteristic n-grams,\n"
      "and ranked sentence examples.\n";
}

}  // namespace comparegen
