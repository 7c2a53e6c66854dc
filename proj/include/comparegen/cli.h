#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "comparegen/corpus.h"

namespace comparegen {

// Bad command line (unknown flag, malformed option, missing positional).
// The entry points print usage_text() after the message.
class UsageError : public InputError {
 public:
  using InputError::InputError;
};

enum class Tool { compare_gen, compare_ll };

enum class AnalysisKind {
  scores,
  word_accuracies,
  src_word_accuracies,
  sentence_buckets,
  sentence_examples,
  ngrams,
  word_likelihoods,
};

// One analysis request: the kind plus its key=value options in the order
// they were written (preserved so a config can be rendered back to argv).
struct AnalysisSpec {
  AnalysisKind kind = AnalysisKind::scores;
  std::vector<std::pair<std::string, std::string>> options;

  const std::string* find(const std::string& key) const;
  std::string get(const std::string& key, const std::string& fallback) const;

  bool operator==(const AnalysisSpec&) const = default;
};

struct RunConfig {
  Tool tool = Tool::compare_gen;
  std::string ref_path;
  std::vector<std::string> sys_paths;  // compare-ll: likelihood files
  std::vector<std::string> sys_names;
  std::vector<AnalysisSpec> analyses;
  std::string output_directory;
  std::string freq_corpus_file;
  std::uint64_t seed = 12345;
  bool lowercase = false;
  int decimal_precision = 2;

  bool operator==(const RunConfig&) const = default;
};

// Splits one spec string ("key=val,key2=v1,v2") into an AnalysisSpec.
// Commas inside double quotes do not split; a comma piece without '='
// continues the previous value (so bucket_cutoffs=1,2,3 parses whole);
// surrounding quotes are stripped from values; unknown or duplicate keys
// are errors.
AnalysisSpec parse_spec_string(AnalysisKind kind, const std::string& text);
std::string format_spec_string(const AnalysisSpec& spec);

// args excludes the program name. Positional arguments are the reference
// path followed by one or more system outputs (likelihood files for
// compare-ll). Each --compare_* flag takes one or more spec strings;
// flags may repeat. When no analyses are requested a default suite is
// filled in. The default seed may be overridden by $COMPARE_GEN_SEED,
// which in turn loses to an explicit --seed.
RunConfig parse_args(const std::vector<std::string>& args, Tool tool);

// Inverse of parse_args: parse_args(to_argv(cfg), cfg.tool) == cfg.
std::vector<std::string> to_argv(const RunConfig& config);

std::string usage_text(Tool tool);

// Loads inputs, runs every analysis, prints the text report to `out`, and
// writes report.txt + results.json (plus the HTML/SVG/LaTeX tree when an
// output directory is set). Returns the process exit code: 0 success,
// 1 input error, 2 internal error. Partially written outputs are removed
// on failure.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace comparegen
