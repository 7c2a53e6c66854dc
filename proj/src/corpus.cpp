#include "comparegen/corpus.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace comparegen {

namespace {

bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f';
}

// Checks one line for UTF-8 validity (line splitting is byte-safe, so
// per-line validation reports accurate line numbers).
bool valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    std::size_t extra;
    unsigned cp_min;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      extra = 1;
      cp_min = 0x80;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
      cp_min = 0x800;
    } else if ((c & 0xF8) == 0xF0) {
      extra = 3;
      cp_min = 0x10000;
    } else {
      return false;
    }
    if (i + extra >= s.size()) return false;
    unsigned cp = c & (0x3F >> extra);
    for (std::size_t k = 1; k <= extra; ++k) {
      unsigned char cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (cp < cp_min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))
      return false;
    i += extra + 1;
  }
  return true;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  // A trailing newline does not create an extra sentence.
  if (lines.size() > 1 && lines.back().empty()) lines.pop_back();
  return lines;
}

Sentence split_tokens(std::string_view line) {
  Sentence tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_ascii_space(line[i])) ++i;
    std::size_t start = i;
    while (i < line.size() && !is_ascii_space(line[i])) ++i;
    if (i > start) tokens.emplace_back(line.substr(start, i - start));
  }
  return tokens;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw InputError("I/O error reading file: " + path);
  return buf.str();
}

std::string err_prefix(std::string_view name, std::size_t line_idx) {
  return std::string(name) + ":" + std::to_string(line_idx + 1) + ": ";
}

}  // namespace

std::size_t TokenCorpus::total_tokens() const {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.size();
  return n;
}

TokenCorpus parse_token_corpus(std::string_view text, std::string_view name,
                               bool lowercase) {
  if (text.empty())
    throw InputError(std::string(name) + ": empty corpus file");
  TokenCorpus corpus;
  auto lines = split_lines(text);
  corpus.sentences.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (!valid_utf8(lines[i]))
      throw InputError(err_prefix(name, i) + "invalid UTF-8");
    Sentence sent = split_tokens(lines[i]);
    if (lowercase) {
      for (auto& tok : sent)
        for (auto& c : tok)
          c = static_cast<char>(
              std::tolower(static_cast<unsigned char>(c)));
    }
    corpus.sentences.push_back(std::move(sent));
  }
  return corpus;
}

TokenCorpus load_token_corpus(const std::string& path, bool lowercase) {
  return parse_token_corpus(read_file(path), path, lowercase);
}

LabelCorpus parse_label_corpus(std::string_view text, std::string_view name,
                               const TokenCorpus& companion) {
  TokenCorpus raw = parse_token_corpus(text, name);
  if (raw.size() != companion.size())
    throw InputError(std::string(name) + ": label file has " +
                     std::to_string(raw.size()) + " sentences, companion has " +
                     std::to_string(companion.size()));
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i].size() != companion[i].size())
      throw InputError(std::string(name) + ": sentence " + std::to_string(i) +
                       ": " + std::to_string(raw[i].size()) + " labels vs " +
                       std::to_string(companion[i].size()) + " tokens");
  }
  LabelCorpus labels;
  labels.labels = std::move(raw.sentences);
  return labels;
}

LabelCorpus load_label_corpus(const std::string& path,
                              const TokenCorpus& companion) {
  return parse_label_corpus(read_file(path), path, companion);
}

AlignmentCorpus parse_alignment_corpus(std::string_view text,
                                       std::string_view name,
                                       const TokenCorpus& src,
                                       const TokenCorpus& tgt) {
  validate_parallel({&src, &tgt});
  auto lines = split_lines(text);
  if (lines.size() != src.size())
    throw InputError(std::string(name) + ": alignment file has " +
                     std::to_string(lines.size()) + " sentences, corpora have " +
                     std::to_string(src.size()));
  AlignmentCorpus corpus;
  corpus.sentences.resize(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (std::string_view piece : split_tokens(lines[i])) {
      auto bad = [&]() -> InputError {
        return InputError(err_prefix(name, i) + "malformed alignment pair '" +
                          std::string(piece) + "'");
      };
      std::size_t dash = piece.find('-');
      if (dash == std::string_view::npos || dash == 0 ||
          dash + 1 >= piece.size())
        throw bad();
      std::size_t a = 0, b = 0;
      auto ra = std::from_chars(piece.data(), piece.data() + dash, a);
      auto rb = std::from_chars(piece.data() + dash + 1,
                                piece.data() + piece.size(), b);
      if (ra.ec != std::errc() || ra.ptr != piece.data() + dash ||
          rb.ec != std::errc() || rb.ptr != piece.data() + piece.size())
        throw bad();
      if (a >= src[i].size() || b >= tgt[i].size())
        throw InputError(err_prefix(name, i) + "alignment pair '" +
                         std::string(piece) + "' out of bounds (src len " +
                         std::to_string(src[i].size()) + ", tgt len " +
                         std::to_string(tgt[i].size()) + ")");
      corpus.sentences[i].push_back({a, b});
    }
    auto& pairs = corpus.sentences[i];
    std::sort(pairs.begin(), pairs.end());
    for (std::size_t k = 1; k < pairs.size(); ++k)
      if (pairs[k] == pairs[k - 1])
        throw InputError(err_prefix(name, i) + "duplicate alignment pair '" +
                         std::to_string(pairs[k].src) + "-" +
                         std::to_string(pairs[k].tgt) + "'");
  }
  return corpus;
}

AlignmentCorpus load_alignment_corpus(const std::string& path,
                                      const TokenCorpus& src,
                                      const TokenCorpus& tgt) {
  return parse_alignment_corpus(read_file(path), path, src, tgt);
}

LikelihoodCorpus parse_likelihood_corpus(std::string_view text,
                                         std::string_view name,
                                         const TokenCorpus& ref) {
  auto lines = split_lines(text);
  if (lines.size() != ref.size())
    throw InputError(std::string(name) + ": likelihood file has " +
                     std::to_string(lines.size()) + " sentences, reference has " +
                     std::to_string(ref.size()));
  LikelihoodCorpus corpus;
  corpus.values.resize(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto pieces = split_tokens(lines[i]);
    if (pieces.size() != ref[i].size())
      throw InputError(std::string(name) + ": sentence " + std::to_string(i) +
                       ": " + std::to_string(pieces.size()) + " values vs " +
                       std::to_string(ref[i].size()) + " reference tokens");
    corpus.values[i].reserve(pieces.size());
    for (const std::string& piece : pieces) {
      double v = 0.0;
      auto r = std::from_chars(piece.data(), piece.data() + piece.size(), v);
      if (r.ec != std::errc() || r.ptr != piece.data() + piece.size())
        throw InputError(err_prefix(name, i) + "non-numeric value '" + piece +
                         "'");
      corpus.values[i].push_back(v);
    }
  }
  return corpus;
}

LikelihoodCorpus load_likelihood_corpus(const std::string& path,
                                        const TokenCorpus& ref) {
  return parse_likelihood_corpus(read_file(path), path, ref);
}

void validate_parallel(const std::vector<const TokenCorpus*>& corpora) {
  if (corpora.size() < 2) return;
  bool ok = true;
  for (const auto* c : corpora)
    if (c->size() != corpora[0]->size()) ok = false;
  if (!ok) {
    std::string counts;
    for (const auto* c : corpora) {
      if (!counts.empty()) counts += " vs ";
      counts += std::to_string(c->size());
    }
    throw InputError("corpora are not parallel: sentence counts " + counts);
  }
}

std::string join_tokens(const Sentence& sent) {
  std::string out;
  for (std::size_t i = 0; i < sent.size(); ++i) {
    if (i > 0) out += ' ';
    out += sent[i];
  }
  return out;
}

std::string to_text(const TokenCorpus& corpus) {
  std::string out;
  for (const auto& sent : corpus.sentences) {
    out += join_tokens(sent);
    out += '\n';
  }
  return out;
}

std::u32string decode_utf8(std::string_view text) {
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (c < 0x80) {
      out.push_back(c);
      ++i;
    } else if ((c & 0xE0) == 0xC0) {
      out.push_back(((c & 0x1F) << 6) |
                    (static_cast<unsigned char>(text[i + 1]) & 0x3F));
      i += 2;
    } else if ((c & 0xF0) == 0xE0) {
      out.push_back(((c & 0x0F) << 12) |
                    ((static_cast<unsigned char>(text[i + 1]) & 0x3F) << 6) |
                    (static_cast<unsigned char>(text[i + 2]) & 0x3F));
      i += 3;
    } else {
      out.push_back(((c & 0x07) << 18) |
                    ((static_cast<unsigned char>(text[i + 1]) & 0x3F) << 12) |
                    ((static_cast<unsigned char>(text[i + 2]) & 0x3F) << 6) |
                    (static_cast<unsigned char>(text[i + 3]) & 0x3F));
      i += 4;
    }
  }
  return out;
}

}  // namespace comparegen
