#include "moodkit/lexicon.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace moodkit {

namespace {

bool parse_double(std::string_view field, double& out) {
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

bool split_tsv4(const std::string& line, std::string_view out[4]) {
  std::size_t start = 0;
  for (int i = 0; i < 3; ++i) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) return false;
    out[i] = std::string_view(line).substr(start, tab - start);
    start = tab + 1;
  }
  out[3] = std::string_view(line).substr(start);
  if (out[3].find('\t') != std::string_view::npos) return false;
  return true;
}

}  // namespace

std::optional<Vad> VadLexicon::lookup(const std::string& lowered_word) const {
  const auto it = entries.find(lowered_word);
  if (it == entries.end()) return std::nullopt;
  return it->second;
}

VadLexicon load_lexicon(const std::string& path, const LexiconOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open lexicon file: " + path);
  }

  VadLexicon lex;
  lex.source_path = path;

  std::string line;
  bool first_row = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::string_view fields[4];
    double v, a, d;
    const bool shaped = split_tsv4(line, fields);
    const bool numeric = shaped && parse_double(fields[1], v) &&
                         parse_double(fields[2], a) && parse_double(fields[3], d);
    if (!numeric) {
      // A single header row is allowed; anything else is malformed.
      if (!first_row) ++lex.malformed_rows;
      first_row = false;
      continue;
    }
    first_row = false;

    Vad vad(v, a, d);
    if (opts.rescale) vad = 2.0 * vad - Vad::Ones();
    lex.entries[to_lower(fields[0])] = vad;  // last occurrence wins
  }

  if (lex.entries.empty()) {
    throw DataError("lexicon has no valid rows: " + path);
  }
  return lex;
}

std::vector<std::string> tokenize_surface(const std::string& utterance) {
  std::vector<std::string> out;
  std::istringstream ss(utterance);
  std::string raw;
  while (ss >> raw) {
    std::size_t begin = 0;
    std::size_t end = raw.size();
    while (begin < end && std::ispunct(static_cast<unsigned char>(raw[begin]))) ++begin;
    while (end > begin && std::ispunct(static_cast<unsigned char>(raw[end - 1]))) --end;
    if (begin == end) continue;  // all-punctuation fragment
    out.push_back(to_lower(std::string_view(raw).substr(begin, end - begin)));
  }
  return out;
}

TokenSeq tokenize(const std::string& utterance, const VadLexicon& lex) {
  TokenSeq seq;
  for (auto& word : tokenize_surface(utterance)) {
    Token tok;
    tok.vad = lex.lookup(word);
    tok.surface = std::move(word);
    seq.tokens.push_back(std::move(tok));
  }
  return seq;
}

}  // namespace moodkit
