#pragma once

#include "moodkit/types.hpp"

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace moodkit {

// Word -> VAD lexicon, keys pre-lowered. Immutable after load.
struct VadLexicon {
  std::unordered_map<std::string, Vad> entries;
  std::string source_path;
  std::size_t malformed_rows = 0;

  std::size_t entry_count() const { return entries.size(); }
  std::optional<Vad> lookup(const std::string& lowered_word) const;
};

struct LexiconOptions {
  // Maps stored values x -> 2x - 1, for lexicons shipped in [0, 1].
  bool rescale = false;
};

// Reads a UTF-8 TSV `word<TAB>v<TAB>a<TAB>d`. A single leading header row is
// auto-detected (numeric fields fail to parse). Duplicate words keep the last
// row; malformed rows are counted and skipped. Throws IoError if the file is
// unreadable and DataError if no valid row survives.
VadLexicon load_lexicon(const std::string& path, const LexiconOptions& opts = {});

struct Token {
  std::string surface;       // lowercased, outer punctuation stripped
  std::optional<Vad> vad;    // absent for out-of-lexicon tokens
};

struct TokenSeq {
  std::vector<Token> tokens;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
};

// Lowercase, strip leading/trailing punctuation per token, split on
// whitespace; empty fragments are dropped. Each surviving token carries its
// lexicon VAD or is marked absent.
TokenSeq tokenize(const std::string& utterance, const VadLexicon& lex);

// Tokenization only, no lexicon annotation (used for token-length stats).
std::vector<std::string> tokenize_surface(const std::string& utterance);

}  // namespace moodkit
