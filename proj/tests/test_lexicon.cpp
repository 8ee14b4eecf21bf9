#include "moodkit/lexicon.hpp"

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace moodkit;

namespace {

struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const std::string& contents) {
    path = std::filesystem::temp_directory_path() /
           ("moodkit_lex_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)) +
            ".tsv");
    std::ofstream out(path, std::ios::binary);
    out << contents;
  }
  ~TempFile() { std::filesystem::remove(path); }
};

}  // namespace

TEST_CASE("load lexicon basic rows") {
  TempFile f("happy\t0.90\t0.60\t0.70\nsad\t-0.6\t-0.3\t-0.2\n");
  const VadLexicon lex = load_lexicon(f.path.string());
  CHECK(lex.entry_count() == 2);
  CHECK(lex.lookup("happy")->isApprox(Vad(0.90, 0.60, 0.70)));
  CHECK(lex.malformed_rows == 0);
}

TEST_CASE("duplicate words keep the last row") {
  TempFile f("word\t0.1\t0.1\t0.1\nword\t0.9\t0.9\t0.9\n");
  const VadLexicon lex = load_lexicon(f.path.string());
  CHECK(lex.entry_count() == 1);
  CHECK(lex.lookup("word")->isApprox(Vad(0.9, 0.9, 0.9)));
}

TEST_CASE("header row is auto-detected, malformed rows counted") {
  TempFile f("word\tvalence\tarousal\tdominance\nhappy\t0.9\t0.6\t0.7\nbroken\tx\t0\t0\n");
  const VadLexicon lex = load_lexicon(f.path.string());
  CHECK(lex.entry_count() == 1);
  CHECK(lex.malformed_rows == 1);  // header is not counted, "broken" is
}

TEST_CASE("keys are lowercased") {
  TempFile f("HaPPy\t0.9\t0.6\t0.7\n");
  const VadLexicon lex = load_lexicon(f.path.string());
  CHECK(lex.lookup("happy").has_value());
}

TEST_CASE("rescale maps [0,1] to [-1,1]") {
  TempFile f("happy\t1.0\t0.5\t0.0\n");
  const VadLexicon lex = load_lexicon(f.path.string(), {true});
  CHECK(lex.lookup("happy")->isApprox(Vad(1.0, 0.0, -1.0)));
}

TEST_CASE("missing file and empty lexicon") {
  CHECK_THROWS_AS(load_lexicon("/nonexistent/lexicon.tsv"), IoError);
  TempFile f("word\tnot\ta\tnumber\n");
  CHECK_THROWS_AS(load_lexicon(f.path.string()), DataError);
}

TEST_CASE("tokenize strips outer punctuation and lowercases") {
  TempFile f("happy\t0.9\t0.6\t0.7\n");
  const VadLexicon lex = load_lexicon(f.path.string());

  const TokenSeq seq = tokenize("I'm SO Happy!", lex);
  REQUIRE(seq.size() == 3);
  CHECK(seq.tokens[0].surface == "i'm");
  CHECK(seq.tokens[1].surface == "so");
  CHECK(seq.tokens[2].surface == "happy");
  CHECK(!seq.tokens[0].vad.has_value());
  CHECK(seq.tokens[2].vad.has_value());
}

TEST_CASE("tokenize edge cases") {
  TempFile f("x\t0\t0\t0\n");
  const VadLexicon lex = load_lexicon(f.path.string());

  CHECK(tokenize("", lex).empty());
  CHECK(tokenize("  ...  !!!  ", lex).empty());  // all-punctuation fragments drop

  const TokenSeq oov = tokenize("totally unknown words", lex);
  CHECK(oov.size() == 3);
  for (const auto& tok : oov.tokens) CHECK(!tok.vad.has_value());
}

TEST_CASE("tokenize is idempotent on normalized text") {
  TempFile f("alpha\t0.1\t0.2\t0.3\n");
  const VadLexicon lex = load_lexicon(f.path.string());
  const TokenSeq once = tokenize("alpha beta gamma", lex);
  std::string rejoined;
  for (const auto& tok : once.tokens) {
    if (!rejoined.empty()) rejoined += ' ';
    rejoined += tok.surface;
  }
  const TokenSeq twice = tokenize(rejoined, lex);
  REQUIRE(once.size() == twice.size());
  for (std::size_t i = 0; i < once.size(); ++i) {
    CHECK(once.tokens[i].surface == twice.tokens[i].surface);
  }
}
