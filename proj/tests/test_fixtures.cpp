// Guards against drift between the fixture generators and the committed
// fixture files.

#include "support/fixture_corpus.hpp"
#include "support/synth.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace moodkit;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(static_cast<bool>(in));
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

std::string fixture(const std::string& name) {
  return std::string(MOODKIT_FIXTURE_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("committed corpus fixture matches the generator") {
  const DialogCorpus corpus = testing::make_fixture_corpus();
  CHECK(testing::corpus_jsonl(corpus) == slurp(fixture("corpus60.jsonl")));
  CHECK(testing::personalities_jsonl(corpus) == slurp(fixture("personalities.jsonl")));
}

TEST_CASE("committed synthetic fixtures match the generator") {
  const synth::SyntheticData data = synth::make_synthetic();
  CHECK(data.lexicon_tsv == slurp(fixture("synthetic_lexicon.tsv")));

  const auto tmp =
      (std::filesystem::temp_directory_path() / "moodkit_synth_regen.jsonl").string();
  save_triples(tmp, data.triples);
  CHECK(slurp(tmp) == slurp(fixture("synthetic_triples.jsonl")));
  std::filesystem::remove(tmp);

  // The committed dataset is large enough for the learnability gate and uses
  // every emotion as a label.
  CHECK(data.triples.size() >= 2000);
  std::array<int, kNumEmotions> label_counts{};
  for (const auto& t : data.triples) {
    label_counts[static_cast<int>(t.u3.emotion)] += 1;
    CHECK(t.u3.emotion ==
          synth::synthetic_label(t.personality[2] > 0.5, t.m_i, t.u2.emotion));
  }
  for (int c = 0; c < kNumEmotions; ++c) CHECK(label_counts[c] > 0);
}
