#include "moodkit/eval.hpp"

#include "moodkit/rng.hpp"
#include "support/synth.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace moodkit;

namespace {

SplitFeatures synthetic_features(int n, std::uint64_t seed, const EncoderConfig& cfg) {
  synth::SyntheticSpec spec;
  spec.n_triples = n;
  spec.seed = seed;
  const auto data = synth::make_synthetic(spec);
  const auto path = std::filesystem::temp_directory_path() / "moodkit_eval_lex.tsv";
  std::ofstream(path, std::ios::binary) << data.lexicon_tsv;
  const VadLexicon lex = load_lexicon(path.string());
  return featurize_splits(data.triples, lex, cfg);
}

TrainConfig quick_cfg() {
  TrainConfig tc;
  tc.learning_rate = 0.02;
  tc.epochs = 6;
  tc.batch_size = 16;
  return tc;
}

}  // namespace

TEST_CASE("seed sweep determinism and structure") {
  EncoderConfig cfg;
  const SplitFeatures data = synthetic_features(150, 11, cfg);
  const std::vector<std::uint64_t> seeds = {1, 2};

  const SeedSweepResult a = seed_sweep(data, cfg, quick_cfg(), seeds);
  REQUIRE(a.runs.size() == 2);
  CHECK(a.runs[0].seed == 1);
  CHECK(!a.runs[0].diverged);
  CHECK(a.runs[0].emotion.n_classes == kNumEmotions);
  CHECK(a.runs[0].mood.n_classes == kNumMoods);

  const SeedSweepResult b = seed_sweep(data, cfg, quick_cfg(), seeds);
  for (int i = 0; i < 2; ++i) {
    CHECK(a.runs[i].emotion.macro_f1 == b.runs[i].emotion.macro_f1);
    CHECK(a.runs[i].mood.macro_f1 == b.runs[i].mood.macro_f1);
  }

  SUBCASE("guards") {
    const std::vector<std::uint64_t> one = {1};
    CHECK_THROWS_AS(seed_sweep(data, cfg, quick_cfg(), one), ConfigError);
    const std::vector<std::uint64_t> dup = {1, 1};
    CHECK_THROWS_AS(seed_sweep(data, cfg, quick_cfg(), dup), ConfigError);
  }

  SUBCASE("divergent seeds are recorded and the sweep continues") {
    SplitFeatures poisoned = data;
    poisoned.train.samples[0].r_c[0] = std::numeric_limits<double>::infinity();
    const SeedSweepResult sw = seed_sweep(poisoned, cfg, quick_cfg(), seeds);
    REQUIRE(sw.runs.size() == 2);
    for (const auto& run : sw.runs) {
      CHECK(run.diverged);
      CHECK(run.error.find("sample index") != std::string::npos);
    }
    CHECK(sw.usable().empty());
  }
}

TEST_CASE("cross metric spearman on a constructed sweep") {
  SeedSweepResult sweep;
  for (int k = 0; k < 4; ++k) {
    SeedRunResult run;
    run.seed = static_cast<std::uint64_t>(k + 1);
    run.emotion.n_classes = kNumEmotions;
    run.emotion.per_class_f1 = Vec::Zero(kNumEmotions);
    run.mood.n_classes = kNumMoods;
    run.mood.per_class_f1 = Vec::Zero(kNumMoods);

    // Sadness F1 and M3 F1 rise together across seeds; Anger F1 is constant.
    run.emotion.per_class_f1[static_cast<int>(Emotion::Sadness)] = 0.2 + 0.1 * k;
    run.emotion.per_class_f1[static_cast<int>(Emotion::Anger)] = 0.5;
    run.mood.per_class_f1[static_cast<int>(MoodState::M3)] = 0.1 + 0.2 * k;
    run.emotion.macro_f1 = run.emotion.per_class_f1.mean();
    run.mood.macro_f1 = run.mood.per_class_f1.mean();
    sweep.runs.push_back(std::move(run));
  }

  const Mat corr = cross_metric_spearman(sweep);
  REQUIRE(corr.rows() == kNumMoods + 1);
  REQUIRE(corr.cols() == kNumEmotions + 1);
  CHECK(corr(static_cast<int>(MoodState::M3), static_cast<int>(Emotion::Sadness)) ==
        doctest::Approx(1.0).epsilon(1e-12));
  // Constant series -> missing value.
  CHECK(std::isnan(corr(static_cast<int>(MoodState::M3), static_cast<int>(Emotion::Anger))));
  // Entries are in [-1, 1] where defined.
  for (int r = 0; r < corr.rows(); ++r) {
    for (int c = 0; c < corr.cols(); ++c) {
      if (!std::isnan(corr(r, c))) {
        CHECK(corr(r, c) >= -1.0 - 1e-12);
        CHECK(corr(r, c) <= 1.0 + 1e-12);
      }
    }
  }

  SUBCASE("needs three usable runs") {
    SeedSweepResult small;
    small.runs = {sweep.runs[0], sweep.runs[1]};
    CHECK_THROWS_AS(cross_metric_spearman(small), DataError);
  }
}

TEST_CASE("ablation: full beats no-mood on a mood-dependent task") {
  // Labels are a pure function of the initial mood. The second utterance is
  // out-of-lexicon filler and its emotion is uniform noise, so the context
  // one-hot only carries the unordered {E_1, E_2} pair: part of the time E_1
  // is not recoverable from the encoder blocks at all, while the mood path
  // sees it exactly.
  EncoderConfig cfg;
  Rng rng(31);
  const std::array<Emotion, 4> openers = {Emotion::Neutral, Emotion::Joy,
                                          Emotion::Anger, Emotion::Sadness};
  const auto mood_echo = [](MoodState m) {
    switch (m) {
      case MoodState::M1: return Emotion::Joy;
      case MoodState::M2: return Emotion::Anger;
      case MoodState::M3: return Emotion::Sadness;
      default: return Emotion::Neutral;
    }
  };
  std::vector<DialogTriple> triples;
  for (int i = 0; i < 320; ++i) {
    DialogTriple t;
    const Emotion e1 = openers[rng.uniform_int(openers.size())];
    const auto e2 = static_cast<Emotion>(rng.uniform_int(kNumEmotions));
    t.dialogue_id = "md_" + std::to_string(i);
    t.speaker = "spk";
    t.personality = Ocean::Constant(0.5);
    t.m_i = emotion_to_mood(e1);
    const Emotion label = mood_echo(t.m_i);
    t.m_r = emotion_to_mood(label);
    t.u1 = {"spk", "filler words only", e1};
    t.u2 = {"other", "more filler words", e2};
    t.u3 = {"spk", "response filler", label};
    triples.push_back(std::move(t));
  }
  split_dataset(triples, {0.7, 0.15, 0.15}, 4);

  const auto path = std::filesystem::temp_directory_path() / "moodkit_abl_lex.tsv";
  std::ofstream(path, std::ios::binary) << "unusedword\t0.1\t0.1\t0.1\n";
  const VadLexicon lex = load_lexicon(path.string());
  const SplitFeatures features = featurize_splits(triples, lex, cfg);

  TrainConfig tc = quick_cfg();
  tc.epochs = 40;
  tc.seed = 3;

  const ClassificationReport full =
      ablation_run(features, cfg, tc, VariantSpec::full());
  const ClassificationReport no_mood =
      ablation_run(features, cfg, tc, VariantSpec::no_mood());
  CHECK(full.macro_f1 > no_mood.macro_f1);

  SUBCASE("variant full equals train()") {
    const TrainResult direct = train(features, cfg, tc);
    const EvalReports rep = evaluate(features.test, direct.params, cfg, tc.delta_norm);
    CHECK(rep.emotion.macro_f1 == full.macro_f1);
  }
}
