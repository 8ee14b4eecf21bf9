#include "moodkit/encoder.hpp"

#include "moodkit/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace moodkit;

namespace {

Token tok(const std::string& s, std::optional<Vad> v = std::nullopt) {
  return Token{s, v};
}

TokenSeq seq(std::initializer_list<Token> toks) {
  TokenSeq s;
  s.tokens = toks;
  return s;
}

}  // namespace

TEST_CASE("attention singleton and symmetry") {
  const Vad t1(0.3, -0.2, 0.5);
  const auto single = attend_utterance(Emotion::Joy, seq({tok("alpha", t1)}));
  REQUIRE(single.weights.size() == 1);
  CHECK(single.weights[0] == doctest::Approx(1.0));
  CHECK(single.output.isApprox(t1, 1e-12));

  const auto twin =
      attend_utterance(Emotion::Joy, seq({tok("alpha", t1), tok("alpha", t1)}));
  REQUIRE(twin.weights.size() == 2);
  CHECK(twin.weights[0] == doctest::Approx(0.5));
  CHECK(twin.weights[1] == doctest::Approx(0.5));
  CHECK(twin.output.isApprox(t1, 1e-12));
}

TEST_CASE("attention matches the scalar softmax oracle") {
  // e = Joy (0.81, 0.51, 0.46), two tokens; weights and output frozen from a
  // by-hand evaluation of the softmax over inner products.
  const auto res = attend_utterance(
      Emotion::Joy,
      seq({tok("a", Vad(0.8, 0.5, 0.4)), tok("b", Vad(-0.6, 0.3, 0.1))}));
  REQUIRE(res.weights.size() == 2);
  CHECK(res.weights[0] == doctest::Approx(0.7980256450598331).epsilon(1e-12));
  CHECK(res.weights[1] == doctest::Approx(0.20197435494016694).epsilon(1e-12));
  CHECK(res.output.x() == doctest::Approx(0.5172359030837663).epsilon(1e-12));
  CHECK(res.output.y() == doctest::Approx(0.4596051290119666).epsilon(1e-12));
  CHECK(res.output.z() == doctest::Approx(0.33940769351794997).epsilon(1e-12));
}

TEST_CASE("attention skips out-of-lexicon tokens") {
  const Vad t1(0.5, 0.5, 0.5);
  const auto res = attend_utterance(
      Emotion::Anger, seq({tok("oov"), tok("known", t1), tok("oov2")}));
  REQUIRE(res.weights.size() == 1);
  CHECK(res.output.isApprox(t1, 1e-12));

  const auto none = attend_utterance(Emotion::Anger, seq({tok("oov")}));
  CHECK(none.weights.size() == 0);
  CHECK(none.output.isZero());
}

TEST_CASE("attention properties on random token sets") {
  Rng rng(101);
  for (int iter = 0; iter < 300; ++iter) {
    const int n = 1 + static_cast<int>(rng.uniform_int(6));
    TokenSeq s;
    Vad lo = Vad::Constant(1e9), hi = Vad::Constant(-1e9);
    for (int i = 0; i < n; ++i) {
      const Vad v(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
      lo = lo.cwiseMin(v);
      hi = hi.cwiseMax(v);
      s.tokens.push_back(tok("w" + std::to_string(i), v));
    }
    const auto e = static_cast<Emotion>(rng.uniform_int(kNumEmotions));
    const auto res = attend_utterance(e, s);

    CHECK(res.weights.minCoeff() >= 0.0);
    CHECK(res.weights.sum() == doctest::Approx(1.0).epsilon(1e-9));
    for (int k = 0; k < 3; ++k) {
      CHECK(res.output[k] >= lo[k] - 1e-12);
      CHECK(res.output[k] <= hi[k] + 1e-12);
    }

    // Permuting token order permutes weights but not the output.
    TokenSeq rev = s;
    std::reverse(rev.tokens.begin(), rev.tokens.end());
    CHECK(attend_utterance(e, rev).output.isApprox(res.output, 1e-12));
  }
}

TEST_CASE("summarize_affect means") {
  const Vad t1(0.4, 0.2, 0.0);
  const std::vector<TokenSeq> utts = {seq({tok("a", t1)}), seq({tok("oov")})};
  const std::vector<Emotion> emos = {Emotion::Joy, Emotion::Neutral};

  const AffectiveSummary sum = summarize_affect(utts, emos);
  const Vad expected_e = 0.5 * (emotion_to_vad(Emotion::Joy) + Vad::Zero());
  CHECK(sum.mean_emotion_vad.isApprox(expected_e, 1e-12));
  CHECK(sum.mean_attention_vad.isApprox((t1 / 2.0).eval(), 1e-12));

  SUBCASE("single utterance mean is itself") {
    const AffectiveSummary one = summarize_affect(
        std::span(utts.data(), 1), std::span(emos.data(), 1));
    CHECK(one.mean_emotion_vad.isApprox(emotion_to_vad(Emotion::Joy), 1e-12));
    CHECK(one.mean_attention_vad.isApprox(t1, 1e-12));
  }
  SUBCASE("all neutral and OOV gives zero") {
    const std::vector<TokenSeq> blank = {seq({tok("x")}), seq({tok("y")})};
    const std::vector<Emotion> neutral = {Emotion::Neutral, Emotion::Neutral};
    const AffectiveSummary z = summarize_affect(blank, neutral);
    CHECK(z.mean_emotion_vad.isZero());
    CHECK(z.mean_attention_vad.isZero());
  }
  SUBCASE("order invariance") {
    std::vector<TokenSeq> swapped = {utts[1], utts[0]};
    std::vector<Emotion> semos = {emos[1], emos[0]};
    const AffectiveSummary s2 = summarize_affect(swapped, semos);
    CHECK(s2.mean_emotion_vad.isApprox(sum.mean_emotion_vad, 1e-12));
    CHECK(s2.mean_attention_vad.isApprox(sum.mean_attention_vad, 1e-12));
  }
  SUBCASE("empty context rejected") {
    CHECK_THROWS_AS(summarize_affect({}, {}), ConfigError);
  }
}

TEST_CASE("encode_context blocks") {
  EncoderConfig cfg;

  SUBCASE("all-OOV single utterance") {
    const std::vector<TokenSeq> utts = {seq({tok("mystery"), tok("words")})};
    const std::vector<Emotion> emos = {Emotion::Neutral};
    const Vec enc = encode_context(utts, emos, cfg);
    REQUIRE(enc.size() == cfg.d_ctx());
    CHECK(enc.head<3>().isZero());
    // One-hot block: Neutral slot only, L2-normalized to 1.
    CHECK(enc[3 + static_cast<int>(Emotion::Neutral)] == doctest::Approx(1.0));
    CHECK(enc.segment(3, kNumEmotions).sum() == doctest::Approx(1.0));
    CHECK(enc.tail(cfg.hash_dim).norm() == doctest::Approx(1.0));
  }

  SUBCASE("duplicated context encodes like a single occurrence") {
    const TokenSeq u = seq({tok("alpha", Vad(0.2, 0.1, 0.0)), tok("beta")});
    const std::vector<TokenSeq> once = {u};
    const std::vector<TokenSeq> twice = {u, u};
    const std::vector<Emotion> e1 = {Emotion::Joy};
    const std::vector<Emotion> e2 = {Emotion::Joy, Emotion::Joy};
    CHECK(encode_context(once, e1, cfg).isApprox(encode_context(twice, e2, cfg), 1e-12));
  }

  SUBCASE("disjoint contexts differ") {
    const std::vector<TokenSeq> a = {seq({tok("alpha"), tok("beta")})};
    const std::vector<TokenSeq> b = {seq({tok("gamma"), tok("delta")})};
    const std::vector<Emotion> ea = {Emotion::Joy};
    const std::vector<Emotion> eb = {Emotion::Sadness};
    CHECK(!encode_context(a, ea, cfg).isApprox(encode_context(b, eb, cfg), 1e-9));
  }

  SUBCASE("deterministic") {
    const std::vector<TokenSeq> utts = {seq({tok("alpha", Vad(0.2, 0.1, 0.0))})};
    const std::vector<Emotion> emos = {Emotion::Fear};
    const Vec a = encode_context(utts, emos, cfg);
    const Vec b = encode_context(utts, emos, cfg);
    CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);  // bitwise identical
  }

  SUBCASE("token cap drops oldest tokens") {
    EncoderConfig tiny = cfg;
    tiny.max_context_tokens = 2;
    const std::vector<TokenSeq> utts = {
        seq({tok("old", Vad(1, 1, 1)), tok("mid", Vad(-1, -1, -1))}),
        seq({tok("new", Vad(-1, -1, -1))})};
    const std::vector<Emotion> emos = {Emotion::Joy, Emotion::Joy};
    const Vec enc = encode_context(utts, emos, tiny);
    // "old" dropped: mean token VAD is (-1,-1,-1), normalized.
    CHECK(enc.head<3>().isApprox(Vad(-1, -1, -1).normalized(), 1e-12));
  }
}
