#include "support/synth.hpp"

#include "moodkit/rng.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace moodkit::synth {

namespace {

// Opening emotions cover the four reachable initial moods exactly once.
constexpr std::array<Emotion, 4> kOpeners = {Emotion::Neutral, Emotion::Joy,
                                             Emotion::Anger, Emotion::Sadness};

Emotion mood_echo(MoodState m) {
  switch (m) {
    case MoodState::M1: return Emotion::Joy;
    case MoodState::M2: return Emotion::Anger;
    case MoodState::M3: return Emotion::Sadness;
    default: return Emotion::Neutral;
  }
}

Emotion context_group(Emotion c) {
  switch (c) {
    case Emotion::Anger:
    case Emotion::Disgust:
      return Emotion::Disgust;
    case Emotion::Fear:
    case Emotion::Sadness:
      return Emotion::Fear;
    default:
      return Emotion::Surprise;  // Joy, Surprise, Neutral
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

}  // namespace

Emotion synthetic_label(bool high_extraversion, MoodState initial_mood,
                        Emotion context_emotion) {
  return high_extraversion ? context_group(context_emotion)
                           : mood_echo(initial_mood);
}

SyntheticData make_synthetic(const SyntheticSpec& spec) {
  Rng rng(Rng::mix(spec.seed, 0x517));

  // Three signature words per emotion, VAD jittered around the canonical
  // point; filler words stay out of the lexicon.
  std::ostringstream lex;
  std::array<std::array<std::string, 3>, kNumEmotions> signature;
  for (int e = 0; e < kNumEmotions; ++e) {
    const Vad base = emotion_to_vad(static_cast<Emotion>(e));
    for (int k = 0; k < 3; ++k) {
      std::string word = "cue";
      word += std::to_string(e);
      word += static_cast<char>('a' + k);
      signature[e][k] = word;
      Vad v = base + Vad(rng.uniform(-0.05, 0.05), rng.uniform(-0.05, 0.05),
                         rng.uniform(-0.05, 0.05));
      v = v.cwiseMax(-1.0).cwiseMin(1.0);
      lex << word << '\t' << fmt(v.x()) << '\t' << fmt(v.y()) << '\t' << fmt(v.z())
          << '\n';
    }
  }

  const std::array<std::string, 10> filler = {
      "about", "there", "maybe", "going", "right", "still", "thing", "today",
      "later", "would"};
  const auto filler_run = [&](int n) {
    std::string text;
    for (int i = 0; i < n; ++i) {
      if (!text.empty()) text += ' ';
      text += filler[rng.uniform_int(filler.size())];
    }
    return text;
  };

  // Half the speakers high extraversion, half low; remaining traits vary.
  struct Speaker {
    std::string name;
    Ocean traits;
    bool high_e;
  };
  std::vector<Speaker> speakers;
  for (int i = 0; i < spec.n_speakers; ++i) {
    const bool high_e = i < spec.n_speakers / 2;
    Speaker s;
    s.name = (high_e ? "hi_" : "lo_") + std::to_string(i);
    s.high_e = high_e;
    s.traits[0] = rng.uniform(0.2, 0.8);
    s.traits[1] = rng.uniform(0.2, 0.8);
    s.traits[2] = high_e ? rng.uniform(0.7, 0.95) : rng.uniform(0.05, 0.3);
    s.traits[3] = rng.uniform(0.2, 0.8);
    s.traits[4] = rng.uniform(0.2, 0.8);
    speakers.push_back(std::move(s));
  }

  SyntheticData data;
  for (int i = 0; i < spec.n_triples; ++i) {
    const Speaker& s = speakers[rng.uniform_int(speakers.size())];
    const Emotion e1 = kOpeners[rng.uniform_int(kOpeners.size())];
    const auto c = static_cast<Emotion>(rng.uniform_int(kNumEmotions));
    const MoodState m_i = emotion_to_mood(e1);
    const Emotion label = synthetic_label(s.high_e, m_i, c);

    DialogTriple t;
    t.dialogue_id = "syn_" + std::to_string(i);
    t.window_start = 0;
    t.speaker = s.name;
    t.personality = s.traits;
    t.m_i = m_i;
    t.m_r = emotion_to_mood(label);

    t.u1 = {s.name, filler_run(3 + static_cast<int>(rng.uniform_int(2))), e1};
    std::string u2_text = signature[static_cast<int>(c)][rng.uniform_int(3)];
    u2_text += ' ';
    u2_text += signature[static_cast<int>(c)][rng.uniform_int(3)];
    u2_text += ' ';
    u2_text += filler[rng.uniform_int(filler.size())];
    t.u2 = {"partner_" + std::to_string(rng.uniform_int(6)), u2_text, c};
    t.u3 = {s.name, filler_run(3), label};

    data.triples.push_back(std::move(t));
  }

  split_dataset(data.triples, spec.split_ratios, spec.seed);
  data.lexicon_tsv = lex.str();
  return data;
}

}  // namespace moodkit::synth
