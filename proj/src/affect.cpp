#include "moodkit/affect.hpp"

#include <array>
#include <cmath>

namespace moodkit {

namespace {

constexpr std::array<std::string_view, kNumEmotions> kEmotionNames = {
    "Anger", "Disgust", "Fear", "Joy", "Neutral", "Sadness", "Surprise"};

constexpr std::array<std::string_view, kNumMoods> kMoodNames = {
    "Neutral", "M1", "M2", "M3", "M4"};

// Russell & Mehrabian VAD points for the basic emotions.
constexpr std::array<std::array<double, 3>, kNumEmotions> kEmotionVad = {{
    {-0.51, 0.59, 0.25},   // Anger
    {-0.60, 0.35, 0.11},   // Disgust
    {-0.62, 0.82, -0.43},  // Fear
    {0.81, 0.51, 0.46},    // Joy
    {0.00, 0.00, 0.00},    // Neutral
    {-0.63, -0.27, -0.33}, // Sadness
    {0.40, 0.67, -0.13},   // Surprise
}};

constexpr std::array<std::array<double, 3>, kNumMoods> kMoodVad = {{
    {0.0, 0.0, 0.0},   // Neutral
    {1.0, 1.0, 0.0},   // M1
    {-1.0, 1.0, 0.0},  // M2
    {-1.0, -1.0, 0.0}, // M3
    {1.0, -1.0, 0.0},  // M4
}};

}  // namespace

std::string_view to_string(Emotion e) {
  return kEmotionNames[static_cast<int>(e)];
}

std::string_view to_string(MoodState m) {
  return kMoodNames[static_cast<int>(m)];
}

std::optional<Emotion> emotion_from_string(std::string_view s) {
  for (int i = 0; i < kNumEmotions; ++i) {
    if (kEmotionNames[i] == s) return static_cast<Emotion>(i);
  }
  return std::nullopt;
}

std::optional<MoodState> mood_from_string(std::string_view s) {
  for (int i = 0; i < kNumMoods; ++i) {
    if (kMoodNames[i] == s) return static_cast<MoodState>(i);
  }
  return std::nullopt;
}

Vad emotion_to_vad(Emotion e) {
  const auto& v = kEmotionVad[static_cast<int>(e)];
  return Vad(v[0], v[1], v[2]);
}

Vad mood_to_vad(MoodState m) {
  const auto& v = kMoodVad[static_cast<int>(m)];
  return Vad(v[0], v[1], v[2]);
}

MoodState vad_to_mood(const Vad& p) {
  if (!p.allFinite()) {
    throw DataError("vad_to_mood: non-finite affect point");
  }
  const double v = p.x();
  const double a = p.y();
  if (std::max(std::abs(v), std::abs(a)) <= kMoodOriginEps) {
    return MoodState::Neutral;
  }
  if (v >= 0.0) {
    return a >= 0.0 ? MoodState::M1 : MoodState::M4;
  }
  return a >= 0.0 ? MoodState::M2 : MoodState::M3;
}

MoodState emotion_to_mood(Emotion e) { return vad_to_mood(emotion_to_vad(e)); }

Vad personality_to_vad(const Ocean& p) {
  const double o = p[0], c = p[1], e = p[2], a = p[3], n = p[4];
  return Vad(0.21 * e + 0.59 * a + 0.19 * n,
             0.15 * o + 0.30 * a - 0.57 * n,
             0.25 * o + 0.17 * c + 0.60 * e - 0.32 * a);
}

bool is_valid_ocean(const Ocean& p) {
  if (!p.allFinite()) return false;
  return (p.array() >= 0.0).all() && (p.array() <= 1.0).all();
}

}  // namespace moodkit
