#pragma once

#include "moodkit/types.hpp"

#include <optional>
#include <string_view>

namespace moodkit {

// The seven basic emotion labels. Integer codes are stable (alphabetical)
// and used in serialization.
enum class Emotion : int {
  Anger = 0,
  Disgust = 1,
  Fear = 2,
  Joy = 3,
  Neutral = 4,
  Sadness = 5,
  Surprise = 6,
};
inline constexpr int kNumEmotions = 7;

// Mood states: the V-A origin plus the four quadrants of the V-A plane.
// Serialization and matrix indexing use this order.
enum class MoodState : int {
  Neutral = 0,
  M1 = 1,  // V >= 0, A >= 0
  M2 = 2,  // V <  0, A >= 0
  M3 = 3,  // V <  0, A <  0
  M4 = 4,  // V >= 0, A <  0
};
inline constexpr int kNumMoods = 5;

std::string_view to_string(Emotion e);
std::string_view to_string(MoodState m);
std::optional<Emotion> emotion_from_string(std::string_view s);
std::optional<MoodState> mood_from_string(std::string_view s);

// Canonical VAD point of a basic emotion.
Vad emotion_to_vad(Emotion e);

// Canonical VAD vector of a mood state.
Vad mood_to_vad(MoodState m);

// Quadrant classification in the V-A plane. Points whose V and A are both
// within kMoodOriginEps of zero map to Neutral; elsewhere zero counts as
// positive. Dominance never affects the result. Throws DataError on
// non-finite input.
inline constexpr double kMoodOriginEps = 1e-6;
MoodState vad_to_mood(const Vad& p);

// vad_to_mood(emotion_to_vad(e)); never yields M4 for a basic emotion.
MoodState emotion_to_mood(Emotion e);

// Mehrabian temperament map from OCEAN trait strengths to a prior VAD
// vector. Linear, no bias.
Vad personality_to_vad(const Ocean& p);

// Finite and componentwise in [0, 1].
bool is_valid_ocean(const Ocean& p);

}  // namespace moodkit
