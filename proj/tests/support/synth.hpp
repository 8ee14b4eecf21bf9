#pragma once

#include "moodkit/corpus.hpp"
#include "moodkit/lexicon.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace moodkit::synth {

// Synthetic task: the response emotion is a deterministic function of
// (initial mood quadrant, extraversion sign, context emotion). Speakers with
// high extraversion mirror the partner's emotion group; low-extraversion
// speakers fall back to the emotion of their own opening mood.
struct SyntheticSpec {
  int n_triples = 2400;
  int n_speakers = 24;  // half high-E, half low-E
  std::uint64_t seed = 2024;
  std::array<double, 3> split_ratios{0.8, 0.1, 0.1};
};

struct SyntheticData {
  std::vector<DialogTriple> triples;
  std::string lexicon_tsv;
};

// The label rule itself, exposed so tests can assert against it.
Emotion synthetic_label(bool high_extraversion, MoodState initial_mood,
                        Emotion context_emotion);

SyntheticData make_synthetic(const SyntheticSpec& spec = {});

}  // namespace moodkit::synth
