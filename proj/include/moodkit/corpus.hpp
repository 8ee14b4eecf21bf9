#pragma once

#include "moodkit/affect.hpp"
#include "moodkit/types.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace moodkit {

struct Utterance {
  std::string speaker;
  std::string text;
  Emotion emotion = Emotion::Neutral;
};

struct Dialogue {
  std::string id;
  std::vector<Utterance> utterances;
};

struct DialogCorpus {
  std::vector<Dialogue> dialogues;
  // Raw annotations, possibly several per speaker; averaged when triples
  // are built.
  std::map<std::string, std::vector<Ocean>> personalities;
};

enum class Split : int { Train = 0, Valid = 1, Test = 2 };
std::string_view to_string(Split s);
std::optional<Split> split_from_string(std::string_view s);

// Three consecutive utterances with speaker(u1) = speaker(u3) != speaker(u2).
struct DialogTriple {
  std::string dialogue_id;
  int window_start = 0;
  Utterance u1, u2, u3;
  MoodState m_i = MoodState::Neutral;  // from u1's emotion
  MoodState m_r = MoodState::Neutral;  // from u3's emotion
  std::string speaker;                 // speaker of u1/u3
  Ocean personality = Ocean::Zero();   // speaker's averaged annotation
  Split split = Split::Train;
};

// Componentwise mean. Throws DataError on an empty list.
Ocean average_personality(std::span<const Ocean> annotations);

enum class Windowing { Sliding, Disjoint };

// Scans each dialogue with 3-utterance windows (Sliding advances by one;
// Disjoint skips past an accepted window) and keeps dyadic windows whose
// outer speaker carries a personality annotation. Output order is dialogue
// order, then window start.
std::vector<DialogTriple> build_triples(const DialogCorpus& corpus,
                                        Windowing windowing = Windowing::Sliding);

// Seeded shuffle, then partition by count with the rounding residue going to
// train. Ratios are (train, valid, test) and must sum to 1.
void split_dataset(std::vector<DialogTriple>& triples,
                   const std::array<double, 3>& ratios, std::uint64_t seed);

struct DatasetStats {
  std::size_t n_triples = 0;
  std::array<std::size_t, kNumEmotions> e_i_counts{};
  std::array<std::size_t, kNumEmotions> e_r_counts{};
  std::array<std::size_t, kNumMoods> m_i_counts{};
  std::array<std::size_t, kNumMoods> m_r_counts{};
  std::map<std::string, std::size_t> per_speaker;
  std::array<std::size_t, 3> per_split{};
  double avg_utterance_tokens = 0.0;  // over all 3n utterance slots
};

DatasetStats dataset_stats(std::span<const DialogTriple> triples);

// Row-normalized mood transition ratios in (Neutral, M1..M4) order; rows
// without outgoing transitions stay zero and are flagged.
struct TransitionMatrix {
  Eigen::Matrix<std::int64_t, 5, 5> counts = Eigen::Matrix<std::int64_t, 5, 5>::Zero();
  Eigen::Matrix<double, 5, 5> ratios = Eigen::Matrix<double, 5, 5>::Zero();
  std::array<bool, 5> zero_row{true, true, true, true, true};
};

TransitionMatrix transition_matrix(std::span<const DialogTriple> triples,
                                   const std::string* speaker_filter = nullptr);

// Population standard deviation (divide by the matrix count) of each row's
// L2 norm and max-absolute entry across speakers.
struct RowDeviation {
  double std_l2 = 0.0;
  double std_inf = 0.0;
};
std::array<RowDeviation, kNumMoods> transition_row_deviation(
    std::span<const TransitionMatrix> matrices);

// Spearman correlation of each OCEAN trait against the per-triple mood
// variation in V and A. 5x2, NaN where a series is constant. Needs >= 3
// triples.
Eigen::Matrix<double, 5, 2> mood_variation_correlation(
    std::span<const DialogTriple> triples);

// JSONL ingestion; parse errors carry 1-based line numbers.
DialogCorpus load_corpus(const std::string& corpus_path,
                         const std::string& personality_path);

void save_triples(const std::string& path, std::span<const DialogTriple> triples);
std::vector<DialogTriple> load_triples(const std::string& path);

}  // namespace moodkit
