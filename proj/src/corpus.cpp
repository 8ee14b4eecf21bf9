#include "moodkit/corpus.hpp"

#include "moodkit/lexicon.hpp"
#include "moodkit/rng.hpp"
#include "moodkit/stats.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <numeric>

namespace moodkit {

using nlohmann::json;

std::string_view to_string(Split s) {
  switch (s) {
    case Split::Train: return "train";
    case Split::Valid: return "valid";
    case Split::Test: return "test";
  }
  return "train";
}

std::optional<Split> split_from_string(std::string_view s) {
  if (s == "train") return Split::Train;
  if (s == "valid") return Split::Valid;
  if (s == "test") return Split::Test;
  return std::nullopt;
}

Ocean average_personality(std::span<const Ocean> annotations) {
  if (annotations.empty()) {
    throw DataError("average_personality: no annotations");
  }
  Ocean sum = Ocean::Zero();
  for (const auto& p : annotations) sum += p;
  return sum / static_cast<double>(annotations.size());
}

std::vector<DialogTriple> build_triples(const DialogCorpus& corpus,
                                        Windowing windowing) {
  std::map<std::string, Ocean> averaged;
  for (const auto& [speaker, anns] : corpus.personalities) {
    averaged[speaker] = average_personality(anns);
  }

  std::vector<DialogTriple> triples;
  for (const auto& dialogue : corpus.dialogues) {
    const auto& utts = dialogue.utterances;
    std::size_t i = 0;
    while (i + 3 <= utts.size()) {
      const auto& u1 = utts[i];
      const auto& u2 = utts[i + 1];
      const auto& u3 = utts[i + 2];
      const auto pers = averaged.find(u1.speaker);
      const bool keep = u1.speaker == u3.speaker && u1.speaker != u2.speaker &&
                        pers != averaged.end();
      if (keep) {
        DialogTriple t;
        t.dialogue_id = dialogue.id;
        t.window_start = static_cast<int>(i);
        t.u1 = u1;
        t.u2 = u2;
        t.u3 = u3;
        t.m_i = emotion_to_mood(u1.emotion);
        t.m_r = emotion_to_mood(u3.emotion);
        t.speaker = u1.speaker;
        t.personality = pers->second;
        triples.push_back(std::move(t));
        i += windowing == Windowing::Disjoint ? 3 : 1;
      } else {
        i += 1;
      }
    }
  }
  return triples;
}

void split_dataset(std::vector<DialogTriple>& triples,
                   const std::array<double, 3>& ratios, std::uint64_t seed) {
  const double sum = ratios[0] + ratios[1] + ratios[2];
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ConfigError("split ratios must sum to 1");
  }

  const std::size_t n = triples.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(Rng::mix(seed, 0x5B117));
  rng.shuffle(order);

  const auto n_valid = static_cast<std::size_t>(std::floor(ratios[1] * static_cast<double>(n)));
  const auto n_test = static_cast<std::size_t>(std::floor(ratios[2] * static_cast<double>(n)));
  const std::size_t n_train = n - n_valid - n_test;

  for (std::size_t k = 0; k < n; ++k) {
    Split s = Split::Train;
    if (k >= n_train + n_valid) {
      s = Split::Test;
    } else if (k >= n_train) {
      s = Split::Valid;
    }
    triples[order[k]].split = s;
  }
}

DatasetStats dataset_stats(std::span<const DialogTriple> triples) {
  DatasetStats st;
  st.n_triples = triples.size();
  std::size_t token_total = 0;
  for (const auto& t : triples) {
    st.e_i_counts[static_cast<int>(t.u1.emotion)] += 1;
    st.e_r_counts[static_cast<int>(t.u3.emotion)] += 1;
    st.m_i_counts[static_cast<int>(t.m_i)] += 1;
    st.m_r_counts[static_cast<int>(t.m_r)] += 1;
    st.per_speaker[t.speaker] += 1;
    st.per_split[static_cast<int>(t.split)] += 1;
    token_total += tokenize_surface(t.u1.text).size();
    token_total += tokenize_surface(t.u2.text).size();
    token_total += tokenize_surface(t.u3.text).size();
  }
  st.avg_utterance_tokens =
      triples.empty() ? 0.0
                      : static_cast<double>(token_total) /
                            (3.0 * static_cast<double>(triples.size()));
  return st;
}

TransitionMatrix transition_matrix(std::span<const DialogTriple> triples,
                                   const std::string* speaker_filter) {
  TransitionMatrix m;
  for (const auto& t : triples) {
    if (speaker_filter && t.speaker != *speaker_filter) continue;
    m.counts(static_cast<int>(t.m_i), static_cast<int>(t.m_r)) += 1;
  }
  for (int r = 0; r < kNumMoods; ++r) {
    const auto row_sum = m.counts.row(r).sum();
    m.zero_row[r] = row_sum == 0;
    if (row_sum > 0) {
      m.ratios.row(r) =
          m.counts.row(r).cast<double>() / static_cast<double>(row_sum);
    }
  }
  return m;
}

std::array<RowDeviation, kNumMoods> transition_row_deviation(
    std::span<const TransitionMatrix> matrices) {
  if (matrices.empty()) {
    throw DataError("transition_row_deviation: no matrices");
  }
  std::array<RowDeviation, kNumMoods> out{};
  const double m = static_cast<double>(matrices.size());
  for (int r = 0; r < kNumMoods; ++r) {
    double mean_l2 = 0.0, mean_inf = 0.0;
    for (const auto& tm : matrices) {
      mean_l2 += tm.ratios.row(r).norm();
      mean_inf += tm.ratios.row(r).cwiseAbs().maxCoeff();
    }
    mean_l2 /= m;
    mean_inf /= m;
    double var_l2 = 0.0, var_inf = 0.0;
    for (const auto& tm : matrices) {
      const double dl = tm.ratios.row(r).norm() - mean_l2;
      const double di = tm.ratios.row(r).cwiseAbs().maxCoeff() - mean_inf;
      var_l2 += dl * dl;
      var_inf += di * di;
    }
    out[r].std_l2 = std::sqrt(var_l2 / m);
    out[r].std_inf = std::sqrt(var_inf / m);
  }
  return out;
}

Eigen::Matrix<double, 5, 2> mood_variation_correlation(
    std::span<const DialogTriple> triples) {
  if (triples.size() < 3) {
    throw DataError("mood_variation_correlation: need at least 3 triples");
  }
  const std::size_t n = triples.size();
  std::vector<double> dv(n), da(n);
  std::array<std::vector<double>, 5> traits;
  for (auto& t : traits) t.resize(n);

  for (std::size_t i = 0; i < n; ++i) {
    const Vad var = mood_to_vad(triples[i].m_r) - mood_to_vad(triples[i].m_i);
    dv[i] = var.x();
    da[i] = var.y();
    for (int k = 0; k < 5; ++k) traits[k][i] = triples[i].personality[k];
  }

  Eigen::Matrix<double, 5, 2> corr;
  for (int k = 0; k < 5; ++k) {
    corr(k, 0) = spearman(traits[k], dv);
    corr(k, 1) = spearman(traits[k], da);
  }
  return corr;
}

namespace {

[[noreturn]] void line_error(const std::string& path, std::size_t line,
                             const std::string& what) {
  throw DataError(path + ":" + std::to_string(line) + ": " + what);
}

Emotion parse_emotion(const json& j, const std::string& path, std::size_t line) {
  if (!j.is_string()) line_error(path, line, "emotion must be a string");
  const auto e = emotion_from_string(j.get<std::string>());
  if (!e) line_error(path, line, "unknown emotion label: " + j.get<std::string>());
  return *e;
}

Ocean parse_ocean(const json& j, const std::string& path, std::size_t line) {
  if (!j.is_array() || j.size() != 5) {
    line_error(path, line, "ocean must be an array of 5 numbers");
  }
  Ocean p;
  for (int i = 0; i < 5; ++i) {
    if (!j[i].is_number()) line_error(path, line, "ocean entries must be numbers");
    p[i] = j[i].get<double>();
  }
  if (!is_valid_ocean(p)) {
    line_error(path, line, "ocean traits must be finite and in [0, 1]");
  }
  return p;
}

json parse_json_line(const std::string& line, const std::string& path,
                     std::size_t line_no) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded()) line_error(path, line_no, "invalid JSON");
  return j;
}

template <typename Fn>
void for_each_jsonl(const std::string& path, Fn&& fn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open file: " + path);
  }
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    fn(parse_json_line(line, path, line_no), line_no);
  }
}

Utterance parse_utterance(const json& j, const std::string& path, std::size_t line) {
  if (!j.is_object() || !j.contains("speaker") || !j.contains("text") ||
      !j.contains("emotion")) {
    line_error(path, line, "utterance needs speaker, text, emotion");
  }
  Utterance u;
  u.speaker = j.at("speaker").get<std::string>();
  u.text = j.at("text").get<std::string>();
  u.emotion = parse_emotion(j.at("emotion"), path, line);
  return u;
}

}  // namespace

DialogCorpus load_corpus(const std::string& corpus_path,
                         const std::string& personality_path) {
  DialogCorpus corpus;
  for_each_jsonl(corpus_path, [&](const json& j, std::size_t line_no) {
    if (!j.is_object() || !j.contains("dialogue_id") || !j.contains("utterances")) {
      line_error(corpus_path, line_no, "dialogue needs dialogue_id and utterances");
    }
    Dialogue d;
    d.id = j.at("dialogue_id").get<std::string>();
    for (const auto& ju : j.at("utterances")) {
      d.utterances.push_back(parse_utterance(ju, corpus_path, line_no));
    }
    corpus.dialogues.push_back(std::move(d));
  });

  for_each_jsonl(personality_path, [&](const json& j, std::size_t line_no) {
    if (!j.is_object() || !j.contains("speaker") || !j.contains("ocean")) {
      line_error(personality_path, line_no, "personality needs speaker and ocean");
    }
    corpus.personalities[j.at("speaker").get<std::string>()].push_back(
        parse_ocean(j.at("ocean"), personality_path, line_no));
  });
  return corpus;
}

void save_triples(const std::string& path, std::span<const DialogTriple> triples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write triples file: " + path);
  }
  for (const auto& t : triples) {
    json j;
    j["dialogue_id"] = t.dialogue_id;
    j["window_start"] = t.window_start;
    for (const auto& [key, u] :
         {std::pair{"u1", &t.u1}, {"u2", &t.u2}, {"u3", &t.u3}}) {
      j[key] = {{"speaker", u->speaker},
                {"text", u->text},
                {"emotion", std::string(to_string(u->emotion))}};
    }
    j["m_i"] = std::string(to_string(t.m_i));
    j["m_r"] = std::string(to_string(t.m_r));
    j["speaker"] = t.speaker;
    std::vector<double> pers(t.personality.data(), t.personality.data() + 5);
    j["personality"] = pers;
    j["split"] = std::string(to_string(t.split));
    out << j.dump() << "\n";
  }
}

std::vector<DialogTriple> load_triples(const std::string& path) {
  std::vector<DialogTriple> triples;
  for_each_jsonl(path, [&](const json& j, std::size_t line_no) {
    DialogTriple t;
    try {
      t.dialogue_id = j.at("dialogue_id").get<std::string>();
      t.window_start = j.at("window_start").get<int>();
      t.u1 = parse_utterance(j.at("u1"), path, line_no);
      t.u2 = parse_utterance(j.at("u2"), path, line_no);
      t.u3 = parse_utterance(j.at("u3"), path, line_no);
      t.speaker = j.at("speaker").get<std::string>();
      t.personality = parse_ocean(j.at("personality"), path, line_no);
      const auto split = split_from_string(j.at("split").get<std::string>());
      if (!split) line_error(path, line_no, "unknown split label");
      t.split = *split;
      const auto m_i = mood_from_string(j.at("m_i").get<std::string>());
      const auto m_r = mood_from_string(j.at("m_r").get<std::string>());
      if (!m_i || !m_r) line_error(path, line_no, "unknown mood label");
      t.m_i = *m_i;
      t.m_r = *m_r;
    } catch (const json::exception& e) {
      line_error(path, line_no, e.what());
    }
    // Stored moods must agree with the emotion-derived ones.
    if (t.m_i != emotion_to_mood(t.u1.emotion) ||
        t.m_r != emotion_to_mood(t.u3.emotion)) {
      line_error(path, line_no, "mood labels inconsistent with emotions");
    }
    if (t.u1.speaker != t.speaker || t.u3.speaker != t.speaker ||
        t.u2.speaker == t.speaker) {
      line_error(path, line_no, "speakers violate the dyadic triple rule");
    }
    triples.push_back(std::move(t));
  });
  return triples;
}

}  // namespace moodkit
