#include "moodkit/report.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace moodkit {

using nlohmann::json;

std::string format_number(double v) {
  if (std::isnan(v)) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !out.write(content.data(), static_cast<std::streamsize>(content.size()))) {
    throw IoError("cannot write file: " + path);
  }
}

std::array<std::string_view, kNumEmotions> emotion_names() {
  std::array<std::string_view, kNumEmotions> names;
  for (int i = 0; i < kNumEmotions; ++i) names[i] = to_string(static_cast<Emotion>(i));
  return names;
}

std::array<std::string_view, kNumMoods> mood_names() {
  std::array<std::string_view, kNumMoods> names;
  for (int i = 0; i < kNumMoods; ++i) names[i] = to_string(static_cast<MoodState>(i));
  return names;
}

std::string classification_report_csv(const ClassificationReport& rep,
                                      std::span<const std::string_view> class_names) {
  std::ostringstream out;
  out << "class,precision,recall,f1,support\n";
  for (int c = 0; c < rep.n_classes; ++c) {
    out << class_names[c] << ',' << format_number(rep.precision[c]) << ','
        << format_number(rep.recall[c]) << ',' << format_number(rep.per_class_f1[c])
        << ',' << rep.support[c] << '\n';
  }
  out << "macro,,," << format_number(rep.macro_f1) << ',' << rep.support.sum() << '\n';
  out << "weighted,,," << format_number(rep.weighted_f1) << ',' << rep.support.sum()
      << '\n';
  return out.str();
}

std::string classification_report_json(const ClassificationReport& rep,
                                       std::span<const std::string_view> class_names) {
  json per_class = json::object();
  for (int c = 0; c < rep.n_classes; ++c) {
    per_class[std::string(class_names[c])] = {{"precision", rep.precision[c]},
                                              {"recall", rep.recall[c]},
                                              {"f1", rep.per_class_f1[c]},
                                              {"support", rep.support[c]}};
  }
  json confusion = json::array();
  for (int r = 0; r < rep.n_classes; ++r) {
    json row = json::array();
    for (int c = 0; c < rep.n_classes; ++c) row.push_back(rep.confusion(r, c));
    confusion.push_back(row);
  }
  const json j = {{"per_class", per_class},
                  {"macro_f1", rep.macro_f1},
                  {"weighted_f1", rep.weighted_f1},
                  {"confusion", confusion}};
  return j.dump(2) + "\n";
}

std::string dataset_stats_csv(const DatasetStats& st) {
  std::ostringstream out;
  out << "section,key,value\n";
  out << "summary,n_triples," << st.n_triples << '\n';
  out << "summary,avg_utterance_tokens," << format_number(st.avg_utterance_tokens)
      << '\n';
  const auto emos = emotion_names();
  for (int i = 0; i < kNumEmotions; ++i) {
    out << "e_i," << emos[i] << ',' << st.e_i_counts[i] << '\n';
  }
  for (int i = 0; i < kNumEmotions; ++i) {
    out << "e_r," << emos[i] << ',' << st.e_r_counts[i] << '\n';
  }
  const auto moods = mood_names();
  for (int i = 0; i < kNumMoods; ++i) {
    out << "m_i," << moods[i] << ',' << st.m_i_counts[i] << '\n';
  }
  for (int i = 0; i < kNumMoods; ++i) {
    out << "m_r," << moods[i] << ',' << st.m_r_counts[i] << '\n';
  }
  for (const auto& [speaker, count] : st.per_speaker) {
    out << "speaker," << speaker << ',' << count << '\n';
  }
  out << "split,train," << st.per_split[0] << '\n';
  out << "split,valid," << st.per_split[1] << '\n';
  out << "split,test," << st.per_split[2] << '\n';
  return out.str();
}

std::string dataset_stats_json(const DatasetStats& st) {
  json j;
  j["n_triples"] = st.n_triples;
  j["avg_utterance_tokens"] = st.avg_utterance_tokens;
  const auto emos = emotion_names();
  const auto moods = mood_names();
  for (int i = 0; i < kNumEmotions; ++i) {
    j["e_i"][std::string(emos[i])] = st.e_i_counts[i];
    j["e_r"][std::string(emos[i])] = st.e_r_counts[i];
  }
  for (int i = 0; i < kNumMoods; ++i) {
    j["m_i"][std::string(moods[i])] = st.m_i_counts[i];
    j["m_r"][std::string(moods[i])] = st.m_r_counts[i];
  }
  for (const auto& [speaker, count] : st.per_speaker) {
    j["per_speaker"][speaker] = count;
  }
  j["per_split"] = {{"train", st.per_split[0]},
                    {"valid", st.per_split[1]},
                    {"test", st.per_split[2]}};
  return j.dump(2) + "\n";
}

std::string transitions_csv(
    const std::map<std::string, TransitionMatrix>& per_speaker) {
  const auto moods = mood_names();
  std::ostringstream out;
  out << "speaker,from,to,count,ratio\n";
  for (const auto& [speaker, tm] : per_speaker) {
    for (int r = 0; r < kNumMoods; ++r) {
      for (int c = 0; c < kNumMoods; ++c) {
        out << speaker << ',' << moods[r] << ',' << moods[c] << ','
            << tm.counts(r, c) << ',' << format_number(tm.ratios(r, c)) << '\n';
      }
    }
  }
  return out.str();
}

std::string row_deviation_csv(const std::array<RowDeviation, kNumMoods>& dev) {
  const auto moods = mood_names();
  std::ostringstream out;
  out << "row,std_l2,std_inf\n";
  for (int r = 0; r < kNumMoods; ++r) {
    out << moods[r] << ',' << format_number(dev[r].std_l2) << ','
        << format_number(dev[r].std_inf) << '\n';
  }
  return out.str();
}

std::string trait_variation_csv(const Eigen::Matrix<double, 5, 2>& corr) {
  static constexpr std::array<std::string_view, 5> kTraits = {
      "openness", "conscientiousness", "extraversion", "agreeableness",
      "neuroticism"};
  std::ostringstream out;
  out << "trait,delta_v,delta_a\n";
  for (int k = 0; k < 5; ++k) {
    out << kTraits[k] << ',' << format_number(corr(k, 0)) << ','
        << format_number(corr(k, 1)) << '\n';
  }
  return out.str();
}

std::string sweep_csv(const SeedSweepResult& sweep) {
  std::ostringstream out;
  out << "variant,seed,diverged,task,class,f1\n";
  const auto emos = emotion_names();
  const auto moods = mood_names();
  for (const auto& run : sweep.runs) {
    if (run.diverged) {
      out << sweep.variant << ',' << run.seed << ",1,,,\n";
      continue;
    }
    for (int c = 0; c < kNumEmotions; ++c) {
      out << sweep.variant << ',' << run.seed << ",0,emotion," << emos[c] << ','
          << format_number(run.emotion.per_class_f1[c]) << '\n';
    }
    out << sweep.variant << ',' << run.seed << ",0,emotion,macro,"
        << format_number(run.emotion.macro_f1) << '\n';
    out << sweep.variant << ',' << run.seed << ",0,emotion,weighted,"
        << format_number(run.emotion.weighted_f1) << '\n';
    for (int c = 0; c < kNumMoods; ++c) {
      out << sweep.variant << ',' << run.seed << ",0,mood," << moods[c] << ','
          << format_number(run.mood.per_class_f1[c]) << '\n';
    }
    out << sweep.variant << ',' << run.seed << ",0,mood,macro,"
        << format_number(run.mood.macro_f1) << '\n';
    out << sweep.variant << ',' << run.seed << ",0,mood,weighted,"
        << format_number(run.mood.weighted_f1) << '\n';
  }
  return out.str();
}

std::string sweep_summary_json(const SeedSweepResult& sweep) {
  json per_seed = json::array();
  double emo_macro = 0.0, emo_weighted = 0.0, mood_macro = 0.0;
  std::size_t usable = 0;
  for (const auto& run : sweep.runs) {
    json j = {{"seed", run.seed}, {"diverged", run.diverged}};
    if (run.diverged) {
      j["error"] = run.error;
    } else {
      j["emotion_macro_f1"] = run.emotion.macro_f1;
      j["emotion_weighted_f1"] = run.emotion.weighted_f1;
      j["mood_macro_f1"] = run.mood.macro_f1;
      j["mood_weighted_f1"] = run.mood.weighted_f1;
      emo_macro += run.emotion.macro_f1;
      emo_weighted += run.emotion.weighted_f1;
      mood_macro += run.mood.macro_f1;
      ++usable;
    }
    per_seed.push_back(std::move(j));
  }
  json out = {{"variant", sweep.variant}, {"runs", per_seed}};
  if (usable > 0) {
    const double n = static_cast<double>(usable);
    out["mean"] = {{"emotion_macro_f1", emo_macro / n},
                   {"emotion_weighted_f1", emo_weighted / n},
                   {"mood_macro_f1", mood_macro / n}};
  }
  return out.dump(2) + "\n";
}

std::string cross_spearman_csv(const Mat& corr) {
  const auto emos = emotion_names();
  const auto moods = mood_names();
  std::ostringstream out;
  out << "mood";
  for (int c = 0; c < kNumEmotions; ++c) out << ',' << emos[c];
  out << ",emo_avg\n";
  for (int r = 0; r < corr.rows(); ++r) {
    out << (r < kNumMoods ? std::string(moods[r]) : std::string("mood_avg"));
    for (int c = 0; c < corr.cols(); ++c) out << ',' << format_number(corr(r, c));
    out << '\n';
  }
  return out.str();
}

std::string train_log_json(const TrainLog& log) {
  json epochs = json::array();
  for (const auto& e : log.epochs) {
    epochs.push_back({{"epoch", e.epoch},
                      {"mood_loss", e.mood_loss},
                      {"emo_loss", e.emo_loss},
                      {"w1", e.w1},
                      {"w2", e.w2},
                      {"total", e.total},
                      {"val_macro_f1", e.val_macro_f1},
                      {"val_weighted_f1", e.val_weighted_f1}});
  }
  const json j = {{"epochs", epochs},
                  {"best_epoch", log.best_epoch},
                  {"best_val_macro_f1", log.best_val_macro_f1}};
  return j.dump(2) + "\n";
}

}  // namespace moodkit
