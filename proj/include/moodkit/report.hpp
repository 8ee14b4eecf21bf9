#pragma once

#include "moodkit/corpus.hpp"
#include "moodkit/eval.hpp"
#include "moodkit/stats.hpp"
#include "moodkit/train.hpp"

#include <map>
#include <string>

namespace moodkit {

// All CSV emitters use fixed column orders (documented in the README) and
// "%.9g" number formatting so outputs are byte-stable. NaN prints as NA.
std::string format_number(double v);

void write_text_file(const std::string& path, const std::string& content);

std::string classification_report_csv(const ClassificationReport& rep,
                                      std::span<const std::string_view> class_names);
std::string classification_report_json(const ClassificationReport& rep,
                                       std::span<const std::string_view> class_names);

std::string dataset_stats_csv(const DatasetStats& st);
std::string dataset_stats_json(const DatasetStats& st);

// speaker,from,to,count,ratio per row; speakers in sorted order.
std::string transitions_csv(
    const std::map<std::string, TransitionMatrix>& per_speaker);

std::string row_deviation_csv(const std::array<RowDeviation, kNumMoods>& dev);

std::string trait_variation_csv(const Eigen::Matrix<double, 5, 2>& corr);

std::string sweep_csv(const SeedSweepResult& sweep);
std::string sweep_summary_json(const SeedSweepResult& sweep);
std::string cross_spearman_csv(const Mat& corr);

std::string train_log_json(const TrainLog& log);

std::array<std::string_view, kNumEmotions> emotion_names();
std::array<std::string_view, kNumMoods> mood_names();

}  // namespace moodkit
