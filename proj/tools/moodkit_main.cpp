#include "moodkit/checkpoint.hpp"
#include "moodkit/corpus.hpp"
#include "moodkit/eval.hpp"
#include "moodkit/grad.hpp"
#include "moodkit/report.hpp"
#include "moodkit/train.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace moodkit;

namespace {

constexpr double kGradCheckTol = 1e-4;

// Options shared by every command that trains or runs the model.
struct ModelFlags {
  TrainConfig train;
  EncoderConfig encoder;
  bool lexicon_rescale = false;
  std::string mood_loss_form = "as-written";
  std::string delta_norm = "softmax";
  std::string affect_concat = "sum";

  void resolve() {
    if (mood_loss_form == "mse") {
      train.mood_loss_form = MoodLossForm::Mse;
    } else if (mood_loss_form == "as-written") {
      train.mood_loss_form = MoodLossForm::AsWritten;
    } else {
      throw ConfigError("unknown --mood-loss-form: " + mood_loss_form);
    }
    if (delta_norm == "sigmoid") {
      train.delta_norm = DeltaNorm::Sigmoid;
    } else if (delta_norm == "softmax") {
      train.delta_norm = DeltaNorm::Softmax;
    } else {
      throw ConfigError("unknown --delta-norm: " + delta_norm);
    }
    if (affect_concat == "split") {
      encoder.affect_concat = AffectConcat::Split;
    } else if (affect_concat == "sum") {
      encoder.affect_concat = AffectConcat::Sum;
    } else {
      throw ConfigError("unknown --affect-concat: " + affect_concat);
    }
    train.validate();
  }
};

void add_model_flags(CLI::App* cmd, ModelFlags& f) {
  cmd->add_option("--learning-rate", f.train.learning_rate, "Adam base learning rate")
      ->capture_default_str();
  cmd->add_option("--batch-size", f.train.batch_size, "Training batch size")
      ->capture_default_str();
  cmd->add_option("--epochs", f.train.epochs, "Training epochs")->capture_default_str();
  cmd->add_option("--warmup-fraction", f.train.warmup_fraction,
                  "Linear warmup share of total steps")
      ->capture_default_str();
  cmd->add_option("--seed", f.train.seed, "Random seed")
      ->envname("MOODKIT_SEED")
      ->capture_default_str();
  cmd->add_option("--focal-alpha", f.train.focal_alpha, "Focal loss alpha")
      ->capture_default_str();
  cmd->add_option("--focal-gamma", f.train.focal_gamma, "Focal loss gamma")
      ->capture_default_str();
  cmd->add_option("--mood-loss-form", f.mood_loss_form, "as-written | mse")
      ->capture_default_str();
  cmd->add_option("--delta-norm", f.delta_norm, "softmax | sigmoid")
      ->capture_default_str();
  cmd->add_option("--d-h", f.train.d_h, "Hidden size of the projection layers")
      ->capture_default_str();
  cmd->add_option("--hash-dim", f.encoder.hash_dim, "Bag-of-words hash buckets")
      ->capture_default_str();
  cmd->add_option("--max-context-tokens", f.encoder.max_context_tokens,
                  "Context token cap (oldest dropped)")
      ->capture_default_str();
  cmd->add_option("--w-e", f.encoder.w_e, "Weight of the mean emotion VAD")
      ->capture_default_str();
  cmd->add_option("--w-a", f.encoder.w_a, "Weight of the mean attention VAD")
      ->capture_default_str();
  cmd->add_option("--affect-concat", f.affect_concat, "sum | split")
      ->capture_default_str();
  cmd->add_flag("--lexicon-rescale", f.lexicon_rescale,
                "Map lexicon values from [0,1] to [-1,1]");
}

void write_snapshot(CLI::App& app, const fs::path& anchor) {
  fs::path path = anchor;
  if (fs::is_directory(anchor)) {
    path = anchor / "effective_config.toml";
  } else {
    path += ".config.toml";
  }
  write_text_file(path.string(), app.config_to_str(true, true));
}

VadLexicon load_lexicon_verbose(const std::string& path, bool rescale) {
  VadLexicon lex = load_lexicon(path, {rescale});
  if (lex.malformed_rows > 0) {
    std::cerr << "warning: skipped " << lex.malformed_rows
              << " malformed lexicon row(s) in " << path << "\n";
  }
  return lex;
}

std::vector<std::uint64_t> parse_seeds(const std::string& arg) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(arg);
  std::string item;
  try {
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      seeds.push_back(std::stoull(item));
    }
  } catch (const std::exception&) {
    throw ConfigError("--seeds must be comma-separated integers: " + arg);
  }
  if (seeds.empty()) {
    throw ConfigError("--seeds must list at least one integer");
  }
  return seeds;
}

Ocean parse_personality_arg(const std::string& arg) {
  std::vector<double> vals;
  std::stringstream ss(arg);
  std::string item;
  try {
    while (std::getline(ss, item, ',')) vals.push_back(std::stod(item));
  } catch (const std::exception&) {
    throw ConfigError("--personality must be comma-separated numbers: " + arg);
  }
  if (vals.size() != 5) {
    throw ConfigError("--personality needs 5 comma-separated values");
  }
  Ocean p;
  for (int i = 0; i < 5; ++i) p[i] = vals[i];
  if (!is_valid_ocean(p)) {
    throw ConfigError("personality traits must be finite and in [0, 1]");
  }
  return p;
}

std::string format_vad(const Vad& v) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "(%.6f, %.6f, %.6f)", v.x(), v.y(), v.z());
  return buf;
}

std::string prediction_text(const Prediction& p) {
  std::ostringstream out;
  out << "m_pred: " << format_vad(p.m_pred) << "\n";
  out << "mood: " << to_string(p.mood) << "\n";
  out << "probs:";
  for (int i = 0; i < kNumEmotions; ++i) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), " %s=%.6f",
                  std::string(to_string(static_cast<Emotion>(i))).c_str(), p.probs[i]);
    out << buf;
  }
  out << "\n";
  out << "emotion: " << to_string(p.emotion) << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// build-triples

struct BuildTriplesOpts {
  std::string corpus, personalities, out;
  std::string windowing = "sliding";
  std::string split = "0.8,0.1,0.1";
  std::uint64_t seed = 0;
};

void run_build_triples(CLI::App& app, const BuildTriplesOpts& o) {
  const DialogCorpus corpus = load_corpus(o.corpus, o.personalities);
  Windowing windowing;
  if (o.windowing == "sliding") {
    windowing = Windowing::Sliding;
  } else if (o.windowing == "disjoint") {
    windowing = Windowing::Disjoint;
  } else {
    throw ConfigError("unknown --windowing: " + o.windowing);
  }

  std::vector<DialogTriple> triples = build_triples(corpus, windowing);
  std::array<double, 3> ratios{};
  {
    std::stringstream ss(o.split);
    std::string item;
    int i = 0;
    try {
      while (std::getline(ss, item, ',') && i < 3) ratios[i++] = std::stod(item);
    } catch (const std::exception&) {
      throw ConfigError("--split ratios must be numbers: " + o.split);
    }
    if (i != 3) throw ConfigError("--split needs 3 comma-separated ratios");
  }
  split_dataset(triples, ratios, o.seed);
  save_triples(o.out, triples);

  const DatasetStats st = dataset_stats(triples);
  const fs::path out_path(o.out);
  write_text_file((out_path.parent_path() / (out_path.stem().string() + "_stats.csv")).string(),
                  dataset_stats_csv(st));
  write_text_file((out_path.parent_path() / (out_path.stem().string() + "_stats.json")).string(),
                  dataset_stats_json(st));
  write_snapshot(app, out_path);

  if (triples.empty()) {
    std::cerr << "warning: corpus produced no triples\n";
  }
  std::cout << "wrote " << triples.size() << " triples to " << o.out << "\n";
}

// ---------------------------------------------------------------------------
// stats

struct StatsOpts {
  std::string triples, out;
};

void run_stats(CLI::App& app, const StatsOpts& o) {
  const std::vector<DialogTriple> triples = load_triples(o.triples);
  fs::create_directories(o.out);
  const fs::path dir(o.out);

  write_text_file((dir / "counts.csv").string(), dataset_stats_csv(dataset_stats(triples)));
  write_text_file((dir / "counts.json").string(), dataset_stats_json(dataset_stats(triples)));

  std::set<std::string> speakers;
  for (const auto& t : triples) speakers.insert(t.speaker);
  std::map<std::string, TransitionMatrix> per_speaker;
  std::vector<TransitionMatrix> matrices;
  for (const auto& s : speakers) {
    per_speaker[s] = transition_matrix(triples, &s);
    matrices.push_back(per_speaker[s]);
  }
  write_text_file((dir / "transitions.csv").string(), transitions_csv(per_speaker));

  if (!matrices.empty()) {
    write_text_file((dir / "row_deviation.csv").string(),
                    row_deviation_csv(transition_row_deviation(matrices)));
  }
  if (triples.size() >= 3) {
    write_text_file((dir / "trait_variation_spearman.csv").string(),
                    trait_variation_csv(mood_variation_correlation(triples)));
  }
  write_snapshot(app, dir);
  std::cout << "stats written to " << o.out << "\n";
}

// ---------------------------------------------------------------------------
// train / eval

struct TrainOpts {
  std::string triples, lexicon, checkpoint;
  std::string variant = "full";
  ModelFlags flags;
};

SplitFeatures load_split_features(const std::string& triples_path,
                                  const std::string& lexicon_path,
                                  const ModelFlags& flags) {
  const auto triples = load_triples(triples_path);
  const VadLexicon lex = load_lexicon_verbose(lexicon_path, flags.lexicon_rescale);
  return featurize_splits(triples, lex, flags.encoder);
}

void run_train(CLI::App& app, TrainOpts& o) {
  o.flags.resolve();
  const VariantSpec variant = VariantSpec::from_name(o.variant);
  const SplitFeatures data = load_split_features(o.triples, o.lexicon, o.flags);

  const TrainResult result = train(data, o.flags.encoder, o.flags.train, variant);
  save_checkpoint(o.checkpoint,
                  {result.params, o.flags.encoder, o.flags.train, o.variant});
  write_text_file(o.checkpoint + ".log.json", train_log_json(result.log));
  write_snapshot(app, fs::path(o.checkpoint));

  std::cout << "best epoch " << result.log.best_epoch << " val macro-F1 "
            << format_number(result.log.best_val_macro_f1) << "\n";
  std::cout << "checkpoint written to " << o.checkpoint << "\n";
}

struct EvalOpts {
  std::string triples, lexicon, checkpoint, out;
  std::string split = "test";
  bool lexicon_rescale = false;
};

void run_eval(CLI::App& app, const EvalOpts& o) {
  const CheckpointData ckpt = load_checkpoint(o.checkpoint);
  const VariantSpec variant = VariantSpec::from_name(ckpt.variant);
  const auto triples = load_triples(o.triples);
  const VadLexicon lex = load_lexicon_verbose(o.lexicon, o.lexicon_rescale);
  const SplitFeatures splits = featurize_splits(triples, lex, ckpt.encoder);

  FeatureSet set;
  if (o.split == "train") {
    set = splits.train;
  } else if (o.split == "valid") {
    set = splits.valid;
  } else if (o.split == "test") {
    set = splits.test;
  } else {
    throw ConfigError("unknown --split: " + o.split);
  }
  if (set.empty()) {
    throw DataError("eval: split '" + o.split + "' is empty");
  }
  if (variant.scramble_personality) {
    apply_personality_scramble(set, ckpt.train.seed);
  }

  const EvalReports rep =
      evaluate(set, ckpt.params, ckpt.encoder, ckpt.train.delta_norm, variant);
  fs::create_directories(o.out);
  const fs::path dir(o.out);
  const auto emos = emotion_names();
  const auto moods = mood_names();
  write_text_file((dir / "emotion_report.csv").string(),
                  classification_report_csv(rep.emotion, emos));
  write_text_file((dir / "emotion_report.json").string(),
                  classification_report_json(rep.emotion, emos));
  write_text_file((dir / "mood_report.csv").string(),
                  classification_report_csv(rep.mood, moods));
  write_text_file((dir / "mood_report.json").string(),
                  classification_report_json(rep.mood, moods));
  write_snapshot(app, dir);

  std::cout << "emotion macro-F1 " << format_number(rep.emotion.macro_f1)
            << " weighted-F1 " << format_number(rep.emotion.weighted_f1) << "\n";
}

// ---------------------------------------------------------------------------
// sweep / ablate

struct SweepOpts {
  std::string triples, lexicon, out;
  std::string seeds = "1,2,3,4,5,6,7,8,9,10";
  std::string variant = "full";
  ModelFlags flags;
};

void run_sweep(CLI::App& app, SweepOpts& o) {
  o.flags.resolve();
  const auto seeds = parse_seeds(o.seeds);
  const VariantSpec variant = VariantSpec::from_name(o.variant);
  const SplitFeatures data = load_split_features(o.triples, o.lexicon, o.flags);

  SeedSweepResult sweep = seed_sweep(data, o.flags.encoder, o.flags.train, seeds, variant);
  sweep.variant = o.variant;

  fs::create_directories(o.out);
  const fs::path dir(o.out);
  write_text_file((dir / "sweep.csv").string(), sweep_csv(sweep));
  write_text_file((dir / "summary.json").string(), sweep_summary_json(sweep));
  if (sweep.usable().size() >= 3) {
    write_text_file((dir / "cross_spearman.csv").string(),
                    cross_spearman_csv(cross_metric_spearman(sweep)));
  }
  write_snapshot(app, dir);
  std::cout << "sweep over " << seeds.size() << " seeds written to " << o.out << "\n";
}

struct AblateOpts {
  std::string triples, lexicon, out;
  std::string seeds = "1,2,3,4,5,6,7,8,9,10";
  std::string variants = "full,no-personality,no-mood,personality-concat,mood-aux";
  ModelFlags flags;
};

void run_ablate(CLI::App& app, AblateOpts& o) {
  o.flags.resolve();
  const auto seeds = parse_seeds(o.seeds);
  std::vector<std::string> variant_names;
  {
    std::stringstream ss(o.variants);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) variant_names.push_back(item);
    }
  }
  const SplitFeatures data = load_split_features(o.triples, o.lexicon, o.flags);

  std::map<std::string, SeedSweepResult> sweeps;
  std::string all_rows;
  for (const auto& name : variant_names) {
    SeedSweepResult sweep = seed_sweep(data, o.flags.encoder, o.flags.train, seeds,
                                       VariantSpec::from_name(name));
    sweep.variant = name;
    std::string rows = sweep_csv(sweep);
    if (!all_rows.empty()) {
      rows.erase(0, rows.find('\n') + 1);  // drop the repeated header
    }
    all_rows += rows;
    sweeps.emplace(name, std::move(sweep));
  }

  fs::create_directories(o.out);
  const fs::path dir(o.out);
  write_text_file((dir / "ablation.csv").string(), all_rows);
  {
    json summaries = json::array();
    for (const auto& [name, sweep] : sweeps) {
      (void)name;
      summaries.push_back(json::parse(sweep_summary_json(sweep)));
    }
    write_text_file((dir / "summary.json").string(), summaries.dump(2) + "\n");
  }

  // Welch's t-test of each variant against "full" on the per-seed F1s.
  if (sweeps.count("full")) {
    const auto collect = [](const SeedSweepResult& s, bool macro) {
      std::vector<double> xs;
      for (const auto* run : s.usable()) {
        xs.push_back(macro ? run->emotion.macro_f1 : run->emotion.weighted_f1);
      }
      return xs;
    };
    std::ostringstream welch;
    welch << "metric,variant,t,df,p\n";
    for (const auto& [name, sweep] : sweeps) {
      if (name == "full") continue;
      for (const bool macro : {true, false}) {
        const auto a = collect(sweeps.at("full"), macro);
        const auto b = collect(sweep, macro);
        if (a.size() < 2 || b.size() < 2) continue;
        const WelchResult w = welch_t_test(a, b);
        welch << (macro ? "macro_f1" : "weighted_f1") << ',' << name << ','
              << format_number(w.t) << ',' << format_number(w.df) << ','
              << format_number(w.p) << '\n';
      }
    }
    write_text_file((dir / "welch.csv").string(), welch.str());
  }
  write_snapshot(app, dir);
  std::cout << "ablation over " << variant_names.size() << " variants written to "
            << o.out << "\n";
}

// ---------------------------------------------------------------------------
// predict

struct PredictOpts {
  std::string checkpoint, lexicon, context, out;
  std::string personality;
  bool repl = false;
  bool lexicon_rescale = false;
};

Prediction predict_context(const CheckpointData& ckpt, const VadLexicon& lex,
                           const std::vector<std::pair<std::string, Emotion>>& context,
                           const Ocean& personality) {
  TripleInputs inputs;
  for (const auto& [text, emotion] : context) {
    inputs.utterances.push_back(tokenize(text, lex));
    inputs.emotions.push_back(emotion);
  }
  inputs.personality = personality;
  inputs.initial_mood = emotion_to_mood(context.front().second);

  const SampleFeatures f = featurize(inputs, ckpt.encoder);
  return predict(f, ckpt.params, ckpt.encoder, ckpt.train.delta_norm,
                 VariantSpec::from_name(ckpt.variant));
}

void run_predict(CLI::App& app, const PredictOpts& o) {
  const CheckpointData ckpt = load_checkpoint(o.checkpoint);
  const VadLexicon lex = load_lexicon_verbose(o.lexicon, o.lexicon_rescale);

  if (o.repl) {
    if (o.personality.empty()) {
      throw ConfigError("--repl needs --personality o,c,e,a,n");
    }
    const Ocean pers = parse_personality_arg(o.personality);
    std::vector<std::pair<std::string, Emotion>> window;
    std::string line;
    while (std::getline(std::cin, line)) {
      const auto tab = line.find('\t');
      if (tab == std::string::npos) {
        std::cerr << "expected: EMOTION<TAB>utterance\n";
        continue;
      }
      const auto emotion = emotion_from_string(line.substr(0, tab));
      if (!emotion) {
        std::cerr << "unknown emotion label: " << line.substr(0, tab) << "\n";
        continue;
      }
      window.emplace_back(line.substr(tab + 1), *emotion);
      if (window.size() > 2) window.erase(window.begin());
      std::cout << prediction_text(predict_context(ckpt, lex, window, pers));
    }
    return;
  }

  if (o.context.empty()) {
    throw ConfigError("predict needs --context FILE or --repl");
  }
  std::ifstream in(o.context, std::ios::binary);
  if (!in) {
    throw IoError("cannot open context file: " + o.context);
  }
  const json j = json::parse(in, nullptr, false);
  constexpr const char* kSchemaHint =
      "; expected {\"personality\": [5 reals in [0,1]], \"utterances\": "
      "[{\"text\": str, \"emotion\": label}, ...]}";
  if (j.is_discarded() || !j.is_object() || !j.contains("personality") ||
      !j.contains("utterances") || !j.at("utterances").is_array() ||
      j.at("utterances").empty()) {
    throw DataError("malformed context JSON" + std::string(kSchemaHint));
  }

  Ocean pers;
  const auto& jp = j.at("personality");
  if (!jp.is_array() || jp.size() != 5) {
    throw DataError("context personality must be 5 numbers" + std::string(kSchemaHint));
  }
  for (int i = 0; i < 5; ++i) pers[i] = jp[i].get<double>();

  std::vector<std::pair<std::string, Emotion>> context;
  for (const auto& ju : j.at("utterances")) {
    if (!ju.contains("text") || !ju.contains("emotion")) {
      throw DataError("context utterance needs text and emotion" +
                      std::string(kSchemaHint));
    }
    const auto emotion = emotion_from_string(ju.at("emotion").get<std::string>());
    if (!emotion) {
      throw DataError("unknown emotion label in context" + std::string(kSchemaHint));
    }
    context.emplace_back(ju.at("text").get<std::string>(), *emotion);
  }

  const std::string text = prediction_text(predict_context(ckpt, lex, context, pers));
  std::cout << text;
  if (!o.out.empty()) {
    write_text_file(o.out, text);
    write_snapshot(app, fs::path(o.out));
  }
}

// ---------------------------------------------------------------------------
// gradcheck

struct GradcheckOpts {
  std::uint64_t seed = 1;
  std::string out;
};

int run_gradcheck(CLI::App& app, const GradcheckOpts& o) {
  EncoderConfig enc;
  std::ostringstream report;
  report << "delta_norm,mood_loss_form,group,max_rel_err\n";
  double worst = 0.0;

  for (const DeltaNorm dn : {DeltaNorm::Softmax, DeltaNorm::Sigmoid}) {
    for (const MoodLossForm form : {MoodLossForm::AsWritten, MoodLossForm::Mse}) {
      LossConfig loss_cfg;
      loss_cfg.delta_norm = dn;
      loss_cfg.mood_loss_form = form;
      for (const auto& check : gradient_check(enc, loss_cfg, o.seed)) {
        report << to_string(dn) << ',' << to_string(form) << ',' << check.group
               << ',' << format_number(check.max_rel_err) << '\n';
        worst = std::max(worst, check.max_rel_err);
      }
    }
  }

  std::cout << report.str();
  std::cout << "worst relative error: " << format_number(worst) << "\n";
  if (!o.out.empty()) {
    write_text_file(o.out, report.str());
    write_snapshot(app, fs::path(o.out));
  }
  if (worst > kGradCheckTol) {
    std::cout << "FAIL (tolerance " << kGradCheckTol << ")\n";
    return 3;
  }
  std::cout << "PASS (tolerance " << kGradCheckTol << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Personality-aware mood transition and emotion prediction toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML config file (flags take precedence)");

  BuildTriplesOpts build_opts;
  auto* build = app.add_subcommand("build-triples",
                                   "Construct dyadic triples from a dialog corpus");
  build->add_option("--corpus", build_opts.corpus, "Dialog corpus JSONL")->required();
  build->add_option("--personalities", build_opts.personalities, "Personality JSONL")
      ->required();
  build->add_option("--out", build_opts.out, "Output triples JSONL")->required();
  build->add_option("--windowing", build_opts.windowing, "sliding | disjoint")
      ->capture_default_str();
  build->add_option("--split", build_opts.split, "train,valid,test ratios")
      ->capture_default_str();
  build->add_option("--seed", build_opts.seed, "Split shuffle seed")
      ->envname("MOODKIT_SEED")
      ->capture_default_str();

  StatsOpts stats_opts;
  auto* stats = app.add_subcommand("stats", "Dataset statistics and transition tables");
  stats->add_option("--triples", stats_opts.triples, "Triples JSONL")->required();
  stats->add_option("--out", stats_opts.out, "Output directory")->required();

  TrainOpts train_opts;
  auto* train_cmd = app.add_subcommand("train", "Train a model");
  train_cmd->add_option("--triples", train_opts.triples, "Triples JSONL")->required();
  train_cmd->add_option("--lexicon", train_opts.lexicon, "VAD lexicon TSV")->required();
  train_cmd->add_option("--checkpoint", train_opts.checkpoint, "Checkpoint to write")
      ->required();
  train_cmd->add_option("--variant", train_opts.variant,
                        "full | no-personality | no-mood | personality-concat | mood-aux")
      ->capture_default_str();
  add_model_flags(train_cmd, train_opts.flags);

  EvalOpts eval_opts;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint");
  eval_cmd->add_option("--triples", eval_opts.triples, "Triples JSONL")->required();
  eval_cmd->add_option("--lexicon", eval_opts.lexicon, "VAD lexicon TSV")->required();
  eval_cmd->add_option("--checkpoint", eval_opts.checkpoint, "Checkpoint to load")
      ->required();
  eval_cmd->add_option("--out", eval_opts.out, "Output directory")->required();
  eval_cmd->add_option("--split", eval_opts.split, "train | valid | test")
      ->capture_default_str();
  eval_cmd->add_flag("--lexicon-rescale", eval_opts.lexicon_rescale,
                     "Map lexicon values from [0,1] to [-1,1]");

  SweepOpts sweep_opts;
  auto* sweep = app.add_subcommand("sweep", "Multi-seed train/eval sweep");
  sweep->add_option("--triples", sweep_opts.triples, "Triples JSONL")->required();
  sweep->add_option("--lexicon", sweep_opts.lexicon, "VAD lexicon TSV")->required();
  sweep->add_option("--out", sweep_opts.out, "Output directory")->required();
  sweep->add_option("--seeds", sweep_opts.seeds, "Comma-separated seeds")
      ->capture_default_str();
  sweep->add_option("--variant", sweep_opts.variant, "Variant to sweep")
      ->capture_default_str();
  add_model_flags(sweep, sweep_opts.flags);

  AblateOpts ablate_opts;
  auto* ablate = app.add_subcommand("ablate", "Compare ablation variants over seeds");
  ablate->add_option("--triples", ablate_opts.triples, "Triples JSONL")->required();
  ablate->add_option("--lexicon", ablate_opts.lexicon, "VAD lexicon TSV")->required();
  ablate->add_option("--out", ablate_opts.out, "Output directory")->required();
  ablate->add_option("--seeds", ablate_opts.seeds, "Comma-separated seeds")
      ->capture_default_str();
  ablate->add_option("--variants", ablate_opts.variants, "Comma-separated variants")
      ->capture_default_str();
  add_model_flags(ablate, ablate_opts.flags);

  PredictOpts predict_opts;
  auto* predict_cmd = app.add_subcommand("predict", "Predict a response emotion");
  predict_cmd->add_option("--checkpoint", predict_opts.checkpoint, "Checkpoint to load")
      ->required();
  predict_cmd->add_option("--lexicon", predict_opts.lexicon, "VAD lexicon TSV")
      ->required();
  predict_cmd->add_option("--context", predict_opts.context, "Context JSON file");
  predict_cmd->add_option("--out", predict_opts.out, "Also write the output here");
  predict_cmd->add_option("--personality", predict_opts.personality,
                          "o,c,e,a,n for --repl");
  predict_cmd->add_flag("--repl", predict_opts.repl,
                        "Read EMOTION<TAB>utterance lines from stdin");
  predict_cmd->add_flag("--lexicon-rescale", predict_opts.lexicon_rescale,
                        "Map lexicon values from [0,1] to [-1,1]");

  GradcheckOpts grad_opts;
  auto* gradcheck = app.add_subcommand("gradcheck",
                                       "Finite-difference validation of the gradients");
  gradcheck->add_option("--seed", grad_opts.seed, "Seed for the check batches")
      ->envname("MOODKIT_SEED")
      ->capture_default_str();
  gradcheck->add_option("--out", grad_opts.out, "Also write the report here");

  int exit_code = 0;
  build->callback([&] { run_build_triples(app, build_opts); });
  stats->callback([&] { run_stats(app, stats_opts); });
  train_cmd->callback([&] { run_train(app, train_opts); });
  eval_cmd->callback([&] { run_eval(app, eval_opts); });
  sweep->callback([&] { run_sweep(app, sweep_opts); });
  ablate->callback([&] { run_ablate(app, ablate_opts); });
  predict_cmd->callback([&] { run_predict(app, predict_opts); });
  gradcheck->callback([&] { exit_code = run_gradcheck(app, grad_opts); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {  // IoError, DataError
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}
