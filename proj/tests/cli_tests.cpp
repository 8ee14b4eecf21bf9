// End-to-end tests of the command-line tool; each case runs the real binary
// in a scratch directory.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

fs::path scratch_dir() {
  static int counter = 0;
  const fs::path dir =
      fs::temp_directory_path() / ("moodkit_cli_" + std::to_string(counter++));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

CliResult run_cli(const std::string& args, const fs::path& dir,
                  const std::string& stdin_text = "") {
  const fs::path out = dir / "stdout.txt";
  const fs::path err = dir / "stderr.txt";
  std::string cmd = std::string(MOODKIT_CLI_PATH) + " " + args;
  if (!stdin_text.empty()) {
    const fs::path in = dir / "stdin.txt";
    std::ofstream(in, std::ios::binary) << stdin_text;
    cmd += " < " + in.string();
  }
  cmd += " > " + out.string() + " 2> " + err.string();

  const int raw = std::system(cmd.c_str());
  CliResult res;
  res.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  res.out = slurp(out);
  res.err = slurp(err);
  return res;
}

std::string fixture(const std::string& name) {
  return std::string(MOODKIT_FIXTURE_DIR) + "/" + name;
}

std::string golden(const std::string& name) {
  return std::string(MOODKIT_GOLDEN_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("build-triples produces the committed golden byte-for-byte") {
  const fs::path dir = scratch_dir();
  const std::string triples = (dir / "triples.jsonl").string();
  const CliResult r = run_cli("build-triples --corpus " + fixture("corpus60.jsonl") +
                                  " --personalities " + fixture("personalities.jsonl") +
                                  " --out " + triples + " --seed 13",
                              dir);
  REQUIRE(r.exit_code == 0);
  CHECK(slurp(triples) == slurp(golden("triples.jsonl")));
  CHECK(fs::exists(dir / "triples_stats.csv"));
  CHECK(fs::exists(dir / "triples.jsonl.config.toml"));

  // Re-running is byte-identical.
  const fs::path dir2 = scratch_dir();
  const std::string triples2 = (dir2 / "triples.jsonl").string();
  run_cli("build-triples --corpus " + fixture("corpus60.jsonl") +
              " --personalities " + fixture("personalities.jsonl") + " --out " +
              triples2 + " --seed 13",
          dir2);
  CHECK(slurp(triples) == slurp(triples2));
}

TEST_CASE("build-triples reports bad labels with line numbers") {
  const fs::path dir = scratch_dir();
  const fs::path bad = dir / "bad.jsonl";
  std::ofstream(bad) << R"({"dialogue_id":"d0","utterances":[{"speaker":"A","text":"x","emotion":"Grumpy"}]})"
                     << "\n";
  const CliResult r =
      run_cli("build-triples --corpus " + bad.string() + " --personalities " +
                  fixture("personalities.jsonl") + " --out " + (dir / "t.jsonl").string(),
              dir);
  CHECK(r.exit_code == 2);
  CHECK(r.err.find(":1:") != std::string::npos);
  CHECK(r.err.find("Grumpy") != std::string::npos);
}

TEST_CASE("build-triples on an empty corpus warns and exits zero") {
  const fs::path dir = scratch_dir();
  const fs::path empty = dir / "empty.jsonl";
  std::ofstream(empty).close();
  const CliResult r =
      run_cli("build-triples --corpus " + empty.string() + " --personalities " +
                  fixture("personalities.jsonl") + " --out " + (dir / "t.jsonl").string(),
              dir);
  CHECK(r.exit_code == 0);
  CHECK(r.err.find("no triples") != std::string::npos);
  CHECK(slurp(dir / "t.jsonl").empty());
}

TEST_CASE("stats emits the committed golden CSVs") {
  const fs::path dir = scratch_dir();
  const CliResult r = run_cli(
      "stats --triples " + golden("triples.jsonl") + " --out " + dir.string(), dir);
  REQUIRE(r.exit_code == 0);
  CHECK(slurp(dir / "counts.csv") == slurp(fixture("golden/counts.csv")));
  CHECK(slurp(dir / "transitions.csv") == slurp(fixture("golden/transitions.csv")));
  CHECK(slurp(dir / "row_deviation.csv") == slurp(fixture("golden/row_deviation.csv")));
  CHECK(slurp(dir / "trait_variation_spearman.csv") ==
        slurp(fixture("golden/trait_variation_spearman.csv")));
  CHECK(fs::exists(dir / "effective_config.toml"));

  SUBCASE("missing triples file exits with a data error") {
    const CliResult bad =
        run_cli("stats --triples /nonexistent.jsonl --out " + dir.string(), dir);
    CHECK(bad.exit_code == 2);
  }
}

TEST_CASE("train is deterministic and eval reads the checkpoint back") {
  const fs::path dir = scratch_dir();
  const std::string base = "train --triples " + fixture("synthetic_small.jsonl") +
                           " --lexicon " + fixture("synthetic_lexicon.tsv") +
                           " --epochs 3 --learning-rate 0.02 --seed 11 --checkpoint ";
  const CliResult a = run_cli(base + (dir / "a.ckpt").string(), dir);
  REQUIRE(a.exit_code == 0);
  const CliResult b = run_cli(base + (dir / "b.ckpt").string(), dir);
  REQUIRE(b.exit_code == 0);
  CHECK(slurp(dir / "a.ckpt") == slurp(dir / "b.ckpt"));
  CHECK(fs::exists(dir / "a.ckpt.log.json"));
  CHECK(fs::exists(dir / "a.ckpt.config.toml"));

  const CliResult ev = run_cli("eval --triples " + fixture("synthetic_small.jsonl") +
                                   " --lexicon " + fixture("synthetic_lexicon.tsv") +
                                   " --checkpoint " + (dir / "a.ckpt").string() +
                                   " --out " + (dir / "eval").string(),
                               dir);
  REQUIRE(ev.exit_code == 0);
  CHECK(fs::exists(dir / "eval" / "emotion_report.csv"));
  CHECK(fs::exists(dir / "eval" / "mood_report.json"));
}

TEST_CASE("config file values are overridden by flags") {
  const fs::path dir = scratch_dir();
  const fs::path cfg = dir / "run.toml";
  std::ofstream(cfg) << "[train]\nepochs=5\nseed=11\n";

  const CliResult r = run_cli("--config " + cfg.string() + " train --triples " +
                                  fixture("synthetic_small.jsonl") + " --lexicon " +
                                  fixture("synthetic_lexicon.tsv") + " --epochs 2" +
                                  " --learning-rate 0.02 --checkpoint " +
                                  (dir / "c.ckpt").string(),
                              dir);
  REQUIRE(r.exit_code == 0);
  const std::string snapshot = slurp(dir / "c.ckpt.config.toml");
  CHECK(snapshot.find("epochs=2") != std::string::npos);
  CHECK(snapshot.find("seed=11") != std::string::npos);
}

TEST_CASE("predict matches the committed golden output") {
  const fs::path dir = scratch_dir();
  const CliResult r = run_cli("predict --checkpoint " + fixture("fixture.ckpt") +
                                  " --lexicon " + fixture("synthetic_lexicon.tsv") +
                                  " --context " + fixture("context.json"),
                              dir);
  REQUIRE(r.exit_code == 0);
  CHECK(r.out == slurp(golden("predict_output.txt")));
}

TEST_CASE("predict rejects malformed context with a schema hint") {
  const fs::path dir = scratch_dir();
  const fs::path bad = dir / "bad_context.json";
  std::ofstream(bad) << R"({"utterances": []})";
  const CliResult r = run_cli("predict --checkpoint " + fixture("fixture.ckpt") +
                                  " --lexicon " + fixture("synthetic_lexicon.tsv") +
                                  " --context " + bad.string(),
                              dir);
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("expected") != std::string::npos);
}

TEST_CASE("predict repl keeps a rolling two-utterance context") {
  const fs::path dir = scratch_dir();
  const std::string input = "Joy\tso glad you came\nSadness\tthat is terrible news\n";
  const CliResult r = run_cli("predict --checkpoint " + fixture("fixture.ckpt") +
                                  " --lexicon " + fixture("synthetic_lexicon.tsv") +
                                  " --repl --personality 0.6,0.5,0.4,0.7,0.5",
                              dir, input);
  REQUIRE(r.exit_code == 0);
  // One prediction block per input line.
  std::size_t blocks = 0, pos = 0;
  while ((pos = r.out.find("emotion: ", pos)) != std::string::npos) {
    ++blocks;
    pos += 1;
  }
  CHECK(blocks == 2);
}

TEST_CASE("sweep and ablate emit their tables") {
  const fs::path dir = scratch_dir();
  const std::string common = " --triples " + fixture("synthetic_small.jsonl") +
                             " --lexicon " + fixture("synthetic_lexicon.tsv") +
                             " --epochs 2 --learning-rate 0.02 ";

  const CliResult sw = run_cli("sweep" + common + "--seeds 1,2,3 --out " +
                                   (dir / "sweep").string(),
                               dir);
  REQUIRE(sw.exit_code == 0);
  CHECK(fs::exists(dir / "sweep" / "sweep.csv"));
  CHECK(fs::exists(dir / "sweep" / "summary.json"));
  CHECK(fs::exists(dir / "sweep" / "cross_spearman.csv"));
  CHECK(fs::exists(dir / "sweep" / "effective_config.toml"));

  const CliResult ab = run_cli("ablate" + common +
                                   "--seeds 1,2 --variants full,no-mood --out " +
                                   (dir / "abl").string(),
                               dir);
  REQUIRE(ab.exit_code == 0);
  CHECK(fs::exists(dir / "abl" / "ablation.csv"));
  CHECK(fs::exists(dir / "abl" / "welch.csv"));
  CHECK(fs::exists(dir / "abl" / "summary.json"));
  const std::string welch = slurp(dir / "abl" / "welch.csv");
  CHECK(welch.find("macro_f1,no-mood,") != std::string::npos);
}

TEST_CASE("gradcheck passes and prints per-group errors") {
  const fs::path dir = scratch_dir();
  const CliResult r = run_cli("gradcheck --seed 5", dir);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("PASS") != std::string::npos);
  CHECK(r.out.find("cls_w") != std::string::npos);
}

TEST_CASE("usage errors exit 1") {
  const fs::path dir = scratch_dir();
  CHECK(run_cli("train", dir).exit_code == 1);          // missing required flags
  CHECK(run_cli("no-such-command", dir).exit_code == 1);
  CHECK(run_cli("--help", dir).exit_code == 0);
}

TEST_CASE("zero-weight checkpoint yields uniform probabilities") {
  const fs::path dir = scratch_dir();
  const CliResult r = run_cli("predict --checkpoint " + fixture("zero.ckpt") +
                                  " --lexicon " + fixture("synthetic_lexicon.tsv") +
                                  " --context " + fixture("context.json"),
                              dir);
  REQUIRE(r.exit_code == 0);
  // All seven probabilities print as 1/7.
  std::size_t count = 0, pos = 0;
  while ((pos = r.out.find("=0.142857", pos)) != std::string::npos) {
    ++count;
    pos += 1;
  }
  CHECK(count == 7);
}
