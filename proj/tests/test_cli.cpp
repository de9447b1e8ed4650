#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "subdp/biaffine.hpp"
#include "subdp/pipeline.hpp"
#include "subdp/projection.hpp"

using namespace subdp;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path dir;
  TempDir() {
    dir = fs::temp_directory_path() / "subdp_cli_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~TempDir() { fs::remove_all(dir); }
  std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

int run(const std::vector<std::string>& args) { return subdp::cli::run_cli(args); }

const std::vector<std::string> kTinyDims = {"--buckets", "512", "--embed", "12",
                                            "--hidden",  "12",  "--arc-dim", "12"};

std::vector<std::string> with_dims(std::vector<std::string> args) {
  args.insert(args.end(), kTinyDims.begin(), kTinyDims.end());
  return args;
}

}  // namespace

TEST_CASE("cli pipeline end to end on a tiny corpus") {
  TempDir tmp;

  // synth writes the file triple deterministically
  REQUIRE(run({"synth", "--out", tmp / "toy", "--seed", "21", "--n", "40", "--fusion", "0.4"}) == 0);
  const std::string src = slurp(tmp / "toy.src.conllu");
  REQUIRE(run({"synth", "--out", tmp / "toy2", "--seed", "21", "--n", "40", "--fusion", "0.4"}) == 0);
  CHECK(slurp(tmp / "toy2.src.conllu") == src);
  CHECK(slurp(tmp / "toy2.align") == slurp(tmp / "toy.align"));

  // deterministic source training: same seed, same bytes
  const std::vector<std::string> train_args = with_dims(
      {"train-source", "--train", tmp / "toy.src.conllu", "--dev", tmp / "toy.src.conllu",
       "--model", tmp / "m.bin", "--epochs", "2", "--lr", "0.05", "--seed", "3"});
  REQUIRE(run(train_args) == 0);
  const std::string model_bytes = slurp(tmp / "m.bin");
  std::vector<std::string> again = train_args;
  again[6] = tmp / "m2.bin";  // --model value
  REQUIRE(run(again) == 0);
  CHECK(slurp(tmp / "m2.bin") == model_bytes);
  CHECK(fs::exists(tmp / "m.bin.log"));

  // projection in the three modes
  REQUIRE(run({"project", "--model", tmp / "m.bin", "--bitext-src", tmp / "toy.src.conllu",
               "--bitext-tgt", tmp / "toy.tgt.conllu", "--align", tmp / "toy.align", "--out",
               tmp / "soft.txt"}) == 0);
  REQUIRE(run({"project", "--discrete", "--model", tmp / "m.bin", "--bitext-src",
               tmp / "toy.src.conllu", "--bitext-tgt", tmp / "toy.tgt.conllu", "--align",
               tmp / "toy.align", "--out", tmp / "soft_discrete.txt", "--align-mode",
               "one_to_one"}) == 0);
  REQUIRE(run({"project", "--mode", "hard", "--bitext-src", tmp / "toy.src.conllu",
               "--bitext-tgt", tmp / "toy.tgt.conllu", "--align", tmp / "toy.align", "--out",
               tmp / "hard.conllu"}) == 0);
  CHECK(read_soft_corpus_file(tmp / "soft.txt").records.size() == 40);
  CHECK(read_conllu_file(tmp / "hard.conllu", true).size() == 40);

  // target training from soft targets, initialized with the source model
  REQUIRE(run({"train-target", "--proj", tmp / "soft.txt", "--dev", tmp / "soft.txt", "--model",
               tmp / "mt.bin", "--init", tmp / "m.bin", "--epochs", "2", "--lr", "0.02",
               "--seed", "4"}) == 0);
  // and in hard mode from the partial treebank
  REQUIRE(run({"train-target", "--mode", "hard", "--proj", tmp / "hard.conllu", "--dev",
               tmp / "hard.conllu", "--model", tmp / "mh.bin", "--init", tmp / "m.bin",
               "--epochs", "2", "--lr", "0.02", "--seed", "4"}) == 0);
  // random init takes its label set from the corpus
  REQUIRE(run(with_dims({"train-target", "--proj", tmp / "soft.txt", "--model", tmp / "mr.bin",
                         "--init", "random", "--epochs", "1", "--lr", "0.02", "--seed", "4"})) ==
          0);

  // parse + eval: deterministic output, exit code 0
  REQUIRE(run({"parse", "--model", tmp / "mt.bin", "--test", tmp / "toy.tgt.conllu", "--out",
               tmp / "pred.conllu"}) == 0);
  const std::string pred = slurp(tmp / "pred.conllu");
  REQUIRE(run({"parse", "--model", tmp / "mt.bin", "--test", tmp / "toy.tgt.conllu", "--out",
               tmp / "pred2.conllu"}) == 0);
  CHECK(slurp(tmp / "pred2.conllu") == pred);
  CHECK(run({"eval", tmp / "pred.conllu", tmp / "toy.tgt.conllu"}) == 0);
}

TEST_CASE("empty bitext projects to an empty corpus file") {
  TempDir tmp;
  std::ofstream(tmp / "empty.src.conllu").close();
  std::ofstream(tmp / "empty.tgt.conllu").close();
  std::ofstream(tmp / "empty.align").close();
  const ParserModel m = ParserModel::random_init(
      []{ EncoderConfig c; c.vocab_hash_buckets = 32; c.embed_dim = 4; c.hidden_dim = 4;
          c.head_dim = 4; c.dep_dim = 4; c.seed = 1; return c; }(),
      LabelSet({"root", "det"}));
  save_model(m, tmp / "tiny.bin");
  REQUIRE(run({"project", "--model", tmp / "tiny.bin", "--bitext-src", tmp / "empty.src.conllu",
               "--bitext-tgt", tmp / "empty.tgt.conllu", "--align", tmp / "empty.align", "--out",
               tmp / "empty.soft"}) == 0);
  CHECK(read_soft_corpus_file(tmp / "empty.soft").records.empty());
}

TEST_CASE("cli reports usage and input errors with nonzero exit codes") {
  TempDir tmp;
  CHECK(run({"train-source", "--train", "x.conllu"}) != 0);  // missing --dev/--model
  CHECK(run({"nonsense"}) != 0);
  CHECK(run({}) != 0);
  CHECK(run({"parse", "--model", tmp / "missing.bin", "--test", tmp / "missing.conllu", "--out",
             tmp / "o.conllu"}) != 0);

  // sentence-count mismatch between bitext files
  REQUIRE(run({"synth", "--out", tmp / "a", "--seed", "1", "--n", "4"}) == 0);
  REQUIRE(run({"synth", "--out", tmp / "b", "--seed", "1", "--n", "5"}) == 0);
  CHECK(run({"project", "--discrete", "--bitext-src", tmp / "a.src.conllu", "--bitext-tgt",
             tmp / "b.tgt.conllu", "--align", tmp / "a.align", "--out", tmp / "x.txt"}) != 0);
}

TEST_CASE("train-target rejects a label-set mismatch with the init model") {
  TempDir tmp;
  REQUIRE(run({"synth", "--out", tmp / "c", "--seed", "2", "--n", "10"}) == 0);
  REQUIRE(run({"project", "--discrete", "--bitext-src", tmp / "c.src.conllu", "--bitext-tgt",
               tmp / "c.tgt.conllu", "--align", tmp / "c.align", "--out", tmp / "c.soft"}) == 0);
  // an init model whose label inventory is too small
  const ParserModel wrong = ParserModel::random_init(
      []{ EncoderConfig c; c.vocab_hash_buckets = 64; c.embed_dim = 4; c.hidden_dim = 4;
          c.head_dim = 4; c.dep_dim = 4; c.seed = 1; return c; }(),
      LabelSet({"a", "b", "c", "d", "e"}));
  save_model(wrong, tmp / "wrong.bin");
  CHECK(run({"train-target", "--proj", tmp / "c.soft", "--model", tmp / "never.bin", "--init",
             tmp / "wrong.bin", "--epochs", "1"}) != 0);
}

TEST_CASE("compare lists the requested systems") {
  TempDir tmp;
  REQUIRE(run({"synth", "--out", tmp / "d", "--seed", "3", "--n", "30", "--fusion", "0.4"}) == 0);
  REQUIRE(run(with_dims({"train-source", "--train", tmp / "d.src.conllu", "--dev",
                         tmp / "d.src.conllu", "--model", tmp / "dm.bin", "--epochs", "2",
                         "--lr", "0.05", "--seed", "5"})) == 0);
  REQUIRE(run({"compare", "--source-model", tmp / "dm.bin", "--bitext-src", tmp / "d.src.conllu",
               "--bitext-tgt", tmp / "d.tgt.conllu", "--align", tmp / "d.align", "--test",
               tmp / "d.tgt.conllu", "--mode", "subdp", "--mode", "hard", "--mode", "dt",
               "--mode", "st", "--epochs", "1", "--lr", "0.02", "--out", tmp / "report.txt"}) ==
          0);
  const std::string table = slurp(tmp / "report.txt");
  CHECK(table.find("subdp") != std::string::npos);
  CHECK(table.find("hard") != std::string::npos);
  CHECK(table.find("dt") != std::string::npos);
  CHECK(table.find("st") != std::string::npos);
  CHECK(table.find("UAS") != std::string::npos);
}
