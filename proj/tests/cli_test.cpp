#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "pthought/pthought.hpp"

namespace fs = std::filesystem;
using namespace pthought;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("pthought_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  Result run(const std::string& args) const {
    const std::string log = path("stdout.txt");
    const std::string cmd = std::string(PTHOUGHT_CLI) + " " + args + " > " + log + " 2> " + path("stderr.txt");
    const int status = std::system(cmd.c_str());
    Result r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(log);
    return r;
  }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  void write(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }

  std::string synth(std::size_t groups, std::size_t per_group, const std::string& name = "corpus.jsonl") const {
    const auto r = run("synth-corpus --groups " + std::to_string(groups) + " --per-group " +
                       std::to_string(per_group) + " --seed 3 --out " + path(name));
    EXPECT_EQ(r.code, 0);
    return path(name);
  }

  std::string train_small(const std::string& corpus, const std::string& out_dir, const std::string& extra = "") const {
    const auto r = run("train " + corpus + " --out-dir " + path(out_dir) +
                       " --variant two-bi --hidden 4 --embed-dim 4 --epochs 1 --batch 16 " + extra);
    EXPECT_EQ(r.code, 0) << slurp(path("stderr.txt"));
    return path(out_dir + "/checkpoint.json");
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, HelpDocumentsFormats) {
  auto r = run("--help");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("embedding TSV"), std::string::npos);
  EXPECT_NE(r.out.find("STS TSV"), std::string::npos);
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("frobnicate").code, 1);
}

TEST_F(Cli, PairsCountsTwoGroupsOfFive) {
  const auto corpus = synth(2, 5);
  auto r = run("pairs " + corpus + " --out " + path("pairs.tsv"));
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("groups\t2\n"), std::string::npos);
  EXPECT_NE(r.out.find("sentences\t10\n"), std::string::npos);
  EXPECT_NE(r.out.find("pairs\t40\n"), std::string::npos);
  const auto tsv = slurp(path("pairs.tsv"));
  EXPECT_EQ(std::count(tsv.begin(), tsv.end(), '\n'), 40);
  EXPECT_TRUE(fs::exists(path("pairs.tsv.manifest.json")));
}

TEST_F(Cli, PairsMatchesBruteForceOn50Groups) {
  const auto corpus = synth(50, 5);
  auto r = run("pairs " + corpus + " --out " + path("pairs.tsv"));
  ASSERT_EQ(r.code, 0);
  std::size_t pairs = 0;
  for (const auto& g : corpus::read_corpus_jsonl(corpus)) {
    std::set<corpus::Tokens> distinct;
    for (const auto& c : g.captions) distinct.insert(corpus::tokenize(c));
    pairs += distinct.size() * (distinct.size() - 1);
  }
  EXPECT_NE(r.out.find("pairs\t" + std::to_string(pairs) + "\n"), std::string::npos) << r.out;
}

TEST_F(Cli, PairsErrors) {
  write("empty.jsonl", "");
  auto r = run("pairs " + path("empty.jsonl") + " --out " + path("p.tsv"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(slurp(path("stderr.txt")).find("no groups"), std::string::npos);
  write("bad.jsonl", "{\"id\": 1, \"captions\": [\"a b\", \"b a\"]}\n[1, 2\n");
  r = run("pairs " + path("bad.jsonl") + " --out " + path("p.tsv"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(slurp(path("stderr.txt")).find("bad.jsonl:2"), std::string::npos);
}

TEST_F(Cli, TrainRejectsBadFlags) {
  const auto corpus = synth(3, 4);
  EXPECT_EQ(run("train " + corpus + " --alpha 0 --out-dir " + path("r")).code, 1);
  EXPECT_NE(slurp(path("stderr.txt")).find("alpha"), std::string::npos);
  EXPECT_EQ(run("train " + corpus + " --variant three-bi --out-dir " + path("r")).code, 1);
  EXPECT_EQ(run("train " + corpus + " --epochs 0 --out-dir " + path("r")).code, 1);
}

TEST_F(Cli, TrainTwoBiHidden4GivesWidth8AndIsDeterministic) {
  const auto corpus = synth(4, 4);
  const auto a = train_small(corpus, "a");
  const auto b = train_small(corpus, "b");
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_EQ(slurp(path("a/loss_trace.tsv")), slurp(path("b/loss_trace.tsv")));
  EXPECT_TRUE(fs::exists(path("a/checkpoint-epoch1.json")));
  EXPECT_TRUE(fs::exists(path("a/manifest.json")));
  const auto ck = checkpoint::load(a);
  EXPECT_EQ(model::encode({4, 5, corpus::kEos}, ck.params).width(), 8u);

  ASSERT_EQ(run("embed " + corpus + " --checkpoint " + a + " --out " + path("emb.tsv")).code, 0);
  const auto set = metrics::read_embedding_tsv(path("emb.tsv"));
  EXPECT_EQ(set.rows(), 16u);
  EXPECT_EQ(set.groups[0].vectors[0].width(), 8u);
}

TEST_F(Cli, ConfigFileWithFlagOverride) {
  const auto corpus = synth(3, 4);
  write("cfg.txt", "hidden = 3\nembed_dim = 4\nepochs = 1\nalpha = 2\nvariant = one-bi\nbatch = 8\n");
  auto r = run("train " + corpus + " --config " + path("cfg.txt") + " --hidden 5 --out-dir " + path("r"));
  ASSERT_EQ(r.code, 0) << slurp(path("stderr.txt"));
  auto m = nlohmann::json::parse(slurp(path("r/manifest.json")));
  EXPECT_EQ(m["config"]["hidden"], 5);
  EXPECT_EQ(m["config"]["alpha"], 2.0);
  EXPECT_EQ(m["config"]["variant"], "one-bi");
  write("bad.txt", "no_such_flag = 1\n");
  EXPECT_EQ(run("train " + corpus + " --config " + path("bad.txt") + " --out-dir " + path("r2")).code, 1);
}

TEST_F(Cli, EmbedCardinalityUnkAndDeterminism) {
  const auto corpus = synth(5, 5);
  const auto ck = train_small(corpus, "run");
  ASSERT_EQ(run("embed " + corpus + " --checkpoint " + ck + " --out " + path("e1.tsv")).code, 0);
  ASSERT_EQ(run("embed " + corpus + " --checkpoint " + ck + " --out " + path("e2.tsv")).code, 0);
  EXPECT_EQ(metrics::read_embedding_tsv(path("e1.tsv")).rows(), 25u);
  EXPECT_EQ(slurp(path("e1.tsv")), slurp(path("e2.tsv")));

  write("oov.jsonl", "{\"id\": \"x\", \"captions\": [\"a zyzzyva is running\", \"a dog\"]}\n");
  EXPECT_EQ(run("embed " + path("oov.jsonl") + " --checkpoint " + ck + " --out " + path("o.tsv")).code, 2);
  EXPECT_NE(slurp(path("stderr.txt")).find("zyzzyva"), std::string::npos);
  auto r = run("embed " + path("oov.jsonl") + " --checkpoint " + ck + " --allow-unk --out " + path("o.tsv"));
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("unknown_tokens\t1"), std::string::npos);
  EXPECT_EQ(metrics::read_embedding_tsv(path("o.tsv")).rows(), 2u);
}

TEST_F(Cli, PCoherenceReport) {
  write("same.tsv", "a\t0\t1\t2\na\t1\t2\t4\nb\t0\t0\t1\nb\t1\t0\t3\n");
  auto r = run("eval-pcoherence " + path("same.tsv"));
  ASSERT_EQ(r.code, 0);
  ASSERT_NE(r.out.find("p_coherence_total\t"), std::string::npos) << r.out;
  EXPECT_NEAR(std::stod(r.out.substr(r.out.find("p_coherence_total\t") + 18)), 1.0, 1e-15);

  // Cosines 0.4 and 0.8 built from unit vectors.
  write("mix.tsv", "a\t0\t1\t0\na\t1\t0.4\t0.916515138991168\nb\t0\t1\t0\nb\t1\t0.8\t0.6\nc\t0\t5\t5\n");
  r = run("eval-pcoherence " + path("mix.tsv") + " --report " + path("groups.tsv"));
  ASSERT_EQ(r.code, 0);
  const auto pos = r.out.find("p_coherence_total\t");
  ASSERT_NE(pos, std::string::npos);
  EXPECT_NEAR(std::stod(r.out.substr(pos + 18)), 0.6, 1e-12);
  EXPECT_NE(slurp(path("stderr.txt")).find("\"c\""), std::string::npos);
  EXPECT_NE(slurp(path("groups.tsv")).find("b\t2\t0.8"), std::string::npos);
}

TEST_F(Cli, PCoherenceMatchesLibraryOnRandomFile) {
  Rng rng(4);
  metrics::EmbeddingSet set;
  for (int g = 0; g < 6; ++g) {
    metrics::EmbeddingGroup eg{"g" + std::to_string(g), {}, {}};
    for (int i = 0; i < 4; ++i) {
      SentenceVector v;
      for (int k = 0; k < 5; ++k) v.values.push_back(rng.uniform(-1, 1));
      eg.vectors.push_back(v);
      eg.sentence_index.push_back(i);
    }
    set.groups.push_back(eg);
  }
  {
    std::ofstream out(path("rand.tsv"));
    metrics::write_embedding_tsv(out, set);
  }
  auto r = run("eval-pcoherence " + path("rand.tsv"));
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("p_coherence_total\t" + format_double(metrics::p_coherence_total(set))), std::string::npos);
}

TEST_F(Cli, EvalStsReportsAndValidates) {
  const auto corpus = synth(6, 5);
  const auto ck = train_small(corpus, "run");
  auto raw = corpus::read_corpus_jsonl(corpus);
  std::ostringstream sts;
  Rng rng(1);
  for (int i = 0; i < 60; ++i) {
    const auto& g1 = raw[rng.below(raw.size())];
    const auto& g2 = raw[rng.below(raw.size())];
    const char* split = i < 40 ? "train" : i < 45 ? "dev" : "test";
    sts << split << '\t' << (g1.id == g2.id ? 4.5 : 1.0 + rng.uniform(0, 1)) << '\t' << g1.captions[0] << '\t'
        << g2.captions[1] << '\n';
  }
  write("sts.tsv", sts.str());
  auto r1 = run("eval-sts " + path("sts.tsv") + " --checkpoint " + ck + " --steps 50");
  ASSERT_EQ(r1.code, 0) << slurp(path("stderr.txt"));
  EXPECT_NE(r1.out.find("test_pearson\t"), std::string::npos);
  auto r2 = run("eval-sts " + path("sts.tsv") + " --checkpoint " + ck + " --steps 50");
  EXPECT_EQ(r1.out, r2.out);

  write("no_test.tsv", "train\t3\ta dog\ta cat\ntrain\t2\ta dog\ta man\n");
  EXPECT_EQ(run("eval-sts " + path("no_test.tsv") + " --checkpoint " + ck).code, 2);
  write("flat.tsv", "train\t3\ta dog\ta cat\ntrain\t2\ta dog\ta man\ntest\t3\ta dog\ta cat\ntest\t3\ta man\ta cat\n");
  EXPECT_EQ(run("eval-sts " + path("flat.tsv") + " --checkpoint " + ck).code, 2);
  EXPECT_NE(slurp(path("stderr.txt")).find("variance"), std::string::npos);
}

TEST_F(Cli, ProjectWritesOneRowPerVector) {
  std::ostringstream tsv;
  Rng rng(2);
  for (int g = 0; g < 5; ++g) {
    for (int i = 0; i < 5; ++i) {
      tsv << "g" << g << '\t' << i;
      for (int k = 0; k < 6; ++k) tsv << '\t' << rng.uniform(-1, 1);
      tsv << '\n';
    }
  }
  write("emb.tsv", tsv.str());
  auto r = run("project " + path("emb.tsv") + " --out " + path("xy.tsv"));
  ASSERT_EQ(r.code, 0);
  const auto xy = slurp(path("xy.tsv"));
  EXPECT_EQ(std::count(xy.begin(), xy.end(), '\n'), 25);
  const double v1 = std::stod(r.out.substr(r.out.find("variance_1\t") + 11));
  const double v2 = std::stod(r.out.substr(r.out.find("variance_2\t") + 11));
  EXPECT_GE(v1, v2);

  write("narrow.tsv", "a\t0\t1\na\t1\t2\n");
  EXPECT_EQ(run("project " + path("narrow.tsv") + " --out " + path("n.tsv")).code, 2);
  write("same.tsv", "a\t0\t1\t2\na\t1\t1\t2\n");
  ASSERT_EQ(run("project " + path("same.tsv") + " --out " + path("s.tsv")).code, 0);
  EXPECT_EQ(slurp(path("s.tsv")), "0\t0\ta\n0\t0\ta\n");
}

TEST_F(Cli, ReplayReproducesOutputs) {
  const auto corpus = synth(3, 4);
  train_small(corpus, "run");
  auto r = run("replay " + path("run/manifest.json"));
  EXPECT_EQ(r.code, 0) << slurp(path("stderr.txt"));
  EXPECT_NE(r.out.find("replay reproduced all outputs"), std::string::npos);

  write(corpus.substr(dir_.string().size() + 1), "{\"id\": 1, \"captions\": [\"x\", \"y\"]}\n");
  EXPECT_EQ(run("replay " + path("run/manifest.json")).code, 2);
}
