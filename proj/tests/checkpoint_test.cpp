#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "pthought/checkpoint.hpp"
#include "pthought/synthetic.hpp"

using namespace pthought;
using namespace pthought::checkpoint;

namespace {

struct Fixture {
  corpus::Vocab vocab;
  std::vector<corpus::SentencePair> pairs;
  model::ModelParams params;
};

Fixture fixture(model::EncoderVariant v = model::EncoderVariant::TwoLayerBi, bool shared = false) {
  std::vector<corpus::ParaphraseGroup> gs;
  for (const auto& r : synthetic::caption_groups(4, 4, 11)) gs.push_back(corpus::make_group(r));
  Fixture f;
  f.vocab = corpus::build_vocab(gs);
  f.pairs = corpus::make_all_pairs(gs, f.vocab);
  model::ModelConfig c;
  c.variant = v;
  c.vocab_size = f.vocab.size();
  c.hidden_dim = 6;
  c.embed_dim = 5;
  c.shared_projection = shared;
  f.params = model::init_params(c, 3);
  return f;
}

bool bit_equal(const model::ModelParams& a, const model::ModelParams& b) {
  auto x = a.named(), y = b.named();
  if (x.size() != y.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].name != y[i].name || x[i].tensor.shape() != y[i].tensor.shape()) return false;
    if (!std::equal(x[i].tensor.data().begin(), x[i].tensor.data().end(), y[i].tensor.data().begin())) return false;
  }
  return true;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("pthought_ck_" + name)).string();
}

}  // namespace

TEST(Checkpoint, RoundTripIsBitExact) {
  for (auto v : {model::EncoderVariant::OneLayerBi, model::EncoderVariant::TwoLayerForward,
                 model::EncoderVariant::TwoLayerBi}) {
    for (bool shared : {false, true}) {
      auto f = fixture(v, shared);
      train::TrainConfig cfg;
      cfg.epochs = 1;
      cfg.batch_size = 8;
      train::TrainState st;
      train::train(f.pairs, f.params, cfg, st);
      Checkpoint ck{f.params, f.vocab, cfg.alpha, cfg.seed, cfg.max_seq_len, st};
      const auto path = temp_path("rt.json");
      save(path, ck);
      auto back = load(path);
      EXPECT_TRUE(bit_equal(back.params, f.params));
      EXPECT_EQ(back.vocab.tokens(), f.vocab.tokens());
      EXPECT_EQ(back.alpha, cfg.alpha);
      EXPECT_EQ(back.params.config.variant, v);
      EXPECT_EQ(back.params.config.shared_projection, shared);
      ASSERT_TRUE(back.state.has_value());
      EXPECT_EQ(back.state->adam.step, st.adam.step);
      EXPECT_EQ(back.state->adam.m, st.adam.m);
      EXPECT_EQ(back.state->adam.v, st.adam.v);
      for (const auto& p : f.pairs) EXPECT_EQ(model::encode(p.source, back.params), model::encode(p.source, f.params));
      std::filesystem::remove(path);
    }
  }
}

TEST(Checkpoint, ResumeMatchesUninterruptedRun) {
  auto f = fixture();
  auto g = fixture();
  train::TrainConfig cfg;
  cfg.epochs = 3;
  cfg.batch_size = 8;
  train::train(f.pairs, f.params, cfg);

  train::TrainConfig first = cfg;
  first.epochs = 1;
  train::TrainState st;
  train::train(g.pairs, g.params, first, st);
  const auto path = temp_path("resume.json");
  save(path, {g.params, g.vocab, cfg.alpha, cfg.seed, cfg.max_seq_len, st});
  auto back = load(path);
  train::train(g.pairs, back.params, cfg, *back.state);
  EXPECT_TRUE(bit_equal(back.params, f.params));
  std::filesystem::remove(path);
}

TEST(Checkpoint, RejectsCorruptFiles) {
  auto f = fixture();
  auto j = to_json({f.params, f.vocab, 5.0, 1, 30, std::nullopt});
  EXPECT_FALSE(j.contains("optimizer"));

  auto bad_shape = j;
  bad_shape["tensors"][1]["shape"] = {1, 1};
  EXPECT_THROW(checkpoint::from_json(bad_shape, "x"), DataError);

  auto bad_name = j;
  bad_name["tensors"][2]["name"] = "nope";
  EXPECT_THROW(checkpoint::from_json(bad_name, "x"), DataError);

  auto bad_hash = j;
  bad_hash["vocab_hash"] = "0000000000000000";
  EXPECT_THROW(checkpoint::from_json(bad_hash, "x"), DataError);

  auto bad_format = j;
  bad_format["format"] = "other";
  EXPECT_THROW(checkpoint::from_json(bad_format, "x"), DataError);

  const auto path = temp_path("garbage.json");
  std::ofstream(path) << "{not json";
  EXPECT_THROW(load(path), DataError);
  std::filesystem::remove(path);
  EXPECT_THROW(load(temp_path("missing.json")), DataError);
}
