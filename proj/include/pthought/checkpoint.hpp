#pragma once

// Self-describing JSON checkpoint: model config, vocabulary, every parameter
// tensor with its shape, and (optionally) the optimizer state for resuming.
// Doubles are written in shortest round-trip form, so save/load is bit-exact.

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "json.hpp"
#include "pthought/corpus.hpp"
#include "pthought/errors.hpp"
#include "pthought/model.hpp"
#include "pthought/train.hpp"

namespace pthought::checkpoint {

inline constexpr const char* kFormat = "pthought-checkpoint/1";

struct Checkpoint {
  model::ModelParams params;
  corpus::Vocab vocab;
  double alpha = 0.0;
  std::uint64_t seed = 0;
  std::size_t max_seq_len = corpus::kDefaultMaxSeqLen;
  std::optional<train::TrainState> state;
};

inline std::string hex64(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex;
  s.width(16);
  s.fill('0');
  s << v;
  return s.str();
}

inline nlohmann::json to_json(const Checkpoint& ck) {
  using nlohmann::json;
  const auto& c = ck.params.config;
  json j;
  j["format"] = kFormat;
  j["config"] = {{"variant", model::to_string(c.variant)},
                 {"vocab_size", c.vocab_size},
                 {"embed_dim", c.embed_dim},
                 {"hidden_dim", c.hidden_dim},
                 {"shared_projection", c.shared_projection},
                 {"alpha", ck.alpha},
                 {"seed", ck.seed},
                 {"max_seq_len", ck.max_seq_len}};
  j["vocab_hash"] = hex64(ck.vocab.hash());
  j["vocab"] = ck.vocab.tokens();
  json tensors = json::array();
  for (const auto& nt : ck.params.named()) {
    tensors.push_back({{"name", nt.name},
                       {"shape", nt.tensor.shape()},
                       {"data", std::vector<double>(nt.tensor.data().begin(), nt.tensor.data().end())}});
  }
  j["tensors"] = std::move(tensors);
  if (ck.state) {
    j["optimizer"] = {{"step", ck.state->adam.step},
                      {"epochs_done", ck.state->epochs_done},
                      {"m", ck.state->adam.m},
                      {"v", ck.state->adam.v}};
  }
  return j;
}

inline Checkpoint from_json(const nlohmann::json& j, const std::string& source) {
  try {
    if (j.value("format", std::string()) != kFormat) throw DataError(source + ": not a " + std::string(kFormat) + " file");
    const auto& jc = j.at("config");
    model::ModelConfig c;
    c.variant = model::parse_variant(jc.at("variant").get<std::string>());
    c.vocab_size = jc.at("vocab_size").get<std::size_t>();
    c.embed_dim = jc.at("embed_dim").get<std::size_t>();
    c.hidden_dim = jc.at("hidden_dim").get<std::size_t>();
    c.shared_projection = jc.at("shared_projection").get<bool>();

    Checkpoint ck;
    ck.alpha = jc.at("alpha").get<double>();
    ck.seed = jc.at("seed").get<std::uint64_t>();
    ck.max_seq_len = jc.at("max_seq_len").get<std::size_t>();
    ck.vocab = corpus::Vocab::from_tokens(j.at("vocab").get<std::vector<std::string>>());
    if (ck.vocab.size() != c.vocab_size) throw DataError(source + ": vocab size does not match config");
    if (hex64(ck.vocab.hash()) != j.at("vocab_hash").get<std::string>()) {
      throw DataError(source + ": vocab hash mismatch");
    }

    // Shapes come from a freshly laid-out model; values from the file.
    ck.params = model::init_params(c, 0);
    auto names = ck.params.named();
    auto slots = ck.params.slots();
    const auto& tensors = j.at("tensors");
    if (tensors.size() != slots.size()) {
      throw DataError(source + ": expected " + std::to_string(slots.size()) + " tensors, found " +
                      std::to_string(tensors.size()));
    }
    for (std::size_t i = 0; i < slots.size(); ++i) {
      const auto& jt = tensors[i];
      const auto name = jt.at("name").get<std::string>();
      if (name != names[i].name) throw DataError(source + ": tensor " + std::to_string(i) + " is \"" + name +
                                                 "\", expected \"" + names[i].name + "\"");
      auto shape = jt.at("shape").get<numkit::Shape>();
      if (shape != slots[i]->shape()) {
        throw DataError(source + ": tensor \"" + name + "\" has shape " + numkit::shape_str(shape) + ", expected " +
                        numkit::shape_str(slots[i]->shape()));
      }
      *slots[i] = numkit::Tensor(shape, jt.at("data").get<std::vector<double>>());
    }
    if (j.contains("optimizer")) {
      const auto& jo = j.at("optimizer");
      train::TrainState st;
      st.adam.step = jo.at("step").get<long>();
      st.epochs_done = jo.at("epochs_done").get<int>();
      st.adam.m = jo.at("m").get<std::vector<std::vector<double>>>();
      st.adam.v = jo.at("v").get<std::vector<std::vector<double>>>();
      ck.state = std::move(st);
    }
    return ck;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(source + ": malformed checkpoint: " + e.what());
  } catch (const ShapeError& e) {
    throw DataError(source + ": malformed checkpoint: " + e.what());
  }
}

inline void save(const std::string& path, const Checkpoint& ck) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write checkpoint " + path);
  out << to_json(ck).dump() << '\n';
  if (!out) throw DataError("failed writing checkpoint " + path);
}

inline Checkpoint load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(path + ": invalid checkpoint JSON: " + e.what());
  }
  return from_json(j, path);
}

}  // namespace pthought::checkpoint
