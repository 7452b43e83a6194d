#pragma once

// GRU sequence-to-sequence network with one encoder and two decoders: the
// auto-decoder regenerates the input sentence, the paraphrase-decoder
// generates its paraphrase. Both are seeded from the same sentence vector.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pthought/corpus.hpp"
#include "pthought/errors.hpp"
#include "pthought/numkit.hpp"
#include "pthought/random.hpp"
#include "pthought/sentence_vector.hpp"

namespace pthought::model {

using numkit::Tensor;
using corpus::TokenIds;

enum class EncoderVariant { OneLayerBi, TwoLayerForward, TwoLayerBi };

inline std::string to_string(EncoderVariant v) {
  switch (v) {
    case EncoderVariant::OneLayerBi: return "one-bi";
    case EncoderVariant::TwoLayerForward: return "two-forward";
    case EncoderVariant::TwoLayerBi: return "two-bi";
  }
  return "?";
}

inline EncoderVariant parse_variant(const std::string& name) {
  if (name == "one-bi") return EncoderVariant::OneLayerBi;
  if (name == "two-forward") return EncoderVariant::TwoLayerForward;
  if (name == "two-bi") return EncoderVariant::TwoLayerBi;
  throw ConfigError("unknown encoder variant \"" + name + "\" (expected one-bi, two-forward or two-bi)");
}

struct EncoderConfig {
  EncoderVariant variant = EncoderVariant::OneLayerBi;
  std::size_t hidden_dim = 32;

  /// Every variant concatenates exactly two final states.
  std::size_t width() const { return 2 * hidden_dim; }
};

struct ModelConfig {
  EncoderVariant variant = EncoderVariant::OneLayerBi;
  std::size_t vocab_size = 0;
  std::size_t embed_dim = 32;
  std::size_t hidden_dim = 32;
  bool shared_projection = false;

  EncoderConfig encoder() const { return {variant, hidden_dim}; }
};

/// Uniform(-a, a) with a = sqrt(6 / (fan_in + fan_out)).
inline Tensor xavier_init(std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double a = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  Tensor w({fan_in, fan_out});
  for (double& v : w.data()) v = rng.uniform(-a, a);
  return w;
}

inline Tensor xavier_init(const numkit::Shape& shape, std::uint64_t seed) {
  if (shape.size() != 2) throw ShapeError("xavier_init: expected a 2-D shape, got " + numkit::shape_str(shape));
  Rng rng(seed);
  return xavier_init(shape[0], shape[1], rng);
}

struct GRUParams {
  Tensor w_z, w_r, w_h;  // input_dim x hidden_dim
  Tensor u_z, u_r, u_h;  // hidden_dim x hidden_dim
  Tensor b_z, b_r, b_h;  // 1 x hidden_dim

  std::size_t input_dim() const { return w_z.shape()[0]; }
  std::size_t hidden_dim() const { return u_z.shape()[0]; }

  static GRUParams zeros(std::size_t input_dim, std::size_t hidden_dim) {
    GRUParams p;
    p.w_z = Tensor({input_dim, hidden_dim});
    p.w_r = Tensor({input_dim, hidden_dim});
    p.w_h = Tensor({input_dim, hidden_dim});
    p.u_z = Tensor({hidden_dim, hidden_dim});
    p.u_r = Tensor({hidden_dim, hidden_dim});
    p.u_h = Tensor({hidden_dim, hidden_dim});
    p.b_z = Tensor({1, hidden_dim});
    p.b_r = Tensor({1, hidden_dim});
    p.b_h = Tensor({1, hidden_dim});
    return p;
  }

  static GRUParams xavier(std::size_t input_dim, std::size_t hidden_dim, Rng& rng) {
    GRUParams p = zeros(input_dim, hidden_dim);
    p.w_z = xavier_init(input_dim, hidden_dim, rng);
    p.w_r = xavier_init(input_dim, hidden_dim, rng);
    p.w_h = xavier_init(input_dim, hidden_dim, rng);
    p.u_z = xavier_init(hidden_dim, hidden_dim, rng);
    p.u_r = xavier_init(hidden_dim, hidden_dim, rng);
    p.u_h = xavier_init(hidden_dim, hidden_dim, rng);
    return p;
  }
};

/// Decoder cell plus the learned bridge from the sentence vector to its initial state.
struct DecoderParams {
  GRUParams cell;
  Tensor init_w;  // (2 * hidden) x hidden
  Tensor init_b;  // 1 x hidden
};

/// Hidden state to vocabulary logits.
struct Projection {
  Tensor w;  // hidden x |V|
  Tensor b;  // 1 x |V|
};

struct NamedTensor {
  std::string name;
  Tensor tensor;
};

enum class Decoder { Auto, Paraphrase };

struct ModelParams {
  ModelConfig config;
  Tensor embedding;               // |V| x embed_dim, shared by encoder and both decoders
  std::vector<GRUParams> encoder;  // see encoder_layout()
  DecoderParams auto_decoder;
  DecoderParams para_decoder;
  Projection auto_out;
  Projection para_out;  // undefined when config.shared_projection

  const DecoderParams& decoder(Decoder d) const { return d == Decoder::Auto ? auto_decoder : para_decoder; }
  const Projection& projection(Decoder d) const {
    return (d == Decoder::Auto || config.shared_projection) ? auto_out : para_out;
  }

  /// Every tensor in a fixed order; names are stable across runs.
  std::vector<NamedTensor> named() const {
    std::vector<NamedTensor> out;
    out.push_back({"embedding", embedding});
    auto add_gru = [&out](const std::string& prefix, const GRUParams& g) {
      out.push_back({prefix + ".w_z", g.w_z});
      out.push_back({prefix + ".w_r", g.w_r});
      out.push_back({prefix + ".w_h", g.w_h});
      out.push_back({prefix + ".u_z", g.u_z});
      out.push_back({prefix + ".u_r", g.u_r});
      out.push_back({prefix + ".u_h", g.u_h});
      out.push_back({prefix + ".b_z", g.b_z});
      out.push_back({prefix + ".b_r", g.b_r});
      out.push_back({prefix + ".b_h", g.b_h});
    };
    for (std::size_t i = 0; i < encoder.size(); ++i) add_gru("encoder." + std::to_string(i), encoder[i]);
    auto add_decoder = [&](const std::string& prefix, const DecoderParams& d) {
      add_gru(prefix + ".cell", d.cell);
      out.push_back({prefix + ".init_w", d.init_w});
      out.push_back({prefix + ".init_b", d.init_b});
    };
    add_decoder("auto_decoder", auto_decoder);
    add_decoder("para_decoder", para_decoder);
    out.push_back({"auto_out.w", auto_out.w});
    out.push_back({"auto_out.b", auto_out.b});
    if (!config.shared_projection) {
      out.push_back({"para_out.w", para_out.w});
      out.push_back({"para_out.b", para_out.b});
    }
    return out;
  }

  /// Tensors the optimizer updates; the embedding table only when unfrozen.
  std::vector<NamedTensor> trainable(bool include_embedding) const {
    auto all = named();
    if (!include_embedding) all.erase(all.begin());
    return all;
  }

  /// Deep copy with independent buffers.
  ModelParams clone() const {
    ModelParams c = *this;
    auto src = named();
    std::vector<Tensor*> dst = c.slots();
    for (std::size_t i = 0; i < src.size(); ++i) *dst[i] = src[i].tensor.clone();
    return c;
  }

  /// Mutable slots in the same order as named().
  std::vector<Tensor*> slots() {
    std::vector<Tensor*> out{&embedding};
    auto add_gru = [&out](GRUParams& g) {
      for (Tensor* t : {&g.w_z, &g.w_r, &g.w_h, &g.u_z, &g.u_r, &g.u_h, &g.b_z, &g.b_r, &g.b_h}) out.push_back(t);
    };
    for (auto& g : encoder) add_gru(g);
    for (DecoderParams* d : {&auto_decoder, &para_decoder}) {
      add_gru(d->cell);
      out.push_back(&d->init_w);
      out.push_back(&d->init_b);
    }
    out.push_back(&auto_out.w);
    out.push_back(&auto_out.b);
    if (!config.shared_projection) {
      out.push_back(&para_out.w);
      out.push_back(&para_out.b);
    }
    return out;
  }
};

/// Encoder layer input widths per variant, in storage order.
/// one-bi: {fwd, bwd}; two-forward: {layer1, layer2}; two-bi: {fwd1, bwd1, fwd2, bwd2}.
inline std::vector<std::size_t> encoder_layout(const ModelConfig& c) {
  switch (c.variant) {
    case EncoderVariant::OneLayerBi: return {c.embed_dim, c.embed_dim};
    case EncoderVariant::TwoLayerForward: return {c.embed_dim, c.hidden_dim};
    case EncoderVariant::TwoLayerBi: return {c.embed_dim, c.embed_dim, 2 * c.hidden_dim, 2 * c.hidden_dim};
  }
  return {};
}

/// Xavier-initialized weights, zero biases. The embedding table is taken as
/// given when supplied (its width fixes embed_dim), otherwise drawn from the
/// seeded fallback distribution.
inline ModelParams init_params(ModelConfig config, std::uint64_t seed,
                               const std::optional<corpus::EmbeddingTable>& embedding = std::nullopt) {
  if (config.vocab_size < 5) throw ConfigError("vocab_size must cover the reserved tokens plus at least one word");
  if (config.hidden_dim == 0) throw ConfigError("hidden_dim must be positive");
  ModelParams p;
  if (embedding) {
    if (embedding->rows.shape()[0] != config.vocab_size) {
      throw ShapeError("embedding table has " + std::to_string(embedding->rows.shape()[0]) + " rows, vocab has " +
                       std::to_string(config.vocab_size));
    }
    config.embed_dim = embedding->dim;
    p.embedding = embedding->rows.clone();
  } else {
    if (config.embed_dim == 0) throw ConfigError("embed_dim must be positive");
    Rng rng(mix_seed(seed, 0xE3B));
    p.embedding = Tensor({config.vocab_size, config.embed_dim});
    for (double& v : p.embedding.data()) v = rng.uniform(-0.1, 0.1);
    for (std::size_t c = 0; c < config.embed_dim; ++c) p.embedding(corpus::kPad, c) = 0.0;
  }
  p.config = config;
  Rng rng(mix_seed(seed, 0x1A1));
  const std::size_t h = config.hidden_dim;
  for (std::size_t in : encoder_layout(config)) p.encoder.push_back(GRUParams::xavier(in, h, rng));
  for (DecoderParams* d : {&p.auto_decoder, &p.para_decoder}) {
    d->cell = GRUParams::xavier(config.embed_dim, h, rng);
    d->init_w = xavier_init(2 * h, h, rng);
    d->init_b = Tensor({1, h});
  }
  p.auto_out = {xavier_init(h, config.vocab_size, rng), Tensor({1, config.vocab_size})};
  if (!config.shared_projection) {
    p.para_out = {xavier_init(h, config.vocab_size, rng), Tensor({1, config.vocab_size})};
  }
  return p;
}

// ---------------------------------------------------------------------------
// Recurrence

namespace detail {

inline Tensor bias_rows(const Tensor& bias, std::size_t rows) {
  return numkit::matmul(Tensor({rows, 1}, 1.0), bias);
}

inline Tensor affine(const Tensor& x, const Tensor& w, const Tensor& b) {
  return numkit::add(numkit::matmul(x, w), bias_rows(b, x.rows()));
}

}  // namespace detail

/// One GRU update for a batch of rows:
///   z = sigmoid(x W_z + h U_z + b_z), r = sigmoid(x W_r + h U_r + b_r)
///   c = tanh(x W_h + (r * h) U_h + b_h), h' = (1 - z) * h + z * c
inline Tensor gru_step(const Tensor& x, const Tensor& h, const GRUParams& p) {
  using namespace numkit;
  if (x.rank() != 2 || h.rank() != 2 || x.rows() != h.rows() || x.cols() != p.input_dim() ||
      h.cols() != p.hidden_dim()) {
    throw ShapeError("gru_step: input " + shape_str(x.shape()) + " / state " + shape_str(h.shape()) +
                     " do not match cell " + std::to_string(p.input_dim()) + "->" + std::to_string(p.hidden_dim()));
  }
  const std::size_t n = x.rows();
  Tensor z = sigmoid(add(add(matmul(x, p.w_z), matmul(h, p.u_z)), detail::bias_rows(p.b_z, n)));
  Tensor r = sigmoid(add(add(matmul(x, p.w_r), matmul(h, p.u_r)), detail::bias_rows(p.b_r, n)));
  Tensor c = numkit::tanh(add(add(matmul(x, p.w_h), matmul(mul(r, h), p.u_h)), detail::bias_rows(p.b_h, n)));
  return add(h, mul(z, sub(c, h)));
}

/// Column-major view of a padded batch: ids[t][b] is token t of sequence b.
struct PaddedBatch {
  std::size_t batch = 0;
  std::size_t steps = 0;
  std::vector<std::vector<std::size_t>> ids;  // steps x batch, PAD beyond each length
  std::vector<std::size_t> lengths;

  bool padded_at(std::size_t t) const {
    for (auto len : lengths) {
      if (t >= len) return true;
    }
    return false;
  }
};

/// Right-pads sequences with PAD up to the longest one (or `min_steps` if larger).
inline PaddedBatch pad_batch(std::span<const TokenIds* const> seqs, std::size_t min_steps = 0) {
  if (seqs.empty()) throw ShapeError("pad_batch: empty batch");
  PaddedBatch b;
  b.batch = seqs.size();
  b.steps = min_steps;
  for (const TokenIds* s : seqs) {
    if (s->empty()) throw ShapeError("pad_batch: empty sequence");
    b.lengths.push_back(s->size());
    b.steps = std::max(b.steps, s->size());
  }
  b.ids.assign(b.steps, std::vector<std::size_t>(b.batch, corpus::kPad));
  for (std::size_t i = 0; i < b.batch; ++i) {
    for (std::size_t t = 0; t < seqs[i]->size(); ++t) b.ids[t][i] = (*seqs[i])[t];
  }
  return b;
}

inline PaddedBatch pad_batch(const std::vector<TokenIds>& seqs, std::size_t min_steps = 0) {
  std::vector<const TokenIds*> ptrs;
  for (const auto& s : seqs) ptrs.push_back(&s);
  return pad_batch(std::span<const TokenIds* const>(ptrs), min_steps);
}

namespace detail {

// Row mask (batch x width): 1 where step t is inside the sequence.
inline Tensor step_mask(const PaddedBatch& b, std::size_t t, std::size_t width) {
  Tensor m({b.batch, width});
  for (std::size_t i = 0; i < b.batch; ++i) {
    if (t < b.lengths[i]) {
      for (std::size_t c = 0; c < width; ++c) m(i, c) = 1.0;
    }
  }
  return m;
}

struct RnnRun {
  std::vector<Tensor> states;  // state after consuming step t, indexed by t
  Tensor final_state;
};

// Runs one GRU over all steps. Past a sequence's end (or before its start,
// when reversed) the state is held, so final_state is the state at the real
// boundary of each row.
inline RnnRun run_rnn(const GRUParams& cell, const std::vector<Tensor>& inputs, const PaddedBatch& b, bool reverse) {
  const std::size_t h = cell.hidden_dim();
  Tensor state({b.batch, h});
  RnnRun run;
  run.states.resize(b.steps);
  for (std::size_t k = 0; k < b.steps; ++k) {
    const std::size_t t = reverse ? b.steps - 1 - k : k;
    Tensor next = gru_step(inputs[t], state, cell);
    if (b.padded_at(t)) {
      next = numkit::add(state, numkit::mul(step_mask(b, t, h), numkit::sub(next, state)));
    }
    state = next;
    run.states[t] = state;
  }
  run.final_state = state;
  return run;
}

}  // namespace detail

/// Sentence vectors (batch x 2*hidden) for a padded batch of EOS-terminated sequences.
inline Tensor encode_batch(const ModelParams& p, const PaddedBatch& b) {
  using numkit::concat;
  std::vector<Tensor> inputs;
  inputs.reserve(b.steps);
  for (std::size_t t = 0; t < b.steps; ++t) inputs.push_back(numkit::gather_rows(p.embedding, b.ids[t]));

  switch (p.config.variant) {
    case EncoderVariant::OneLayerBi: {
      auto fwd = detail::run_rnn(p.encoder[0], inputs, b, false);
      auto bwd = detail::run_rnn(p.encoder[1], inputs, b, true);
      return concat({fwd.final_state, bwd.final_state}, 1);
    }
    case EncoderVariant::TwoLayerForward: {
      auto first = detail::run_rnn(p.encoder[0], inputs, b, false);
      auto second = detail::run_rnn(p.encoder[1], first.states, b, false);
      return concat({first.final_state, second.final_state}, 1);
    }
    case EncoderVariant::TwoLayerBi: {
      auto fwd1 = detail::run_rnn(p.encoder[0], inputs, b, false);
      auto bwd1 = detail::run_rnn(p.encoder[1], inputs, b, true);
      std::vector<Tensor> mid;
      mid.reserve(b.steps);
      for (std::size_t t = 0; t < b.steps; ++t) mid.push_back(concat({fwd1.states[t], bwd1.states[t]}, 1));
      auto fwd2 = detail::run_rnn(p.encoder[2], mid, b, false);
      auto bwd2 = detail::run_rnn(p.encoder[3], mid, b, true);
      return concat({fwd2.final_state, bwd2.final_state}, 1);
    }
  }
  throw ConfigError("unknown encoder variant");
}

inline SentenceVector to_sentence_vector(const Tensor& row_vector) {
  return {std::vector<double>(row_vector.data().begin(), row_vector.data().end())};
}

/// Encodes one id sequence (normally EOS-terminated). Records nothing.
inline SentenceVector encode(const TokenIds& tokens, const ModelParams& p) {
  if (tokens.empty()) throw ShapeError("encode: empty token sequence");
  numkit::TapeScope off(nullptr);
  return to_sentence_vector(encode_batch(p, pad_batch(std::vector<TokenIds>{tokens})));
}

/// Encodes many sequences in chunks; row order follows `sequences`.
inline std::vector<SentenceVector> encode_all(const std::vector<TokenIds>& sequences, const ModelParams& p,
                                              std::size_t chunk = 64) {
  numkit::TapeScope off(nullptr);
  std::vector<SentenceVector> out;
  out.reserve(sequences.size());
  for (std::size_t start = 0; start < sequences.size(); start += chunk) {
    const std::size_t end = std::min(sequences.size(), start + chunk);
    std::vector<const TokenIds*> ptrs;
    for (std::size_t i = start; i < end; ++i) {
      if (sequences[i].empty()) throw ShapeError("encode: empty token sequence");
      ptrs.push_back(&sequences[i]);
    }
    Tensor sv = encode_batch(p, pad_batch(std::span<const TokenIds* const>(ptrs)));
    const std::size_t w = sv.cols();
    for (std::size_t r = 0; r < sv.rows(); ++r) {
      out.push_back({std::vector<double>(sv.data().begin() + r * w, sv.data().begin() + (r + 1) * w)});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Decoding

/// Teacher-forced negative log likelihood of padded targets given sentence
/// vectors `sv` (batch x 2*hidden). Each sentence contributes the mean NLL over
/// its own (unpadded) steps; the result is the mean over the batch.
inline Tensor decoder_nll_batch(const Tensor& sv, const PaddedBatch& targets, const DecoderParams& dec,
                                const Projection& proj, const Tensor& embedding) {
  using namespace numkit;
  if (sv.rank() != 2 || sv.rows() != targets.batch || sv.cols() != dec.init_w.shape()[0]) {
    throw ShapeError("decoder_nll: sentence vectors " + shape_str(sv.shape()) + " do not match decoder bridge " +
                     shape_str(dec.init_w.shape()) + " for batch " + std::to_string(targets.batch));
  }
  const std::size_t vocab = proj.w.shape()[1];
  Tensor state = detail::affine(sv, dec.init_w, dec.init_b);
  Tensor total;
  std::vector<std::size_t> prev(targets.batch, corpus::kSos);
  for (std::size_t t = 0; t < targets.steps; ++t) {
    Tensor x = gather_rows(embedding, prev);
    state = gru_step(x, state, dec.cell);
    Tensor logp = log_softmax(detail::affine(state, proj.w, proj.b), 1);
    Tensor weights({targets.batch, vocab});
    for (std::size_t i = 0; i < targets.batch; ++i) {
      if (t < targets.lengths[i]) {
        const std::size_t gold = targets.ids[t][i];
        if (gold >= vocab) throw ShapeError("decoder_nll: target id " + std::to_string(gold) + " outside vocabulary");
        weights(i, gold) = 1.0 / static_cast<double>(targets.lengths[i]);
      }
    }
    Tensor picked = sum(mul(logp, weights));
    total = total.defined() ? add(total, picked) : picked;
    prev = targets.ids[t];
  }
  return scale(total, -1.0 / static_cast<double>(targets.batch));
}

/// Mean per-token NLL of one target sequence given one sentence vector.
inline Tensor decoder_nll(const Tensor& sv, const TokenIds& target, const DecoderParams& dec, const Projection& proj,
                          const Tensor& embedding) {
  if (target.empty()) throw ShapeError("decoder_nll: empty target");
  if (target.back() != corpus::kEos) throw ShapeError("decoder_nll: target must end with EOS");
  return decoder_nll_batch(sv, pad_batch(std::vector<TokenIds>{target}), dec, proj, embedding);
}

/// Greedy argmax decoding; stops after EOS or `max_len` tokens.
inline TokenIds greedy_decode(const SentenceVector& sv, const ModelParams& p, Decoder which, std::size_t max_len = 30) {
  numkit::TapeScope off(nullptr);
  const DecoderParams& dec = p.decoder(which);
  const Projection& proj = p.projection(which);
  Tensor state = detail::affine(Tensor({1, sv.width()}, sv.values), dec.init_w, dec.init_b);
  TokenIds out;
  std::size_t prev = corpus::kSos;
  while (out.size() < max_len) {
    const std::size_t ids[1] = {prev};
    state = gru_step(numkit::gather_rows(p.embedding, ids), state, dec.cell);
    Tensor logits = detail::affine(state, proj.w, proj.b);
    std::size_t best = 0;
    for (std::size_t v = 1; v < logits.size(); ++v) {
      if (logits[v] > logits[best]) best = v;
    }
    out.push_back(best);
    if (best == corpus::kEos) break;
    prev = best;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Objective

/// Rejects alpha <= 0; returns false when alpha is outside the recommended alpha > 1 regime.
inline bool check_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("alpha must be positive, got " + std::to_string(alpha));
  return alpha > 1.0;
}

inline void warn_small_alpha(double alpha) {
  static std::atomic<bool> warned{false};
  if (!check_alpha(alpha) && !warned.exchange(true)) {
    std::clog << "warning: alpha=" << alpha
              << " <= 1 weights self-reconstruction at least as much as paraphrase generation\n";
  }
}

struct LossParts {
  Tensor auto_nll;  // l_A(s -> s)
  Tensor para_nll;  // l_P(s -> p)
  Tensor total;     // l_A + alpha * l_P
};

/// Batch objective: both decoders read the single encoding of each source.
inline LossParts batch_loss(std::span<const corpus::SentencePair> pairs, const ModelParams& p, double alpha) {
  warn_small_alpha(alpha);
  std::vector<const TokenIds*> src, tgt;
  for (const auto& pr : pairs) {
    if (pr.source.empty() || pr.target.empty()) throw ShapeError("batch_loss: empty sequence");
    if (pr.source.back() != corpus::kEos || pr.target.back() != corpus::kEos) {
      throw ShapeError("batch_loss: sequences must end with EOS");
    }
    src.push_back(&pr.source);
    tgt.push_back(&pr.target);
  }
  const PaddedBatch sb = pad_batch(std::span<const TokenIds* const>(src));
  const PaddedBatch tb = pad_batch(std::span<const TokenIds* const>(tgt));
  Tensor sv = encode_batch(p, sb);
  LossParts parts;
  parts.auto_nll = decoder_nll_batch(sv, sb, p.auto_decoder, p.projection(Decoder::Auto), p.embedding);
  parts.para_nll = decoder_nll_batch(sv, tb, p.para_decoder, p.projection(Decoder::Paraphrase), p.embedding);
  parts.total = numkit::add(parts.auto_nll, numkit::scale(parts.para_nll, alpha));
  return parts;
}

/// l_A(s -> s) + alpha * l_P(s -> p) for one pair.
inline LossParts loss(const TokenIds& s, const TokenIds& para, const ModelParams& p, double alpha) {
  const corpus::SentencePair pr{s, para};
  return batch_loss(std::span<const corpus::SentencePair>(&pr, 1), p, alpha);
}

}  // namespace pthought::model
