#pragma once

// Mini-batch training of the dual-decoder objective with Adam.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "pthought/corpus.hpp"
#include "pthought/errors.hpp"
#include "pthought/model.hpp"
#include "pthought/numkit.hpp"
#include "pthought/optim.hpp"
#include "pthought/random.hpp"

namespace pthought::train {

using corpus::SentencePair;
using model::ModelParams;

struct TrainConfig {
  double alpha = 5.0;
  double learning_rate = 1e-3;
  std::size_t batch_size = 128;
  int epochs = 4;
  std::uint64_t seed = 1;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t max_seq_len = corpus::kDefaultMaxSeqLen;
  bool unfreeze_embeddings = false;
  double clip_norm = 0.0;  // 0 disables clipping

  void validate() const {
    model::check_alpha(alpha);
    if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
    if (batch_size < 1) throw ConfigError("batch_size must be at least 1");
    if (epochs < 1) throw ConfigError("epochs must be at least 1");
    if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) throw ConfigError("adam betas must lie in [0, 1)");
    if (!(epsilon > 0.0)) throw ConfigError("adam epsilon must be positive");
    if (max_seq_len < 2) throw ConfigError("max_seq_len must be at least 2");
    if (clip_norm < 0.0) throw ConfigError("clip_norm must be non-negative");
  }

  optim::AdamConfig adam() const { return {learning_rate, beta1, beta2, epsilon}; }
};

struct LossRecord {
  long step = 0;
  double auto_nll = 0.0;
  double para_nll = 0.0;
  double total = 0.0;
};

struct EpochSummary {
  int epoch = 0;  // 1-based
  double mean_total = 0.0;
  std::optional<double> heldout_total;
};

struct LossTrace {
  double alpha = 0.0;
  std::vector<LossRecord> records;
  std::vector<EpochSummary> epochs;

  /// TSV with header: step, l_auto, l_para, total.
  void write_tsv(std::ostream& out) const {
    out << "step\tl_auto\tl_para\ttotal\n";
    out.precision(17);
    for (const auto& r : records) out << r.step << '\t' << r.auto_nll << '\t' << r.para_nll << '\t' << r.total << '\n';
  }
};

/// Everything needed to resume: optimizer moments and completed epochs.
struct TrainState {
  optim::AdamState adam;
  int epochs_done = 0;
};

struct TrainHooks {
  std::function<void(int epoch, const ModelParams&, const TrainState&)> on_epoch_end;
  const std::vector<SentencePair>* heldout = nullptr;
};

/// Mean objective over `pairs` without recording a tape.
inline model::LossParts evaluate_loss_parts(const std::vector<SentencePair>& pairs, const ModelParams& params,
                                            double alpha, std::size_t chunk = 128) {
  if (pairs.empty()) throw DataError("evaluate_loss: no pairs");
  numkit::TapeScope off(nullptr);
  double a = 0.0, p = 0.0;
  for (std::size_t start = 0; start < pairs.size(); start += chunk) {
    const std::size_t n = std::min(chunk, pairs.size() - start);
    auto parts = model::batch_loss(std::span<const SentencePair>(pairs.data() + start, n), params, alpha);
    a += parts.auto_nll.item() * static_cast<double>(n);
    p += parts.para_nll.item() * static_cast<double>(n);
  }
  const double count = static_cast<double>(pairs.size());
  model::LossParts out;
  out.auto_nll = numkit::Tensor::scalar(a / count);
  out.para_nll = numkit::Tensor::scalar(p / count);
  out.total = numkit::Tensor::scalar(a / count + alpha * (p / count));
  return out;
}

namespace detail {

inline std::vector<std::size_t> epoch_order(std::size_t n, std::uint64_t seed, int epoch) {
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(mix_seed(seed, 0x5000 + static_cast<std::uint64_t>(epoch)));
  rng.shuffle(order);
  return order;
}

}  // namespace detail

/// One optimizer step on `batch`; returns the recorded losses.
inline LossRecord train_step(std::span<const SentencePair> batch, ModelParams& params, const TrainConfig& cfg,
                             TrainState& state) {
  auto trainable = params.trainable(cfg.unfreeze_embeddings);
  params.embedding.set_requires_grad(cfg.unfreeze_embeddings);
  for (auto& t : trainable) t.tensor.set_requires_grad(true);

  numkit::Tape tape;
  model::LossParts parts;
  {
    numkit::TapeScope scope(tape);
    parts = model::batch_loss(batch, params, cfg.alpha);
  }
  const long step = state.adam.step + 1;
  if (!std::isfinite(parts.total.item())) {
    throw NumericError("non-finite loss at step " + std::to_string(step));
  }
  for (auto& t : trainable) t.tensor.zero_grad();
  numkit::backward(tape, parts.total);
  if (cfg.clip_norm > 0.0) optim::clip_grad_norm(trainable, cfg.clip_norm);
  optim::adam_step(trainable, state.adam, cfg.adam());
  return {step, parts.auto_nll.item(), parts.para_nll.item(), parts.total.item()};
}

/// Runs epochs state.epochs_done + 1 .. cfg.epochs. Pairs are reshuffled each
/// epoch from (seed, epoch), so resuming from a saved state reproduces an
/// uninterrupted run exactly.
inline LossTrace train(const std::vector<SentencePair>& pairs, ModelParams& params, const TrainConfig& cfg,
                       TrainState& state, const TrainHooks& hooks = {}) {
  cfg.validate();
  if (pairs.empty()) throw DataError("train: no pairs");
  LossTrace trace;
  trace.alpha = cfg.alpha;
  std::vector<SentencePair> batch;
  for (int epoch = state.epochs_done; epoch < cfg.epochs; ++epoch) {
    const auto order = detail::epoch_order(pairs.size(), cfg.seed, epoch);
    double epoch_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      batch.clear();
      for (std::size_t i = start; i < end; ++i) batch.push_back(pairs[order[i]]);
      const LossRecord rec = train_step(batch, params, cfg, state);
      trace.records.push_back(rec);
      epoch_sum += rec.total * static_cast<double>(end - start);
    }
    state.epochs_done = epoch + 1;
    EpochSummary summary{epoch + 1, epoch_sum / static_cast<double>(pairs.size()), std::nullopt};
    if (hooks.heldout && !hooks.heldout->empty()) {
      summary.heldout_total = evaluate_loss_parts(*hooks.heldout, params, cfg.alpha).total.item();
    }
    trace.epochs.push_back(summary);
    if (hooks.on_epoch_end) hooks.on_epoch_end(epoch + 1, params, state);
  }
  return trace;
}

inline LossTrace train(const std::vector<SentencePair>& pairs, ModelParams& params, const TrainConfig& cfg,
                       const TrainHooks& hooks = {}) {
  TrainState state;
  return train(pairs, params, cfg, state, hooks);
}

// ---------------------------------------------------------------------------
// Flat key=value configuration

/// Parses "key = value" lines; '#' starts a comment. Duplicate keys: last wins.
inline std::map<std::string, std::string> parse_key_values(std::istream& in, const std::string& source) {
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw DataError(with_line(source, lineno, "expected key=value"));
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw DataError(with_line(source, lineno, "empty key"));
    kv[key] = value;
  }
  return kv;
}

}  // namespace pthought::train
