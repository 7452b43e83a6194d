#pragma once

// Similarity-regression head: pair features, 5-bin target distributions,
// a softmax (multinomial logistic) readout and Pearson scoring.

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pthought/errors.hpp"
#include "pthought/metrics.hpp"
#include "pthought/model.hpp"
#include "pthought/numkit.hpp"
#include "pthought/optim.hpp"
#include "pthought/random.hpp"
#include "pthought/sentence_vector.hpp"

namespace pthought::sts {

using numkit::Tensor;

inline constexpr std::size_t kBins = 5;

enum class Split { Train, Dev, Test };

inline std::string to_string(Split s) {
  switch (s) {
    case Split::Train: return "train";
    case Split::Dev: return "dev";
    case Split::Test: return "test";
  }
  return "?";
}

struct STSRecord {
  Split split = Split::Train;
  double score = 0.0;  // human rating in [0, 5]
  std::string sentence_1;
  std::string sentence_2;
};

/// Strict reader for "split <TAB> score <TAB> sentence_1 <TAB> sentence_2".
/// An optional header row naming those columns is skipped.
inline std::vector<STSRecord> parse_sts_tsv(std::istream& in, const std::string& source) {
  std::vector<STSRecord> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto f = metrics::detail::split_tabs(line);
    if (f.size() != 4) {
      throw DataError(with_line(source, lineno, "expected 4 tab-separated fields, found " + std::to_string(f.size())));
    }
    if (lineno == 1 && f[0] == "split" && f[1] == "score") continue;
    STSRecord r;
    if (f[0] == "train") {
      r.split = Split::Train;
    } else if (f[0] == "dev") {
      r.split = Split::Dev;
    } else if (f[0] == "test") {
      r.split = Split::Test;
    } else {
      throw DataError(with_line(source, lineno, "unknown split \"" + std::string(f[0]) + "\""));
    }
    if (!metrics::detail::parse_number(f[1], r.score)) {
      throw DataError(with_line(source, lineno, "invalid score \"" + std::string(f[1]) + "\""));
    }
    if (r.score < 0.0 || r.score > 5.0) throw DataError(with_line(source, lineno, "score outside [0, 5]"));
    r.sentence_1 = std::string(f[2]);
    r.sentence_2 = std::string(f[3]);
    records.push_back(std::move(r));
  }
  return records;
}

inline std::vector<STSRecord> read_sts_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open STS file " + path);
  return parse_sts_tsv(in, path);
}

/// Probability over bins r = 1..5.
using TargetDistribution = std::array<double, kBins>;

/// Sparse two-bin encoding with expectation r . d = y. Scores below 1 are
/// clamped to 1 since the bins start at 1.
inline TargetDistribution target_transform(double y) {
  if (!(y >= 0.0 && y <= 5.0)) throw DomainError("target_transform: score " + std::to_string(y) + " outside [0, 5]");
  y = std::max(y, 1.0);
  TargetDistribution d{};
  const double fl = std::floor(y);
  const auto lower = static_cast<std::size_t>(fl);  // 1-based bin index
  if (lower == kBins) {
    d[kBins - 1] = 1.0;
    return d;
  }
  d[lower - 1] = fl - y + 1.0;
  d[lower] = y - fl;
  return d;
}

inline double expected_bin(std::span<const double> dist) {
  double s = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) s += static_cast<double>(i + 1) * dist[i];
  return s;
}

/// [u * v ; |u - v|], width 2w.
inline std::vector<double> features(const SentenceVector& u, const SentenceVector& v) {
  if (u.width() != v.width()) {
    throw ShapeError("features: width mismatch " + std::to_string(u.width()) + " vs " + std::to_string(v.width()));
  }
  const std::size_t w = u.width();
  std::vector<double> f(2 * w);
  for (std::size_t i = 0; i < w; ++i) {
    f[i] = u.values[i] * v.values[i];
    f[w + i] = std::fabs(u.values[i] - v.values[i]);
  }
  return f;
}

struct ReadoutModel {
  Tensor weight;  // feature_dim x 5
  Tensor bias;    // 1 x 5

  std::size_t feature_dim() const { return weight.shape()[0]; }
};

struct ReadoutConfig {
  int steps = 500;
  double learning_rate = 0.05;
  std::uint64_t seed = 1;
  double l2 = 0.0;  // weight penalty, off by default
};

inline ReadoutModel init_readout(std::size_t feature_dim, std::uint64_t seed) {
  Rng rng(mix_seed(seed, 0x5755));
  return {model::xavier_init(feature_dim, kBins, rng), Tensor({1, kBins})};
}

struct ReadoutFit {
  ReadoutModel model;
  std::vector<double> loss_history;  // objective before each step
};

namespace detail {
inline Tensor stack_rows(std::span<const std::vector<double>> rows, std::size_t width) {
  Tensor x({rows.size(), width});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != width) throw ShapeError("readout: feature width mismatch at row " + std::to_string(i));
    std::copy(rows[i].begin(), rows[i].end(), x.data().begin() + i * width);
  }
  return x;
}

inline Tensor readout_objective(const ReadoutModel& m, const Tensor& x, const Tensor& targets, double l2) {
  using namespace numkit;
  Tensor logp = log_softmax(add(matmul(x, m.weight), matmul(Tensor({x.rows(), 1}, 1.0), m.bias)), 1);
  Tensor ce = scale(sum(mul(targets, logp)), -1.0 / static_cast<double>(x.rows()));
  if (l2 > 0.0) ce = add(ce, scale(sum(mul(m.weight, m.weight)), 0.5 * l2));
  return ce;
}
}  // namespace detail

/// Minimizes mean cross-entropy -sum_k d_k log p_k by full-batch Adam.
inline ReadoutFit fit_readout(std::span<const std::vector<double>> feats, std::span<const TargetDistribution> targets,
                              const ReadoutConfig& cfg = {}) {
  if (feats.size() != targets.size()) throw ShapeError("fit_readout: feature and target counts differ");
  if (feats.empty()) throw DataError("fit_readout: no training examples");
  if (cfg.steps < 0) throw ConfigError("fit_readout: steps must be non-negative");
  const std::size_t width = feats[0].size();
  const Tensor x = detail::stack_rows(feats, width);
  Tensor d({targets.size(), kBins});
  for (std::size_t i = 0; i < targets.size(); ++i) {
    for (std::size_t k = 0; k < kBins; ++k) d(i, k) = targets[i][k];
  }
  ReadoutFit fit{init_readout(width, cfg.seed), {}};
  fit.model.weight.set_requires_grad(true);
  fit.model.bias.set_requires_grad(true);
  const std::vector<model::NamedTensor> params{{"readout.weight", fit.model.weight}, {"readout.bias", fit.model.bias}};
  optim::AdamState state;
  const optim::AdamConfig adam{cfg.learning_rate, 0.9, 0.999, 1e-8};
  for (int step = 0; step < cfg.steps; ++step) {
    numkit::Tape tape;
    Tensor loss;
    {
      numkit::TapeScope scope(tape);
      loss = detail::readout_objective(fit.model, x, d, cfg.l2);
    }
    if (!std::isfinite(loss.item())) throw NumericError("fit_readout: non-finite loss at step " + std::to_string(step));
    fit.loss_history.push_back(loss.item());
    numkit::backward(tape, loss);
    optim::adam_step(params, state, adam);
  }
  fit.model.weight.set_requires_grad(false);
  fit.model.bias.set_requires_grad(false);
  return fit;
}

inline double readout_loss(const ReadoutModel& m, std::span<const std::vector<double>> feats,
                           std::span<const TargetDistribution> targets) {
  numkit::TapeScope off(nullptr);
  const Tensor x = detail::stack_rows(feats, m.feature_dim());
  Tensor d({targets.size(), kBins});
  for (std::size_t i = 0; i < targets.size(); ++i) {
    for (std::size_t k = 0; k < kBins; ++k) d(i, k) = targets[i][k];
  }
  return detail::readout_objective(m, x, d, 0.0).item();
}

inline TargetDistribution predict_distribution(const ReadoutModel& m, std::span<const double> feats) {
  if (feats.size() != m.feature_dim()) {
    throw ShapeError("predict: feature width " + std::to_string(feats.size()) + " does not match model width " +
                     std::to_string(m.feature_dim()));
  }
  numkit::TapeScope off(nullptr);
  Tensor x({1, feats.size()}, std::vector<double>(feats.begin(), feats.end()));
  Tensor p = numkit::softmax(numkit::add(numkit::matmul(x, m.weight), m.bias), 1);
  TargetDistribution out{};
  std::copy(p.data().begin(), p.data().end(), out.begin());
  return out;
}

/// Expected bin value r . softmax(W x + b), always within [1, 5].
inline double predict_score(const ReadoutModel& m, std::span<const double> feats) {
  return std::clamp(expected_bin(predict_distribution(m, feats)), 1.0, 5.0);
}

using SentenceEncoder = std::function<SentenceVector(const std::string&)>;

inline std::vector<double> predict_records(std::span<const STSRecord> records, const SentenceEncoder& encoder,
                                           const ReadoutModel& m) {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(predict_score(m, features(encoder(r.sentence_1), encoder(r.sentence_2))));
  return out;
}

/// Pearson r between predicted scores and human scores.
inline double evaluate(std::span<const STSRecord> records, const SentenceEncoder& encoder, const ReadoutModel& m) {
  if (records.empty()) throw DataError("evaluate: no records");
  std::vector<double> gold;
  for (const auto& r : records) gold.push_back(r.score);
  const auto pred = predict_records(records, encoder, m);
  return metrics::pearson(pred, gold);
}

struct BenchmarkReport {
  std::size_t train = 0, dev = 0, test = 0;
  std::optional<double> dev_pearson;
  double test_pearson = 0.0;
  ReadoutModel model;
};

/// Fits the readout on the train split and scores dev (when present) and test.
inline BenchmarkReport run_benchmark(std::span<const STSRecord> records, const SentenceEncoder& encoder,
                                     const ReadoutConfig& cfg = {}) {
  std::vector<STSRecord> train, dev, test;
  for (const auto& r : records) {
    (r.split == Split::Train ? train : r.split == Split::Dev ? dev : test).push_back(r);
  }
  if (train.empty()) throw DataError("STS data is missing the train split");
  if (test.empty()) throw DataError("STS data is missing the test split");
  std::vector<std::vector<double>> feats;
  std::vector<TargetDistribution> targets;
  for (const auto& r : train) {
    feats.push_back(features(encoder(r.sentence_1), encoder(r.sentence_2)));
    targets.push_back(target_transform(r.score));
  }
  BenchmarkReport rep;
  rep.train = train.size();
  rep.dev = dev.size();
  rep.test = test.size();
  rep.model = fit_readout(feats, targets, cfg).model;
  if (!dev.empty()) rep.dev_pearson = evaluate(dev, encoder, rep.model);
  rep.test_pearson = evaluate(test, encoder, rep.model);
  return rep;
}

}  // namespace pthought::sts
