#pragma once

// Small deterministic data generators for demos and tests: templated caption
// groups (each group paraphrases one subject/action/place scene) and a
// planted-vector similarity dataset.

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "pthought/corpus.hpp"
#include "pthought/random.hpp"
#include "pthought/sentence_vector.hpp"
#include "pthought/sts.hpp"

namespace pthought::synthetic {

namespace detail {

using Synonyms = std::vector<std::string>;

inline const std::vector<Synonyms>& subjects() {
  static const std::vector<Synonyms> s{
      {"dog", "puppy", "hound"},        {"cat", "kitten", "kitty"},     {"man", "guy", "gentleman"},
      {"woman", "lady"},                {"child", "kid", "youngster"},  {"horse", "pony", "stallion"},
      {"bird", "sparrow", "finch"},     {"player", "athlete"}};
  return s;
}

inline const std::vector<Synonyms>& actions() {
  static const std::vector<Synonyms> a{{"running", "jogging", "sprinting"}, {"sleeping", "napping", "dozing"},
                                       {"sitting", "lounging"},             {"eating", "snacking", "feeding"},
                                       {"playing", "frolicking"},           {"standing", "waiting"}};
  return a;
}

inline const std::vector<Synonyms>& places() {
  static const std::vector<Synonyms> p{{"park", "meadow", "lawn"}, {"street", "road", "avenue"},
                                       {"beach", "shore", "seaside"}, {"kitchen", "galley"},
                                       {"field", "farmland"},       {"room", "chamber"}};
  return p;
}

// {S} subject, {A} action, {P} place.
inline const std::vector<std::string>& templates() {
  static const std::vector<std::string> t{
      "a {S} is {A} in the {P} .",      "the {S} {A} in a {P} .",        "in the {P} , a {S} is {A} .",
      "there is a {S} {A} in the {P} .", "a {S} {A} inside a {P} .",      "a {P} with a {S} {A} in it .",
      "one {S} is {A} at the {P} ."};
  return t;
}

inline std::string fill(std::string text, const std::string& key, const std::string& value) {
  for (auto pos = text.find(key); pos != std::string::npos; pos = text.find(key, pos + value.size())) {
    text.replace(pos, key.size(), value);
  }
  return text;
}

}  // namespace detail

/// `n_groups` caption groups of `per_group` captions, each group describing one
/// distinct (subject, action, place) scene with varied synonyms and templates.
inline std::vector<corpus::RawGroup> caption_groups(std::size_t n_groups, std::size_t per_group, std::uint64_t seed) {
  const auto& S = detail::subjects();
  const auto& A = detail::actions();
  const auto& P = detail::places();
  const auto& T = detail::templates();
  if (per_group < 2 || per_group > T.size()) throw ConfigError("per_group must be in [2, templates]");
  std::vector<std::array<std::size_t, 3>> scenes;
  for (std::size_t s = 0; s < S.size(); ++s) {
    for (std::size_t a = 0; a < A.size(); ++a) {
      for (std::size_t p = 0; p < P.size(); ++p) scenes.push_back({s, a, p});
    }
  }
  if (n_groups > scenes.size()) throw ConfigError("too many groups requested");
  Rng rng(mix_seed(seed, 0xC0C0));
  rng.shuffle(scenes);
  std::vector<corpus::RawGroup> groups;
  for (std::size_t g = 0; g < n_groups; ++g) {
    const auto& [s, a, p] = scenes[g];
    std::vector<std::size_t> order(T.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(order);
    corpus::RawGroup raw;
    raw.id = "scene" + std::to_string(g);
    raw.line = g + 1;
    for (std::size_t k = 0; k < per_group; ++k) {
      std::string text = T[order[k]];
      text = detail::fill(text, "{S}", S[s][rng.below(S[s].size())]);
      text = detail::fill(text, "{A}", A[a][rng.below(A[a].size())]);
      text = detail::fill(text, "{P}", P[p][rng.below(P[p].size())]);
      raw.captions.push_back(text);
    }
    groups.push_back(std::move(raw));
  }
  return groups;
}

struct PlantedSts {
  std::vector<sts::STSRecord> records;
  std::unordered_map<std::string, SentenceVector> vectors;  // sentence text -> planted vector

  sts::SentenceEncoder encoder() const {
    return [this](const std::string& s) { return vectors.at(s); };
  }
};

/// Records whose score is a noisy increasing function of the cosine between two
/// planted unit vectors: y = clamp(2.5 (1 + c) + noise * N(0, 1), 0, 5).
/// Splits are assigned in order: 70% train, 10% dev, 20% test.
inline PlantedSts planted_sts(std::size_t n_records, std::size_t width, double noise, std::uint64_t seed) {
  Rng rng(mix_seed(seed, 0x575));
  PlantedSts out;
  auto unit = [&] {
    std::vector<double> v(width);
    double n2 = 0.0;
    for (double& x : v) {
      x = rng.normal();
      n2 += x * x;
    }
    for (double& x : v) x /= std::sqrt(n2);
    return v;
  };
  for (std::size_t i = 0; i < n_records; ++i) {
    const double c = rng.uniform(-1.0, 1.0);
    auto u = unit();
    auto r = unit();
    double proj = 0.0;
    for (std::size_t k = 0; k < width; ++k) proj += r[k] * u[k];
    double n2 = 0.0;
    for (std::size_t k = 0; k < width; ++k) {
      r[k] -= proj * u[k];
      n2 += r[k] * r[k];
    }
    std::vector<double> v(width);
    for (std::size_t k = 0; k < width; ++k) v[k] = c * u[k] + std::sqrt(1.0 - c * c) * r[k] / std::sqrt(n2);
    sts::STSRecord rec;
    const double frac = static_cast<double>(i) / static_cast<double>(n_records);
    rec.split = frac < 0.7 ? sts::Split::Train : frac < 0.8 ? sts::Split::Dev : sts::Split::Test;
    rec.score = std::clamp(2.5 * (1.0 + c) + noise * rng.normal(), 0.0, 5.0);
    rec.sentence_1 = "pair " + std::to_string(i) + " left";
    rec.sentence_2 = "pair " + std::to_string(i) + " right";
    out.vectors[rec.sentence_1] = {u};
    out.vectors[rec.sentence_2] = {v};
    out.records.push_back(std::move(rec));
  }
  return out;
}

}  // namespace pthought::synthetic
