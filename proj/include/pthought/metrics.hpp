#pragma once

// P-coherence (mean within-set cosine, averaged over paraphrase sets),
// Pearson correlation and a deterministic PCA projection for scatter plots.

#include <algorithm>
#include <charconv>
#include <istream>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pthought/errors.hpp"
#include "pthought/format.hpp"
#include "pthought/random.hpp"
#include "pthought/sentence_vector.hpp"

namespace pthought::metrics {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// Cosine of u and v. Ranges over [-1, 1]; it is only confined to [0, 1]
/// when the vectors are non-negatively correlated.
inline double pair_score(const SentenceVector& u, const SentenceVector& v) {
  if (u.width() != v.width()) {
    throw ShapeError("pair_score: width mismatch " + std::to_string(u.width()) + " vs " + std::to_string(v.width()));
  }
  const double nu = std::sqrt(dot(u.values, u.values));
  const double nv = std::sqrt(dot(v.values, v.values));
  if (!(nu > 0.0) || !(nv > 0.0)) throw DomainError("pair_score: zero-norm vector");
  // Product of the norms keeps score(u, v) == score(v, u) bit for bit.
  return dot(u.values, v.values) / (nu * nv);
}

/// Mean pair_score over all C(n, 2) unordered pairs of a paraphrase set.
inline double p_coherence_set(std::span<const SentenceVector> vectors) {
  const std::size_t n = vectors.size();
  if (n < 2) throw DataError("p_coherence_set: need at least 2 vectors, got " + std::to_string(n));
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) total += pair_score(vectors[i], vectors[j]);
  }
  return total / static_cast<double>(n * (n - 1) / 2);
}

struct EmbeddingGroup {
  std::string id;
  std::vector<SentenceVector> vectors;
  std::vector<std::size_t> sentence_index;  // parallel to vectors
};

/// One group per paraphrase set, in first-appearance order.
struct EmbeddingSet {
  std::vector<EmbeddingGroup> groups;

  std::size_t rows() const {
    std::size_t n = 0;
    for (const auto& g : groups) n += g.vectors.size();
    return n;
  }
};

/// Unweighted mean of per-set coherence: every set counts once.
inline double p_coherence_total(const EmbeddingSet& set) {
  if (set.groups.empty()) throw DataError("p_coherence_total: empty embedding set");
  double total = 0.0;
  for (const auto& g : set.groups) total += p_coherence_set(g.vectors);
  return total / static_cast<double>(set.groups.size());
}

/// Sample Pearson correlation.
inline double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ShapeError("pearson: length mismatch");
  const std::size_t n = x.size();
  if (n < 2) throw DataError("pearson: need at least 2 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) throw DomainError("pearson: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

// ---------------------------------------------------------------------------
// 2-D projection

struct ScatterPoint {
  double x = 0.0;
  double y = 0.0;
  std::string label;
};

struct ProjectionOptions {
  std::uint64_t seed = 1;
  int iterations = 1000;
};

struct Projection2D {
  std::vector<ScatterPoint> points;
  std::vector<double> component_variance;  // sample variance along each axis
  std::vector<std::vector<double>> axes;   // unit principal directions
};

/// Mean-centred projection onto the top two principal directions of the
/// sample covariance, found by power iteration with deflation from a seeded
/// start. Each axis is sign-normalized so its largest-magnitude entry is positive.
inline Projection2D project_2d_detailed(std::span<const SentenceVector> vectors, std::span<const std::string> labels,
                                        const ProjectionOptions& opt = {}) {
  const std::size_t n = vectors.size();
  if (n < 2) throw DataError("project_2d: need at least 2 vectors");
  if (labels.size() != n) throw ShapeError("project_2d: label count does not match vector count");
  const std::size_t w = vectors[0].width();
  if (w < 2) throw ShapeError("project_2d: vector width must be at least 2");
  for (const auto& v : vectors) {
    if (v.width() != w) throw ShapeError("project_2d: vectors differ in width");
  }

  std::vector<double> mean(w, 0.0);
  for (const auto& v : vectors) {
    for (std::size_t c = 0; c < w; ++c) mean[c] += v.values[c];
  }
  for (double& m : mean) m /= static_cast<double>(n);
  std::vector<std::vector<double>> centred(n, std::vector<double>(w));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < w; ++c) centred[i][c] = vectors[i].values[c] - mean[c];
  }
  std::vector<double> cov(w * w, 0.0);
  for (const auto& row : centred) {
    for (std::size_t a = 0; a < w; ++a) {
      for (std::size_t b = 0; b < w; ++b) cov[a * w + b] += row[a] * row[b];
    }
  }
  for (double& c : cov) c /= static_cast<double>(n - 1);

  Rng rng(mix_seed(opt.seed, 0x9CA));
  auto normalize = [](std::vector<double>& v) {
    const double norm = std::sqrt(dot(v, v));
    if (norm > 0.0) {
      for (double& x : v) x /= norm;
    }
    return norm;
  };
  auto orthogonalize = [](std::vector<double>& v, const std::vector<std::vector<double>>& basis) {
    for (const auto& b : basis) {
      const double d = dot(v, b);
      for (std::size_t c = 0; c < v.size(); ++c) v[c] -= d * b[c];
    }
  };

  Projection2D out;
  for (int k = 0; k < 2; ++k) {
    std::vector<double> v(w);
    for (double& x : v) x = rng.uniform(-1.0, 1.0);
    orthogonalize(v, out.axes);
    normalize(v);
    std::vector<double> next(w);
    for (int it = 0; it < opt.iterations; ++it) {
      for (std::size_t a = 0; a < w; ++a) next[a] = dot(std::span<const double>(cov.data() + a * w, w), v);
      orthogonalize(next, out.axes);
      if (normalize(next) == 0.0) break;  // no variance left in this subspace
      v.swap(next);
    }
    const auto big = std::max_element(v.begin(), v.end(), [](double a, double b) { return std::fabs(a) < std::fabs(b); });
    if (*big < 0) {
      for (double& x : v) x = -x;
    }
    // Deflation: the next search is restricted to the orthogonal complement.
    out.axes.push_back(v);
  }

  out.points.reserve(n);
  double s0 = 0.0, s1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = dot(centred[i], out.axes[0]);
    const double y = dot(centred[i], out.axes[1]);
    s0 += x * x;
    s1 += y * y;
    out.points.push_back({x, y, labels[i]});
  }
  out.component_variance = {s0 / static_cast<double>(n - 1), s1 / static_cast<double>(n - 1)};
  return out;
}

inline std::vector<ScatterPoint> project_2d(std::span<const SentenceVector> vectors, std::span<const std::string> labels,
                                            const ProjectionOptions& opt = {}) {
  return project_2d_detailed(vectors, labels, opt).points;
}

// ---------------------------------------------------------------------------
// TSV formats

namespace detail {
inline std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return out;
}

inline bool parse_number(std::string_view s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return first != last && ec == std::errc() && ptr == last && std::isfinite(out);
}
}  // namespace detail

/// Rows: group_id <TAB> sentence_index <TAB> v1 <TAB> ... <TAB> vw.
inline EmbeddingSet parse_embedding_tsv(std::istream& in, const std::string& source) {
  EmbeddingSet set;
  std::unordered_map<std::string, std::size_t> index;
  std::string line;
  std::size_t lineno = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = detail::split_tabs(line);
    if (fields.size() < 3) throw DataError(with_line(source, lineno, "expected group_id, sentence_index and a vector"));
    std::size_t sidx = 0;
    auto [p, ec] = std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(), sidx);
    if (ec != std::errc() || p != fields[1].data() + fields[1].size()) {
      throw DataError(with_line(source, lineno, "invalid sentence_index \"" + std::string(fields[1]) + "\""));
    }
    SentenceVector v;
    for (std::size_t c = 2; c < fields.size(); ++c) {
      double x = 0.0;
      if (!detail::parse_number(fields[c], x)) {
        throw DataError(with_line(source, lineno, "invalid vector component \"" + std::string(fields[c]) + "\""));
      }
      v.values.push_back(x);
    }
    if (width == 0) width = v.width();
    if (v.width() != width) {
      throw DataError(with_line(source, lineno, "vector width " + std::to_string(v.width()) + " differs from " +
                                                    std::to_string(width)));
    }
    const std::string gid(fields[0]);
    auto [it, inserted] = index.try_emplace(gid, set.groups.size());
    if (inserted) set.groups.push_back({gid, {}, {}});
    set.groups[it->second].vectors.push_back(std::move(v));
    set.groups[it->second].sentence_index.push_back(sidx);
  }
  return set;
}

inline EmbeddingSet read_embedding_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open embedding file " + path);
  return parse_embedding_tsv(in, path);
}

inline void write_embedding_row(std::ostream& out, const std::string& group, std::size_t index, const SentenceVector& v) {
  out << group << '\t' << index;
  for (double x : v.values) out << '\t' << format_double(x);
  out << '\n';
}

inline void write_embedding_tsv(std::ostream& out, const EmbeddingSet& set) {
  for (const auto& g : set.groups) {
    for (std::size_t i = 0; i < g.vectors.size(); ++i) {
      write_embedding_row(out, g.id, i < g.sentence_index.size() ? g.sentence_index[i] : i, g.vectors[i]);
    }
  }
}

/// Rows: x <TAB> y <TAB> group_id.
inline void write_scatter_tsv(std::ostream& out, std::span<const ScatterPoint> points) {
  for (const auto& p : points) out << format_double(p.x) << '\t' << format_double(p.y) << '\t' << p.label << '\n';
}

}  // namespace pthought::metrics
