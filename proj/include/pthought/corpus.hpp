#pragma once

// Caption-group ingestion, tokenization, vocabulary, (source, paraphrase)
// pair construction and pretrained word-vector extraction.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "pthought/errors.hpp"
#include "pthought/numkit.hpp"
#include "pthought/random.hpp"

namespace pthought::corpus {

using Tokens = std::vector<std::string>;
using TokenIds = std::vector<std::size_t>;

/// Lowercases ASCII letters, splits on whitespace and emits every ASCII
/// punctuation character as its own token. Non-ASCII bytes pass through.
inline Tokens tokenize(std::string_view text) {
  Tokens out;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) out.push_back(std::move(current));
    current.clear();
  };
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (c < 0x80 && std::isspace(c)) {
      flush();
    } else if (c < 0x80 && std::ispunct(c)) {
      flush();
      out.emplace_back(1, ch);
    } else {
      current.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : ch);
    }
  }
  flush();
  return out;
}

/// One JSONL record as read from disk, before any invariant is enforced.
struct RawGroup {
  std::string id;
  std::vector<std::string> captions;
  std::size_t line = 0;
};

inline std::vector<RawGroup> parse_corpus_jsonl(std::istream& in, const std::string& source) {
  std::vector<RawGroup> groups;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError(with_line(source, lineno, std::string("invalid JSON: ") + e.what()));
    }
    if (!obj.is_object() || !obj.contains("id") || !obj.contains("captions")) {
      throw DataError(with_line(source, lineno, "expected an object with \"id\" and \"captions\""));
    }
    RawGroup g;
    g.line = lineno;
    if (obj["id"].is_string()) {
      g.id = obj["id"].get<std::string>();
    } else if (obj["id"].is_number_integer()) {
      g.id = std::to_string(obj["id"].get<long long>());
    } else {
      throw DataError(with_line(source, lineno, "\"id\" must be a string"));
    }
    if (!obj["captions"].is_array()) {
      throw DataError(with_line(source, lineno, "\"captions\" must be an array of strings"));
    }
    for (const auto& c : obj["captions"]) {
      if (!c.is_string()) throw DataError(with_line(source, lineno, "caption is not a string"));
      g.captions.push_back(c.get<std::string>());
    }
    groups.push_back(std::move(g));
  }
  return groups;
}

inline std::vector<RawGroup> read_corpus_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus file " + path);
  return parse_corpus_jsonl(in, path);
}

/// A paraphrase set: all captions describing one image.
struct ParaphraseGroup {
  std::string id;
  std::vector<Tokens> sentences;
};

/// Tokenizes and drops exact duplicates (keeping first occurrence).
/// Throws if fewer than two distinct sentences remain.
inline ParaphraseGroup make_group(const RawGroup& raw, const std::string& source = "corpus") {
  ParaphraseGroup g{raw.id, {}};
  std::unordered_set<std::string> seen;
  for (const auto& caption : raw.captions) {
    Tokens toks = tokenize(caption);
    if (toks.empty()) continue;
    std::string key;
    for (const auto& t : toks) key += t + '\x1f';
    if (seen.insert(key).second) g.sentences.push_back(std::move(toks));
  }
  if (g.sentences.size() < 2) {
    throw DataError(with_line(source, raw.line,
                              "group \"" + raw.id + "\" has fewer than 2 distinct non-empty captions"));
  }
  return g;
}

inline std::vector<ParaphraseGroup> load_groups(const std::string& path) {
  std::vector<ParaphraseGroup> groups;
  for (const auto& raw : read_corpus_jsonl(path)) groups.push_back(make_group(raw, path));
  if (groups.empty()) throw DataError(path + ": no groups");
  return groups;
}

enum Reserved : std::size_t { kPad = 0, kSos = 1, kEos = 2, kUnk = 3 };

class Vocab {
 public:
  Vocab() {
    for (const char* t : {"<pad>", "<sos>", "<eos>", "<unk>"}) add(t);
  }

  /// Returns the id of `token`, inserting it if new.
  std::size_t add(const std::string& token) {
    auto [it, inserted] = index_.try_emplace(token, tokens_.size());
    if (inserted) tokens_.push_back(token);
    return it->second;
  }

  bool contains(const std::string& token) const { return index_.count(token) != 0; }

  std::size_t id(const std::string& token) const {
    auto it = index_.find(token);
    return it == index_.end() ? kUnk : it->second;
  }

  const std::string& token(std::size_t id) const { return tokens_.at(id); }
  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  TokenIds encode(const Tokens& toks) const {
    TokenIds ids;
    ids.reserve(toks.size());
    for (const auto& t : toks) ids.push_back(id(t));
    return ids;
  }

  Tokens decode(const TokenIds& ids) const {
    Tokens toks;
    toks.reserve(ids.size());
    for (auto i : ids) toks.push_back(token(i));
    return toks;
  }

  /// FNV-1a over the tokens in id order; identifies a vocabulary in checkpoints.
  std::uint64_t hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& t : tokens_) {
      for (unsigned char c : t) {
        h ^= c;
        h *= 0x100000001b3ULL;
      }
      h ^= 0xff;
      h *= 0x100000001b3ULL;
    }
    return h;
  }

  static Vocab from_tokens(const std::vector<std::string>& tokens) {
    Vocab v;
    if (tokens.size() < 4) throw DataError("vocabulary is missing reserved tokens");
    for (std::size_t i = 0; i < 4; ++i) {
      if (tokens[i] != v.tokens_[i]) throw DataError("vocabulary reserved token mismatch at id " + std::to_string(i));
    }
    for (std::size_t i = 4; i < tokens.size(); ++i) {
      if (v.add(tokens[i]) != i) throw DataError("duplicate vocabulary token \"" + tokens[i] + "\"");
    }
    return v;
  }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Ids assigned in order of first occurrence across groups, sentences, tokens.
inline Vocab build_vocab(const std::vector<ParaphraseGroup>& groups) {
  Vocab v;
  for (const auto& g : groups) {
    for (const auto& s : g.sentences) {
      for (const auto& t : s) v.add(t);
    }
  }
  return v;
}

inline constexpr std::size_t kDefaultMaxSeqLen = 30;

/// Token ids terminated by EOS, truncated so the total length (EOS included)
/// never exceeds `max_seq_len`.
inline TokenIds to_ids(const Tokens& toks, const Vocab& vocab, std::size_t max_seq_len = kDefaultMaxSeqLen) {
  if (max_seq_len < 2) throw ConfigError("max_seq_len must be at least 2");
  TokenIds ids;
  const std::size_t keep = std::min(toks.size(), max_seq_len - 1);
  for (std::size_t i = 0; i < keep; ++i) ids.push_back(vocab.id(toks[i]));
  ids.push_back(kEos);
  return ids;
}

struct SentencePair {
  TokenIds source;  // sentence s
  TokenIds target;  // paraphrase p
};

/// All ordered (s, p) pairs with s != p: n(n-1) pairs, source-major order.
inline std::vector<SentencePair> make_pairs(const ParaphraseGroup& group, const Vocab& vocab,
                                            std::size_t max_seq_len = kDefaultMaxSeqLen) {
  const std::size_t n = group.sentences.size();
  if (n < 2) throw DataError("group \"" + group.id + "\" has fewer than 2 sentences");
  std::vector<TokenIds> ids;
  for (const auto& s : group.sentences) ids.push_back(to_ids(s, vocab, max_seq_len));
  std::vector<SentencePair> pairs;
  pairs.reserve(n * (n - 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) pairs.push_back({ids[i], ids[j]});
    }
  }
  return pairs;
}

inline std::vector<SentencePair> make_all_pairs(const std::vector<ParaphraseGroup>& groups, const Vocab& vocab,
                                                std::size_t max_seq_len = kDefaultMaxSeqLen) {
  std::vector<SentencePair> all;
  for (const auto& g : groups) {
    auto p = make_pairs(g, vocab, max_seq_len);
    all.insert(all.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
  }
  return all;
}

struct CorpusSummary {
  std::size_t groups = 0;
  std::size_t sentences = 0;
  std::size_t pairs = 0;
  std::size_t vocab = 0;  // includes the 4 reserved tokens
};

inline CorpusSummary summarize(const std::vector<ParaphraseGroup>& groups, const Vocab& vocab) {
  CorpusSummary s;
  s.groups = groups.size();
  for (const auto& g : groups) {
    s.sentences += g.sentences.size();
    s.pairs += g.sentences.size() * (g.sentences.size() - 1);
  }
  s.vocab = vocab.size();
  return s;
}

/// |V| x dim word-vector matrix aligned to vocabulary ids; the PAD row is zero.
struct EmbeddingTable {
  std::size_t dim = 0;
  numkit::Tensor rows;
};

/// Every row drawn from Uniform(-0.1, 0.1) in id order, PAD zeroed.
inline EmbeddingTable random_embedding_table(const Vocab& vocab, std::size_t dim, std::uint64_t seed) {
  if (dim == 0) throw ConfigError("embedding dim must be positive");
  Rng rng(mix_seed(seed, 0xE3B));
  numkit::Tensor rows({vocab.size(), dim});
  for (double& v : rows.data()) v = rng.uniform(-0.1, 0.1);
  for (std::size_t c = 0; c < dim; ++c) rows(kPad, c) = 0.0;
  return {dim, rows};
}

struct EmbeddingLoad {
  EmbeddingTable table;
  std::size_t matched = 0;
};

namespace detail {
inline bool parse_double(std::string_view s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

inline std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}
}  // namespace detail

/// Extracts rows for in-vocabulary words from a word-per-line vector file
/// ("token f1 f2 ... fdim"). Words absent from the file keep the seeded
/// Uniform(-0.1, 0.1) fallback of random_embedding_table. An optional leading
/// "count dim" header line is accepted.
inline EmbeddingLoad parse_pretrained_embeddings(std::istream& in, const std::string& source, const Vocab& vocab,
                                                 std::size_t dim, std::uint64_t seed) {
  EmbeddingLoad result{random_embedding_table(vocab, dim, seed), 0};
  numkit::Tensor& rows = result.table.rows;
  std::vector<bool> filled(vocab.size(), false);
  std::string line;
  std::size_t lineno = 0;
  bool first_data = true;
  while (std::getline(in, line)) {
    ++lineno;
    auto fields = detail::split_spaces(line);
    if (fields.empty()) continue;
    if (lineno == 1 && fields.size() == 2) {
      std::size_t count = 0, hdim = 0;
      auto r1 = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), count);
      auto r2 = std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(), hdim);
      const bool is_header = r1.ec == std::errc() && r1.ptr == fields[0].data() + fields[0].size() &&
                             r2.ec == std::errc() && r2.ptr == fields[1].data() + fields[1].size() &&
                             fields[1].find('.') == std::string_view::npos;
      if (is_header && dim != 1) {
        if (hdim != dim) {
          throw DataError(source + ": embedding dim mismatch: file header says " + std::to_string(hdim) +
                          ", expected " + std::to_string(dim));
        }
        continue;
      }
    }
    const std::size_t nfloats = fields.size() - 1;
    if (first_data && nfloats != dim) {
      throw DataError(source + ": embedding dim mismatch: file has " + std::to_string(nfloats) +
                      " values per word, expected " + std::to_string(dim));
    }
    first_data = false;
    if (nfloats != dim) {
      throw DataError(with_line(source, lineno, "expected " + std::to_string(dim) + " values, found " +
                                                    std::to_string(nfloats)));
    }
    std::vector<double> values(dim);
    for (std::size_t c = 0; c < dim; ++c) {
      if (!detail::parse_double(fields[c + 1], values[c])) {
        throw DataError(with_line(source, lineno, "invalid number \"" + std::string(fields[c + 1]) + "\""));
      }
    }
    const std::string word(fields[0]);
    if (!vocab.contains(word)) continue;
    const std::size_t id = vocab.id(word);
    if (id == kPad || filled[id]) continue;
    filled[id] = true;
    ++result.matched;
    for (std::size_t c = 0; c < dim; ++c) rows(id, c) = values[c];
  }
  return result;
}

inline EmbeddingLoad load_pretrained_embeddings(const std::string& path, const Vocab& vocab, std::size_t dim,
                                                std::uint64_t seed) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open embedding file " + path);
  return parse_pretrained_embeddings(in, path, vocab, dim, seed);
}

}  // namespace pthought::corpus
