#include <gtest/gtest.h>

#include <set>
#include <sstream>
#include <unordered_set>

#include "pthought/corpus.hpp"
#include "pthought/synthetic.hpp"

using namespace pthought;
using namespace pthought::corpus;

namespace {

ParaphraseGroup group_of(std::vector<std::string> captions) {
  RawGroup raw{"g", std::move(captions), 1};
  return make_group(raw);
}

Vocab vocab_of(const std::vector<std::string>& words) {
  Vocab v;
  for (const auto& w : words) v.add(w);
  return v;
}

}  // namespace

TEST(Tokenize, CaptionSplitsPunctuation) {
  EXPECT_EQ(tokenize("A bedroom with a bookshelf."), (Tokens{"a", "bedroom", "with", "a", "bookshelf", "."}));
  EXPECT_EQ(tokenize(""), Tokens{});
  EXPECT_EQ(tokenize("Hello,world"), (Tokens{"hello", ",", "world"}));
  EXPECT_EQ(tokenize("  Two\tspaces \n"), (Tokens{"two", "spaces"}));
  EXPECT_EQ(tokenize("don't"), (Tokens{"don", "'", "t"}));
}

TEST(MakePairs, OrderedPairCounts) {
  EXPECT_EQ(make_pairs(group_of({"a", "b", "c", "d", "e"}), vocab_of({"a", "b", "c", "d", "e"})).size(), 20u);
  EXPECT_EQ(make_pairs(group_of({"a", "b", "c", "d", "e", "f", "g"}), vocab_of({"a", "b", "c", "d", "e", "f", "g"})).size(),
            42u);
}

TEST(MakePairs, SmallestGroupIsBothDirections) {
  Vocab v = vocab_of({"x", "y"});
  auto pairs = make_pairs(group_of({"x", "y"}), v);
  ASSERT_EQ(pairs.size(), 2u);
  const TokenIds A{v.id("x"), kEos}, B{v.id("y"), kEos};
  EXPECT_EQ(pairs[0].source, A);
  EXPECT_EQ(pairs[0].target, B);
  EXPECT_EQ(pairs[1].source, B);
  EXPECT_EQ(pairs[1].target, A);
}

TEST(MakePairs, RejectsSingletonGroup) {
  ParaphraseGroup g{"solo", {{"only"}}};
  EXPECT_THROW(make_pairs(g, vocab_of({"only"})), DataError);
  EXPECT_THROW(group_of({"same caption", "Same  Caption"}).sentences.size(), DataError);
}

TEST(MakePairs, DuplicateCaptionsCollapse) {
  auto g = group_of({"A dog.", "a dog .", "A cat."});
  EXPECT_EQ(g.sentences.size(), 2u);
}

TEST(MakePairs, PairInvariants) {
  auto raw = synthetic::caption_groups(20, 5, 3);
  std::vector<ParaphraseGroup> groups;
  for (const auto& r : raw) groups.push_back(make_group(r));
  Vocab v = build_vocab(groups);
  auto pairs = make_all_pairs(groups, v);
  // Brute-force recount by double loop.
  std::size_t expected = 0;
  for (const auto& g : groups) {
    for (std::size_t i = 0; i < g.sentences.size(); ++i) {
      for (std::size_t j = 0; j < g.sentences.size(); ++j) expected += (i != j);
    }
  }
  EXPECT_EQ(pairs.size(), expected);
  for (const auto& p : pairs) {
    ASSERT_FALSE(p.source.empty());
    EXPECT_EQ(p.source.back(), kEos);
    EXPECT_EQ(p.target.back(), kEos);
    EXPECT_NE(p.source, p.target);
    for (auto id : p.source) EXPECT_NE(id, kPad);
  }
}

TEST(MaxSeqLen, TruncatesBeforeEos) {
  Vocab v = vocab_of({"a", "b", "c", "d"});
  auto ids = to_ids({"a", "b", "c", "d"}, v, 3);
  EXPECT_EQ(ids, (TokenIds{v.id("a"), v.id("b"), kEos}));
  EXPECT_THROW(to_ids({"a"}, v, 1), ConfigError);
}

TEST(BuildVocab, SetSemantics) {
  std::vector<ParaphraseGroup> groups{{"g", {{"a", "b"}, {"a"}}}};
  Vocab v = build_vocab(groups);
  EXPECT_EQ(v.size(), 6u);
  EXPECT_EQ(v.id("a"), 4u);
  EXPECT_EQ(v.id("b"), 5u);
  EXPECT_EQ(build_vocab({}).size(), 4u);
  EXPECT_EQ(v.token(kPad), "<pad>");
  EXPECT_EQ(v.id("never-seen"), kUnk);
}

TEST(BuildVocab, MatchesHashSetCount) {
  auto raw = synthetic::caption_groups(50, 5, 9);
  std::vector<ParaphraseGroup> groups;
  std::unordered_set<std::string> oracle;
  for (const auto& r : raw) {
    groups.push_back(make_group(r));
    for (const auto& c : r.captions) {
      for (const auto& t : tokenize(c)) oracle.insert(t);
    }
  }
  Vocab v = build_vocab(groups);
  EXPECT_EQ(v.size(), oracle.size() + 4);
  // Dense, bijective ids.
  for (std::size_t id = 0; id < v.size(); ++id) EXPECT_EQ(v.id(v.token(id)), id);
}

TEST(BuildVocab, EncodeDecodeRoundTrip) {
  auto raw = synthetic::caption_groups(30, 5, 4);
  std::vector<ParaphraseGroup> groups;
  for (const auto& r : raw) groups.push_back(make_group(r));
  Vocab v = build_vocab(groups);
  for (const auto& g : groups) {
    for (const auto& s : g.sentences) EXPECT_EQ(v.decode(v.encode(s)), s);
  }
}

TEST(BuildVocab, Deterministic) {
  auto raw = synthetic::caption_groups(30, 5, 4);
  std::vector<ParaphraseGroup> groups;
  for (const auto& r : raw) groups.push_back(make_group(r));
  EXPECT_EQ(build_vocab(groups).tokens(), build_vocab(groups).tokens());
  EXPECT_EQ(build_vocab(groups).hash(), build_vocab(groups).hash());
}

TEST(CorpusJsonl, ParsesAndReportsLineNumbers) {
  std::istringstream ok(R"({"id": "1", "captions": ["A dog.", "A hound."]}
{"id": 7, "captions": ["x y", "y x"]}
)");
  auto groups = parse_corpus_jsonl(ok, "mem");
  ASSERT_EQ(groups.size(), 2u);
  EXPECT_EQ(groups[1].id, "7");
  EXPECT_EQ(groups[0].captions[1], "A hound.");

  std::istringstream bad("{\"id\": \"1\", \"captions\": [\"a\", \"b\"]}\n{oops\n");
  try {
    parse_corpus_jsonl(bad, "mem");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("mem:2"), std::string::npos) << e.what();
  }
  std::istringstream missing("{\"id\": \"1\"}\n");
  EXPECT_THROW(parse_corpus_jsonl(missing, "mem"), DataError);
}

TEST(Embeddings, DirectCopyAndPadRow) {
  Vocab v = vocab_of({"cat", "dog"});
  std::istringstream file("cat 0.1 0.2\n<pad> 9 9\n");
  auto load = parse_pretrained_embeddings(file, "vec", v, 2, 1);
  EXPECT_EQ(load.matched, 1u);
  EXPECT_EQ(load.table.rows(v.id("cat"), 0), 0.1);
  EXPECT_EQ(load.table.rows(v.id("cat"), 1), 0.2);
  EXPECT_EQ(load.table.rows(kPad, 0), 0.0);
  EXPECT_EQ(load.table.rows(kPad, 1), 0.0);
  EXPECT_EQ(load.table.rows.shape(), (numkit::Shape{v.size(), 2}));
}

TEST(Embeddings, FallbackRowsAreSeededUniform) {
  Vocab v = vocab_of({"cat", "dog"});
  std::istringstream f1("cat 0.1 0.2\n"), f2("cat 0.1 0.2\n"), f3("cat 0.1 0.2\n");
  auto a = parse_pretrained_embeddings(f1, "vec", v, 2, 42);
  auto b = parse_pretrained_embeddings(f2, "vec", v, 2, 42);
  auto c = parse_pretrained_embeddings(f3, "vec", v, 2, 43);
  const auto dog = v.id("dog");
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_GE(a.table.rows(dog, k), -0.1);
    EXPECT_LT(a.table.rows(dog, k), 0.1);
    EXPECT_EQ(a.table.rows(dog, k), b.table.rows(dog, k));
  }
  EXPECT_NE(a.table.rows(dog, 0), c.table.rows(dog, 0));
}

TEST(Embeddings, MalformedLinesReported) {
  Vocab v = vocab_of({"cat"});
  std::istringstream wrong_dim("cat 0.1 0.2 0.3\n");
  EXPECT_THROW(parse_pretrained_embeddings(wrong_dim, "vec", v, 2, 1), DataError);
  std::istringstream short_line("cat 0.1 0.2\ndog 0.5\n");
  try {
    parse_pretrained_embeddings(short_line, "vec", v, 2, 1);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("vec:2"), std::string::npos) << e.what();
  }
  std::istringstream not_number("cat 0.1 zz\n");
  EXPECT_THROW(parse_pretrained_embeddings(not_number, "vec", v, 2, 1), DataError);
  std::istringstream header("2 2\ncat 1 2\ndog 3 4\n");
  EXPECT_EQ(parse_pretrained_embeddings(header, "vec", v, 2, 1).matched, 1u);
  std::istringstream bad_header("2 3\ncat 1 2\n");
  EXPECT_THROW(parse_pretrained_embeddings(bad_header, "vec", v, 2, 1), DataError);
}
