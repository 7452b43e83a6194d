// pthought: corpus preparation, training, embedding and evaluation from the shell.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pthought/pthought.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace pthought;

namespace {

constexpr const char* kManifestFormat = "pthought-manifest/1";

constexpr const char* kFormats = R"(File formats:
  corpus JSONL     one object per line: {"id": <string|number>, "captions": [<string>, ...]}
  pairs TSV        group_id <TAB> source tokens <TAB> target tokens
  word vectors     optional "count dim" header, then: word v1 ... vdim (space separated)
  checkpoint JSON  {"format": "pthought-checkpoint/1", config, vocab, vocab_hash, tensors, optimizer?}
  loss trace TSV   step <TAB> l_auto <TAB> l_para <TAB> total
  embedding TSV    group_id <TAB> sentence_index <TAB> v1 <TAB> ... <TAB> vw
  STS TSV          split(train|dev|test) <TAB> score[0,5] <TAB> sentence_1 <TAB> sentence_2
  scatter TSV      x <TAB> y <TAB> group_id
  manifest JSON    {"format": "pthought-manifest/1", command, argv, cwd, config, seed, inputs, outputs}
Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.)";

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  return "fnv1a64:" + checkpoint::hex64(h);
}

struct Manifest {
  std::string command;
  json config = json::object();
  std::optional<std::uint64_t> seed;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::string path;
};

void write_manifest(const Manifest& m, const std::vector<std::string>& argv) {
  json j;
  j["format"] = kManifestFormat;
  j["command"] = m.command;
  j["argv"] = argv;
  j["cwd"] = fs::current_path().string();
  j["config"] = m.config;
  j["seed"] = m.seed ? json(*m.seed) : json(nullptr);
  j["inputs"] = json::object();
  for (const auto& p : m.inputs) j["inputs"][p] = file_digest(p);
  j["outputs"] = json::object();
  for (const auto& p : m.outputs) j["outputs"][p] = file_digest(p);
  std::ofstream out(m.path);
  if (!out) throw DataError("cannot write manifest " + m.path);
  out << j.dump(2) << '\n';
}

std::ofstream open_out(const std::string& path) {
  if (auto parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  return out;
}

std::string join(const corpus::Tokens& toks) {
  std::string s;
  for (std::size_t i = 0; i < toks.size(); ++i) s += (i ? " " : "") + toks[i];
  return s;
}

std::string join_ids(const corpus::TokenIds& ids, const corpus::Vocab& vocab) {
  corpus::Tokens toks;
  for (auto id : ids) {
    if (id != corpus::kEos) toks.push_back(vocab.token(id));
  }
  return join(toks);
}

// Prepends "--key=value" for every entry of a key=value file given to
// train via --config, so flags on the command line (parsed later) win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  if (args.empty() || args[0] != "train") return args;
  std::optional<std::string> path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (!path) return args;
  std::ifstream in(*path);
  if (!in) throw DataError("cannot open config " + *path);
  std::vector<std::string> out{args[0]};
  for (const auto& [k, value] : train::parse_key_values(in, *path)) {
    std::string key = k;
    std::replace(key.begin(), key.end(), '_', '-');
    if (key == "config") throw ConfigError(*path + ": config files cannot include other config files");
    out.push_back("--" + key + "=" + value);
  }
  out.insert(out.end(), args.begin() + 1, args.end());
  return out;
}

int run(std::vector<std::string> args);

// ---------------------------------------------------------------------------

struct SynthOpts {
  std::size_t groups = 50, per_group = 5;
  std::uint64_t seed = 1;
  std::string out;
};

void cmd_synth(const SynthOpts& o, Manifest& m) {
  auto out = open_out(o.out);
  for (const auto& g : synthetic::caption_groups(o.groups, o.per_group, o.seed)) {
    out << json{{"id", g.id}, {"captions", g.captions}}.dump() << '\n';
  }
  out.close();
  m.config = {{"groups", o.groups}, {"per_group", o.per_group}, {"out", o.out}};
  m.seed = o.seed;
  m.outputs = {o.out};
  std::cout << "groups\t" << o.groups << "\ncaptions\t" << o.groups * o.per_group << '\n';
}

struct PairsOpts {
  std::string corpus, out;
  std::size_t max_len = corpus::kDefaultMaxSeqLen;
};

void cmd_pairs(const PairsOpts& o, Manifest& m) {
  const auto groups = corpus::load_groups(o.corpus);
  const auto vocab = corpus::build_vocab(groups);
  auto out = open_out(o.out);
  for (const auto& g : groups) {
    for (const auto& p : corpus::make_pairs(g, vocab, o.max_len)) {
      out << g.id << '\t' << join_ids(p.source, vocab) << '\t' << join_ids(p.target, vocab) << '\n';
    }
  }
  out.close();
  const auto s = corpus::summarize(groups, vocab);
  std::cout << "groups\t" << s.groups << "\nsentences\t" << s.sentences << "\npairs\t" << s.pairs << "\nvocab\t"
            << s.vocab << '\n';
  m.config = {{"corpus", o.corpus}, {"out", o.out}, {"max_len", o.max_len}};
  m.inputs = {o.corpus};
  m.outputs = {o.out};
}

struct TrainOpts {
  std::string corpus, out_dir = "run", variant = "two-bi", embeddings, heldout, resume, config;
  std::size_t hidden = 32, embed_dim = 32;
  bool unfreeze = false, shared_projection = false;
  train::TrainConfig cfg;
};

void cmd_train(const TrainOpts& o, Manifest& m) {
  const auto variant = model::parse_variant(o.variant);
  o.cfg.validate();
  model::warn_small_alpha(o.cfg.alpha);
  if (o.hidden == 0) throw ConfigError("--hidden must be positive");
  if (o.embed_dim == 0) throw ConfigError("--embed-dim must be positive");

  const auto groups = corpus::load_groups(o.corpus);
  checkpoint::Checkpoint ck;
  train::TrainState state;
  if (!o.resume.empty()) {
    ck = checkpoint::load(o.resume);
    if (!ck.state) throw DataError(o.resume + ": checkpoint has no optimizer state to resume from");
    state = *ck.state;
  } else {
    ck.vocab = corpus::build_vocab(groups);
    model::ModelConfig mc;
    mc.variant = variant;
    mc.vocab_size = ck.vocab.size();
    mc.hidden_dim = o.hidden;
    mc.embed_dim = o.embed_dim;
    mc.shared_projection = o.shared_projection;
    std::optional<corpus::EmbeddingTable> table;
    if (!o.embeddings.empty()) {
      auto load = corpus::load_pretrained_embeddings(o.embeddings, ck.vocab, o.embed_dim, o.cfg.seed);
      std::cout << "pretrained vectors matched\t" << load.matched << " of " << ck.vocab.size() - 4 << '\n';
      table = std::move(load.table);
    }
    ck.params = model::init_params(mc, o.cfg.seed, table);
  }
  ck.alpha = o.cfg.alpha;
  ck.seed = o.cfg.seed;
  ck.max_seq_len = o.cfg.max_seq_len;

  const auto pairs = corpus::make_all_pairs(groups, ck.vocab, o.cfg.max_seq_len);
  std::vector<corpus::SentencePair> heldout;
  if (!o.heldout.empty()) heldout = corpus::make_all_pairs(corpus::load_groups(o.heldout), ck.vocab, o.cfg.max_seq_len);

  fs::create_directories(o.out_dir);
  const fs::path dir(o.out_dir);
  std::vector<std::string> outputs;
  train::TrainHooks hooks;
  if (!heldout.empty()) hooks.heldout = &heldout;
  hooks.on_epoch_end = [&](int epoch, const model::ModelParams& params, const train::TrainState& st) {
    const auto path = (dir / ("checkpoint-epoch" + std::to_string(epoch) + ".json")).string();
    checkpoint::save(path, {params, ck.vocab, ck.alpha, ck.seed, ck.max_seq_len, st});
    outputs.push_back(path);
  };
  std::cout << "pairs\t" << pairs.size() << "\nvocab\t" << ck.vocab.size() << '\n';
  const auto trace = train::train(pairs, ck.params, o.cfg, state, hooks);
  for (const auto& e : trace.epochs) {
    std::cout << "epoch " << e.epoch << "\tmean_total " << format_double(e.mean_total);
    if (e.heldout_total) std::cout << "\theldout_total " << format_double(*e.heldout_total);
    std::cout << '\n';
  }
  ck.state = state;
  const auto ck_path = (dir / "checkpoint.json").string();
  checkpoint::save(ck_path, ck);
  const auto trace_path = (dir / "loss_trace.tsv").string();
  {
    auto out = open_out(trace_path);
    trace.write_tsv(out);
  }
  outputs.insert(outputs.begin(), {ck_path, trace_path});
  std::cout << "checkpoint\t" << ck_path << '\n';

  const auto& c = ck.params.config;
  m.config = {{"corpus", o.corpus},
              {"out_dir", o.out_dir},
              {"variant", model::to_string(c.variant)},
              {"hidden", c.hidden_dim},
              {"embed_dim", c.embed_dim},
              {"shared_projection", c.shared_projection},
              {"alpha", o.cfg.alpha},
              {"lr", o.cfg.learning_rate},
              {"beta1", o.cfg.beta1},
              {"beta2", o.cfg.beta2},
              {"epsilon", o.cfg.epsilon},
              {"batch", o.cfg.batch_size},
              {"epochs", o.cfg.epochs},
              {"max_len", o.cfg.max_seq_len},
              {"clip", o.cfg.clip_norm},
              {"unfreeze_embeddings", o.cfg.unfreeze_embeddings},
              {"embeddings", o.embeddings},
              {"heldout", o.heldout},
              {"resume", o.resume}};
  m.seed = o.cfg.seed;
  m.inputs = {o.corpus};
  for (const auto* p : {&o.embeddings, &o.heldout, &o.resume, &o.config}) {
    if (!p->empty()) m.inputs.push_back(*p);
  }
  m.outputs = outputs;
}

struct EmbedOpts {
  std::string checkpoint, corpus, out;
  bool allow_unk = false;
};

void cmd_embed(const EmbedOpts& o, Manifest& m) {
  const auto ck = checkpoint::load(o.checkpoint);
  const auto raw = corpus::read_corpus_jsonl(o.corpus);
  if (raw.empty()) throw DataError(o.corpus + ": no groups");
  std::vector<corpus::TokenIds> seqs;
  std::size_t unknown = 0;
  for (const auto& g : raw) {
    for (const auto& caption : g.captions) {
      const auto toks = corpus::tokenize(caption);
      for (const auto& t : toks) {
        if (ck.vocab.contains(t)) continue;
        if (!o.allow_unk) {
          throw DataError(with_line(o.corpus, g.line,
                                    "token \"" + t + "\" is not in the checkpoint vocabulary (use --allow-unk)"));
        }
        ++unknown;
      }
      seqs.push_back(corpus::to_ids(toks, ck.vocab, ck.max_seq_len));
    }
  }
  const auto vectors = model::encode_all(seqs, ck.params);
  auto out = open_out(o.out);
  std::size_t row = 0;
  for (const auto& g : raw) {
    for (std::size_t i = 0; i < g.captions.size(); ++i) metrics::write_embedding_row(out, g.id, i, vectors[row++]);
  }
  out.close();
  std::cout << "rows\t" << row << "\nwidth\t" << ck.params.config.hidden_dim * 2 << "\nunknown_tokens\t" << unknown
            << '\n';
  m.config = {{"checkpoint", o.checkpoint}, {"corpus", o.corpus}, {"out", o.out}, {"allow_unk", o.allow_unk}};
  m.inputs = {o.checkpoint, o.corpus};
  m.outputs = {o.out};
}

struct PCohOpts {
  std::string embeddings, report;
};

void cmd_eval_pcoherence(const PCohOpts& o, Manifest& m) {
  auto set = metrics::read_embedding_tsv(o.embeddings);
  metrics::EmbeddingSet kept;
  for (auto& g : set.groups) {
    if (g.vectors.size() < 2) {
      std::clog << "warning: skipping group \"" << g.id << "\" with a single sentence\n";
      continue;
    }
    kept.groups.push_back(std::move(g));
  }
  if (kept.groups.empty()) throw DataError(o.embeddings + ": no group has two or more sentences");
  std::ostringstream report;
  report << "group_id\tsentences\tp_coherence\n";
  for (const auto& g : kept.groups) {
    report << g.id << '\t' << g.vectors.size() << '\t' << format_double(metrics::p_coherence_set(g.vectors)) << '\n';
  }
  const double total = metrics::p_coherence_total(kept);
  if (o.report.empty()) {
    std::cout << report.str();
  } else {
    auto out = open_out(o.report);
    out << report.str();
    m.outputs = {o.report};
  }
  std::cout << "p_coherence_total\t" << format_double(total) << '\n';
  m.config = {{"embeddings", o.embeddings}, {"report", o.report}};
  m.inputs = {o.embeddings};
}

struct StsOpts {
  std::string checkpoint, sts, report;
  sts::ReadoutConfig readout;
};

void cmd_eval_sts(const StsOpts& o, Manifest& m) {
  const auto ck = checkpoint::load(o.checkpoint);
  const auto records = sts::read_sts_tsv(o.sts);
  std::map<std::string, SentenceVector> cache;
  sts::SentenceEncoder encoder = [&](const std::string& s) {
    auto it = cache.find(s);
    if (it == cache.end()) {
      it = cache.emplace(s, model::encode(corpus::to_ids(corpus::tokenize(s), ck.vocab, ck.max_seq_len), ck.params))
               .first;
    }
    return it->second;
  };
  const auto rep = sts::run_benchmark(records, encoder, o.readout);
  std::ostringstream text;
  text << "train\t" << rep.train << "\ndev\t" << rep.dev << "\ntest\t" << rep.test << '\n';
  if (rep.dev_pearson) text << "dev_pearson\t" << format_double(*rep.dev_pearson) << '\n';
  text << "test_pearson\t" << format_double(rep.test_pearson) << '\n';
  std::cout << text.str();
  if (!o.report.empty()) {
    auto out = open_out(o.report);
    out << text.str();
    m.outputs = {o.report};
  }
  m.config = {{"checkpoint", o.checkpoint},
              {"sts", o.sts},
              {"report", o.report},
              {"steps", o.readout.steps},
              {"lr", o.readout.learning_rate},
              {"l2", o.readout.l2}};
  m.seed = o.readout.seed;
  m.inputs = {o.checkpoint, o.sts};
}

struct ProjectOpts {
  std::string embeddings, out;
  metrics::ProjectionOptions projection;
};

void cmd_project(const ProjectOpts& o, Manifest& m) {
  const auto set = metrics::read_embedding_tsv(o.embeddings);
  std::vector<SentenceVector> vectors;
  std::vector<std::string> labels;
  for (const auto& g : set.groups) {
    for (const auto& v : g.vectors) {
      vectors.push_back(v);
      labels.push_back(g.id);
    }
  }
  if (vectors.empty()) throw DataError(o.embeddings + ": no vectors");
  if (vectors.front().width() < 2) throw DataError(o.embeddings + ": vector width must be at least 2");
  const auto proj = metrics::project_2d_detailed(vectors, labels, o.projection);
  auto out = open_out(o.out);
  metrics::write_scatter_tsv(out, proj.points);
  out.close();
  std::cout << "points\t" << proj.points.size() << "\nvariance_1\t" << format_double(proj.component_variance[0])
            << "\nvariance_2\t" << format_double(proj.component_variance[1]) << '\n';
  m.config = {{"embeddings", o.embeddings}, {"out", o.out}, {"iterations", o.projection.iterations}};
  m.seed = o.projection.seed;
  m.inputs = {o.embeddings};
  m.outputs = {o.out};
}

// Re-runs the recorded argv from the recorded directory and checks that every
// input is unchanged and every output is reproduced byte for byte.
int cmd_replay(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open manifest " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError(path + ": invalid manifest JSON: " + e.what());
  }
  if (j.value("format", std::string()) != kManifestFormat) throw DataError(path + ": not a manifest");
  const auto argv = j.at("argv").get<std::vector<std::string>>();
  const auto saved = fs::current_path();
  fs::current_path(j.at("cwd").get<std::string>());
  for (const auto& [p, digest] : j.at("inputs").items()) {
    if (file_digest(p) != digest.get<std::string>()) throw DataError("replay: input " + p + " has changed");
  }
  const int code = run(argv);
  if (code != 0) return code;
  int mismatches = 0;
  for (const auto& [p, digest] : j.at("outputs").items()) {
    const bool same = file_digest(p) == digest.get<std::string>();
    std::cout << (same ? "identical\t" : "DIFFERS\t") << p << '\n';
    mismatches += !same;
  }
  fs::current_path(saved);
  if (mismatches) throw NumericError("replay: " + std::to_string(mismatches) + " output(s) differ");
  std::cout << "replay reproduced all outputs\n";
  return 0;
}

// ---------------------------------------------------------------------------

int run(std::vector<std::string> args) {
  args = expand_config(args);
  CLI::App app{"Paraphrase-trained sentence embeddings: train, embed, evaluate."};
  app.footer(kFormats);
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  Manifest manifest;

  SynthOpts so;
  auto* synth = app.add_subcommand("synth-corpus", "Write a synthetic caption-group corpus (JSONL)");
  synth->add_option("--groups", so.groups, "Number of groups")->capture_default_str();
  synth->add_option("--per-group", so.per_group, "Captions per group")->capture_default_str();
  synth->add_option("--seed", so.seed, "Random seed")->capture_default_str();
  synth->add_option("--out", so.out, "Output JSONL")->required();

  PairsOpts po;
  auto* pairs = app.add_subcommand("pairs", "Build ordered paraphrase pairs and print corpus counts");
  pairs->add_option("corpus", po.corpus, "Corpus JSONL")->required()->check(CLI::ExistingFile);
  pairs->add_option("--out", po.out, "Output pairs TSV")->required();
  pairs->add_option("--max-len", po.max_len, "Max tokens per sentence including EOS")->capture_default_str();

  TrainOpts to;
  auto* tr = app.add_subcommand("train", "Train an encoder with the auto and paraphrase decoders");
  tr->add_option("corpus", to.corpus, "Corpus JSONL")->required()->check(CLI::ExistingFile);
  tr->add_option("--config", to.config, "key=value file; flags on the command line win")->check(CLI::ExistingFile);
  tr->add_option("--out-dir", to.out_dir, "Directory for checkpoints, loss trace and manifest")->capture_default_str();
  tr->add_option("--variant", to.variant, "Encoder: one-bi, two-forward or two-bi")
      ->capture_default_str()
      ->check(CLI::IsMember({"one-bi", "two-forward", "two-bi"}));
  tr->add_option("--hidden", to.hidden, "GRU hidden size (sentence vector width is twice this)")->capture_default_str();
  tr->add_option("--embed-dim", to.embed_dim, "Word embedding width")->capture_default_str();
  tr->add_option("--alpha", to.cfg.alpha, "Weight of the paraphrase loss (must be > 0)")->capture_default_str();
  tr->add_option("--lr", to.cfg.learning_rate, "Adam learning rate")->capture_default_str();
  tr->add_option("--beta1", to.cfg.beta1, "Adam beta1")->capture_default_str();
  tr->add_option("--beta2", to.cfg.beta2, "Adam beta2")->capture_default_str();
  tr->add_option("--epsilon", to.cfg.epsilon, "Adam epsilon")->capture_default_str();
  tr->add_option("--batch", to.cfg.batch_size, "Pairs per mini-batch")->capture_default_str();
  tr->add_option("--epochs", to.cfg.epochs, "Training epochs")->capture_default_str();
  tr->add_option("--seed", to.cfg.seed, "Seed for initialization and shuffling")->capture_default_str();
  tr->add_option("--max-len", to.cfg.max_seq_len, "Max tokens per sentence including EOS")->capture_default_str();
  tr->add_option("--clip", to.cfg.clip_norm, "Global gradient-norm clip (0 = off)")->capture_default_str();
  tr->add_option("--embeddings", to.embeddings, "Pretrained word vectors (text format)")->check(CLI::ExistingFile);
  tr->add_flag("--unfreeze-embeddings", to.cfg.unfreeze_embeddings, "Update the word embedding table");
  tr->add_flag("--shared-projection", to.shared_projection, "Both decoders share one output projection");
  tr->add_option("--heldout", to.heldout, "Held-out corpus JSONL for per-epoch loss")->check(CLI::ExistingFile);
  tr->add_option("--resume", to.resume, "Continue from a checkpoint with optimizer state")->check(CLI::ExistingFile);

  EmbedOpts eo;
  auto* embed = app.add_subcommand("embed", "Encode every caption of a corpus into an embedding TSV");
  embed->add_option("corpus", eo.corpus, "Corpus JSONL")->required()->check(CLI::ExistingFile);
  embed->add_option("--checkpoint", eo.checkpoint, "Checkpoint JSON")->required()->check(CLI::ExistingFile);
  embed->add_option("--out", eo.out, "Output embedding TSV")->required();
  embed->add_flag("--allow-unk", eo.allow_unk, "Map tokens missing from the checkpoint vocabulary to <unk>");

  PCohOpts pco;
  auto* pcoh = app.add_subcommand("eval-pcoherence", "Per-group and total P-coherence of an embedding TSV");
  pcoh->add_option("embeddings", pco.embeddings, "Embedding TSV")->required()->check(CLI::ExistingFile);
  pcoh->add_option("--report", pco.report, "Write the per-group TSV here instead of stdout");

  StsOpts sto;
  auto* ests = app.add_subcommand("eval-sts", "Fit the similarity readout on train and report Pearson r");
  ests->add_option("sts", sto.sts, "STS TSV")->required()->check(CLI::ExistingFile);
  ests->add_option("--checkpoint", sto.checkpoint, "Checkpoint JSON")->required()->check(CLI::ExistingFile);
  ests->add_option("--steps", sto.readout.steps, "Readout optimizer steps")->capture_default_str();
  ests->add_option("--lr", sto.readout.learning_rate, "Readout learning rate")->capture_default_str();
  ests->add_option("--l2", sto.readout.l2, "Readout weight penalty")->capture_default_str();
  ests->add_option("--seed", sto.readout.seed, "Readout initialization seed")->capture_default_str();
  ests->add_option("--report", sto.report, "Also write the report here");

  ProjectOpts pro;
  auto* proj = app.add_subcommand("project", "Project an embedding TSV onto its top two principal axes");
  proj->add_option("embeddings", pro.embeddings, "Embedding TSV")->required()->check(CLI::ExistingFile);
  proj->add_option("--out", pro.out, "Output scatter TSV")->required();
  proj->add_option("--seed", pro.projection.seed, "Power-iteration start seed")->capture_default_str();
  proj->add_option("--iterations", pro.projection.iterations, "Power-iteration steps")->capture_default_str();

  std::string replay_path;
  auto* replay = app.add_subcommand("replay", "Re-run a manifest and verify its outputs are reproduced");
  replay->add_option("manifest", replay_path, "Manifest JSON")->required()->check(CLI::ExistingFile);

  for (auto* sub : {synth, pairs, tr, embed, pcoh, ests, proj}) {
    sub->add_option("--manifest", manifest.path, "Where to write the run manifest");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  auto* sub = app.get_subcommands().front();
  if (sub == replay) return cmd_replay(replay_path);
  manifest.command = sub->get_name();
  if (sub == synth) {
    cmd_synth(so, manifest);
  } else if (sub == pairs) {
    cmd_pairs(po, manifest);
  } else if (sub == tr) {
    cmd_train(to, manifest);
  } else if (sub == embed) {
    cmd_embed(eo, manifest);
  } else if (sub == pcoh) {
    cmd_eval_pcoherence(pco, manifest);
  } else if (sub == ests) {
    cmd_eval_sts(sto, manifest);
  } else if (sub == proj) {
    cmd_project(pro, manifest);
  }
  if (manifest.path.empty()) {
    if (sub == tr) {
      manifest.path = (fs::path(to.out_dir) / "manifest.json").string();
    } else if (!manifest.outputs.empty()) {
      manifest.path = manifest.outputs.front() + ".manifest.json";
    } else {
      manifest.path = manifest.command + ".manifest.json";
    }
  }
  write_manifest(manifest, args);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return run(args);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\nRun with --help for usage.\n";
    return 1;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return 3;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const ShapeError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
