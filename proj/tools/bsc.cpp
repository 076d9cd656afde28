// bsc: bilingual sense-clique embedding pipeline.
//
// Stages persist artifacts under --out-dir so expensive steps (graph,
// cliques) are reused across method and dimension sweeps:
//   build      corpus -> vocab.tsv, sentences.bin, graph.bin
//   cliques    pruned whole-graph cliques -> nn_vocab.tsv, nn_graph.bin,
//              cliques.bin
//   embed      nn: cliques -> nn_embedding.txt (+ train_report.json)
//              pca/ca: local spaces are built per query; writes a marker
//   translate  ranked nearest words for one query
//   eval       P@k over a lexicon, JSON report + table
//   visualize  top-2 coordinates of a word's local space as TSV
//   tune       dimension sweep on a dev lexicon

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <string>
#include <vector>

#include "bsc/cbow.hpp"
#include "bsc/clique.hpp"
#include "bsc/corpus.hpp"
#include "bsc/errors.hpp"
#include "bsc/graph.hpp"
#include "bsc/io.hpp"
#include "bsc/reduce.hpp"
#include "bsc/translate.hpp"
#include "bsc/types.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Paths {
  fs::path dir;

  std::string vocab() const { return (dir / "vocab.tsv").string(); }
  std::string sentences() const { return (dir / "sentences.bin").string(); }
  std::string graph() const { return (dir / "graph.bin").string(); }
  std::string graph_tsv() const { return (dir / "graph.tsv").string(); }
  std::string nn_vocab() const { return (dir / "nn_vocab.tsv").string(); }
  std::string nn_graph() const { return (dir / "nn_graph.bin").string(); }
  std::string cliques() const { return (dir / "cliques.bin").string(); }
  std::string embedding() const { return (dir / "nn_embedding.txt").string(); }
  std::string train_report() const {
    return (dir / "train_report.json").string();
  }
  std::string marker() const { return (dir / "embed.marker").string(); }
  std::string eval_report() const {
    return (dir / "eval_report.json").string();
  }
  std::string tune_report() const {
    return (dir / "tune_report.json").string();
  }
};

struct CommonOpts {
  std::string out_dir = ".";
  double threshold = 3e-4;
  std::string method = "ca";
  size_t dim = 100;
  uint64_t seed = 1;
  unsigned workers = 1;
};

bsc::ReduceMethod reduce_method(const std::string& m) {
  return m == "pca" ? bsc::ReduceMethod::pca : bsc::ReduceMethod::ca;
}

// Applies the ingestion normalization to a standalone word. Words that do
// not normalize to exactly one token can never match a vocabulary entry.
std::optional<std::string> normalize_word(const std::string& raw) {
  auto toks = bsc::tokenize(raw, bsc::TokenizerConfig{});
  if (toks.size() != 1) return std::nullopt;
  return toks[0];
}

bsc::Token parse_query(const std::string& raw) {
  size_t colon = raw.find(':');
  if (colon != std::string::npos) {
    auto lang = bsc::parse_lang(raw.substr(0, colon));
    if (lang) {
      auto surface = normalize_word(raw.substr(colon + 1));
      if (!surface)
        throw bsc::error(bsc::errc::unknown_query,
                         "query '" + raw + "' does not normalize to one word");
      return bsc::Token{*surface, *lang};
    }
  }
  throw bsc::error(bsc::errc::unknown_query,
                   "query must be 'src:<word>' or 'tgt:<word>', got '" + raw +
                       "'");
}

// Lexicon rows normalized like the corpus; a side that does not yield one
// token gets an empty surface, which no vocabulary contains, so the pair is
// discarded as out-of-vocabulary by the evaluator.
std::vector<bsc::LexiconPair> load_lexicon(const std::string& path) {
  std::vector<bsc::LexiconPair> pairs;
  for (const auto& raw : bsc::load_lexicon_tsv(path)) {
    bsc::LexiconPair p;
    p.source = bsc::Token{normalize_word(raw.source).value_or(""), bsc::Lang::src};
    p.gold = bsc::Token{normalize_word(raw.gold).value_or(""), bsc::Lang::tgt};
    pairs.push_back(std::move(p));
  }
  if (pairs.empty())
    throw bsc::io_failure(path + ": lexicon contains no pairs");
  return pairs;
}

void write_json(const json& j, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw bsc::io_failure("cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
  if (!out.flush()) throw bsc::io_failure("write error on " + path);
}

// Sorted-by-id word space from a text embedding file.
bsc::WordSpace space_from_file(const bsc::Vocabulary& vocab,
                               const std::string& path) {
  bsc::LoadedEmbedding e = bsc::load_embedding_text(vocab, path);
  std::vector<size_t> order(e.words.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return e.words[a] < e.words[b]; });
  bsc::WordSpace s;
  s.dim = e.dim;
  s.words.reserve(order.size());
  s.coords.resize(static_cast<Eigen::Index>(order.size()),
                  static_cast<Eigen::Index>(e.dim));
  for (size_t r = 0; r < order.size(); ++r) {
    uint32_t id = e.words[order[r]];
    if (!s.words.empty() && id == s.words.back())
      throw bsc::io_failure(path + ": duplicate word entry");
    s.words.push_back(id);
    for (size_t d = 0; d < e.dim; ++d)
      s.coords(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(d)) =
          e.coords[order[r]][d];
  }
  return s;
}

std::string g9(double v) {
  char tmp[64];
  std::snprintf(tmp, sizeof tmp, "%.9g", v);
  return tmp;
}

// ---- build ----------------------------------------------------------------

struct BuildOpts : CommonOpts {
  std::string src, tgt;
  bool graph_tsv = false;
};

void cmd_build(const BuildOpts& o) {
  Paths p{o.out_dir};
  fs::create_directories(p.dir);

  bsc::ParallelCorpus corpus = bsc::ingest(o.src, o.tgt);
  bsc::save_vocab_tsv(corpus.vocab, p.vocab());
  bsc::save_sentences(corpus.sentences, p.sentences());

  bsc::CooccurrenceCounts counts =
      bsc::count_cooccurrences(corpus.sentences, corpus.vocab, o.workers);
  bsc::BilingualGraph g = bsc::build_graph(counts, corpus.vocab, o.threshold);
  bsc::save_graph(g, p.graph());
  if (o.graph_tsv)
    bsc::export_graph_tsv(counts, corpus.vocab, o.threshold, p.graph_tsv());

  uint32_t src_words = 0;
  for (uint32_t id = 0; id < corpus.vocab.size(); ++id)
    if (corpus.vocab.lang(id) == bsc::Lang::src) ++src_words;
  bsc::GraphStats st = bsc::graph_stats(g);
  std::cout << "vocabulary: " << corpus.vocab.size() << " words (src "
            << src_words << ", tgt " << corpus.vocab.size() - src_words
            << ")\n"
            << "sentences: " << corpus.sentences.size() << " (tokens "
            << corpus.total_tokens << ")\n"
            << "graph: " << st.node_count << " nodes, " << st.edge_count
            << " edges, mean degree " << g9(st.mean_degree) << ", isolated "
            << st.isolated_nodes << "\n"
            << "mean extracted subgraph size: "
            << g9(st.mean_extracted_subgraph) << "\n";
}

// ---- cliques ---------------------------------------------------------------

struct CliquesOpts : CommonOpts {
  uint64_t min_freq = 5;
  uint64_t budget = bsc::kDefaultGlobalCliqueBudget;
};

void cmd_cliques(const CliquesOpts& o) {
  Paths p{o.out_dir};
  bsc::Vocabulary vocab = bsc::load_vocab_tsv(p.vocab());
  std::vector<bsc::BilingualSentence> sentences =
      bsc::load_sentences(p.sentences());

  // The frequency cutoff applies to this whole-graph stage only; kept
  // words retain their corpus frequencies, so edge weights are unchanged.
  bsc::PruneResult pruned = bsc::prune_by_frequency(vocab, o.min_freq);
  std::vector<bsc::BilingualSentence> kept =
      bsc::reencode_sentences(sentences, pruned.remap);

  bsc::CooccurrenceCounts counts =
      bsc::count_cooccurrences(kept, pruned.vocab, o.workers);
  bsc::BilingualGraph g = bsc::build_graph(counts, pruned.vocab, o.threshold);

  std::vector<bsc::SenseClique> cliques =
      bsc::all_maximal_cliques(g, pruned.vocab, o.budget, o.workers);
  if (cliques.empty())
    throw bsc::no_cliques("graph has no clique of size >= 2 (threshold " +
                          g9(o.threshold) + ", min-freq " +
                          std::to_string(o.min_freq) + ")");

  bsc::save_vocab_tsv(pruned.vocab, p.nn_vocab());
  bsc::save_graph(g, p.nn_graph());
  bsc::save_cliques(cliques, bsc::graph_checksum(g), p.cliques());

  size_t largest = 0;
  for (const auto& c : cliques) largest = std::max(largest, c.size());
  std::cout << "pruned vocabulary: " << pruned.vocab.size() << " of "
            << vocab.size() << " words (min-freq " << o.min_freq << ")\n"
            << "pruned graph: " << g.node_count() << " nodes, "
            << g.edge_count() << " edges\n"
            << "cliques: " << cliques.size() << " (largest " << largest
            << ")\n";
}

// ---- embed -----------------------------------------------------------------

struct EmbedOpts : CommonOpts {
  size_t window = 8;
  size_t negatives = 5;
  size_t epochs = 5;
  double lr = 0.025;
  size_t table_size = 10'000'000;
};

void cmd_embed(const EmbedOpts& o) {
  Paths p{o.out_dir};
  if (o.method != "nn") {
    // Local methods build their space per query word at translate/eval
    // time; record the configuration so downstream tooling can check it.
    std::ofstream out(p.marker(), std::ios::binary | std::ios::trunc);
    if (!out)
      throw bsc::io_failure("cannot open " + p.marker() + " for writing");
    out << "method=" << o.method << "\ndim=" << o.dim << "\n";
    if (!out.flush()) throw bsc::io_failure("write error on " + p.marker());
    std::cout << "method " << o.method
              << " builds local spaces per query; wrote " << p.marker()
              << "\n";
    return;
  }

  bsc::Vocabulary vocab = bsc::load_vocab_tsv(p.nn_vocab());
  bsc::BilingualGraph g = bsc::load_graph(p.nn_graph());
  std::vector<bsc::SenseClique> cliques =
      bsc::load_cliques(p.cliques(), bsc::graph_checksum(g));

  bsc::CbowConfig cfg;
  cfg.dim = o.dim;
  cfg.window = o.window;
  cfg.negatives = o.negatives;
  cfg.epochs = o.epochs;
  cfg.initial_lr = o.lr;
  cfg.seed = o.seed;
  cfg.workers = o.workers;
  cfg.unigram_table_size = o.table_size;

  bsc::TrainingSet windows = bsc::cliques_to_training_windows(cliques, cfg);
  bsc::TrainReport rep;
  bsc::GlobalEmbedding emb = bsc::train(windows, cfg, vocab, &rep);
  bsc::save_embedding_text(vocab, emb, p.embedding());

  json jr;
  jr["dim"] = cfg.dim;
  jr["epochs"] = cfg.epochs;
  jr["seed"] = cfg.seed;
  jr["examples_seen"] = rep.examples_seen;
  jr["discarded_cliques"] = rep.discarded_cliques;
  jr["epoch_loss"] = rep.epoch_loss;
  write_json(jr, p.train_report());

  std::cout << "trained " << vocab.size() << " vectors of dim " << cfg.dim
            << " over " << windows.clique_count() << " cliques ("
            << rep.discarded_cliques << " discarded > window "
            << cfg.window << ")\n";
  for (size_t e = 0; e < rep.epoch_loss.size(); ++e)
    std::cout << "epoch " << e + 1 << " mean loss " << g9(rep.epoch_loss[e])
              << "\n";
}

// ---- translate ------------------------------------------------------------

struct TranslateOpts : CommonOpts {
  std::string query;
  size_t k = 5;
};

void cmd_translate(const TranslateOpts& o) {
  Paths p{o.out_dir};
  bsc::Token query = parse_query(o.query);
  bsc::Lang target =
      query.lang == bsc::Lang::src ? bsc::Lang::tgt : bsc::Lang::src;

  bsc::Vocabulary vocab;
  std::vector<bsc::Neighbor> nn;
  if (o.method == "nn") {
    vocab = bsc::load_vocab_tsv(p.nn_vocab());
    bsc::WordSpace space = space_from_file(vocab, p.embedding());
    nn = bsc::knn_translate(space, vocab, query, o.k, target);
  } else {
    vocab = bsc::load_vocab_tsv(p.vocab());
    bsc::BilingualGraph g = bsc::load_graph(p.graph());
    auto qid = vocab.find(query.surface, query.lang);
    if (!qid)
      throw bsc::query_not_in_space("word " +
                                    std::string(bsc::lang_name(query.lang)) +
                                    ":" + query.surface +
                                    " is not in the vocabulary");
    bsc::LocalEmbedding local = bsc::embed_word_locally(
        g, vocab, *qid, reduce_method(o.method), o.dim);
    nn = bsc::knn_translate(bsc::to_space(local), vocab, query, o.k, target);
  }

  for (size_t r = 0; r < nn.size(); ++r) {
    const bsc::Token& t = vocab.token(nn[r].id);
    std::cout << r + 1 << "\t" << bsc::lang_name(t.lang) << ":" << t.surface
              << "\t" << g9(nn[r].distance) << "\n";
  }
}

// ---- eval / tune ----------------------------------------------------------

struct EvalOpts : CommonOpts {
  std::string lexicon;
  std::vector<size_t> k_values{1, 5};
  std::string direction = "both";
  bool timings = false;
};

// Embedder plus the artifacts it borrows; keeps the graph/vocab alive for
// the closures inside Embedder.
struct EmbedderBundle {
  bsc::Vocabulary vocab;
  bsc::BilingualGraph graph;
  std::shared_ptr<bsc::WordSpace> space;
  bsc::Embedder embedder;
};

EmbedderBundle make_bundle(const CommonOpts& o, const Paths& p) {
  EmbedderBundle b;
  if (o.method == "nn") {
    b.vocab = bsc::load_vocab_tsv(p.nn_vocab());
    b.space =
        std::make_shared<bsc::WordSpace>(space_from_file(b.vocab, p.embedding()));
    b.embedder.name = "nn";
    b.embedder.dim = b.space->dim;
    b.embedder.global = true;
    auto sp = b.space;
    b.embedder.space_for = [sp](uint32_t) { return *sp; };
  } else {
    b.vocab = bsc::load_vocab_tsv(p.vocab());
    b.graph = bsc::load_graph(p.graph());
    b.embedder =
        bsc::make_local_embedder(b.graph, b.vocab, reduce_method(o.method), o.dim);
  }
  return b;
}

json report_json(const bsc::EvalReport& r, bool timings) {
  json j;
  j["direction"] = bsc::direction_name(r.direction);
  j["k"] = r.k_values;
  j["precision"] = r.precision;
  j["evaluated_pairs"] = r.evaluated_pairs;
  j["discarded_oov"] = r.discarded_oov;
  if (timings) j["wall_time_s"] = r.wall_time_s;
  return j;
}

void print_table(const std::vector<bsc::EvalReport>& reports) {
  std::printf("%-6s %-10s %6s", "method", "direction", "dim");
  for (size_t k : reports.front().k_values) std::printf("   P@%-4zu", k);
  std::printf(" %8s %6s %8s\n", "pairs", "oov", "time(s)");
  for (const auto& r : reports) {
    std::printf("%-6s %-10s %6zu", r.method.c_str(),
                bsc::direction_name(r.direction), r.dim);
    for (double pr : r.precision) std::printf("   %6.4f", pr);
    std::printf(" %8llu %6llu %8.2f\n",
                static_cast<unsigned long long>(r.evaluated_pairs),
                static_cast<unsigned long long>(r.discarded_oov),
                r.wall_time_s);
  }
}

void cmd_eval(const EvalOpts& o) {
  Paths p{o.out_dir};
  std::vector<bsc::LexiconPair> pairs = load_lexicon(o.lexicon);
  EmbedderBundle b = make_bundle(o, p);

  std::vector<bsc::Direction> dirs;
  if (o.direction == "both" || o.direction == "src_to_tgt")
    dirs.push_back(bsc::Direction::src_to_tgt);
  if (o.direction == "both" || o.direction == "tgt_to_src")
    dirs.push_back(bsc::Direction::tgt_to_src);

  std::vector<bsc::EvalReport> reports;
  for (bsc::Direction d : dirs)
    reports.push_back(
        bsc::evaluate(pairs, d, b.embedder, b.vocab, o.k_values, o.workers));

  json j;
  j["method"] = b.embedder.name;
  j["dim"] = b.embedder.dim;
  json arr = json::array();
  for (const auto& r : reports) arr.push_back(report_json(r, o.timings));
  j["reports"] = arr;
  write_json(j, p.eval_report());

  print_table(reports);
}

struct TuneOpts : CommonOpts {
  std::string lexicon;
  std::vector<size_t> grid;
  // CBOW knobs reused when method == nn (each grid point retrains).
  size_t window = 8;
  size_t negatives = 5;
  size_t epochs = 5;
  double lr = 0.025;
  size_t table_size = 10'000'000;
};

void cmd_tune(const TuneOpts& o) {
  Paths p{o.out_dir};
  std::vector<bsc::LexiconPair> pairs = load_lexicon(o.lexicon);

  bsc::Vocabulary vocab;
  bsc::BilingualGraph graph;
  std::vector<bsc::SenseClique> cliques;
  std::function<bsc::Embedder(size_t)> embedder_for;

  if (o.method == "nn") {
    vocab = bsc::load_vocab_tsv(p.nn_vocab());
    graph = bsc::load_graph(p.nn_graph());
    cliques = bsc::load_cliques(p.cliques(), bsc::graph_checksum(graph));
    embedder_for = [&, o](size_t dim) {
      bsc::CbowConfig cfg;
      cfg.dim = dim;
      cfg.window = o.window;
      cfg.negatives = o.negatives;
      cfg.epochs = o.epochs;
      cfg.initial_lr = o.lr;
      cfg.seed = o.seed;
      cfg.unigram_table_size = o.table_size;
      bsc::TrainingSet windows = bsc::cliques_to_training_windows(cliques, cfg);
      auto emb = std::make_shared<bsc::GlobalEmbedding>(
          bsc::train(windows, cfg, vocab));
      auto space = std::make_shared<bsc::WordSpace>(bsc::to_space(*emb));
      bsc::Embedder e;
      e.name = "nn";
      e.dim = dim;
      e.global = true;
      e.space_for = [space](uint32_t) { return *space; };
      return e;
    };
  } else {
    vocab = bsc::load_vocab_tsv(p.vocab());
    graph = bsc::load_graph(p.graph());
    embedder_for = [&, o](size_t dim) {
      return bsc::make_local_embedder(graph, vocab, reduce_method(o.method),
                                      dim);
    };
  }

  bsc::TuneResult res =
      bsc::tune_dimension(pairs, embedder_for, vocab, o.grid, o.workers);

  json j;
  j["method"] = o.method;
  j["best_dim"] = res.best_dim;
  json curve = json::array();
  std::printf("%6s %10s %10s %10s %10s %8s\n", "dim", "P@1 s->t", "P@5 s->t",
              "P@1 t->s", "P@5 t->s", "mean");
  for (const auto& s : res.curve) {
    std::printf("%6zu %10.4f %10.4f %10.4f %10.4f %8.4f\n", s.dim, s.p1_fwd,
                s.p5_fwd, s.p1_rev, s.p5_rev, s.mean());
    json c;
    c["dim"] = s.dim;
    c["p1_src_to_tgt"] = s.p1_fwd;
    c["p5_src_to_tgt"] = s.p5_fwd;
    c["p1_tgt_to_src"] = s.p1_rev;
    c["p5_tgt_to_src"] = s.p5_rev;
    c["mean"] = s.mean();
    curve.push_back(c);
  }
  j["curve"] = curve;
  write_json(j, p.tune_report());
  std::printf("best dim: %zu\n", res.best_dim);
}

// ---- visualize ------------------------------------------------------------

struct VisualizeOpts : CommonOpts {
  std::string query;
};

void cmd_visualize(const VisualizeOpts& o) {
  Paths p{o.out_dir};
  bsc::Token query = parse_query(o.query);

  // Rows: every word of the relevant space, 3 columns (word, x, y). Spaces
  // of effective dimension < 2 are zero-padded.
  std::vector<uint32_t> words;
  Eigen::MatrixXd xy;
  bsc::Vocabulary vocab;

  if (o.method == "nn") {
    vocab = bsc::load_vocab_tsv(p.nn_vocab());
    bsc::BilingualGraph g = bsc::load_graph(p.nn_graph());
    bsc::WordSpace space = space_from_file(vocab, p.embedding());
    auto qid = vocab.find(query.surface, query.lang);
    if (!qid)
      throw bsc::query_not_in_space("word " +
                                    std::string(bsc::lang_name(query.lang)) +
                                    ":" + query.surface +
                                    " is not in the vocabulary");
    bsc::ExtractedSubgraph sub = bsc::extract_subgraph(g, *qid);
    Eigen::MatrixXd pts(sub.members.size(), space.dim);
    for (size_t m = 0; m < sub.members.size(); ++m) {
      int64_t row = space.row_of(sub.members[m]);
      if (row < 0)
        throw bsc::io_failure(p.embedding() + ": missing vector for node " +
                              std::to_string(sub.members[m]));
      pts.row(static_cast<Eigen::Index>(m)) = space.coords.row(row);
    }
    words = sub.members;
    xy = bsc::pca_2d_points(pts);
  } else {
    vocab = bsc::load_vocab_tsv(p.vocab());
    bsc::BilingualGraph g = bsc::load_graph(p.graph());
    auto qid = vocab.find(query.surface, query.lang);
    if (!qid)
      throw bsc::query_not_in_space("word " +
                                    std::string(bsc::lang_name(query.lang)) +
                                    ":" + query.surface +
                                    " is not in the vocabulary");
    bsc::LocalEmbedding local =
        bsc::embed_word_locally(g, vocab, *qid, reduce_method(o.method), 2);
    words = local.words;
    xy = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(words.size()), 2);
    for (size_t k = 0; k < std::min<size_t>(2, local.dim); ++k)
      xy.col(static_cast<Eigen::Index>(k)) =
          local.word_coords.col(static_cast<Eigen::Index>(k));
  }

  for (size_t r = 0; r < words.size(); ++r) {
    const bsc::Token& t = vocab.token(words[r]);
    std::cout << bsc::lang_name(t.lang) << ":" << t.surface << "\t"
              << g9(xy(static_cast<Eigen::Index>(r), 0)) << "\t"
              << g9(xy(static_cast<Eigen::Index>(r), 1)) << "\n";
  }
}

// ---- wiring ----------------------------------------------------------------

// `query_context` remaps empty-result errors to the unknown-query exit code
// for commands whose failure is about one query word.
int guarded(bool query_context, const std::function<void()>& fn) {
  try {
    fn();
    return 0;
  } catch (const bsc::error& e) {
    int code = 1;
    switch (e.code()) {
      case bsc::errc::input_format: code = 2; break;
      case bsc::errc::empty_result: code = query_context ? 4 : 3; break;
      case bsc::errc::unknown_query: code = 4; break;
      case bsc::errc::eval_impossible: code = 5; break;
      case bsc::errc::internal: code = 1; break;
    }
    std::cerr << "error: " << e.what() << "\n";
    return code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

void add_common(CLI::App* cmd, CommonOpts& o, bool with_method = true) {
  cmd->add_option("--out-dir", o.out_dir, "Artifact directory")
      ->envname("BSC_OUT_DIR");
  cmd->add_option("--workers", o.workers, "Worker threads (1 = deterministic)");
  cmd->add_option("--seed", o.seed, "Random seed");
  if (with_method)
    cmd->add_option("--method", o.method, "Embedding method")
        ->check(CLI::IsMember({"pca", "ca", "nn"}));
}

void add_cbow_knobs(CLI::App* cmd, size_t& window, size_t& negatives,
                    size_t& epochs, double& lr, size_t& table_size) {
  cmd->add_option("--window", window, "Max clique size used for training");
  cmd->add_option("--negatives", negatives, "Negative samples per example");
  cmd->add_option("--epochs", epochs, "Training epochs");
  cmd->add_option("--lr", lr, "Initial learning rate");
  cmd->add_option("--table-size", table_size, "Unigram table size");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bilingual sense-clique embedding pipeline"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Config file, key=value with [subcommand] sections");

  int rc = 0;

  BuildOpts build;
  auto* cb = app.add_subcommand("build", "Ingest a corpus and build the graph");
  cb->add_option("--src", build.src, "Source-side text file")
      ->required()
      ->check(CLI::ExistingFile);
  cb->add_option("--tgt", build.tgt, "Target-side text file")
      ->required()
      ->check(CLI::ExistingFile);
  cb->add_option("--threshold", build.threshold, "Minimum edge weight");
  cb->add_flag("--graph-tsv", build.graph_tsv, "Also export graph.tsv");
  add_common(cb, build, false);
  cb->callback([&] { rc = guarded(false, [&] { cmd_build(build); }); });

  CliquesOpts cliques;
  auto* cc = app.add_subcommand(
      "cliques", "Enumerate whole-graph cliques over the pruned vocabulary");
  cc->add_option("--min-freq", cliques.min_freq, "Frequency cutoff");
  cc->add_option("--threshold", cliques.threshold, "Minimum edge weight");
  cc->add_option("--budget", cliques.budget, "Maximal clique cap");
  add_common(cc, cliques, false);
  cc->callback([&] { rc = guarded(false, [&] { cmd_cliques(cliques); }); });

  EmbedOpts embed;
  auto* ce = app.add_subcommand("embed", "Train the global embedding (nn)");
  ce->add_option("--dim", embed.dim, "Embedding dimension");
  add_cbow_knobs(ce, embed.window, embed.negatives, embed.epochs, embed.lr,
                 embed.table_size);
  add_common(ce, embed);
  ce->callback([&] { rc = guarded(false, [&] { cmd_embed(embed); }); });

  TranslateOpts translate;
  auto* ct = app.add_subcommand("translate", "Rank translations for one word");
  ct->add_option("query", translate.query, "Query word as src:<w> or tgt:<w>")
      ->required();
  ct->add_option("--k", translate.k, "Neighbors to return");
  ct->add_option("--dim", translate.dim, "Local space dimension (pca/ca)");
  add_common(ct, translate);
  ct->callback([&] { rc = guarded(true, [&] { cmd_translate(translate); }); });

  EvalOpts eval;
  auto* cv = app.add_subcommand("eval", "Score P@k over a lexicon");
  cv->add_option("--lexicon", eval.lexicon, "Lexicon TSV (source<TAB>gold)")
      ->required()
      ->check(CLI::ExistingFile);
  cv->add_option("--k", eval.k_values, "k values")->delimiter(',');
  cv->add_option("--dim", eval.dim, "Local space dimension (pca/ca)");
  cv->add_option("--direction", eval.direction, "Evaluation direction")
      ->check(CLI::IsMember({"both", "src_to_tgt", "tgt_to_src"}));
  cv->add_flag("--timings", eval.timings,
               "Include wall time in the JSON report");
  add_common(cv, eval);
  cv->callback([&] { rc = guarded(false, [&] { cmd_eval(eval); }); });

  VisualizeOpts visualize;
  auto* cz = app.add_subcommand("visualize",
                                "Top-2 coordinates of a word's local space");
  cz->add_option("query", visualize.query, "Focus word as src:<w> or tgt:<w>")
      ->required();
  add_common(cz, visualize);
  cz->callback([&] { rc = guarded(true, [&] { cmd_visualize(visualize); }); });

  TuneOpts tune;
  auto* cu = app.add_subcommand("tune", "Sweep dimensions on a dev lexicon");
  cu->add_option("--lexicon", tune.lexicon, "Dev lexicon TSV")
      ->required()
      ->check(CLI::ExistingFile);
  cu->add_option("--grid", tune.grid, "Dimensions to try")
      ->required()
      ->delimiter(',');
  add_cbow_knobs(cu, tune.window, tune.negatives, tune.epochs, tune.lr,
                 tune.table_size);
  add_common(cu, tune);
  cu->callback([&] { rc = guarded(false, [&] { cmd_tune(tune); }); });

  CLI11_PARSE(app, argc, argv);
  return rc;
}
