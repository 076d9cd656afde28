#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <json.hpp>
#include <string>
#include <vector>

#include "test_util.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start < text.size()) {
    size_t nl = text.find('\n', start);
    if (nl == std::string::npos) {
      out.push_back(text.substr(start));
      break;
    }
    out.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return out;
}

size_t field_count(const std::string& line) {
  return 1 + static_cast<size_t>(std::count(line.begin(), line.end(), '\t'));
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

// Cycle corpus, 6 families, 120 sentences: 12 words of frequency 40 each,
// 30 edges (partner EW 0.025, all others 0.0125), whole-graph cliques are
// the six 4-cliques {s_i, s_{i+1}, t_i, t_{i+1}}.
struct Pipeline {
  testutil::TempDir dir;
  testutil::CyclePaths corpus;
  std::string out;

  Pipeline() : corpus(testutil::write_cycle_corpus(dir, 6, 120)) {
    out = dir.file("out");
  }

  testutil::CliResult run(const std::string& args,
                          const std::string& env = "") {
    return testutil::run_cli(args, dir, env);
  }

  std::string artifact(const std::string& name) const {
    return (fs::path(out) / name).string();
  }

  testutil::CliResult build(const std::string& extra = "") {
    return run("build --src " + corpus.src + " --tgt " + corpus.tgt +
               " --out-dir " + out + extra);
  }
};

}  // namespace

TEST_CASE("cli: build reports corpus and graph statistics") {
  Pipeline p;
  auto r = p.build();
  REQUIRE(r.exit_code == 0);
  CHECK(contains(r.out, "vocabulary: 12 words (src 6, tgt 6)"));
  CHECK(contains(r.out, "sentences: 120 (tokens 480)"));
  CHECK(contains(r.out, "graph: 12 nodes, 30 edges, mean degree 5, isolated 0"));
  CHECK(contains(r.out, "mean extracted subgraph size: 6"));
  CHECK(fs::exists(p.artifact("vocab.tsv")));
  CHECK(fs::exists(p.artifact("sentences.bin")));
  CHECK(fs::exists(p.artifact("graph.bin")));
  CHECK_FALSE(fs::exists(p.artifact("graph.tsv")));

  SUBCASE("--graph-tsv also writes the edge table") {
    auto r2 = p.build(" --graph-tsv");
    REQUIRE(r2.exit_code == 0);
    std::string tsv = testutil::read_file(p.artifact("graph.tsv"));
    CHECK(contains(tsv, "node_i\tnode_j\tcooccurrence\tweight\n"));
    CHECK(lines_of(tsv).size() == 31);
  }
}

TEST_CASE("cli: cliques, nn embedding, translate, eval, visualize") {
  Pipeline p;
  REQUIRE(p.build().exit_code == 0);

  auto rc = p.run("cliques --out-dir " + p.out);
  REQUIRE(rc.exit_code == 0);
  CHECK(contains(rc.out, "pruned vocabulary: 12 of 12 words (min-freq 5)"));
  CHECK(contains(rc.out, "pruned graph: 12 nodes, 30 edges"));
  CHECK(contains(rc.out, "cliques: 6 (largest 4)"));
  CHECK(fs::exists(p.artifact("nn_vocab.tsv")));
  CHECK(fs::exists(p.artifact("nn_graph.bin")));
  CHECK(fs::exists(p.artifact("cliques.bin")));

  auto re = p.run("embed --method nn --dim 8 --epochs 4 --seed 7 --out-dir " +
                  p.out);
  REQUIRE(re.exit_code == 0);
  CHECK(contains(re.out,
                 "trained 12 vectors of dim 8 over 6 cliques (0 discarded"));
  CHECK(contains(re.out, "epoch 1 mean loss "));
  CHECK(fs::exists(p.artifact("nn_embedding.txt")));

  json tr = json::parse(testutil::read_file(p.artifact("train_report.json")));
  CHECK(tr["dim"] == 8);
  CHECK(tr["epochs"] == 4);
  CHECK(tr["seed"] == 7);
  CHECK(tr["discarded_cliques"] == 0);
  CHECK(tr["epoch_loss"].size() == 4);
  CHECK(tr["examples_seen"] == 6 * 4 * 4);

  SUBCASE("translate prints ranked tab-separated rows") {
    auto rt = p.run("translate src:s0 --method nn --k 3 --out-dir " + p.out);
    REQUIRE(rt.exit_code == 0);
    auto rows = lines_of(rt.out);
    REQUIRE(rows.size() == 3);
    for (size_t i = 0; i < rows.size(); ++i) {
      CHECK(rows[i].rfind(std::to_string(i + 1) + "\t", 0) == 0);
      CHECK(field_count(rows[i]) == 3);
      CHECK(contains(rows[i], "\ttgt:"));
    }
  }

  SUBCASE("eval writes a structured report") {
    auto rv = p.run("eval --method nn --lexicon " + p.corpus.lexicon +
                    " --out-dir " + p.out);
    REQUIRE(rv.exit_code == 0);
    json j = json::parse(testutil::read_file(p.artifact("eval_report.json")));
    CHECK(j["method"] == "nn");
    CHECK(j["dim"] == 8);
    REQUIRE(j["reports"].size() == 2);
    for (const auto& rep : j["reports"]) {
      CHECK(rep["k"] == json::array({1, 5}));
      REQUIRE(rep["precision"].size() == 2);
      for (double pr : rep["precision"]) {
        CHECK(pr >= 0.0);
        CHECK(pr <= 1.0);
      }
      CHECK(rep["evaluated_pairs"] == 6);
      CHECK(rep["discarded_oov"] == 0);
      CHECK_FALSE(rep.contains("wall_time_s"));
    }
  }

  SUBCASE("--timings adds wall time; --direction restricts the report") {
    auto rv = p.run("eval --method nn --lexicon " + p.corpus.lexicon +
                    " --direction src_to_tgt --timings --out-dir " + p.out);
    REQUIRE(rv.exit_code == 0);
    json j = json::parse(testutil::read_file(p.artifact("eval_report.json")));
    REQUIRE(j["reports"].size() == 1);
    CHECK(j["reports"][0]["direction"] == "src_to_tgt");
    CHECK(j["reports"][0]["wall_time_s"].get<double>() >= 0.0);
  }

  SUBCASE("visualize projects the query's subgraph to 2-D") {
    auto rz = p.run("visualize src:s0 --method nn --out-dir " + p.out);
    REQUIRE(rz.exit_code == 0);
    auto rows = lines_of(rz.out);
    REQUIRE(rows.size() == 6);
    bool has_query = false;
    for (const auto& row : rows) {
      CHECK(field_count(row) == 3);
      if (row.rfind("src:s0\t", 0) == 0) has_query = true;
    }
    CHECK(has_query);
  }
}

TEST_CASE("cli: local methods build spaces per query") {
  Pipeline p;
  REQUIRE(p.build().exit_code == 0);

  auto re = p.run("embed --method ca --dim 7 --out-dir " + p.out);
  REQUIRE(re.exit_code == 0);
  CHECK(contains(re.out, "builds local spaces per query"));
  CHECK(testutil::read_file(p.artifact("embed.marker")) ==
        "method=ca\ndim=7\n");

  SUBCASE("translate resolves the unique partner") {
    for (std::string method : {"ca", "pca"}) {
      auto rt = p.run("translate src:s0 --method " + method +
                      " --dim 2 --k 1 --out-dir " + p.out);
      REQUIRE(rt.exit_code == 0);
      CHECK(rt.out.rfind("1\ttgt:t0\t", 0) == 0);
    }
  }

  SUBCASE("queries are normalized like corpus text") {
    auto rt = p.run("translate 'src:S0.' --method ca --dim 2 --k 1 --out-dir " +
                    p.out);
    REQUIRE(rt.exit_code == 0);
    CHECK(rt.out.rfind("1\ttgt:t0\t", 0) == 0);
  }

  SUBCASE("eval scores the cycle lexicon perfectly") {
    auto rv = p.run("eval --method ca --dim 2 --lexicon " + p.corpus.lexicon +
                    " --out-dir " + p.out);
    REQUIRE(rv.exit_code == 0);
    json j = json::parse(testutil::read_file(p.artifact("eval_report.json")));
    CHECK(j["method"] == "ca");
    CHECK(j["dim"] == 2);
    REQUIRE(j["reports"].size() == 2);
    for (const auto& rep : j["reports"]) {
      CHECK(rep["evaluated_pairs"] == 6);
      for (double pr : rep["precision"]) CHECK(pr == 1.0);
    }
  }

  SUBCASE("tune sweeps the grid and keeps the smallest tied dimension") {
    auto ru = p.run("tune --method ca --grid 3,2 --lexicon " +
                    p.corpus.lexicon + " --out-dir " + p.out);
    REQUIRE(ru.exit_code == 0);
    CHECK(contains(ru.out, "best dim: 2"));
    json j = json::parse(testutil::read_file(p.artifact("tune_report.json")));
    CHECK(j["method"] == "ca");
    CHECK(j["best_dim"] == 2);
    REQUIRE(j["curve"].size() == 2);
    CHECK(j["curve"][0]["dim"] == 2);
    CHECK(j["curve"][1]["dim"] == 3);
    for (const auto& point : j["curve"]) CHECK(point["mean"] == 1.0);
  }

  SUBCASE("visualize lists the local space with zero-padded axes") {
    auto rz = p.run("visualize src:s0 --method ca --out-dir " + p.out);
    REQUIRE(rz.exit_code == 0);
    auto rows = lines_of(rz.out);
    REQUIRE(rows.size() == 6);
    bool has_query = false, has_partner = false;
    for (const auto& row : rows) {
      CHECK(field_count(row) == 3);
      if (row.rfind("src:s0\t", 0) == 0) has_query = true;
      if (row.rfind("tgt:t0\t", 0) == 0) has_partner = true;
    }
    CHECK(has_query);
    CHECK(has_partner);
  }
}

TEST_CASE("cli: failure exit codes") {
  Pipeline p;

  SUBCASE("misaligned corpus is an input-format error") {
    std::string src = p.dir.file("bad_src.txt");
    std::string tgt = p.dir.file("bad_tgt.txt");
    testutil::write_file(src, "a\nb\nc\n");
    testutil::write_file(tgt, "x\ny\n");
    auto r = p.run("build --src " + src + " --tgt " + tgt + " --out-dir " +
                   p.out);
    CHECK(r.exit_code == 2);
    CHECK(r.err.rfind("error: ", 0) == 0);
    CHECK(contains(r.err, "3"));
    CHECK(contains(r.err, "2"));
  }

  SUBCASE("corpus with no tokens is an input-format error") {
    std::string src = p.dir.file("empty_src.txt");
    std::string tgt = p.dir.file("empty_tgt.txt");
    testutil::write_file(src, "\n\n");
    testutil::write_file(tgt, "\n\n");
    auto r = p.run("build --src " + src + " --tgt " + tgt + " --out-dir " +
                   p.out);
    CHECK(r.exit_code == 2);
  }

  SUBCASE("missing artifacts are input-format errors") {
    auto r = p.run("translate src:s0 --method ca --out-dir " + p.out);
    CHECK(r.exit_code == 2);
    auto r2 = p.run("embed --method nn --out-dir " + p.out);
    CHECK(r2.exit_code == 2);
  }

  SUBCASE("unknown and malformed queries exit 4") {
    REQUIRE(p.build().exit_code == 0);
    CHECK(p.run("translate src:zzz --method ca --out-dir " + p.out)
              .exit_code == 4);
    CHECK(p.run("visualize src:zzz --method ca --out-dir " + p.out)
              .exit_code == 4);
    auto r = p.run("translate s0 --method ca --out-dir " + p.out);
    CHECK(r.exit_code == 4);
    CHECK(contains(r.err, "query must be"));
    CHECK(p.run("translate 'src:two words' --method ca --out-dir " + p.out)
              .exit_code == 4);
  }

  SUBCASE("lexicon with no in-vocabulary pair exits 5") {
    REQUIRE(p.build().exit_code == 0);
    std::string lex = p.dir.file("ghost_lex.tsv");
    testutil::write_file(lex, "zzz\tyyy\n");
    auto r = p.run("eval --method ca --lexicon " + lex + " --out-dir " + p.out);
    CHECK(r.exit_code == 5);
  }

  SUBCASE("threshold pruning every edge leaves no cliques, exit 3") {
    REQUIRE(p.build().exit_code == 0);
    auto r = p.run("cliques --threshold 0.5 --out-dir " + p.out);
    CHECK(r.exit_code == 3);
    CHECK(contains(r.err, "no clique"));
  }

  SUBCASE("clique budget overflow is an internal error") {
    REQUIRE(p.build().exit_code == 0);
    auto r = p.run("cliques --budget 1 --out-dir " + p.out);
    CHECK(r.exit_code == 1);
    CHECK(contains(r.err, "budget"));
  }

  SUBCASE("option validation failures are nonzero") {
    REQUIRE(p.build().exit_code == 0);
    CHECK(p.run("translate src:s0 --method magic --out-dir " + p.out)
              .exit_code != 0);
    CHECK(p.run("eval --method ca --lexicon " + p.dir.file("no_such.tsv") +
                " --out-dir " + p.out)
              .exit_code != 0);
  }
}

TEST_CASE("cli: config file sections and out-dir environment variable") {
  Pipeline p;

  SUBCASE("config file sets subcommand options") {
    std::string cfg = p.dir.file("bsc.ini");
    testutil::write_file(cfg, "[build]\nthreshold=0.02\n");
    auto r = p.run("--config " + cfg + " build --src " + p.corpus.src +
                   " --tgt " + p.corpus.tgt + " --out-dir " + p.out);
    REQUIRE(r.exit_code == 0);
    CHECK(contains(r.out, "graph: 12 nodes, 6 edges"));
    // The section supplies values only; it must not trigger a second run.
    size_t first = r.out.find("vocabulary:");
    REQUIRE(first != std::string::npos);
    CHECK(r.out.find("vocabulary:", first + 1) == std::string::npos);
  }

  SUBCASE("sections for other subcommands leave the invoked one alone") {
    p.build();
    std::string cfg = p.dir.file("bsc.ini");
    testutil::write_file(cfg, "[build]\nthreshold=0.02\n\n[translate]\nk=2\n");
    auto r = p.run("--config " + cfg + " translate src:s0 --method ca --dim 2" +
                   " --out-dir " + p.out);
    REQUIRE(r.exit_code == 0);
    CHECK(lines_of(r.out).size() == 2);
  }

  SUBCASE("command-line flags override the config file") {
    std::string cfg = p.dir.file("bsc.ini");
    testutil::write_file(cfg, "[build]\nthreshold=0.02\n");
    auto r = p.run("--config " + cfg + " build --threshold 3e-4 --src " +
                   p.corpus.src + " --tgt " + p.corpus.tgt + " --out-dir " +
                   p.out);
    REQUIRE(r.exit_code == 0);
    CHECK(contains(r.out, "graph: 12 nodes, 30 edges"));
  }

  SUBCASE("BSC_OUT_DIR supplies the artifact directory") {
    std::string envdir = p.dir.file("env_out");
    auto r = p.run("build --src " + p.corpus.src + " --tgt " + p.corpus.tgt,
                   "BSC_OUT_DIR=" + envdir);
    REQUIRE(r.exit_code == 0);
    CHECK(fs::exists(fs::path(envdir) / "graph.bin"));
  }
}
