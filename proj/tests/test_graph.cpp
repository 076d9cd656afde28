#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bsc/errors.hpp"
#include "bsc/graph.hpp"
#include "test_util.hpp"

using namespace bsc;
using testutil::toy_vocab;

namespace {

std::vector<BilingualSentence> sents(
    std::initializer_list<std::vector<uint32_t>> lists) {
  std::vector<BilingualSentence> out;
  for (auto& l : lists) {
    BilingualSentence s{l};
    std::sort(s.ids.begin(), s.ids.end());
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

TEST_CASE("sentence-level co-occurrence counts") {
  Vocabulary v = toy_vocab(3);
  // a=0, b=1, c=2
  auto ss = sents({{0, 1, 2}, {0, 1}, {1, 2}});
  CooccurrenceCounts co = count_cooccurrences(ss, v);
  CHECK(co.count(0, 1) == 2);
  CHECK(co.count(1, 2) == 2);
  CHECK(co.count(0, 2) == 1);
  CHECK(co.count(2, 0) == 1);  // unordered

  SUBCASE("within-sentence repetition counts once") {
    auto rep = sents({{0, 0, 1}});
    CooccurrenceCounts c2 = count_cooccurrences(rep, v);
    CHECK(c2.count(0, 1) == 1);
    CHECK(c2.count(0, 0) == 0);  // no self-pairs
  }
  SUBCASE("singleton sentences contribute nothing") {
    auto single = sents({{2}});
    CHECK(count_cooccurrences(single, v).items.empty());
  }
  SUBCASE("empty sentence list") {
    std::vector<BilingualSentence> none;
    CHECK(count_cooccurrences(none, v).items.empty());
  }
}

TEST_CASE("co-occurrence counting is worker-count independent") {
  // Large enough to take the multi-threaded path.
  std::mt19937_64 rng(99);
  testutil::ToyCorpus c;
  c.vocab = testutil::toy_vocab(14, 0);
  for (int s = 0; s < 2000; ++s) {
    BilingualSentence sent;
    uint32_t len = 2 + uint32_t(rng() % 6);
    for (uint32_t t = 0; t < len; ++t) {
      uint32_t id = uint32_t(rng() % 14);
      sent.ids.push_back(id);
      c.vocab.bump(id);
    }
    std::sort(sent.ids.begin(), sent.ids.end());
    c.sentences.push_back(std::move(sent));
  }
  CooccurrenceCounts one = count_cooccurrences(c.sentences, c.vocab, 1);
  CooccurrenceCounts four = count_cooccurrences(c.sentences, c.vocab, 4);
  CHECK(one.items == four.items);
  CHECK(!one.items.empty());
}

TEST_CASE("edge weight formula and threshold") {
  Vocabulary v;
  v.append(Token{"a", Lang::src}, 4);
  v.append(Token{"b", Lang::tgt}, 5);
  auto ss = sents({{0, 1}, {0, 1}});
  CooccurrenceCounts co = count_cooccurrences(ss, v);
  REQUIRE(co.count(0, 1) == 2);

  SUBCASE("weight is Co/(fr*fr), exactly") {
    BilingualGraph g = build_graph(co, v, 0.0);
    REQUIRE(g.edge_count() == 1);
    auto [i, j, w] = g.edge_list()[0];
    CHECK(i == 0);
    CHECK(j == 1);
    CHECK(w == 2.0 / (4.0 * 5.0));  // 0.1, exact in binary
  }
  SUBCASE("threshold is inclusive") {
    CHECK(build_graph(co, v, 0.1).edge_count() == 1);
    CHECK(build_graph(co, v, std::nextafter(0.1, 1.0)).edge_count() == 0);
  }
  SUBCASE("threshold 0 keeps every counted pair") {
    CHECK(build_graph(co, v, 0.0).edge_count() == 1);
  }
  SUBCASE("counted node with zero recorded frequency is an internal error") {
    Vocabulary bad;
    bad.append(Token{"a", Lang::src}, 4);
    bad.append(Token{"b", Lang::tgt}, 0);
    CHECK_THROWS_AS(build_graph(co, bad, 0.0), zero_frequency);
  }
}

TEST_CASE("graph structure invariants hold on random corpora") {
  for (uint64_t seed : {1, 2, 3, 4, 5}) {
    auto c = testutil::random_corpus(seed);
    auto co = count_cooccurrences(c.sentences, c.vocab);
    BilingualGraph g = build_graph(co, c.vocab, 0.0);

    CHECK(g.node_count() == c.vocab.size());
    uint64_t half_edges = 0;
    for (uint32_t u = 0; u < g.node_count(); ++u) {
      auto nbr = g.neighbors(u);
      auto wt = g.weights(u);
      REQUIRE(nbr.size() == wt.size());
      CHECK(std::is_sorted(nbr.begin(), nbr.end()));
      CHECK(std::adjacent_find(nbr.begin(), nbr.end()) == nbr.end());
      for (size_t k = 0; k < nbr.size(); ++k) {
        uint32_t w = nbr[k];
        CHECK(w != u);  // no self-loop
        CHECK(g.has_edge(w, u));  // symmetry
        // Mirror edge carries the same weight.
        auto mirror = g.neighbors(w);
        auto pos = std::lower_bound(mirror.begin(), mirror.end(), u);
        REQUIRE(pos != mirror.end());
        CHECK(g.weights(w)[size_t(pos - mirror.begin())] == wt[k]);
      }
      half_edges += nbr.size();
    }
    CHECK(half_edges == 2 * g.edge_count());
  }
}

TEST_CASE("graph matches the brute-force oracle bit for bit") {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    auto c = testutil::random_corpus(seed);
    auto oracle = testutil::oracle_edges(c);
    auto co = count_cooccurrences(c.sentences, c.vocab, 1 + seed % 3);
    BilingualGraph g = build_graph(co, c.vocab, 0.0);

    auto edges = g.edge_list();
    REQUIRE(edges.size() == oracle.size());
    for (size_t k = 0; k < edges.size(); ++k) {
      auto [i, j, w] = edges[k];
      CHECK(i == oracle[k].i);
      CHECK(j == oracle[k].j);
      CHECK(co.count(i, j) == oracle[k].co);
      CHECK(w == oracle[k].ew);  // identical FP expression, no tolerance
    }
  }
}

TEST_CASE("raising the threshold keeps a subset of edges") {
  auto c = testutil::random_corpus(42, 12, 80);
  auto co = count_cooccurrences(c.sentences, c.vocab);
  BilingualGraph lo = build_graph(co, c.vocab, 0.0);

  auto contains = [](const BilingualGraph& g, uint32_t i, uint32_t j,
                     double w) {
    for (auto [a, b, ww] : g.edge_list())
      if (a == i && b == j) return ww == w;
    return false;
  };

  double prev_threshold = 0.0;
  BilingualGraph prev = std::move(lo);
  for (double t : {1e-3, 5e-3, 2e-2}) {
    BilingualGraph next = build_graph(co, c.vocab, t);
    CHECK(next.edge_count() <= prev.edge_count());
    for (auto [i, j, w] : next.edge_list()) {
      CHECK(w >= t);
      CHECK(contains(prev, i, j, w));
    }
    // Every surviving edge of `prev` at or above t must still be there.
    uint64_t expect = 0;
    for (auto [i, j, w] : prev.edge_list())
      if (w >= t) ++expect;
    CHECK(next.edge_count() == expect);
    prev = std::move(next);
    prev_threshold = t;
  }
  (void)prev_threshold;
}

TEST_CASE("graph_stats") {
  SUBCASE("empty graph") {
    BilingualGraph g(3, {}, 0.0);
    GraphStats s = graph_stats(g);
    CHECK(s.node_count == 3);
    CHECK(s.edge_count == 0);
    CHECK(s.mean_degree == 0.0);
    CHECK(s.isolated_nodes == 3);
    CHECK(s.mean_extracted_subgraph == 0.0);
    CHECK(s.degree_histogram.at(0) == 3);
  }
  SUBCASE("triangle") {
    BilingualGraph g(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}}, 0.0);
    GraphStats s = graph_stats(g);
    CHECK(s.edge_count == 3);
    CHECK(s.mean_degree == doctest::Approx(2.0));
    CHECK(s.isolated_nodes == 0);
    CHECK(s.mean_extracted_subgraph == doctest::Approx(3.0));
    CHECK(s.degree_histogram.at(2) == 3);
  }
  SUBCASE("figure graph: extracted sizes averaged over connected nodes") {
    GraphStats s = graph_stats(testutil::figure1_graph());
    CHECK(s.node_count == 7);
    CHECK(s.edge_count == 10);
    CHECK(s.isolated_nodes == 0);
    // |{v} + N(v)| per node: 4,5,4,4,4,3,3 -> mean 27/7.
    CHECK(s.mean_extracted_subgraph == doctest::Approx(27.0 / 7.0));
    CHECK(s.degree_histogram.at(2) == 2);
    CHECK(s.degree_histogram.at(3) == 4);
    CHECK(s.degree_histogram.at(4) == 1);
  }
  SUBCASE("isolated node excluded from extracted mean") {
    BilingualGraph g(3, {{0, 1, 1.0}}, 0.0);
    GraphStats s = graph_stats(g);
    CHECK(s.isolated_nodes == 1);
    CHECK(s.mean_extracted_subgraph == doctest::Approx(2.0));
  }
}

TEST_CASE("edge_list round-trips through the edge constructor") {
  auto c = testutil::random_corpus(7);
  auto g = build_graph(count_cooccurrences(c.sentences, c.vocab), c.vocab, 0.0);
  BilingualGraph h(g.node_count(), g.edge_list(), g.threshold());
  CHECK(h.edge_list() == g.edge_list());
  CHECK(h.node_count() == g.node_count());
  CHECK(h.threshold() == g.threshold());
}

TEST_CASE("edge constructor rejects malformed input") {
  CHECK_THROWS_AS(BilingualGraph(2, {{0, 0, 1.0}}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(BilingualGraph(2, {{0, 5, 1.0}}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(BilingualGraph(2, {{0, 1, 1.0}, {1, 0, 2.0}}, 0.0),
                  std::invalid_argument);
}
