#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "bsc/types.hpp"

namespace bsc {

// Sentence-level co-occurrence counts: each bilingual sentence contributes
// at most 1 per unordered node pair, regardless of within-sentence
// repetition. Stored as (key, count) with key = (lo << 32) | hi, sorted.
struct CooccurrenceCounts {
  std::vector<std::pair<uint64_t, uint32_t>> items;

  static uint64_t key(uint32_t i, uint32_t j) {
    if (i > j) std::swap(i, j);
    return (static_cast<uint64_t>(i) << 32) | j;
  }
  static uint32_t lo(uint64_t k) { return static_cast<uint32_t>(k >> 32); }
  static uint32_t hi(uint64_t k) { return static_cast<uint32_t>(k); }

  uint32_t count(uint32_t i, uint32_t j) const;
};

CooccurrenceCounts count_cooccurrences(std::span<const BilingualSentence> sentences,
                                       const Vocabulary& vocab,
                                       unsigned workers = 1);

// Undirected co-occurrence graph with per-edge weight
// Co(i,j) / (fr(i) * fr(j)), stored iff weight >= threshold. CSR adjacency,
// neighbor lists sorted ascending, no self-loops, symmetric.
class BilingualGraph {
 public:
  BilingualGraph() = default;

  // Builds from an edge list (each undirected edge listed once, any order,
  // i != j, weight > 0). Used by build_graph, file loading, and fixtures.
  BilingualGraph(uint32_t node_count,
                 std::vector<std::tuple<uint32_t, uint32_t, double>> edges,
                 double threshold);

  uint32_t node_count() const { return node_count_; }
  uint64_t edge_count() const { return edge_count_; }
  double threshold() const { return threshold_; }

  std::span<const uint32_t> neighbors(uint32_t v) const {
    return {nbr_.data() + offsets_[v], nbr_.data() + offsets_[v + 1]};
  }
  std::span<const double> weights(uint32_t v) const {
    return {wt_.data() + offsets_[v], wt_.data() + offsets_[v + 1]};
  }
  uint32_t degree(uint32_t v) const {
    return static_cast<uint32_t>(offsets_[v + 1] - offsets_[v]);
  }
  bool has_edge(uint32_t u, uint32_t v) const;
  // Edges with u < v, ascending; used for serialization and audits.
  std::vector<std::tuple<uint32_t, uint32_t, double>> edge_list() const;

 private:
  uint32_t node_count_ = 0;
  uint64_t edge_count_ = 0;
  double threshold_ = 0.0;
  std::vector<uint64_t> offsets_;  // size node_count_ + 1
  std::vector<uint32_t> nbr_;
  std::vector<double> wt_;
};

// Applies the edge-weight formula and threshold filter. Throws
// zero_frequency when a counted node has corpus frequency 0.
BilingualGraph build_graph(const CooccurrenceCounts& counts,
                           const Vocabulary& vocab, double threshold);

struct GraphStats {
  uint32_t node_count = 0;
  uint64_t edge_count = 0;
  double mean_degree = 0.0;       // 2E/N, 0 for the empty graph
  uint32_t isolated_nodes = 0;
  // Mean size of {v} + neighbors(v) over nodes with degree >= 1.
  double mean_extracted_subgraph = 0.0;
  std::map<uint32_t, uint32_t> degree_histogram;
};

GraphStats graph_stats(const BilingualGraph& g);

}  // namespace bsc
