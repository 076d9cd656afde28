#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "bsc/graph.hpp"

namespace bsc {

// A maximal clique of the co-occurrence graph: every two distinct members
// adjacent, no outside node adjacent to all members. Size >= 2, sorted.
struct SenseClique {
  std::vector<uint32_t> nodes;

  bool operator==(const SenseClique&) const = default;
  auto operator<=>(const SenseClique&) const = default;
  size_t size() const { return nodes.size(); }
};

// The focus word plus all its graph neighbors, with the induced edges.
// Every maximal clique of this subgraph contains the focus node.
struct ExtractedSubgraph {
  uint32_t focus = 0;
  std::vector<uint32_t> members;  // sorted ascending, focus included
  // Adjacency over member indices (positions in `members`), sorted.
  std::vector<std::vector<uint32_t>> adj;

  size_t size() const { return members.size(); }
};

// Throws isolated_node when the focus has no neighbors.
ExtractedSubgraph extract_subgraph(const BilingualGraph& g, uint32_t focus);

inline constexpr uint64_t kDefaultFocusCliqueBudget = 100'000;
inline constexpr uint64_t kDefaultGlobalCliqueBudget = 50'000'000;

// All maximal cliques of the extracted subgraph (each contains the focus),
// sorted lexicographically by node-id sequence. Throws
// clique_budget_exceeded past `budget` cliques.
std::vector<SenseClique> maximal_cliques(
    const ExtractedSubgraph& sub, uint64_t budget = kDefaultFocusCliqueBudget);

// Streams every maximal clique of size >= 2 of the whole graph exactly once,
// using a degeneracy-ordered outer loop. Emission order is deterministic for
// a fixed worker count; `all_maximal_cliques` (collecting form) additionally
// sorts, making the result worker-count independent.
void for_each_maximal_clique(const BilingualGraph& g,
                             const std::function<void(const SenseClique&)>& sink,
                             uint64_t budget = kDefaultGlobalCliqueBudget);

std::vector<SenseClique> all_maximal_cliques(
    const BilingualGraph& g, const Vocabulary& vocab,
    uint64_t budget = kDefaultGlobalCliqueBudget, unsigned workers = 1);

}  // namespace bsc
