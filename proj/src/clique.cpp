#include "bsc/clique.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <thread>

#include "bsc/errors.hpp"

namespace bsc {

namespace {

// Fixed-capacity bitset over local vertex indices.
class Bitset {
 public:
  explicit Bitset(size_t n = 0) : w_((n + 63) / 64, 0) {}

  void set(size_t i) { w_[i >> 6] |= uint64_t(1) << (i & 63); }
  void reset(size_t i) { w_[i >> 6] &= ~(uint64_t(1) << (i & 63)); }

  bool empty() const {
    for (uint64_t w : w_)
      if (w) return false;
    return true;
  }
  size_t intersect_count(const Bitset& o) const {
    size_t c = 0;
    for (size_t i = 0; i < w_.size(); ++i) c += std::popcount(w_[i] & o.w_[i]);
    return c;
  }
  Bitset intersect(const Bitset& o) const {
    Bitset r;
    r.w_.resize(w_.size());
    for (size_t i = 0; i < w_.size(); ++i) r.w_[i] = w_[i] & o.w_[i];
    return r;
  }
  template <typename F>
  void for_each(F&& f) const {
    for (size_t i = 0; i < w_.size(); ++i) {
      uint64_t w = w_[i];
      while (w) {
        f(i * 64 + static_cast<size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
  }
  // Elements of *this not present in o, ascending.
  template <typename F>
  void for_each_andnot(const Bitset& o, F&& f) const {
    for (size_t i = 0; i < w_.size(); ++i) {
      uint64_t w = w_[i] & ~o.w_[i];
      while (w) {
        f(i * 64 + static_cast<size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
  }

 private:
  std::vector<uint64_t> w_;
};

using CliqueSink = std::function<void(const SenseClique&)>;

struct BkContext {
  const std::vector<Bitset>& adj;           // local adjacency
  const std::vector<uint32_t>& global_ids;  // local index -> node id
  const CliqueSink& sink;
  std::vector<uint32_t> stack;              // current partial clique (local)
  bool has_base = false;                    // extra global node in every clique
  uint32_t base_node = 0;

  void emit() {
    SenseClique c;
    c.nodes.reserve(stack.size() + (has_base ? 1 : 0));
    for (uint32_t local : stack) c.nodes.push_back(global_ids[local]);
    if (has_base) c.nodes.push_back(base_node);
    std::sort(c.nodes.begin(), c.nodes.end());
    if (c.nodes.size() >= 2) sink(c);
  }
};

// Pivoting branch and bound over (candidate, excluded) sets: branch only on
// candidates outside the pivot's neighborhood. Deterministic: lowest-index
// pivot among maximizers, candidates visited in ascending index order.
void bron_kerbosch(BkContext& ctx, Bitset P, Bitset X) {
  if (P.empty() && X.empty()) {
    ctx.emit();
    return;
  }
  size_t pivot = SIZE_MAX;
  size_t best = SIZE_MAX;
  auto consider = [&](size_t u) {
    size_t c = P.intersect_count(ctx.adj[u]);
    if (best == SIZE_MAX || c > best) {
      best = c;
      pivot = u;
    }
  };
  P.for_each(consider);
  X.for_each(consider);

  std::vector<uint32_t> branch;
  P.for_each_andnot(ctx.adj[pivot],
                    [&](size_t v) { branch.push_back(static_cast<uint32_t>(v)); });
  for (uint32_t v : branch) {
    ctx.stack.push_back(v);
    bron_kerbosch(ctx, P.intersect(ctx.adj[v]), X.intersect(ctx.adj[v]));
    ctx.stack.pop_back();
    P.reset(v);
    X.set(v);
  }
}

// Local adjacency bitsets for an id-sorted member list, by merge-joining
// each member's neighbor list against the members.
std::vector<Bitset> induced_bitsets(const BilingualGraph& g,
                                    std::span<const uint32_t> members) {
  size_t n = members.size();
  std::vector<Bitset> adj(n, Bitset(n));
  for (size_t i = 0; i < n; ++i) {
    auto nb = g.neighbors(members[i]);
    size_t a = 0, b = 0;
    while (a < nb.size() && b < n) {
      if (nb[a] < members[b]) {
        ++a;
      } else if (nb[a] > members[b]) {
        ++b;
      } else {
        adj[i].set(b);
        ++a;
        ++b;
      }
    }
  }
  return adj;
}

}  // namespace

ExtractedSubgraph extract_subgraph(const BilingualGraph& g, uint32_t focus) {
  if (focus >= g.node_count())
    throw std::out_of_range("focus node " + std::to_string(focus) +
                            " out of range");
  auto nbrs = g.neighbors(focus);
  if (nbrs.empty())
    throw isolated_node("node " + std::to_string(focus) +
                        " has no neighbors; no clique can contain it");

  ExtractedSubgraph sub;
  sub.focus = focus;
  sub.members.assign(nbrs.begin(), nbrs.end());
  sub.members.insert(
      std::lower_bound(sub.members.begin(), sub.members.end(), focus), focus);

  sub.adj.resize(sub.members.size());
  for (size_t mi = 0; mi < sub.members.size(); ++mi) {
    auto nb = g.neighbors(sub.members[mi]);
    size_t a = 0, b = 0;
    while (a < nb.size() && b < sub.members.size()) {
      if (nb[a] < sub.members[b]) {
        ++a;
      } else if (nb[a] > sub.members[b]) {
        ++b;
      } else {
        sub.adj[mi].push_back(static_cast<uint32_t>(b));
        ++a;
        ++b;
      }
    }
  }
  return sub;
}

std::vector<SenseClique> maximal_cliques(const ExtractedSubgraph& sub,
                                         uint64_t budget) {
  size_t n = sub.members.size();
  std::vector<Bitset> adj(n, Bitset(n));
  for (size_t i = 0; i < n; ++i)
    for (uint32_t j : sub.adj[i]) adj[i].set(j);

  size_t focus_local = static_cast<size_t>(
      std::lower_bound(sub.members.begin(), sub.members.end(), sub.focus) -
      sub.members.begin());

  std::vector<SenseClique> out;
  uint64_t emitted = 0;
  CliqueSink sink = [&](const SenseClique& c) {
    if (++emitted > budget)
      throw clique_budget_exceeded("maximal clique budget of " +
                                   std::to_string(budget) + " exceeded");
    out.push_back(c);
  };

  // Every other member is adjacent to the focus, so every maximal clique of
  // the subgraph contains it; seed the partial clique accordingly.
  BkContext ctx{adj, sub.members, sink, {}, false, 0};
  ctx.stack.push_back(static_cast<uint32_t>(focus_local));
  bron_kerbosch(ctx, adj[focus_local], Bitset(n));

  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Smallest-last ordering (Batagelj-Zaversnik core decomposition). The
// returned sequence is a degeneracy order: each vertex has few later
// neighbors, keeping per-vertex subproblems small.
std::vector<uint32_t> degeneracy_order(const BilingualGraph& g) {
  uint32_t n = g.node_count();
  std::vector<uint32_t> deg(n), pos(n), vert(n);
  uint32_t maxdeg = 0;
  for (uint32_t v = 0; v < n; ++v) {
    deg[v] = g.degree(v);
    maxdeg = std::max(maxdeg, deg[v]);
  }
  std::vector<uint32_t> bin(maxdeg + 1, 0);
  for (uint32_t v = 0; v < n; ++v) ++bin[deg[v]];
  uint32_t start = 0;
  for (uint32_t d = 0; d <= maxdeg; ++d) {
    uint32_t c = bin[d];
    bin[d] = start;
    start += c;
  }
  for (uint32_t v = 0; v < n; ++v) {
    pos[v] = bin[deg[v]]++;
    vert[pos[v]] = v;
  }
  for (uint32_t d = maxdeg; d > 0; --d) bin[d] = bin[d - 1];
  bin[0] = 0;

  for (uint32_t i = 0; i < n; ++i) {
    uint32_t v = vert[i];
    for (uint32_t u : g.neighbors(v)) {
      if (deg[u] > deg[v]) {
        uint32_t du = deg[u], pu = pos[u];
        uint32_t pw = bin[du], w = vert[pw];
        if (u != w) {
          vert[pu] = w;
          vert[pw] = u;
          pos[u] = pw;
          pos[w] = pu;
        }
        ++bin[du];
        --deg[u];
      }
    }
  }
  return vert;
}

// Maximal cliques whose earliest member in the degeneracy order is v:
// candidates are v's later neighbors, exclusions its earlier ones.
void enumerate_from_vertex(const BilingualGraph& g, uint32_t v,
                           const std::vector<uint32_t>& rank,
                           const CliqueSink& sink) {
  auto nbrs = g.neighbors(v);
  if (nbrs.empty()) return;
  size_t n = nbrs.size();
  std::vector<uint32_t> members(nbrs.begin(), nbrs.end());
  std::vector<Bitset> adj = induced_bitsets(g, members);

  Bitset P(n), X(n);
  for (size_t i = 0; i < n; ++i) {
    if (rank[members[i]] > rank[v])
      P.set(i);
    else
      X.set(i);
  }
  BkContext ctx{adj, members, sink, {}, true, v};
  bron_kerbosch(ctx, std::move(P), std::move(X));
}

CliqueSink budget_guard(const CliqueSink& sink, uint64_t budget,
                        std::atomic<uint64_t>& emitted) {
  return [&sink, budget, &emitted](const SenseClique& c) {
    if (emitted.fetch_add(1, std::memory_order_relaxed) + 1 > budget)
      throw clique_budget_exceeded("maximal clique budget of " +
                                   std::to_string(budget) + " exceeded");
    sink(c);
  };
}

}  // namespace

void for_each_maximal_clique(const BilingualGraph& g, const CliqueSink& sink,
                             uint64_t budget) {
  std::vector<uint32_t> order = degeneracy_order(g);
  std::vector<uint32_t> rank(g.node_count());
  for (uint32_t i = 0; i < order.size(); ++i) rank[order[i]] = i;
  std::atomic<uint64_t> emitted{0};
  CliqueSink guarded = budget_guard(sink, budget, emitted);
  for (uint32_t v : order) enumerate_from_vertex(g, v, rank, guarded);
}

std::vector<SenseClique> all_maximal_cliques(const BilingualGraph& g,
                                             const Vocabulary& vocab,
                                             uint64_t budget, unsigned workers) {
  if (vocab.size() != g.node_count())
    throw std::invalid_argument("vocabulary size does not match graph");

  std::vector<SenseClique> out;
  if (workers <= 1 || g.node_count() < 256) {
    CliqueSink sink = [&](const SenseClique& c) { out.push_back(c); };
    for_each_maximal_clique(g, sink, budget);
  } else {
    std::vector<uint32_t> order = degeneracy_order(g);
    std::vector<uint32_t> rank(g.node_count());
    for (uint32_t i = 0; i < order.size(); ++i) rank[order[i]] = i;
    std::atomic<uint64_t> emitted{0};

    std::vector<std::vector<SenseClique>> parts(workers);
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(workers);
    std::atomic<uint32_t> next{0};
    for (unsigned w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        try {
          CliqueSink sink = [&parts, w](const SenseClique& c) {
            parts[w].push_back(c);
          };
          CliqueSink guarded = budget_guard(sink, budget, emitted);
          for (;;) {
            uint32_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= order.size()) break;
            enumerate_from_vertex(g, order[i], rank, guarded);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
    for (auto& p : parts)
      out.insert(out.end(), std::make_move_iterator(p.begin()),
                 std::make_move_iterator(p.end()));
  }
  // Canonical order regardless of worker scheduling.
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace bsc
