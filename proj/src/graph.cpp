#include "bsc/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>

#include "bsc/errors.hpp"

namespace bsc {

uint32_t CooccurrenceCounts::count(uint32_t i, uint32_t j) const {
  uint64_t k = key(i, j);
  auto it = std::lower_bound(items.begin(), items.end(), k,
                             [](const auto& a, uint64_t b) { return a.first < b; });
  return (it != items.end() && it->first == k) ? it->second : 0;
}

namespace {

// Emits the deduplicated pair keys of one sentence.
void sentence_pairs(const BilingualSentence& sent, uint32_t vocab_size,
                    std::vector<uint32_t>& unique_buf,
                    std::vector<uint64_t>& keys) {
  unique_buf.clear();
  for (uint32_t id : sent.ids) {
    if (id >= vocab_size)
      throw std::out_of_range("sentence node id " + std::to_string(id) +
                              " not resolvable in vocabulary of size " +
                              std::to_string(vocab_size));
    if (unique_buf.empty() || unique_buf.back() != id) unique_buf.push_back(id);
  }
  for (size_t a = 0; a < unique_buf.size(); ++a)
    for (size_t b = a + 1; b < unique_buf.size(); ++b)
      keys.push_back(CooccurrenceCounts::key(unique_buf[a], unique_buf[b]));
}

std::vector<uint64_t> collect_keys(std::span<const BilingualSentence> sentences,
                                   uint32_t vocab_size, unsigned workers) {
  if (workers <= 1 || sentences.size() < 1024) {
    std::vector<uint64_t> keys;
    std::vector<uint32_t> buf;
    for (const auto& s : sentences) sentence_pairs(s, vocab_size, buf, keys);
    return keys;
  }
  std::vector<std::vector<uint64_t>> parts(workers);
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(workers);
  size_t chunk = (sentences.size() + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        std::vector<uint32_t> buf;
        size_t lo = w * chunk;
        size_t hi = std::min(sentences.size(), lo + chunk);
        for (size_t i = lo; i < hi; ++i)
          sentence_pairs(sentences[i], vocab_size, buf, parts[w]);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  size_t total = 0;
  for (const auto& p : parts) total += p.size();
  std::vector<uint64_t> keys;
  keys.reserve(total);
  for (auto& p : parts) keys.insert(keys.end(), p.begin(), p.end());
  return keys;
}

}  // namespace

CooccurrenceCounts count_cooccurrences(std::span<const BilingualSentence> sentences,
                                       const Vocabulary& vocab,
                                       unsigned workers) {
  std::vector<uint64_t> keys = collect_keys(sentences, vocab.size(), workers);
  std::sort(keys.begin(), keys.end());
  CooccurrenceCounts counts;
  for (size_t i = 0; i < keys.size();) {
    size_t j = i;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    counts.items.emplace_back(keys[i], static_cast<uint32_t>(j - i));
    i = j;
  }
  return counts;
}

BilingualGraph::BilingualGraph(
    uint32_t node_count, std::vector<std::tuple<uint32_t, uint32_t, double>> edges,
    double threshold)
    : node_count_(node_count), threshold_(threshold) {
  for (auto& [u, v, w] : edges) {
    if (u == v) throw std::invalid_argument("self loop on node " + std::to_string(u));
    if (u >= node_count || v >= node_count)
      throw std::invalid_argument("edge endpoint out of range");
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  for (size_t i = 1; i < edges.size(); ++i) {
    if (std::get<0>(edges[i]) == std::get<0>(edges[i - 1]) &&
        std::get<1>(edges[i]) == std::get<1>(edges[i - 1]))
      throw std::invalid_argument("duplicate edge " +
                                  std::to_string(std::get<0>(edges[i])) + "-" +
                                  std::to_string(std::get<1>(edges[i])));
  }
  edge_count_ = edges.size();

  std::vector<uint64_t> deg(node_count_ + 1, 0);
  for (const auto& [u, v, w] : edges) {
    ++deg[u + 1];
    ++deg[v + 1];
  }
  offsets_.assign(node_count_ + 1, 0);
  for (uint32_t i = 0; i < node_count_; ++i) offsets_[i + 1] = offsets_[i] + deg[i + 1];
  nbr_.resize(offsets_[node_count_]);
  wt_.resize(offsets_[node_count_]);
  std::vector<uint64_t> cursor(offsets_.begin(), offsets_.end() - 1);
  // Sorted (u, v) edge stream fills both directions in ascending order:
  // node x first receives neighbors < x (from edges (y, x)), then > x.
  for (const auto& [u, v, w] : edges) {
    nbr_[cursor[u]] = v;
    wt_[cursor[u]++] = w;
    nbr_[cursor[v]] = u;
    wt_[cursor[v]++] = w;
  }
}

bool BilingualGraph::has_edge(uint32_t u, uint32_t v) const {
  if (u == v) return false;
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<std::tuple<uint32_t, uint32_t, double>> BilingualGraph::edge_list()
    const {
  std::vector<std::tuple<uint32_t, uint32_t, double>> edges;
  edges.reserve(edge_count_);
  for (uint32_t u = 0; u < node_count_; ++u) {
    auto nb = neighbors(u);
    auto wt = weights(u);
    for (size_t i = 0; i < nb.size(); ++i)
      if (nb[i] > u) edges.emplace_back(u, nb[i], wt[i]);
  }
  return edges;
}

BilingualGraph build_graph(const CooccurrenceCounts& counts,
                           const Vocabulary& vocab, double threshold) {
  std::vector<std::tuple<uint32_t, uint32_t, double>> edges;
  edges.reserve(counts.items.size());
  for (const auto& [key, co] : counts.items) {
    uint32_t i = CooccurrenceCounts::lo(key);
    uint32_t j = CooccurrenceCounts::hi(key);
    uint64_t fi = vocab.freq(i);
    uint64_t fj = vocab.freq(j);
    if (fi == 0 || fj == 0) {
      throw zero_frequency("node " + std::to_string(fi == 0 ? i : j) +
                           " was counted but has zero corpus frequency");
    }
    double w = static_cast<double>(co) /
               (static_cast<double>(fi) * static_cast<double>(fj));
    if (w > 0.0 && w >= threshold) edges.emplace_back(i, j, w);
  }
  return BilingualGraph(vocab.size(), std::move(edges), threshold);
}

GraphStats graph_stats(const BilingualGraph& g) {
  GraphStats s;
  s.node_count = g.node_count();
  s.edge_count = g.edge_count();
  s.mean_degree =
      s.node_count == 0 ? 0.0 : 2.0 * static_cast<double>(s.edge_count) / s.node_count;
  uint64_t member_sum = 0;
  uint64_t connected = 0;
  for (uint32_t v = 0; v < g.node_count(); ++v) {
    uint32_t d = g.degree(v);
    ++s.degree_histogram[d];
    if (d == 0) {
      ++s.isolated_nodes;
    } else {
      ++connected;
      member_sum += d + 1;
    }
  }
  s.mean_extracted_subgraph =
      connected == 0 ? 0.0 : static_cast<double>(member_sum) / connected;
  return s;
}

}  // namespace bsc
