#include "bsc/translate.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <memory>
#include <thread>

#include "bsc/errors.hpp"

namespace bsc {

int64_t WordSpace::row_of(uint32_t id) const {
  auto it = std::lower_bound(words.begin(), words.end(), id);
  if (it == words.end() || *it != id) return -1;
  return it - words.begin();
}

WordSpace to_space(const LocalEmbedding& e) {
  WordSpace s;
  s.dim = e.dim;
  s.words = e.words;
  s.coords = e.word_coords;
  return s;
}

WordSpace to_space(const GlobalEmbedding& e) {
  WordSpace s;
  s.dim = e.dim;
  s.words.resize(e.vocab_size);
  s.coords.resize(e.vocab_size, static_cast<Eigen::Index>(e.dim));
  for (uint32_t id = 0; id < e.vocab_size; ++id) {
    s.words[id] = id;
    auto v = e.input_vec(id);
    for (size_t d = 0; d < e.dim; ++d)
      s.coords(id, static_cast<Eigen::Index>(d)) = v[d];
  }
  return s;
}

std::vector<Neighbor> knn_translate(const WordSpace& space,
                                    const Vocabulary& vocab,
                                    const Token& query, size_t k,
                                    Lang target_lang) {
  auto qid = vocab.find(query.surface, query.lang);
  if (!qid)
    throw query_not_in_space("word " + std::string(lang_name(query.lang)) +
                             ":" + query.surface + " is not in the vocabulary");
  int64_t qrow = space.row_of(*qid);
  if (qrow < 0)
    throw query_not_in_space("word " + std::string(lang_name(query.lang)) +
                             ":" + query.surface +
                             " has no coordinates in this space");

  Eigen::VectorXd q = space.coords.row(qrow);
  // (squared distance, id); exact tie on the square resolves by id.
  std::vector<std::pair<double, uint32_t>> cand;
  for (size_t r = 0; r < space.words.size(); ++r) {
    uint32_t id = space.words[r];
    if (id == *qid || vocab.lang(id) != target_lang) continue;
    double d2 = (space.coords.row(static_cast<Eigen::Index>(r)).transpose() - q)
                    .squaredNorm();
    cand.emplace_back(d2, id);
  }
  if (cand.empty())
    throw no_target_candidates("space contains no " +
                               std::string(lang_name(target_lang)) +
                               " word besides the query");

  size_t take = std::min(k, cand.size());
  std::partial_sort(cand.begin(), cand.begin() + static_cast<ptrdiff_t>(take),
                    cand.end());
  std::vector<Neighbor> out;
  out.reserve(take);
  for (size_t i = 0; i < take; ++i)
    out.push_back(Neighbor{cand[i].second, std::sqrt(cand[i].first)});
  return out;
}

Embedder make_local_embedder(const BilingualGraph& g, const Vocabulary& vocab,
                             ReduceMethod method, size_t dim, uint64_t budget) {
  Embedder e;
  e.name = method == ReduceMethod::pca ? "pca" : "ca";
  e.dim = dim;
  e.global = false;
  e.space_for = [&g, &vocab, method, dim, budget](uint32_t query_id) {
    return to_space(embed_word_locally(g, vocab, query_id, method, dim, budget));
  };
  return e;
}

Embedder make_global_embedder(const GlobalEmbedding& emb) {
  auto shared = std::make_shared<WordSpace>(to_space(emb));
  Embedder e;
  e.name = "nn";
  e.dim = emb.dim;
  e.global = true;
  e.space_for = [shared](uint32_t) { return *shared; };
  return e;
}

EvalReport evaluate(std::span<const LexiconPair> pairs, Direction direction,
                    const Embedder& embedder, const Vocabulary& vocab,
                    std::span<const size_t> k_values, unsigned workers) {
  auto t0 = std::chrono::steady_clock::now();

  EvalReport rep;
  rep.method = embedder.name;
  rep.dim = embedder.dim;
  rep.direction = direction;
  rep.k_values.assign(k_values.begin(), k_values.end());

  // Resolve both sides against the corpus vocabulary; pairs with any
  // out-of-vocabulary side are discarded up front.
  struct Job {
    uint32_t query_id;
    uint32_t gold_id;
  };
  std::vector<Job> jobs;
  for (const auto& p : pairs) {
    const Token& query = direction == Direction::src_to_tgt ? p.source : p.gold;
    const Token& gold = direction == Direction::src_to_tgt ? p.gold : p.source;
    auto qid = vocab.find(query.surface, query.lang);
    auto gid = vocab.find(gold.surface, gold.lang);
    if (!qid || !gid) {
      ++rep.discarded_oov;
      continue;
    }
    jobs.push_back(Job{*qid, *gid});
  }
  if (jobs.empty())
    throw all_pairs_oov("every lexicon pair has an out-of-vocabulary side");
  rep.evaluated_pairs = jobs.size();

  Lang target_lang =
      direction == Direction::src_to_tgt ? Lang::tgt : Lang::src;
  size_t kmax = *std::max_element(k_values.begin(), k_values.end());

  // The global space is query-independent; build it once.
  WordSpace shared;
  if (embedder.global) shared = embedder.space_for(0);

  unsigned n_workers = std::max(1u, workers);
  std::vector<std::vector<uint64_t>> hits(n_workers,
                                          std::vector<uint64_t>(k_values.size(), 0));
  std::atomic<size_t> next{0};
  std::vector<std::exception_ptr> errors(n_workers);

  auto run = [&](unsigned w) {
    try {
      for (;;) {
        size_t i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= jobs.size()) break;
        const Job& job = jobs[i];
        std::vector<Neighbor> nn;
        try {
          const Token& qt = vocab.token(job.query_id);
          if (embedder.global) {
            nn = knn_translate(shared, vocab, qt, kmax, target_lang);
          } else {
            WordSpace space = embedder.space_for(job.query_id);
            nn = knn_translate(space, vocab, qt, kmax, target_lang);
          }
        } catch (const no_cliques&) {
          continue;  // no local space: a miss at every k
        } catch (const query_not_in_space&) {
          continue;
        } catch (const no_target_candidates&) {
          continue;
        }
        for (size_t ki = 0; ki < k_values.size(); ++ki) {
          size_t k = std::min(k_values[ki], nn.size());
          for (size_t r = 0; r < k; ++r) {
            if (nn[r].id == job.gold_id) {
              ++hits[w][ki];
              break;
            }
          }
        }
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };

  if (n_workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < n_workers; ++w) threads.emplace_back(run, w);
    for (auto& t : threads) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  rep.precision.resize(k_values.size());
  for (size_t ki = 0; ki < k_values.size(); ++ki) {
    uint64_t h = 0;
    for (unsigned w = 0; w < n_workers; ++w) h += hits[w][ki];
    rep.precision[ki] = double(h) / double(rep.evaluated_pairs);
  }
  rep.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rep;
}

TuneResult tune_dimension(std::span<const LexiconPair> dev_pairs,
                          const std::function<Embedder(size_t)>& embedder_for,
                          const Vocabulary& vocab, std::span<const size_t> grid,
                          unsigned workers) {
  std::vector<size_t> dims(grid.begin(), grid.end());
  std::sort(dims.begin(), dims.end());
  dims.erase(std::unique(dims.begin(), dims.end()), dims.end());
  if (dims.empty()) throw std::invalid_argument("empty dimension grid");

  const size_t ks[] = {1, 5};
  TuneResult res;
  double best = -1.0;
  for (size_t dim : dims) {
    Embedder e = embedder_for(dim);
    EvalReport fwd =
        evaluate(dev_pairs, Direction::src_to_tgt, e, vocab, ks, workers);
    EvalReport rev =
        evaluate(dev_pairs, Direction::tgt_to_src, e, vocab, ks, workers);
    DimScore s;
    s.dim = dim;
    s.p1_fwd = fwd.precision[0];
    s.p5_fwd = fwd.precision[1];
    s.p1_rev = rev.precision[0];
    s.p5_rev = rev.precision[1];
    res.curve.push_back(s);
    if (s.mean() > best) {  // ties keep the earlier, smaller dimension
      best = s.mean();
      res.best_dim = dim;
    }
  }
  return res;
}

}  // namespace bsc
