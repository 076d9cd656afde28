#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "bsc/cbow.hpp"
#include "bsc/reduce.hpp"
#include "bsc/types.hpp"

namespace bsc {

// Uniform view over a local or global embedding for retrieval.
struct WordSpace {
  size_t dim = 0;
  std::vector<uint32_t> words;  // ascending node ids
  Eigen::MatrixXd coords;       // words.size() x dim

  int64_t row_of(uint32_t id) const;
};

WordSpace to_space(const LocalEmbedding& e);
WordSpace to_space(const GlobalEmbedding& e);  // input vectors, all ids

struct Neighbor {
  uint32_t id = 0;
  double distance = 0.0;
};

// k nearest words of `target_lang` by Euclidean distance, excluding the
// query itself; ties broken by ascending node id. Throws query_not_in_space
// when the query token is unknown or absent from the space, and
// no_target_candidates when the space holds no other word of that language.
std::vector<Neighbor> knn_translate(const WordSpace& space,
                                    const Vocabulary& vocab,
                                    const Token& query, size_t k,
                                    Lang target_lang);

struct LexiconPair {
  Token source;  // Lang::src
  Token gold;    // Lang::tgt
};

enum class Direction { src_to_tgt, tgt_to_src };

inline const char* direction_name(Direction d) {
  return d == Direction::src_to_tgt ? "src_to_tgt" : "tgt_to_src";
}

struct EvalReport {
  std::string method;
  size_t dim = 0;
  Direction direction = Direction::src_to_tgt;
  std::vector<size_t> k_values;
  std::vector<double> precision;  // P@k per entry of k_values
  uint64_t evaluated_pairs = 0;
  uint64_t discarded_oov = 0;
  double wall_time_s = 0.0;
};

// How the evaluator obtains a space for one query word.
struct Embedder {
  std::string name;  // "pca", "ca" or "nn"
  size_t dim = 0;
  // Local methods build a fresh space per query; the global method returns
  // one shared space regardless of the query.
  std::function<WordSpace(uint32_t query_id)> space_for;
  bool global = false;
};

Embedder make_local_embedder(const BilingualGraph& g, const Vocabulary& vocab,
                             ReduceMethod method, size_t dim,
                             uint64_t budget = kDefaultFocusCliqueBudget);
Embedder make_global_embedder(const GlobalEmbedding& emb);

// Scores P@k for each k. Pairs whose query or gold token is out of
// vocabulary are discarded and counted; a query whose local space cannot be
// built or lacks the gold counts as a miss. Throws all_pairs_oov when
// nothing remains. Parallelizes over queries.
EvalReport evaluate(std::span<const LexiconPair> pairs, Direction direction,
                    const Embedder& embedder, const Vocabulary& vocab,
                    std::span<const size_t> k_values, unsigned workers = 1);

struct DimScore {
  size_t dim = 0;
  double p1_fwd = 0, p5_fwd = 0, p1_rev = 0, p5_rev = 0;
  double mean() const { return (p1_fwd + p5_fwd + p1_rev + p5_rev) / 4.0; }
};

struct TuneResult {
  size_t best_dim = 0;
  std::vector<DimScore> curve;  // ascending dimension
};

// Sweeps the grid, scoring each dimension by the mean of
// {P@1, P@5} x {src->tgt, tgt->src} on dev pairs; ties go to the smaller
// dimension. `embedder_for` builds the method at a given dimension.
TuneResult tune_dimension(std::span<const LexiconPair> dev_pairs,
                          const std::function<Embedder(size_t dim)>& embedder_for,
                          const Vocabulary& vocab, std::span<const size_t> grid,
                          unsigned workers = 1);

}  // namespace bsc
