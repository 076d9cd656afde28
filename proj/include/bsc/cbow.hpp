#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "bsc/clique.hpp"
#include "bsc/types.hpp"

namespace bsc {

struct CbowConfig {
  size_t dim = 100;
  size_t window = 8;        // cliques larger than this are discarded
  uint64_t min_freq = 5;    // vocabulary cutoff applied upstream
  size_t negatives = 5;
  size_t epochs = 5;
  double initial_lr = 0.025;
  uint64_t seed = 1;
  unsigned workers = 1;     // >1 allows unsynchronized (racy) updates
  size_t unigram_table_size = 10'000'000;
  double unigram_power = 0.75;
};

// Cliques kept for training (size <= window), flat storage. One training
// example per (clique, member) pair: target = member, context = the rest.
struct TrainingSet {
  std::vector<uint32_t> data;
  std::vector<uint32_t> offsets;  // clique k = data[offsets[k]..offsets[k+1])
  uint64_t discarded_cliques = 0;

  size_t clique_count() const {
    return offsets.empty() ? 0 : offsets.size() - 1;
  }
  std::span<const uint32_t> clique(size_t k) const {
    return {data.data() + offsets[k], data.data() + offsets[k + 1]};
  }
  uint64_t example_count() const { return data.size(); }
};

TrainingSet cliques_to_training_windows(std::span<const SenseClique> cliques,
                                        const CbowConfig& cfg);

// Input/output vector tables, row-major, one row of `dim` doubles per word.
struct GlobalEmbedding {
  size_t dim = 0;
  uint32_t vocab_size = 0;
  std::vector<double> input;
  std::vector<double> output;

  std::span<const double> input_vec(uint32_t id) const {
    return {input.data() + static_cast<size_t>(id) * dim, dim};
  }
  std::span<double> input_vec(uint32_t id) {
    return {input.data() + static_cast<size_t>(id) * dim, dim};
  }
  std::span<const double> output_vec(uint32_t id) const {
    return {output.data() + static_cast<size_t>(id) * dim, dim};
  }
  std::span<double> output_vec(uint32_t id) {
    return {output.data() + static_cast<size_t>(id) * dim, dim};
  }
};

struct TrainReport {
  uint64_t examples_seen = 0;
  uint64_t discarded_cliques = 0;
  std::vector<double> epoch_loss;  // per-epoch mean example loss
};

// Bag-of-words model with negative sampling over a fixed vocabulary.
// Exposed for tests (gradient checks drive single examples directly).
class CbowModel {
 public:
  CbowModel(uint32_t vocab_size, size_t dim, uint64_t seed);

  // Loss of one example with the negative draws fixed by the caller.
  double example_loss(std::span<const uint32_t> context, uint32_t target,
                      std::span<const uint32_t> negatives) const;

  // Computes the analytic gradient and applies one SGD step; returns the
  // pre-update loss.
  double train_example(std::span<const uint32_t> context, uint32_t target,
                       std::span<const uint32_t> negatives, double lr);

  GlobalEmbedding& embedding() { return emb_; }
  const GlobalEmbedding& embedding() const { return emb_; }

 private:
  GlobalEmbedding emb_;
};

double sigmoid(double x);
double log_sigmoid(double x);

// Trains over the kept cliques. Deterministic for workers == 1 and a fixed
// seed. Throws empty_training_set when no example exists.
GlobalEmbedding train(const TrainingSet& windows, const CbowConfig& cfg,
                      const Vocabulary& vocab, TrainReport* report = nullptr);

}  // namespace bsc
