#include "bsc/cbow.hpp"

#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "bsc/errors.hpp"

namespace bsc {

namespace {

// Uniform in [0, 1) from explicit bit scaling; keeps streams identical
// across standard libraries.
double next_unit(std::mt19937_64& rng) {
  return double(rng() >> 11) * 0x1.0p-53;
}

// word2vec-style cumulative fill: slots proportional to freq^power.
std::vector<uint32_t> build_unigram_table(const Vocabulary& vocab,
                                          size_t table_size, double power) {
  double total = 0.0;
  for (uint32_t id = 0; id < vocab.size(); ++id)
    total += std::pow(double(vocab.freq(id)), power);
  if (total <= 0.0)
    throw empty_training_set("no word has positive frequency");

  std::vector<uint32_t> table(table_size);
  uint32_t i = 0;
  double cum = std::pow(double(vocab.freq(0)), power) / total;
  for (size_t a = 0; a < table_size; ++a) {
    table[a] = i;
    if (double(a) / double(table_size) > cum && i + 1 < vocab.size()) {
      ++i;
      cum += std::pow(double(vocab.freq(i)), power) / total;
    }
  }
  return table;
}

struct NegativeSampler {
  const std::vector<uint32_t>& table;
  std::mt19937_64 rng;
  bool constant;  // table holds a single distinct id

  NegativeSampler(const std::vector<uint32_t>& t, uint64_t seed)
      : table(t), rng(seed) {
    constant = true;
    for (uint32_t id : table)
      if (id != table[0]) {
        constant = false;
        break;
      }
  }

  uint32_t draw(uint32_t target) {
    if (constant && table[0] == target)
      throw error(errc::internal,
                  "negative sampling impossible: single-word distribution");
    for (;;) {
      uint32_t id = table[rng() % table.size()];
      if (id != target) return id;
    }
  }
};

}  // namespace

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

double log_sigmoid(double x) {
  if (x >= 0.0) return -std::log1p(std::exp(-x));
  return x - std::log1p(std::exp(x));
}

TrainingSet cliques_to_training_windows(std::span<const SenseClique> cliques,
                                        const CbowConfig& cfg) {
  TrainingSet out;
  out.offsets.push_back(0);
  for (const auto& c : cliques) {
    if (c.nodes.size() > cfg.window) {
      ++out.discarded_cliques;
      continue;
    }
    out.data.insert(out.data.end(), c.nodes.begin(), c.nodes.end());
    out.offsets.push_back(static_cast<uint32_t>(out.data.size()));
  }
  return out;
}

CbowModel::CbowModel(uint32_t vocab_size, size_t dim, uint64_t seed) {
  if (dim == 0) throw std::invalid_argument("embedding dimension must be >= 1");
  emb_.dim = dim;
  emb_.vocab_size = vocab_size;
  size_t n = static_cast<size_t>(vocab_size) * dim;
  emb_.input.resize(n);
  emb_.output.resize(n);
  std::mt19937_64 rng(seed);
  for (double& w : emb_.input) w = (next_unit(rng) - 0.5) / double(dim);
  for (double& w : emb_.output) w = (next_unit(rng) - 0.5) / double(dim);
}

double CbowModel::example_loss(std::span<const uint32_t> context,
                               uint32_t target,
                               std::span<const uint32_t> negatives) const {
  size_t dim = emb_.dim;
  std::vector<double> h(dim, 0.0);
  for (uint32_t c : context) {
    auto v = emb_.input_vec(c);
    for (size_t d = 0; d < dim; ++d) h[d] += v[d];
  }
  for (double& x : h) x /= double(context.size());

  auto dot = [&](uint32_t id) {
    auto o = emb_.output_vec(id);
    double s = 0.0;
    for (size_t d = 0; d < dim; ++d) s += h[d] * o[d];
    return s;
  };
  double loss = -log_sigmoid(dot(target));
  for (uint32_t n : negatives) loss -= log_sigmoid(-dot(n));
  return loss;
}

double CbowModel::train_example(std::span<const uint32_t> context,
                                uint32_t target,
                                std::span<const uint32_t> negatives,
                                double lr) {
  size_t dim = emb_.dim;
  std::vector<double> h(dim, 0.0);
  for (uint32_t c : context) {
    auto v = emb_.input_vec(c);
    for (size_t d = 0; d < dim; ++d) h[d] += v[d];
  }
  double inv = 1.0 / double(context.size());
  for (double& x : h) x *= inv;

  // dL/dh accumulates with pre-update output rows; output rows then take
  // their own gradient step against the shared hidden state.
  std::vector<double> e(dim, 0.0);
  double loss = 0.0;
  auto push = [&](uint32_t id, double label) {
    auto o = emb_.output_vec(id);
    double s = 0.0;
    for (size_t d = 0; d < dim; ++d) s += h[d] * o[d];
    loss -= label > 0.0 ? log_sigmoid(s) : log_sigmoid(-s);
    double g = sigmoid(s) - label;  // dL/ds
    for (size_t d = 0; d < dim; ++d) {
      e[d] += g * o[d];
      o[d] -= lr * g * h[d];
    }
  };
  push(target, 1.0);
  for (uint32_t n : negatives) push(n, 0.0);

  // dL/d(input_c) = e / |context| for every context word.
  for (uint32_t c : context) {
    auto v = emb_.input_vec(c);
    for (size_t d = 0; d < dim; ++d) v[d] -= lr * e[d] * inv;
  }
  return loss;
}

GlobalEmbedding train(const TrainingSet& windows, const CbowConfig& cfg,
                      const Vocabulary& vocab, TrainReport* report) {
  if (windows.example_count() == 0)
    throw empty_training_set(
        "no training example: every clique exceeds the context window");
  if (cfg.epochs == 0) throw std::invalid_argument("epochs must be >= 1");

  CbowModel model(vocab.size(), cfg.dim, cfg.seed);
  std::vector<uint32_t> table =
      build_unigram_table(vocab, cfg.unigram_table_size, cfg.unigram_power);

  uint64_t total = windows.example_count() * cfg.epochs;
  std::atomic<uint64_t> seen{0};
  double floor = cfg.initial_lr * 1e-4;

  if (report) {
    report->examples_seen = 0;
    report->discarded_cliques = windows.discarded_cliques;
    report->epoch_loss.clear();
  }

  unsigned workers = std::max(1u, cfg.workers);
  size_t cliques = windows.clique_count();

  for (size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::atomic<double> epoch_loss{0.0};

    auto run = [&](unsigned w) {
      NegativeSampler sampler(table, cfg.seed + 1 + w +
                                         epoch * uint64_t(workers));
      std::vector<uint32_t> context, negatives;
      double local_loss = 0.0;
      for (size_t k = w; k < cliques; k += workers) {
        auto clique = windows.clique(k);
        for (size_t t = 0; t < clique.size(); ++t) {
          uint64_t done = seen.fetch_add(1, std::memory_order_relaxed);
          double lr = cfg.initial_lr *
                      (1.0 - double(done) / double(total));
          if (lr < floor) lr = floor;

          context.assign(clique.begin(), clique.end());
          context.erase(context.begin() + static_cast<ptrdiff_t>(t));
          negatives.clear();
          for (size_t n = 0; n < cfg.negatives; ++n)
            negatives.push_back(sampler.draw(clique[t]));
          local_loss += model.train_example(context, clique[t], negatives, lr);
        }
      }
      double cur = epoch_loss.load(std::memory_order_relaxed);
      while (!epoch_loss.compare_exchange_weak(cur, cur + local_loss)) {
      }
    };

    if (workers == 1) {
      run(0);
    } else {
      std::vector<std::thread> threads;
      for (unsigned w = 0; w < workers; ++w) threads.emplace_back(run, w);
      for (auto& t : threads) t.join();
    }

    if (report)
      report->epoch_loss.push_back(epoch_loss.load() /
                                   double(windows.example_count()));
  }
  if (report) report->examples_seen = seen.load();
  return std::move(model.embedding());
}

}  // namespace bsc
