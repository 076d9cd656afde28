#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bsc/cbow.hpp"
#include "bsc/clique.hpp"
#include "bsc/graph.hpp"
#include "bsc/types.hpp"

// Persisted artifact formats. All binary files are little-endian and carry a
// 4-byte magic: "BSC1" (sentence stream), "BSCG" (graph), "BSCC" (cliques).

namespace bsc {

// Vocabulary TSV: node-id <TAB> lang <TAB> surface <TAB> frequency, sorted
// by node id.
void save_vocab_tsv(const Vocabulary& vocab, const std::string& path);
Vocabulary load_vocab_tsv(const std::string& path);

// Sentence stream: magic "BSC1", u64 count, then per sentence a varint
// length and varint-delta-encoded sorted node ids.
void save_sentences(const std::vector<BilingualSentence>& sentences,
                    const std::string& path);
std::vector<BilingualSentence> load_sentences(const std::string& path);

// Graph: magic "BSCG", u32 version, u32 node count, u64 edge count,
// f64 threshold, then (u32 i, u32 j, f64 weight) per edge with i < j,
// ascending.
void save_graph(const BilingualGraph& g, const std::string& path);
BilingualGraph load_graph(const std::string& path);

// FNV-1a over the canonical payload (the BSCG bytes after the magic); ties
// clique files to the exact graph they came from.
uint64_t graph_checksum(const BilingualGraph& g);

// Cliques: magic "BSCC", u32 version, u64 graph checksum, then per clique
// u16 size followed by that many u32 node ids ascending.
void save_cliques(std::span<const SenseClique> cliques, uint64_t graph_checksum,
                  const std::string& path);
// Verifies the stored checksum against `expected_graph_checksum`; mismatch
// is an io_failure.
std::vector<SenseClique> load_cliques(const std::string& path,
                                      uint64_t expected_graph_checksum);

// Inspection TSV for kept edges: i, j, Co, EW.
void export_graph_tsv(const CooccurrenceCounts& counts, const Vocabulary& vocab,
                      double threshold, const std::string& path);

// Shared embedding text format: "<word_count> <dim>" then one line per word
// "<lang>:<surface> v1 .. vd" with 9-significant-digit floats.
void save_embedding_text(const Vocabulary& vocab,
                         std::span<const uint32_t> words,
                         const std::vector<std::vector<double>>& coords,
                         const std::string& path);
void save_embedding_text(const Vocabulary& vocab, const GlobalEmbedding& emb,
                         const std::string& path);

struct LoadedEmbedding {
  size_t dim = 0;
  std::vector<uint32_t> words;
  std::vector<std::vector<double>> coords;
};
LoadedEmbedding load_embedding_text(const Vocabulary& vocab,
                                    const std::string& path);

struct LexiconPairRaw {
  std::string source;
  std::string gold;
};

// Lexicon TSV: source <TAB> gold, '#' comments. Surfaces are stored as
// written; callers normalize with the ingestion tokenizer settings.
std::vector<LexiconPairRaw> load_lexicon_tsv(const std::string& path);

}  // namespace bsc
