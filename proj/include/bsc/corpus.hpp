#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bsc/types.hpp"

namespace bsc {

struct TokenizerConfig {
  bool lowercase = true;
  // Characters deleted from each line before whitespace splitting.
  std::string strip_chars = ".,;:!?\"()[]{}";
};

struct ParallelCorpus {
  Vocabulary vocab;
  std::vector<BilingualSentence> sentences;  // one per line pair
  uint64_t total_tokens = 0;
};

// Splits a raw line into normalized token surfaces.
std::vector<std::string> tokenize(std::string_view line,
                                  const TokenizerConfig& cfg);

// Reads a line-aligned pair of UTF-8 text files (LF or CRLF). Line i of
// source pairs with line i of target; node ids are assigned in order of
// first appearance (source side of a pair before its target side).
//
// Throws misaligned_corpus when line counts differ, empty_corpus when no
// line pair yields a token, io_failure on unreadable files.
ParallelCorpus ingest(const std::string& source_path,
                      const std::string& target_path,
                      const TokenizerConfig& cfg = {});

struct PruneResult {
  Vocabulary vocab;
  // old id -> new id, or -1 for dropped entries. Size = old vocab size.
  std::vector<int64_t> remap;
};

// Keeps exactly the entries with freq >= min_freq, re-densifying node ids
// in their original order. Throws all_tokens_pruned when nothing survives.
PruneResult prune_by_frequency(const Vocabulary& vocab, uint64_t min_freq);

// Rewrites sentences through a prune remap, dropping pruned ids. Sentences
// are kept positionally (possibly becoming empty).
std::vector<BilingualSentence> reencode_sentences(
    const std::vector<BilingualSentence>& sentences,
    const std::vector<int64_t>& remap);

}  // namespace bsc
