#include "bsc/corpus.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>

#include "bsc/errors.hpp"

namespace bsc {

std::vector<std::string> tokenize(std::string_view line,
                                  const TokenizerConfig& cfg) {
  std::array<bool, 256> strip{};
  for (unsigned char c : cfg.strip_chars) strip[c] = true;

  std::vector<std::string> out;
  std::string cur;
  for (unsigned char c : line) {
    if (std::isspace(c)) {
      if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
      continue;
    }
    if (strip[c]) continue;
    // ASCII-only lowercasing keeps multi-byte UTF-8 sequences intact.
    if (cfg.lowercase && c < 0x80) c = static_cast<unsigned char>(std::tolower(c));
    cur.push_back(static_cast<char>(c));
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

namespace {

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_failure("cannot open corpus file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  if (in.bad()) throw io_failure("read error on corpus file: " + path);
  return lines;
}

}  // namespace

ParallelCorpus ingest(const std::string& source_path,
                      const std::string& target_path,
                      const TokenizerConfig& cfg) {
  std::vector<std::string> src_lines = read_lines(source_path);
  std::vector<std::string> tgt_lines = read_lines(target_path);
  if (src_lines.size() != tgt_lines.size()) {
    throw misaligned_corpus(
        "line counts differ: " + source_path + " has " +
        std::to_string(src_lines.size()) + " lines, " + target_path + " has " +
        std::to_string(tgt_lines.size()));
  }

  ParallelCorpus corpus;
  corpus.sentences.reserve(src_lines.size());
  uint64_t nonempty_pairs = 0;
  for (size_t i = 0; i < src_lines.size(); ++i) {
    BilingualSentence sent;
    for (Lang lang : {Lang::src, Lang::tgt}) {
      const std::string& line = lang == Lang::src ? src_lines[i] : tgt_lines[i];
      for (const std::string& surface : tokenize(line, cfg)) {
        uint32_t id = corpus.vocab.intern(surface, lang);
        corpus.vocab.bump(id);
        sent.ids.push_back(id);
        ++corpus.total_tokens;
      }
    }
    if (!sent.ids.empty()) ++nonempty_pairs;
    std::sort(sent.ids.begin(), sent.ids.end());
    corpus.sentences.push_back(std::move(sent));
  }
  if (nonempty_pairs == 0) {
    throw empty_corpus("no non-empty line pair in " + source_path + " / " +
                       target_path);
  }
  return corpus;
}

PruneResult prune_by_frequency(const Vocabulary& vocab, uint64_t min_freq) {
  PruneResult result;
  result.remap.assign(vocab.size(), -1);
  for (uint32_t id = 0; id < vocab.size(); ++id) {
    const auto& e = vocab.entry(id);
    if (e.freq >= min_freq) {
      result.remap[id] = static_cast<int64_t>(result.vocab.size());
      result.vocab.append(e.token, e.freq);
    }
  }
  if (result.vocab.empty()) {
    throw all_tokens_pruned("no token has frequency >= " +
                            std::to_string(min_freq));
  }
  return result;
}

std::vector<BilingualSentence> reencode_sentences(
    const std::vector<BilingualSentence>& sentences,
    const std::vector<int64_t>& remap) {
  std::vector<BilingualSentence> out;
  out.reserve(sentences.size());
  for (const auto& sent : sentences) {
    BilingualSentence re;
    re.ids.reserve(sent.ids.size());
    for (uint32_t id : sent.ids) {
      int64_t mapped = remap.at(id);
      if (mapped >= 0) re.ids.push_back(static_cast<uint32_t>(mapped));
    }
    // remap preserves relative order, so sortedness survives re-encoding
    out.push_back(std::move(re));
  }
  return out;
}

}  // namespace bsc
