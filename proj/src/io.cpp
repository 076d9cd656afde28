#include "bsc/io.hpp"

#include <bit>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "bsc/errors.hpp"

namespace bsc {

namespace {

void append_u16(std::string& b, uint16_t v) {
  for (int i = 0; i < 2; ++i) b.push_back(char((v >> (8 * i)) & 0xff));
}
void append_u32(std::string& b, uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(char((v >> (8 * i)) & 0xff));
}
void append_u64(std::string& b, uint64_t v) {
  for (int i = 0; i < 8; ++i) b.push_back(char((v >> (8 * i)) & 0xff));
}
void append_f64(std::string& b, double v) {
  append_u64(b, std::bit_cast<uint64_t>(v));
}
void append_varint(std::string& b, uint64_t v) {
  while (v >= 0x80) {
    b.push_back(char((v & 0x7f) | 0x80));
    v >>= 7;
  }
  b.push_back(char(v));
}

// Bounds-checked little-endian reader over an in-memory file image.
struct Cursor {
  const std::string& buf;
  const std::string& path;
  size_t pos = 0;

  void need(size_t n) const {
    if (buf.size() - pos < n)
      throw io_failure(path + ": truncated file");
  }
  bool at_end() const { return pos == buf.size(); }

  uint16_t u16() {
    need(2);
    uint16_t v = 0;
    for (int i = 0; i < 2; ++i) v |= uint16_t(uint8_t(buf[pos++])) << (8 * i);
    return v;
  }
  uint32_t u32() {
    need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= uint32_t(uint8_t(buf[pos++])) << (8 * i);
    return v;
  }
  uint64_t u64() {
    need(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= uint64_t(uint8_t(buf[pos++])) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  uint64_t varint() {
    uint64_t v = 0;
    int shift = 0;
    for (;;) {
      need(1);
      uint8_t byte = uint8_t(buf[pos++]);
      if (shift >= 64 || (shift == 63 && (byte & 0x7e)))
        throw io_failure(path + ": varint overflow");
      v |= uint64_t(byte & 0x7f) << shift;
      if (!(byte & 0x80)) return v;
      shift += 7;
    }
  }
  void magic(const char* m) {
    need(4);
    if (std::memcmp(buf.data() + pos, m, 4) != 0)
      throw io_failure(path + ": bad magic, expected " + m);
    pos += 4;
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_failure("cannot open " + path);
  std::string buf((std::istreambuf_iterator<char>(in)),
                  std::istreambuf_iterator<char>());
  if (in.bad()) throw io_failure("read error on " + path);
  return buf;
}

void write_file(const std::string& path, const std::string& buf) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_failure("cannot open " + path + " for writing");
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  out.flush();
  if (!out) throw io_failure("write error on " + path);
}

void append_g9(std::string& b, double v) {
  char tmp[64];
  int n = std::snprintf(tmp, sizeof tmp, "%.9g", v);
  b.append(tmp, static_cast<size_t>(n));
}

uint64_t fnv1a(const char* data, size_t n) {
  uint64_t h = 14695981039346656037ull;
  for (size_t i = 0; i < n; ++i) {
    h ^= uint8_t(data[i]);
    h *= 1099511628211ull;
  }
  return h;
}

// BSCG body shared by the file writer and the checksum.
std::string graph_payload(const BilingualGraph& g) {
  std::string b;
  append_u32(b, 1);  // version
  append_u32(b, g.node_count());
  append_u64(b, g.edge_count());
  append_f64(b, g.threshold());
  for (auto [i, j, w] : g.edge_list()) {
    append_u32(b, i);
    append_u32(b, j);
    append_f64(b, w);
  }
  return b;
}

std::vector<std::string> split_tabs(std::string_view line) {
  std::vector<std::string> out;
  size_t start = 0;
  for (;;) {
    size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      return out;
    }
    out.emplace_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

// Lines without the trailing newline; final unterminated line kept.
std::vector<std::string> text_lines(const std::string& buf) {
  std::vector<std::string> lines;
  size_t start = 0;
  while (start <= buf.size()) {
    size_t nl = buf.find('\n', start);
    if (nl == std::string::npos) {
      if (start < buf.size()) lines.push_back(buf.substr(start));
      break;
    }
    std::string line = buf.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    start = nl + 1;
  }
  return lines;
}

uint64_t parse_u64_field(const std::string& s, const std::string& path,
                         size_t lineno, const char* what) {
  uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw io_failure(path + ":" + std::to_string(lineno) + ": bad " + what +
                     " '" + s + "'");
  return v;
}

double parse_f64_field(const std::string& s, const std::string& path,
                       size_t lineno, const char* what) {
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || s.empty())
    throw io_failure(path + ":" + std::to_string(lineno) + ": bad " + what +
                     " '" + s + "'");
  return v;
}

}  // namespace

void save_vocab_tsv(const Vocabulary& vocab, const std::string& path) {
  std::string b;
  for (uint32_t id = 0; id < vocab.size(); ++id) {
    const auto& e = vocab.entry(id);
    b += std::to_string(id);
    b += '\t';
    b += lang_name(e.token.lang);
    b += '\t';
    b += e.token.surface;
    b += '\t';
    b += std::to_string(e.freq);
    b += '\n';
  }
  write_file(path, b);
}

Vocabulary load_vocab_tsv(const std::string& path) {
  std::string buf = read_file(path);
  Vocabulary v;
  size_t lineno = 0;
  for (const std::string& line : text_lines(buf)) {
    ++lineno;
    if (line.empty()) continue;
    auto f = split_tabs(line);
    if (f.size() != 4)
      throw io_failure(path + ":" + std::to_string(lineno) +
                       ": expected 4 tab-separated fields");
    uint64_t id = parse_u64_field(f[0], path, lineno, "node id");
    if (id != v.size())
      throw io_failure(path + ":" + std::to_string(lineno) +
                       ": node ids must be dense and ascending");
    auto lang = parse_lang(f[1]);
    if (!lang)
      throw io_failure(path + ":" + std::to_string(lineno) + ": bad lang '" +
                       f[1] + "'");
    if (f[2].empty())
      throw io_failure(path + ":" + std::to_string(lineno) +
                       ": empty surface");
    uint64_t freq = parse_u64_field(f[3], path, lineno, "frequency");
    v.append(Token{f[2], *lang}, freq);
  }
  return v;
}

void save_sentences(const std::vector<BilingualSentence>& sentences,
                    const std::string& path) {
  std::string b = "BSC1";
  append_u64(b, sentences.size());
  for (const auto& s : sentences) {
    append_varint(b, s.ids.size());
    uint32_t prev = 0;
    for (size_t k = 0; k < s.ids.size(); ++k) {
      append_varint(b, k == 0 ? s.ids[0] : s.ids[k] - prev);
      prev = s.ids[k];
    }
  }
  write_file(path, b);
}

std::vector<BilingualSentence> load_sentences(const std::string& path) {
  std::string buf = read_file(path);
  Cursor c{buf, path};
  c.magic("BSC1");
  uint64_t count = c.u64();
  std::vector<BilingualSentence> out;
  out.reserve(count);
  for (uint64_t s = 0; s < count; ++s) {
    uint64_t len = c.varint();
    BilingualSentence sent;
    sent.ids.reserve(len);
    uint64_t prev = 0;
    for (uint64_t k = 0; k < len; ++k) {
      uint64_t v = (k == 0) ? c.varint() : prev + c.varint();
      if (v > UINT32_MAX)
        throw io_failure(path + ": node id out of range");
      sent.ids.push_back(static_cast<uint32_t>(v));
      prev = v;
    }
    out.push_back(std::move(sent));
  }
  if (!c.at_end()) throw io_failure(path + ": trailing bytes");
  return out;
}

void save_graph(const BilingualGraph& g, const std::string& path) {
  write_file(path, "BSCG" + graph_payload(g));
}

BilingualGraph load_graph(const std::string& path) {
  std::string buf = read_file(path);
  Cursor c{buf, path};
  c.magic("BSCG");
  uint32_t version = c.u32();
  if (version != 1)
    throw io_failure(path + ": unsupported graph version " +
                     std::to_string(version));
  uint32_t nodes = c.u32();
  uint64_t edges = c.u64();
  double threshold = c.f64();
  std::vector<std::tuple<uint32_t, uint32_t, double>> list;
  list.reserve(edges);
  for (uint64_t e = 0; e < edges; ++e) {
    uint32_t i = c.u32();
    uint32_t j = c.u32();
    double w = c.f64();
    if (i >= j)
      throw io_failure(path + ": edge endpoints not ascending");
    if (!list.empty() && !(list.back() < std::tuple{i, j, w}))
      throw io_failure(path + ": edges out of order");
    list.emplace_back(i, j, w);
  }
  if (!c.at_end()) throw io_failure(path + ": trailing bytes");
  try {
    return BilingualGraph(nodes, std::move(list), threshold);
  } catch (const std::exception& e) {
    throw io_failure(path + ": " + e.what());
  }
}

uint64_t graph_checksum(const BilingualGraph& g) {
  std::string payload = graph_payload(g);
  return fnv1a(payload.data(), payload.size());
}

void save_cliques(std::span<const SenseClique> cliques, uint64_t graph_checksum,
                  const std::string& path) {
  std::string b = "BSCC";
  append_u32(b, 1);  // version
  append_u64(b, graph_checksum);
  for (const auto& c : cliques) {
    if (c.nodes.size() > UINT16_MAX)
      throw io_failure(path + ": clique too large to serialize");
    append_u16(b, static_cast<uint16_t>(c.nodes.size()));
    for (uint32_t id : c.nodes) append_u32(b, id);
  }
  write_file(path, b);
}

std::vector<SenseClique> load_cliques(const std::string& path,
                                      uint64_t expected_graph_checksum) {
  std::string buf = read_file(path);
  Cursor c{buf, path};
  c.magic("BSCC");
  uint32_t version = c.u32();
  if (version != 1)
    throw io_failure(path + ": unsupported clique-file version " +
                     std::to_string(version));
  uint64_t checksum = c.u64();
  if (checksum != expected_graph_checksum)
    throw io_failure(path + ": graph checksum mismatch; cliques were "
                     "enumerated from a different graph");
  std::vector<SenseClique> out;
  while (!c.at_end()) {
    uint16_t size = c.u16();
    if (size < 2) throw io_failure(path + ": clique smaller than 2");
    SenseClique q;
    q.nodes.reserve(size);
    for (uint16_t k = 0; k < size; ++k) {
      uint32_t id = c.u32();
      if (!q.nodes.empty() && id <= q.nodes.back())
        throw io_failure(path + ": clique members not ascending");
      q.nodes.push_back(id);
    }
    out.push_back(std::move(q));
  }
  return out;
}

void export_graph_tsv(const CooccurrenceCounts& counts, const Vocabulary& vocab,
                      double threshold, const std::string& path) {
  std::string b = "node_i\tnode_j\tcooccurrence\tweight\n";
  for (const auto& [key, co] : counts.items) {
    uint32_t i = CooccurrenceCounts::lo(key);
    uint32_t j = CooccurrenceCounts::hi(key);
    double w = double(co) / (double(vocab.freq(i)) * double(vocab.freq(j)));
    if (!(w > 0.0) || w < threshold) continue;
    b += std::to_string(i);
    b += '\t';
    b += std::to_string(j);
    b += '\t';
    b += std::to_string(co);
    b += '\t';
    append_g9(b, w);
    b += '\n';
  }
  write_file(path, b);
}

void save_embedding_text(const Vocabulary& vocab,
                         std::span<const uint32_t> words,
                         const std::vector<std::vector<double>>& coords,
                         const std::string& path) {
  if (coords.size() != words.size())
    throw std::invalid_argument("embedding row count mismatch");
  size_t dim = coords.empty() ? 0 : coords[0].size();
  std::string b = std::to_string(words.size()) + " " + std::to_string(dim) + "\n";
  for (size_t r = 0; r < words.size(); ++r) {
    if (coords[r].size() != dim)
      throw std::invalid_argument("ragged embedding rows");
    const Token& t = vocab.token(words[r]);
    b += lang_name(t.lang);
    b += ':';
    b += t.surface;
    for (double v : coords[r]) {
      b += ' ';
      append_g9(b, v);
    }
    b += '\n';
  }
  write_file(path, b);
}

void save_embedding_text(const Vocabulary& vocab, const GlobalEmbedding& emb,
                         const std::string& path) {
  std::vector<uint32_t> words(emb.vocab_size);
  std::vector<std::vector<double>> coords(emb.vocab_size);
  for (uint32_t id = 0; id < emb.vocab_size; ++id) {
    words[id] = id;
    auto v = emb.input_vec(id);
    coords[id].assign(v.begin(), v.end());
  }
  save_embedding_text(vocab, words, coords, path);
}

LoadedEmbedding load_embedding_text(const Vocabulary& vocab,
                                    const std::string& path) {
  std::string buf = read_file(path);
  auto lines = text_lines(buf);
  if (lines.empty()) throw io_failure(path + ": empty embedding file");

  LoadedEmbedding out;
  size_t count = 0;
  {
    size_t sp = lines[0].find(' ');
    if (sp == std::string::npos)
      throw io_failure(path + ":1: expected '<count> <dim>'");
    count = parse_u64_field(lines[0].substr(0, sp), path, 1, "word count");
    out.dim = parse_u64_field(lines[0].substr(sp + 1), path, 1, "dimension");
  }
  if (lines.size() != count + 1)
    throw io_failure(path + ": expected " + std::to_string(count) +
                     " word lines, found " + std::to_string(lines.size() - 1));

  for (size_t r = 0; r < count; ++r) {
    const std::string& line = lines[r + 1];
    size_t lineno = r + 2;
    std::vector<std::string> fields;
    size_t start = 0;
    while (start < line.size()) {
      size_t sp = line.find(' ', start);
      if (sp == std::string::npos) sp = line.size();
      fields.push_back(line.substr(start, sp - start));
      start = sp + 1;
    }
    if (fields.size() != out.dim + 1)
      throw io_failure(path + ":" + std::to_string(lineno) + ": expected " +
                       std::to_string(out.dim + 1) + " fields");
    size_t colon = fields[0].find(':');
    if (colon == std::string::npos)
      throw io_failure(path + ":" + std::to_string(lineno) +
                       ": word must be '<lang>:<surface>'");
    auto lang = parse_lang(fields[0].substr(0, colon));
    if (!lang)
      throw io_failure(path + ":" + std::to_string(lineno) + ": bad lang '" +
                       fields[0].substr(0, colon) + "'");
    std::string surface = fields[0].substr(colon + 1);
    auto id = vocab.find(surface, *lang);
    if (!id)
      throw io_failure(path + ":" + std::to_string(lineno) + ": word '" +
                       fields[0] + "' not in vocabulary");
    std::vector<double> row(out.dim);
    for (size_t d = 0; d < out.dim; ++d)
      row[d] = parse_f64_field(fields[d + 1], path, lineno, "coordinate");
    out.words.push_back(*id);
    out.coords.push_back(std::move(row));
  }
  return out;
}

std::vector<LexiconPairRaw> load_lexicon_tsv(const std::string& path) {
  std::string buf = read_file(path);
  std::vector<LexiconPairRaw> out;
  size_t lineno = 0;
  for (const std::string& line : text_lines(buf)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto f = split_tabs(line);
    if (f.size() != 2 || f[0].empty() || f[1].empty())
      throw io_failure(path + ":" + std::to_string(lineno) +
                       ": expected 'source<TAB>gold'");
    out.push_back(LexiconPairRaw{f[0], f[1]});
  }
  return out;
}

}  // namespace bsc
