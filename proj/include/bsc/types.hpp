#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bsc/errors.hpp"

namespace bsc {

// Side of the parallel corpus a token came from. Identical surfaces on
// different sides are distinct tokens.
enum class Lang : uint8_t { src = 0, tgt = 1 };

inline const char* lang_name(Lang l) { return l == Lang::src ? "src" : "tgt"; }

inline std::optional<Lang> parse_lang(std::string_view s) {
  if (s == "src") return Lang::src;
  if (s == "tgt") return Lang::tgt;
  return std::nullopt;
}

struct Token {
  std::string surface;  // lowercased, whitespace-free
  Lang lang = Lang::src;

  bool operator==(const Token&) const = default;
};

// Dense, immutable-after-build token inventory. Node ids are 0..size()-1 in
// order of first appearance in the corpus; lookup by (surface, lang) and by
// id are mutually inverse.
class Vocabulary {
 public:
  struct Entry {
    Token token;
    uint64_t freq = 0;
  };

  Vocabulary() = default;

  uint32_t size() const { return static_cast<uint32_t>(entries_.size()); }
  bool empty() const { return entries_.empty(); }

  const Entry& entry(uint32_t id) const { return entries_.at(id); }
  uint64_t freq(uint32_t id) const { return entries_.at(id).freq; }
  const Token& token(uint32_t id) const { return entries_.at(id).token; }
  Lang lang(uint32_t id) const { return entries_.at(id).token.lang; }

  std::optional<uint32_t> find(std::string_view surface, Lang lang) const {
    auto it = index_.find(key(surface, lang));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  // Returns the id, creating the entry with freq 0 if absent.
  uint32_t intern(std::string_view surface, Lang lang) {
    auto [it, inserted] = index_.try_emplace(
        key(surface, lang), static_cast<uint32_t>(entries_.size()));
    if (inserted) {
      entries_.push_back(Entry{Token{std::string(surface), lang}, 0});
    }
    return it->second;
  }

  void bump(uint32_t id, uint64_t by = 1) { entries_.at(id).freq += by; }

  // Appends a fully specified entry; used when loading persisted
  // vocabularies. Ids must arrive densely in order.
  void append(Token token, uint64_t freq) {
    uint32_t id = static_cast<uint32_t>(entries_.size());
    auto [it, inserted] = index_.try_emplace(key(token.surface, token.lang), id);
    if (!inserted) {
      throw io_failure("duplicate vocabulary entry: " +
                       std::string(lang_name(token.lang)) + ":" +
                       token.surface);
    }
    entries_.push_back(Entry{std::move(token), freq});
  }

  uint64_t total_frequency() const {
    uint64_t s = 0;
    for (const auto& e : entries_) s += e.freq;
    return s;
  }

 private:
  static std::string key(std::string_view surface, Lang lang) {
    std::string k;
    k.reserve(surface.size() + 1);
    k.push_back(lang == Lang::src ? 's' : 't');
    k.append(surface);
    return k;
  }

  std::vector<Entry> entries_;
  std::unordered_map<std::string, uint32_t> index_;
};

// One source sentence combined with its aligned target sentence, as a
// multiset of node ids (stored sorted ascending; duplicates kept).
struct BilingualSentence {
  std::vector<uint32_t> ids;

  bool empty() const { return ids.empty(); }
  size_t size() const { return ids.size(); }
};

}  // namespace bsc
