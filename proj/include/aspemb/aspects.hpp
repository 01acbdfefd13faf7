#pragma once

#include <fstream>
#include <map>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "json.hpp"

#include "aspemb/corpus.hpp"
#include "aspemb/error.hpp"
#include "aspemb/text.hpp"

namespace aspemb {

inline constexpr std::size_t kMaxAspectTermTokens = 3;

struct Aspect {
  std::string name;
  std::vector<std::string> terms;  // lowercase; 1..3 space-separated tokens
};

// Ordered aspect list; position i is embedding dimension i. Term sets are
// disjoint across aspects.
class AspectCatalog {
 public:
  AspectCatalog() = default;

  explicit AspectCatalog(std::vector<Aspect> aspects) : aspects_(std::move(aspects)) {
    std::unordered_set<std::string> names;
    for (std::size_t i = 0; i < aspects_.size(); ++i) {
      auto& a = aspects_[i];
      if (trim(a.name).empty()) throw SchemaError("aspect catalog: empty aspect name");
      if (!names.insert(a.name).second) throw SchemaError("aspect catalog: duplicate aspect '" + a.name + "'");
      if (a.terms.empty()) throw SchemaError("aspect catalog: aspect '" + a.name + "' has no terms");
      for (auto& t : a.terms) {
        const auto words = split_whitespace(t);
        if (words.empty()) throw SchemaError("aspect catalog: empty term in '" + a.name + "'");
        if (words.size() > kMaxAspectTermTokens) {
          throw SchemaError("aspect catalog: term '" + t + "' longer than 3 tokens");
        }
        t = to_lower(join(words, " "));
        const auto [it, fresh] = term_index_.emplace(t, i);
        if (!fresh && it->second != i) {
          throw SchemaError("aspect catalog: term '" + t + "' shared by '" + aspects_[it->second].name +
                            "' and '" + a.name + "'");
        }
      }
    }
  }

  std::size_t size() const noexcept { return aspects_.size(); }
  const std::vector<Aspect>& aspects() const noexcept { return aspects_; }
  const Aspect& operator[](std::size_t i) const { return aspects_.at(i); }

  std::optional<std::size_t> index_of(std::string_view name) const {
    for (std::size_t i = 0; i < aspects_.size(); ++i) {
      if (aspects_[i].name == name) return i;
    }
    return std::nullopt;
  }

  // Aspect owning a lowercase (possibly multiword) term.
  std::optional<std::size_t> aspect_for_term(const std::string& term) const {
    const auto it = term_index_.find(term);
    if (it == term_index_.end()) return std::nullopt;
    return it->second;
  }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& a : aspects_) out.push_back(a.name);
    return out;
  }

 private:
  std::vector<Aspect> aspects_;
  std::unordered_map<std::string, std::size_t> term_index_;
};

// {"aspects": [{"name": ..., "terms": [...]}, ...]}; other keys are ignored.
inline AspectCatalog parse_catalog(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("aspects") || !j["aspects"].is_array()) {
    throw SchemaError("aspect catalog: missing top-level 'aspects' list");
  }
  std::vector<Aspect> aspects;
  for (const auto& el : j["aspects"]) {
    if (!el.is_object() || !el.contains("name") || !el["name"].is_string()) {
      throw SchemaError("aspect catalog: element without string 'name'");
    }
    Aspect a;
    a.name = el["name"].get<std::string>();
    if (!el.contains("terms") || !el["terms"].is_array()) {
      throw SchemaError("aspect catalog: aspect '" + a.name + "' has no 'terms' list");
    }
    for (const auto& t : el["terms"]) {
      if (!t.is_string()) throw SchemaError("aspect catalog: non-string term in '" + a.name + "'");
      a.terms.push_back(t.get<std::string>());
    }
    aspects.push_back(std::move(a));
  }
  return AspectCatalog(std::move(aspects));
}

inline AspectCatalog load_catalog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open aspect catalog: " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("aspect catalog " + path + ": " + e.what());
  }
  return parse_catalog(j);
}

#ifdef ASPEMB_DATA_DIR
inline std::string default_catalog_path() { return std::string(ASPEMB_DATA_DIR) + "/aspects30.json"; }
#endif

struct AspectMention {
  std::string aspect_name;
  std::string doc_id;
  std::size_t sentence_index = 0;
  std::size_t token_index = 0;  // first token of the match
  std::size_t token_count = 1;
  std::string matched_term;

  // Last token of a multiword match.
  std::size_t head_index() const noexcept { return token_index + token_count - 1; }

  friend bool operator==(const AspectMention&, const AspectMention&) = default;
};

// Longest-match-first scan over lowercased tokens, windows of 3, 2, 1.
inline std::vector<AspectMention> extract(const ReviewDoc& doc, const AspectCatalog& catalog) {
  std::vector<AspectMention> out;
  for (std::size_t s = 0; s < doc.tokens.size(); ++s) {
    const auto& toks = doc.tokens[s];
    std::size_t i = 0;
    while (i < toks.size()) {
      bool matched = false;
      for (std::size_t len = std::min(kMaxAspectTermTokens, toks.size() - i); len >= 1; --len) {
        std::string key = to_lower(toks[i]);
        for (std::size_t k = 1; k < len; ++k) key += ' ' + to_lower(toks[i + k]);
        if (const auto a = catalog.aspect_for_term(key)) {
          out.push_back({catalog[*a].name, doc.id, s, i, len, key});
          i += len;
          matched = true;
          break;
        }
      }
      if (!matched) ++i;
    }
  }
  return out;
}

// Mention counts per aspect, zero for unseen aspects.
inline std::map<std::string, std::size_t> corpus_frequency(const std::vector<ReviewDoc>& docs,
                                                           const AspectCatalog& catalog) {
  std::map<std::string, std::size_t> out;
  for (const auto& a : catalog.aspects()) out[a.name] = 0;
  for (const auto& d : docs) {
    for (const auto& m : extract(d, catalog)) ++out[m.aspect_name];
  }
  return out;
}

}  // namespace aspemb
