#pragma once

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "aspemb/corpus.hpp"
#include "aspemb/error.hpp"
#include "aspemb/text.hpp"

namespace aspemb {

enum class Relation { Amod, Advmod, Nsubj, Other };
enum class PosTag { Adj, Adv, Noun, Verb, Neg, Other };

inline std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::Amod: return "amod";
    case Relation::Advmod: return "advmod";
    case Relation::Nsubj: return "nsubj";
    case Relation::Other: return "other";
  }
  return "other";
}

inline std::string_view to_string(PosTag t) {
  switch (t) {
    case PosTag::Adj: return "ADJ";
    case PosTag::Adv: return "ADV";
    case PosTag::Noun: return "NOUN";
    case PosTag::Verb: return "VERB";
    case PosTag::Neg: return "NEG";
    case PosTag::Other: return "OTHER";
  }
  return "OTHER";
}

// Token indices are 0-based within the sentence.
struct DepArc {
  Relation relation = Relation::Other;
  std::size_t head = 0;
  std::size_t dependent = 0;

  friend bool operator==(const DepArc&, const DepArc&) = default;
};

struct ParsedSentence {
  TokenList tokens;
  std::vector<PosTag> pos;
  std::vector<DepArc> arcs;
  std::string doc_id;  // from a `# doc_id = ...` comment, empty otherwise

  friend bool operator==(const ParsedSentence&, const ParsedSentence&) = default;
};

// ---------------------------------------------------------------------------
// CoNLL-U

namespace detail {

inline Relation relation_from_deprel(std::string_view deprel) {
  const auto base = deprel.substr(0, deprel.find(':'));
  if (base == "amod") return Relation::Amod;
  if (base == "advmod") return Relation::Advmod;
  if (base == "nsubj") return Relation::Nsubj;
  return Relation::Other;
}

inline PosTag pos_from_upos(std::string_view upos, std::string_view lemma) {
  if (upos == "ADJ") return PosTag::Adj;
  if (upos == "ADV") return PosTag::Adv;
  if (upos == "NOUN" || upos == "PROPN") return PosTag::Noun;
  if (upos == "VERB" || upos == "AUX") return PosTag::Verb;
  if (upos == "PART" && to_lower(lemma) == "not") return PosTag::Neg;
  return PosTag::Other;
}

inline std::optional<std::size_t> parse_index(std::string_view s) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace detail

// Consumes FORM, LEMMA (negation only), UPOS, HEAD and DEPREL. Multiword
// token ranges (1-2) and empty nodes (1.1) are skipped.
inline std::vector<ParsedSentence> parse_conllu(std::istream& in, const std::string& where = "<stream>") {
  std::vector<ParsedSentence> out;
  ParsedSentence cur;
  std::vector<std::pair<std::size_t, std::string>> heads;  // (head 1-based, deprel)
  std::vector<std::size_t> head_lines;
  std::string pending_doc;
  std::string line;
  std::size_t lineno = 0;

  auto flush = [&]() {
    if (cur.tokens.empty()) return;
    for (std::size_t i = 0; i < heads.size(); ++i) {
      const auto [head, deprel] = heads[i];
      if (head == 0) continue;
      if (head > cur.tokens.size() || head - 1 == i) {
        throw ParseError(where, head_lines[i], "HEAD out of range");
      }
      cur.arcs.push_back({detail::relation_from_deprel(deprel), head - 1, i});
    }
    cur.doc_id = pending_doc;
    out.push_back(std::move(cur));
    cur = ParsedSentence{};
    heads.clear();
    head_lines.clear();
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) {
      flush();
      continue;
    }
    if (line.front() == '#') {
      const auto body = trim(std::string_view(line).substr(1));
      if (body.starts_with("doc_id")) {
        const auto eq = body.find('=');
        if (eq != std::string_view::npos) pending_doc = std::string(trim(body.substr(eq + 1)));
      }
      continue;
    }
    const auto cols = split_char(line, '\t');
    if (cols.size() != 10) {
      throw ParseError(where, lineno, "expected 10 tab-separated columns, got " + std::to_string(cols.size()));
    }
    if (cols[0].find('-') != std::string_view::npos || cols[0].find('.') != std::string_view::npos) continue;
    const auto id = detail::parse_index(cols[0]);
    if (!id || *id != cur.tokens.size() + 1) throw ParseError(where, lineno, "bad or out-of-order ID");
    const auto head = detail::parse_index(cols[6]);
    if (!head) throw ParseError(where, lineno, "bad HEAD '" + std::string(cols[6]) + "'");
    cur.tokens.emplace_back(cols[1]);
    cur.pos.push_back(detail::pos_from_upos(cols[3], cols[2]));
    heads.emplace_back(*head, std::string(cols[7]));
    head_lines.push_back(lineno);
  }
  flush();
  return out;
}

inline std::vector<ParsedSentence> read_conllu(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open CoNLL-U file: " + path);
  return parse_conllu(in, path);
}

// Writes the columns read_conllu consumes. Each token takes the first arc in
// which it is the dependent; tokens without one hang off the root.
inline void write_conllu(std::ostream& out, const std::vector<ParsedSentence>& sentences) {
  for (const auto& s : sentences) {
    if (!s.doc_id.empty()) out << "# doc_id = " << s.doc_id << '\n';
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
      const DepArc* arc = nullptr;
      for (const auto& a : s.arcs) {
        if (a.dependent == i) {
          arc = &a;
          break;
        }
      }
      std::string_view upos = "X";
      std::string_view lemma = "_";
      switch (s.pos[i]) {
        case PosTag::Adj: upos = "ADJ"; break;
        case PosTag::Adv: upos = "ADV"; break;
        case PosTag::Noun: upos = "NOUN"; break;
        case PosTag::Verb: upos = "VERB"; break;
        case PosTag::Neg: upos = "PART"; lemma = "not"; break;
        case PosTag::Other: break;
      }
      std::string_view deprel = "root";
      if (arc) deprel = arc->relation == Relation::Other ? "dep" : to_string(arc->relation);
      out << (i + 1) << '\t' << s.tokens[i] << '\t' << lemma << '\t' << upos << "\t_\t_\t"
          << (arc ? arc->head + 1 : 0) << '\t' << deprel << "\t_\t_\n";
    }
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Heuristic tagging and parsing

inline const std::unordered_set<std::string>& copular_verbs() {
  static const std::unordered_set<std::string> kSet{"is", "are", "was", "were", "be", "been", "seems", "looks"};
  return kSet;
}

// Closed-class lists plus a configurable word -> tag dictionary, then suffix
// rules; anything left over is a NOUN.
class PosTagger {
 public:
  PosTagger() {
    for (const char* w : {"not", "no", "never", "n't", "without", "hardly"}) dict_[w] = PosTag::Neg;
    for (const char* w : {"very", "really", "extremely", "quite", "too", "so", "highly", "fairly",
                          "pretty", "always", "often", "sometimes", "rather", "somewhat", "overall"}) {
      dict_[w] = PosTag::Adv;
    }
    for (const auto& w : copular_verbs()) dict_[w] = PosTag::Verb;
    for (const char* w : {"has", "have", "had", "do", "does", "did", "get", "gets", "got", "make",
                          "makes", "work", "works", "worked", "joined", "would", "will", "can",
                          "could", "should", "share", "drive", "drives", "take", "takes"}) {
      dict_[w] = PosTag::Verb;
    }
    for (const char* w : {"the", "a", "an", "this", "that", "these", "those", "my", "our", "their",
                          "its", "his", "her", "your", "i", "we", "they", "it", "you", "he", "she",
                          "and", "or", "but", "of", "in", "on", "at", "to", "for", "with", "by",
                          "from", "as", "about", "there", "here", "all", "some", "any", "more",
                          "two", "ago", "since", "later", "than", "if", "when", "while", ".", ",",
                          "!", "?", ";", ":", "(", ")", "\""}) {
      dict_[w] = PosTag::Other;
    }
    for (const char* w : {
             "great", "good", "bad", "poor", "nice", "excellent", "terrible", "awful", "amazing",
             "fantastic", "wonderful", "horrible", "lousy", "toxic", "dysfunctional", "unfair",
             "mediocre", "weak", "abysmal", "solid", "outstanding", "friendly", "helpful",
             "supportive", "generous", "competitive", "flexible", "strong", "fine", "ok", "okay",
             "best", "worst", "better", "worse", "high", "low", "long", "short", "new", "old",
             "big", "small", "large", "stable", "secure", "smart", "talented", "stodgy", "quirky",
             "peculiar", "unusual", "ordinary", "honest", "fair", "strict", "rigid", "decent",
             "conservative", "stressful", "interesting", "boring", "incredible", "tough", "hard",
             "easy", "slow", "fast", "inclusive", "healthy", "full", "free", "paid", "limited",
             "vast", "remote", "open", "diverse", "unique", "steady", "transparent", "cryptic",
             "bias", "biased"}) {
      dict_[w] = PosTag::Adj;
    }
  }

  // Later calls win, so callers can pin catalog terms as NOUN.
  void set(std::string_view word, PosTag tag) { dict_[to_lower(word)] = tag; }

  PosTag tag(std::string_view token) const {
    const auto w = to_lower(token);
    if (const auto it = dict_.find(w); it != dict_.end()) return it->second;
    if (w.size() > 3 && w.ends_with("n't")) return PosTag::Neg;
    if (w.empty() || !std::isalpha(static_cast<unsigned char>(w[0]))) return PosTag::Other;
    auto ends = [&](std::string_view suf) { return w.size() > suf.size() + 2 && w.ends_with(suf); };
    if (ends("ly")) return PosTag::Adv;
    for (std::string_view suf : {"ous", "ful", "ive", "able", "ible", "less", "ish", "ical", "ic"}) {
      if (ends(suf)) return PosTag::Adj;
    }
    for (std::string_view suf : {"ing", "ed"}) {
      if (ends(suf)) return PosTag::Verb;
    }
    return PosTag::Noun;
  }

  std::vector<PosTag> tag(const TokenList& tokens) const {
    std::vector<PosTag> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) out.push_back(tag(t));
    return out;
  }

 private:
  std::unordered_map<std::string, PosTag> dict_;
};

// ADJ NOUN -> Amod(noun <- adj); ADV ADJ -> Advmod(adj <- adv);
// NOUN ... copula ... NOUN -> Nsubj(second noun <- first noun), using the
// nearest noun on each side of the copula.
inline ParsedSentence heuristic_parse(const TokenList& tokens, const std::vector<PosTag>& pos) {
  if (pos.size() != tokens.size()) throw ShapeError("heuristic_parse: pos/token length mismatch");
  ParsedSentence s{tokens, pos, {}, {}};
  const auto n = tokens.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (pos[i] == PosTag::Adj && pos[i + 1] == PosTag::Noun) s.arcs.push_back({Relation::Amod, i + 1, i});
    if (pos[i] == PosTag::Adv && pos[i + 1] == PosTag::Adj) s.arcs.push_back({Relation::Advmod, i + 1, i});
  }
  for (std::size_t c = 0; c < n; ++c) {
    if (pos[c] != PosTag::Verb || !copular_verbs().contains(to_lower(tokens[c]))) continue;
    std::optional<std::size_t> subj, pred;
    for (std::size_t i = c; i-- > 0;) {
      if (pos[i] == PosTag::Noun) {
        subj = i;
        break;
      }
    }
    for (std::size_t i = c + 1; i < n; ++i) {
      if (pos[i] == PosTag::Noun) {
        pred = i;
        break;
      }
    }
    if (subj && pred) s.arcs.push_back({Relation::Nsubj, *pred, *subj});
  }
  std::sort(s.arcs.begin(), s.arcs.end(), [](const DepArc& a, const DepArc& b) {
    return std::tie(a.dependent, a.head) < std::tie(b.dependent, b.head);
  });
  s.arcs.erase(std::unique(s.arcs.begin(), s.arcs.end()), s.arcs.end());
  return s;
}

inline ParsedSentence heuristic_parse(const TokenList& tokens, const PosTagger& tagger) {
  return heuristic_parse(tokens, tagger.tag(tokens));
}

// Tokens linked to `aspect_index` by an Amod/Advmod/Nsubj arc in either
// direction, in token order, without duplicates.
inline std::vector<std::size_t> modifiers_of(const ParsedSentence& s, std::size_t aspect_index) {
  if (aspect_index >= s.tokens.size()) throw std::out_of_range("modifiers_of: aspect index out of range");
  std::vector<std::size_t> out;
  for (const auto& a : s.arcs) {
    if (a.relation == Relation::Other) continue;
    if (a.head == aspect_index) out.push_back(a.dependent);
    if (a.dependent == aspect_index) out.push_back(a.head);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace aspemb
