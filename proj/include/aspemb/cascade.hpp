#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "aspemb/aspects.hpp"
#include "aspemb/docvec.hpp"
#include "aspemb/elm.hpp"
#include "aspemb/lexicon.hpp"
#include "aspemb/rng.hpp"
#include "aspemb/syntax.hpp"

namespace aspemb {

enum class Tier { ModifierLookup = 0, ContextPattern = 1, ElmLookup = 2, ElmSemiRandom = 3 };

inline std::string_view to_string(Tier t) {
  switch (t) {
    case Tier::ModifierLookup: return "modifier_lookup";
    case Tier::ContextPattern: return "context_pattern";
    case Tier::ElmLookup: return "elm_lookup";
    case Tier::ElmSemiRandom: return "elm_semi_random";
  }
  return "modifier_lookup";
}

inline std::optional<Tier> parse_tier(std::string_view s) {
  for (auto t : {Tier::ModifierLookup, Tier::ContextPattern, Tier::ElmLookup, Tier::ElmSemiRandom}) {
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

struct AspectScore {
  AspectMention mention;
  double score = 0.0;
  Tier tier = Tier::ModifierLookup;

  friend bool operator==(const AspectScore&, const AspectScore&) = default;
};

inline const std::vector<std::string>& default_negations() {
  static const std::vector<std::string> kSet{"not", "no", "never", "n't", "without", "hardly", "lack", "lacking"};
  return kSet;
}

// Everything the cascade reads. Models are borrowed, not owned. When
// `elm_output` is set it replaces classify(elm, infer(docvec, review)).
struct CascadeContext {
  const Lexicon* lexicon = nullptr;
  const ElmModel* elm = nullptr;
  const DocvecModel* docvec = nullptr;
  std::vector<std::string> negation_terms = default_negations();
  std::size_t window = 5;
  std::uint64_t seed = 0;
  std::size_t infer_steps = 20;
  DocvecConfig infer_schedule{};
  std::function<int(const ReviewDoc&)> elm_output;
};

inline bool is_negation(std::string_view token, const std::vector<std::string>& negations) {
  const auto w = to_lower(token);
  for (const auto& n : negations) {
    if (w == n) return true;
    if (n == "n't" && w.size() > 3 && w.ends_with("n't")) return true;
  }
  return false;
}

namespace detail {

inline void check_mention(const std::vector<ParsedSentence>& sentences, const AspectMention& m) {
  if (m.sentence_index >= sentences.size() || m.token_count == 0 ||
      m.head_index() >= sentences[m.sentence_index].tokens.size()) {
    throw std::out_of_range("aspect mention '" + m.aspect_name + "' indices out of range in " + m.doc_id);
  }
}

inline double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

}  // namespace detail

// Tier 1: mean lexicon polarity of the Amod/Advmod/Nsubj neighbours of any
// token of the mention.
inline std::optional<double> score_by_modifiers(const ParsedSentence& sentence, const AspectMention& mention,
                                                const Lexicon& lexicon) {
  if (mention.head_index() >= sentence.tokens.size()) throw std::out_of_range("score_by_modifiers: bad mention");
  std::vector<std::size_t> triggers;
  for (std::size_t i = mention.token_index; i <= mention.head_index(); ++i) {
    for (auto t : modifiers_of(sentence, i)) {
      if (t < mention.token_index || t > mention.head_index()) triggers.push_back(t);
    }
  }
  std::sort(triggers.begin(), triggers.end());
  triggers.erase(std::unique(triggers.begin(), triggers.end()), triggers.end());
  double sum = 0.0;
  std::size_t found = 0;
  for (auto t : triggers) {
    if (const auto p = lexicon.lookup(sentence.tokens[t])) {
      sum += *p;
      ++found;
    }
  }
  if (!found) return std::nullopt;
  return sum / static_cast<double>(found);
}

// Tier 2: window of `window` tokens centred on the mention head (left gets
// (window-1)/2). Near a sentence bound the span slides inward so it still
// holds `window` tokens; only sentences shorter than that truncate it. Mean polarity of the polar
// non-aspect, non-negation tokens, sign-flipped once if any negation term
// occurs in the window.
inline std::optional<double> score_by_context(const TokenList& tokens, const AspectMention& mention,
                                              const Lexicon& lexicon, const std::vector<std::string>& negations,
                                              std::size_t window) {
  if (window < 1) throw std::invalid_argument("score_by_context: window must be >= 1");
  const auto head = mention.head_index();
  if (head >= tokens.size()) throw std::out_of_range("score_by_context: bad mention");
  const std::size_t left = (window - 1) / 2;
  const std::size_t start = head >= left ? head - left : 0;
  const std::size_t hi = std::min(tokens.size() - 1, start + window - 1);
  const std::size_t lo = hi + 1 >= window ? hi + 1 - window : 0;
  bool negated = false;
  double sum = 0.0;
  std::size_t found = 0;
  for (std::size_t i = lo; i <= hi; ++i) {
    if (i >= mention.token_index && i <= head) continue;
    if (is_negation(tokens[i], negations)) {
      negated = true;
      continue;
    }
    if (const auto p = lexicon.lookup(tokens[i])) {
      sum += *p;
      ++found;
    }
  }
  if (!found) return std::nullopt;
  const double mean = sum / static_cast<double>(found);
  return negated ? -mean : mean;
}

// e_out for a review: classify(elm, infer(docvec, review)). Inference is
// seeded by derive_seed(ctx.seed, "infer:" + review id).
inline int review_elm_output(const ReviewDoc& review, const CascadeContext& ctx) {
  if (ctx.elm_output) return ctx.elm_output(review);
  if (!ctx.elm || !ctx.docvec) throw StateError("cascade: ELM tiers need both an ELM and a docvec model");
  const auto v = infer(*ctx.docvec, review, ctx.infer_steps, derive_seed(ctx.seed, "infer:" + review.id),
                       ctx.infer_schedule);
  return ctx.elm->classify(v);
}

// Tier 3: e_out * lookup(w) + (1 - e_out) * (-lookup(w)).
inline std::optional<double> score_by_elm_lookup(std::string_view aspect_word, int e_out, const Lexicon& lexicon) {
  if (e_out != 0 && e_out != 1) throw std::invalid_argument("score_by_elm_lookup: e_out must be 0 or 1");
  const auto p = lexicon.lookup(aspect_word);
  if (!p) return std::nullopt;
  const double e = e_out;
  return e * *p + (1.0 - e) * (-1.0 * *p);
}

// Tier 4: rand(0, 1) when e_out = 1, rand(-1, 0) when e_out = 0, both open.
inline double score_semi_random(int e_out, Rng& rng) {
  if (e_out != 0 && e_out != 1) throw std::invalid_argument("score_semi_random: e_out must be 0 or 1");
  const double u = rng.uniform_open();
  return e_out == 1 ? u : -u;
}

// Runs the four tiers per mention; first tier with a value wins. `sentences`
// are the parses of review.tokens, index-aligned. The semi-random draw for
// mention k uses Rng(derive_seed(ctx.seed, review.id, k)).
inline std::vector<AspectScore> assign(const ReviewDoc& review, const std::vector<ParsedSentence>& sentences,
                                       const std::vector<AspectMention>& mentions, const CascadeContext& ctx) {
  if (!ctx.lexicon) throw StateError("cascade: no lexicon");
  const Lexicon& lex = *ctx.lexicon;
  std::optional<int> e_out;
  auto elm_out = [&]() {
    if (!e_out) e_out = review_elm_output(review, ctx);
    return *e_out;
  };
  std::vector<AspectScore> out;
  out.reserve(mentions.size());
  for (std::size_t k = 0; k < mentions.size(); ++k) {
    const auto& m = mentions[k];
    detail::check_mention(sentences, m);
    const auto& sent = sentences[m.sentence_index];
    AspectScore s{m, 0.0, Tier::ModifierLookup};
    if (const auto v = score_by_modifiers(sent, m, lex)) {
      s.score = *v;
    } else if (const auto c = score_by_context(sent.tokens, m, lex, ctx.negation_terms, ctx.window)) {
      s.score = *c;
      s.tier = Tier::ContextPattern;
    } else if (const auto l = score_by_elm_lookup(sent.tokens[m.head_index()], elm_out(), lex)) {
      s.score = *l;
      s.tier = Tier::ElmLookup;
    } else {
      Rng rng(derive_seed(ctx.seed, review.id, k));
      s.score = score_semi_random(elm_out(), rng);
      s.tier = Tier::ElmSemiRandom;
    }
    s.score = detail::clamp_unit(s.score);
    out.push_back(std::move(s));
  }
  return out;
}

struct TierCounts {
  std::array<std::size_t, 4> counts{};

  void add(const std::vector<AspectScore>& scores) {
    for (const auto& s : scores) ++counts[static_cast<std::size_t>(s.tier)];
  }
  std::size_t total() const {
    std::size_t t = 0;
    for (auto c : counts) t += c;
    return t;
  }
  std::size_t operator[](Tier t) const { return counts[static_cast<std::size_t>(t)]; }
  double rate(Tier t) const { return total() ? static_cast<double>((*this)[t]) / static_cast<double>(total()) : 0.0; }
  double semi_random_rate() const { return rate(Tier::ElmSemiRandom); }
};

// Parses every sentence of a doc with the heuristic parser.
inline std::vector<ParsedSentence> parse_doc(const ReviewDoc& doc, const PosTagger& tagger) {
  std::vector<ParsedSentence> out;
  for (const auto& sent : doc.tokens) {
    auto p = heuristic_parse(sent, tagger);
    p.doc_id = doc.id;
    out.push_back(std::move(p));
  }
  return out;
}

// Tagger with every catalog term token pinned to NOUN.
inline PosTagger catalog_tagger(const AspectCatalog& catalog) {
  PosTagger t;
  for (const auto& a : catalog.aspects()) {
    for (const auto& term : a.terms) {
      for (const auto& w : split_whitespace(term)) t.set(w, PosTag::Noun);
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// Scored output: one JSON object per line with doc_id, company, aspect,
// score, tier, plus sentence/token/length/term locating the mention.

struct ScoreRecord {
  std::string company;
  AspectScore score;
};

inline void write_scores(std::ostream& out, const std::vector<ScoreRecord>& records) {
  for (const auto& r : records) {
    const auto& m = r.score.mention;
    nlohmann::ordered_json j;
    j["doc_id"] = m.doc_id;
    j["company"] = r.company;
    j["aspect"] = m.aspect_name;
    j["score"] = r.score.score;
    j["tier"] = to_string(r.score.tier);
    j["sentence"] = m.sentence_index;
    j["token"] = m.token_index;
    j["length"] = m.token_count;
    j["term"] = m.matched_term;
    out << j.dump() << '\n';
  }
}

inline std::vector<ScoreRecord> read_scores(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scores: " + path);
  std::vector<ScoreRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      ScoreRecord r;
      r.company = j.at("company").get<std::string>();
      auto& m = r.score.mention;
      m.doc_id = j.at("doc_id").get<std::string>();
      m.aspect_name = j.at("aspect").get<std::string>();
      m.sentence_index = j.value("sentence", std::size_t{0});
      m.token_index = j.value("token", std::size_t{0});
      m.token_count = j.value("length", std::size_t{1});
      m.matched_term = j.value("term", std::string{});
      r.score.score = j.at("score").get<double>();
      const auto tier = parse_tier(j.at("tier").get<std::string>());
      if (!tier) throw ParseError(path, lineno, "unknown tier");
      r.score.tier = *tier;
      out.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path, lineno, e.what());
    }
  }
  return out;
}

}  // namespace aspemb
