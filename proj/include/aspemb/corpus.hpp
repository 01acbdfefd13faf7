#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "json.hpp"

#include "aspemb/error.hpp"
#include "aspemb/rng.hpp"
#include "aspemb/text.hpp"

namespace aspemb {

using TokenList = std::vector<std::string>;
using SentenceList = std::vector<TokenList>;

struct RawReview {
  std::string id;
  std::string company;
  std::string sector;
  std::string pros;
  std::string cons;
  std::string body;

  friend bool operator==(const RawReview&, const RawReview&) = default;
};

// One labeled sub-review. label is 1 for pros, 0 for cons, absent otherwise.
struct ReviewDoc {
  std::string id;
  std::string company;
  std::string sector;
  std::string text;
  SentenceList tokens;
  std::optional<int> label;

  friend bool operator==(const ReviewDoc&, const ReviewDoc&) = default;
};

inline const std::vector<std::string>& default_emoticons() {
  static const std::vector<std::string> kSet{":)", ":(", ":D", ":-)", ":-(", ";)", ":/", "<3"};
  return kSet;
}

// ---------------------------------------------------------------------------
// Ingestion

// One JSON object per line: id, company, sector required; pros, cons, body
// optional (default empty). Unknown keys are ignored. Blank lines skipped.
inline std::vector<RawReview> parse_reviews(std::istream& in, const std::string& where = "<stream>") {
  std::vector<RawReview> out;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(where, lineno, std::string("invalid JSON: ") + e.what());
    }
    if (!rec.is_object()) throw ParseError(where, lineno, "record is not an object");

    auto id_it = rec.find("id");
    const std::string id_label =
        (id_it != rec.end() && id_it->is_string()) ? id_it->get<std::string>() : "?";
    auto fail = [&](const std::string& msg) {
      throw SchemaError(where + ":" + std::to_string(lineno) + ": record '" + id_label + "': " + msg);
    };
    auto required = [&](const char* key) -> std::string {
      auto it = rec.find(key);
      if (it == rec.end()) fail(std::string("missing field '") + key + "'");
      if (!it->is_string()) fail(std::string("field '") + key + "' is not a string");
      return it->get<std::string>();
    };
    auto optional = [&](const char* key) -> std::string {
      auto it = rec.find(key);
      if (it == rec.end() || it->is_null()) return {};
      if (!it->is_string()) fail(std::string("field '") + key + "' is not a string");
      return it->get<std::string>();
    };

    RawReview r;
    r.id = required("id");
    r.company = required("company");
    r.sector = required("sector");
    r.pros = optional("pros");
    r.cons = optional("cons");
    r.body = optional("body");
    if (r.id.empty()) fail("empty id");
    if (trim(r.company).empty()) fail("empty company");
    if (!seen.insert(r.id).second) fail("duplicate id");
    out.push_back(std::move(r));
  }
  return out;
}

inline std::vector<RawReview> ingest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open reviews: " + path);
  return parse_reviews(in, path);
}

inline void write_reviews(std::ostream& out, const std::vector<RawReview>& reviews) {
  for (const auto& r : reviews) {
    nlohmann::ordered_json j;
    j["id"] = r.id;
    j["company"] = r.company;
    j["sector"] = r.sector;
    j["pros"] = r.pros;
    j["cons"] = r.cons;
    j["body"] = r.body;
    out << j.dump() << '\n';
  }
}

// ---------------------------------------------------------------------------
// Text cleanup

namespace detail {

inline bool is_scheme_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.';
}

inline bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
         static_cast<unsigned char>(c) >= 0x80;
}

// Removes the URL tail of one whitespace-free token, keeping any prefix.
inline std::string strip_url(std::string_view tok) {
  const auto sep = tok.find("://");
  if (sep != std::string_view::npos) {
    std::size_t start = sep;
    while (start > 0 && is_scheme_char(tok[start - 1])) --start;
    // Scheme must begin with a letter.
    while (start < sep && !std::isalpha(static_cast<unsigned char>(tok[start]))) ++start;
    return std::string(tok.substr(0, start));
  }
  for (std::size_t pos = to_lower(tok).find("www."); pos != std::string_view::npos;
       pos = to_lower(tok).find("www.", pos + 1)) {
    if (pos == 0 || !std::isalnum(static_cast<unsigned char>(tok[pos - 1]))) {
      return std::string(tok.substr(0, pos));
    }
  }
  return std::string(tok);
}

inline bool is_hashtag(std::string_view tok) {
  return tok.size() >= 2 && tok[0] == '#' && is_word_char(tok[1]);
}

}  // namespace detail

// Drops URLs (scheme://..., www....) and hashtags (#word), keeps emoticons,
// collapses whitespace. Works per whitespace-delimited token.
inline std::string preprocess(std::string_view text,
                              const std::vector<std::string>& emoticons = default_emoticons()) {
  std::vector<std::string> kept;
  for (auto& tok : split_whitespace(text)) {
    if (std::find(emoticons.begin(), emoticons.end(), tok) != emoticons.end()) {
      kept.push_back(std::move(tok));
      continue;
    }
    std::string cleaned = detail::strip_url(tok);
    if (cleaned.empty() || detail::is_hashtag(cleaned)) continue;
    kept.push_back(std::move(cleaned));
  }
  return join(kept, " ");
}

// Sentences end at a token group whose trailing punctuation holds . ! or ?.
// Trailing .,!?;:)" and leading (" are detached one character per token.
// Emoticons are atomic, including when glued to the end of a word.
inline SentenceList tokenize(std::string_view text,
                             const std::vector<std::string>& emoticons = default_emoticons()) {
  static constexpr std::string_view kTrailing = ".,!?;:)\"";
  static constexpr std::string_view kLeading = "(\"";
  SentenceList sentences;
  TokenList current;
  auto is_emoticon = [&](std::string_view t) {
    return std::find(emoticons.begin(), emoticons.end(), t) != emoticons.end();
  };

  for (const auto& raw : split_whitespace(text)) {
    if (is_emoticon(raw)) {
      current.push_back(raw);
      continue;
    }
    std::string_view core = raw;
    std::string glued;
    for (const auto& e : emoticons) {
      if (core.size() > e.size() && core.substr(core.size() - e.size()) == e) {
        glued = e;
        core.remove_suffix(e.size());
        break;
      }
    }
    std::size_t lead = 0;
    while (lead + 1 < core.size() && kLeading.find(core[lead]) != std::string_view::npos) ++lead;
    std::size_t end = core.size();
    while (end > lead && kTrailing.find(core[end - 1]) != std::string_view::npos) --end;
    for (std::size_t i = 0; i < lead; ++i) current.emplace_back(1, core[i]);
    if (end > lead) current.emplace_back(core.substr(lead, end - lead));
    bool terminal = false;
    for (std::size_t i = end; i < core.size(); ++i) {
      current.emplace_back(1, core[i]);
      if (core[i] == '.' || core[i] == '!' || core[i] == '?') terminal = true;
    }
    if (!glued.empty()) current.push_back(glued);
    if (terminal) {
      sentences.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) sentences.push_back(std::move(current));
  return sentences;
}

// ---------------------------------------------------------------------------
// Sub-reviews

// Pros become a doc labeled 1 (`<id>-pos`), cons a doc labeled 0 (`<id>-neg`).
// The body is never labeled and never emitted here. Text is preprocessed and
// tokenized.
inline std::vector<ReviewDoc> split_pros_cons(
    const RawReview& raw, const std::vector<std::string>& emoticons = default_emoticons()) {
  std::vector<ReviewDoc> out;
  auto emit = [&](const std::string& side, const char* suffix, int label) {
    if (trim(side).empty()) return;
    ReviewDoc d;
    d.id = raw.id + suffix;
    d.company = raw.company;
    d.sector = raw.sector;
    d.text = preprocess(side, emoticons);
    d.tokens = tokenize(d.text, emoticons);
    d.label = label;
    out.push_back(std::move(d));
  };
  emit(raw.pros, "-pos", 1);
  emit(raw.cons, "-neg", 0);
  return out;
}

// Fisher-Yates over MT19937-64 (Rng::below for unbiased indices), iterating
// i = n-1 .. 1 and swapping i with below(i + 1).
template <typename T>
std::vector<T> shuffle(std::vector<T> items, std::uint64_t seed) {
  Rng rng(seed);
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(items[i - 1], items[j]);
  }
  return items;
}

inline nlohmann::ordered_json to_json(const ReviewDoc& d) {
  nlohmann::ordered_json j;
  j["id"] = d.id;
  j["company"] = d.company;
  j["sector"] = d.sector;
  j["text"] = d.text;
  j["tokens"] = d.tokens;
  if (d.label) {
    j["label"] = *d.label;
  } else {
    j["label"] = nullptr;
  }
  return j;
}

inline void write_docs(std::ostream& out, const std::vector<ReviewDoc>& docs) {
  for (const auto& d : docs) out << to_json(d).dump() << '\n';
}

inline std::vector<ReviewDoc> read_docs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open docs: " + path);
  std::vector<ReviewDoc> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      ReviewDoc d;
      d.id = j.at("id").get<std::string>();
      d.company = j.at("company").get<std::string>();
      d.sector = j.at("sector").get<std::string>();
      d.text = j.at("text").get<std::string>();
      d.tokens = j.at("tokens").get<SentenceList>();
      if (j.contains("label") && !j["label"].is_null()) d.label = j["label"].get<int>();
      out.push_back(std::move(d));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path, lineno, e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Synthetic corpora
//
// Each company owns a profile q in (0.05, 0.95) per aspect term. A pros
// sentence picks aspect term a with weight q[a] and a positive trigger; a cons
// sentence picks a with weight 1 - q[a] and a negative trigger. Companies
// listed in `twins` share one profile, so their aspect-sentiment vectors agree
// in expectation.

struct SynthConfig {
  std::vector<std::string> aspect_terms{
      "job",        "employees",  "hours",       "management", "culture",     "location",
      "work-life",  "salary",     "benefits",    "opportunities", "experience", "staff",
      "training",   "growth",     "leadership",  "politics",   "business",    "career",
      "vacation",   "supervisors", "flexibility", "performance", "respect",   "projects",
      "market",     "technology", "issues",      "knowledge",  "communication", "stress"};
  std::vector<std::string> positive_triggers{
      "great", "excellent", "good", "amazing", "fantastic", "wonderful",
      "supportive", "generous", "friendly", "helpful", "solid", "outstanding"};
  std::vector<std::string> negative_triggers{
      "poor", "terrible", "bad", "awful", "horrible", "lousy",
      "toxic", "dysfunctional", "unfair", "mediocre", "weak", "abysmal"};
  // Adjectives deliberately absent from the synthetic lexicons.
  std::vector<std::string> unknown_triggers{"stodgy", "quirky", "peculiar", "unusual", "ordinary"};
  std::vector<std::string> fillers{
      "I joined two years ago.", "This is my honest opinion.", "Worked there as an analyst.",
      "It is a large organization.", "Would share more later.", "Been there since graduation."};
  std::vector<std::string> sectors{"tech", "finance"};
  std::size_t aspect_sentences = 2;   // per side
  double unknown_trigger_rate = 0.05; // sentence uses an unknown trigger
  // Sentence uses "{A} not {opposite trigger} at all." Such sentences put the
  // opposite class's vocabulary into a doc, so a high rate caps what any
  // bag-of-words classifier can reach.
  double negated_rate = 0.05;
  double filler_rate = 0.5;           // side gets one filler sentence
  std::vector<std::pair<std::size_t, std::size_t>> twins;
};

struct SynthCorpus {
  std::vector<RawReview> reviews;
  // Exact number of times each aspect term was planted across pros and cons.
  std::map<std::string, std::size_t> planted_terms;
  // Per company index: profile weight per aspect term.
  std::vector<std::vector<double>> profiles;
};

namespace detail {

inline std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

inline std::size_t weighted_pick(Rng& rng, const std::vector<double>& w) {
  double total = 0.0;
  for (double x : w) total += x;
  double r = rng.uniform01() * total;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (r < w[i]) return i;
    r -= w[i];
  }
  return w.size() - 1;
}

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[static_cast<std::size_t>(rng.below(v.size()))];
}

}  // namespace detail

inline SynthCorpus synth_corpus_with_truth(std::size_t n_companies, std::size_t reviews_per_company,
                                           const SynthConfig& cfg, std::uint64_t seed) {
  if (n_companies < 1 || reviews_per_company < 1) {
    throw std::invalid_argument("synth_corpus: need at least one company and one review");
  }
  if (cfg.aspect_terms.empty() || cfg.positive_triggers.empty() ||
      cfg.negative_triggers.empty() || cfg.sectors.empty()) {
    throw std::invalid_argument("synth_corpus: empty vocabulary pool");
  }
  SynthCorpus out;
  std::vector<std::size_t> profile_owner(n_companies);
  for (std::size_t c = 0; c < n_companies; ++c) profile_owner[c] = c;
  for (const auto& [a, b] : cfg.twins) {
    if (a < n_companies && b < n_companies) profile_owner[std::max(a, b)] = std::min(a, b);
  }
  out.profiles.resize(n_companies);
  for (std::size_t c = 0; c < n_companies; ++c) {
    Rng prng(derive_seed(seed, "synth-profile", profile_owner[c]));
    auto& q = out.profiles[c];
    q.resize(cfg.aspect_terms.size());
    for (auto& x : q) x = prng.uniform(0.05, 0.95);
  }

  Rng rng(derive_seed(seed, "synth-text"));
  auto sentence = [&](bool positive, const std::vector<double>& weights) {
    const auto a = detail::weighted_pick(rng, weights);
    const auto& term = cfg.aspect_terms[a];
    ++out.planted_terms[term];
    const auto& own = positive ? cfg.positive_triggers : cfg.negative_triggers;
    const auto& opp = positive ? cfg.negative_triggers : cfg.positive_triggers;
    if (!cfg.unknown_triggers.empty() && rng.uniform01() < cfg.unknown_trigger_rate) {
      return detail::capitalize(detail::pick(rng, cfg.unknown_triggers)) + " " + term + ".";
    }
    if (rng.uniform01() < cfg.negated_rate) {
      return detail::capitalize(term) + " not " + detail::pick(rng, opp) + " at all.";
    }
    switch (rng.below(3)) {
      case 0:
        return detail::capitalize(detail::pick(rng, own)) + " " + term + ".";
      case 1:
        return "Very " + detail::pick(rng, own) + " " + term + ".";
      default:
        return "The " + term + " is " + detail::pick(rng, own) + ".";
    }
  };

  for (std::size_t c = 0; c < n_companies; ++c) {
    char name[32];
    std::snprintf(name, sizeof name, "Company-%02zu", c + 1);
    const auto& q = out.profiles[c];
    std::vector<double> inv(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) inv[i] = 1.0 - q[i];
    for (std::size_t r = 0; r < reviews_per_company; ++r) {
      RawReview rev;
      char id[48];
      std::snprintf(id, sizeof id, "c%02zu-r%04zu", c + 1, r + 1);
      rev.id = id;
      rev.company = name;
      rev.sector = cfg.sectors[c % cfg.sectors.size()];
      auto side = [&](bool positive) {
        std::vector<std::string> parts;
        for (std::size_t s = 0; s < cfg.aspect_sentences; ++s) {
          parts.push_back(sentence(positive, positive ? q : inv));
        }
        if (!cfg.fillers.empty() && rng.uniform01() < cfg.filler_rate) {
          parts.insert(parts.begin() + static_cast<std::ptrdiff_t>(rng.below(parts.size() + 1)),
                       detail::pick(rng, cfg.fillers));
        }
        return join(parts, " ");
      };
      rev.pros = side(true);
      rev.cons = side(false);
      rev.body = cfg.fillers.empty() ? std::string() : detail::pick(rng, cfg.fillers);
      out.reviews.push_back(std::move(rev));
    }
  }
  return out;
}

inline std::vector<RawReview> synth_corpus(std::size_t n_companies, std::size_t reviews_per_company,
                                           const SynthConfig& cfg, std::uint64_t seed) {
  return synth_corpus_with_truth(n_companies, reviews_per_company, cfg, seed).reviews;
}

// Primary/secondary source lexicons matching a SynthConfig: triggers are
// strongly polar in the primary source, aspect terms carry mild concept
// polarity in the secondary source, and a few conflicting or sub-threshold
// rows exercise merge(). Unknown triggers never appear.
struct SynthLexicons {
  std::vector<std::pair<std::string, double>> primary;
  std::vector<std::pair<std::string, double>> secondary;
};

inline SynthLexicons synth_lexicons(const SynthConfig& cfg, std::uint64_t seed) {
  Rng rng(derive_seed(seed, "synth-lexicon"));
  SynthLexicons out;
  for (const auto& t : cfg.positive_triggers) out.primary.emplace_back(t, rng.uniform(0.5, 0.9));
  for (const auto& t : cfg.negative_triggers) out.primary.emplace_back(t, -rng.uniform(0.5, 0.9));
  for (const auto& t : {"two", "large", "honest", "more"}) {
    out.primary.emplace_back(t, rng.uniform(-0.2, 0.2));
  }
  for (const auto& t : cfg.aspect_terms) {
    const double mag = rng.uniform(0.3, 0.5);
    out.secondary.emplace_back(t, rng.below(4) == 0 ? -mag : mag);
  }
  for (std::size_t i = 0; i < cfg.positive_triggers.size(); i += 3) {
    out.secondary.emplace_back(cfg.positive_triggers[i], rng.uniform(-0.9, 0.9));
  }
  return out;
}

}  // namespace aspemb
