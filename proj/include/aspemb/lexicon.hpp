#pragma once

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "aspemb/error.hpp"
#include "aspemb/text.hpp"

namespace aspemb {

// PrimarySource wins conflicts at merge time (SentiWordNet role);
// SecondarySource fills in the rest (SenticNet role).
enum class LexiconSource { Primary, Secondary };

inline std::string_view to_string(LexiconSource s) {
  return s == LexiconSource::Primary ? "primary" : "secondary";
}

inline std::optional<LexiconSource> parse_lexicon_source(std::string_view s) {
  if (s == "primary") return LexiconSource::Primary;
  if (s == "secondary") return LexiconSource::Secondary;
  return std::nullopt;
}

struct LexiconEntry {
  std::string term;
  double polarity = 0.0;
  LexiconSource source = LexiconSource::Primary;

  friend bool operator==(const LexiconEntry&, const LexiconEntry&) = default;
};

inline constexpr double kDefaultLexiconThreshold = 0.25;

// Merged term -> polarity dictionary. Immutable once built by merge().
class Lexicon {
 public:
  Lexicon() = default;

  double threshold() const noexcept { return threshold_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const std::map<std::string, LexiconEntry>& entries() const noexcept { return entries_; }

  // Case-insensitive exact-term match.
  std::optional<double> lookup(std::string_view term) const {
    const auto it = entries_.find(to_lower(term));
    if (it == entries_.end()) return std::nullopt;
    return it->second.polarity;
  }

  const LexiconEntry* find(std::string_view term) const {
    const auto it = entries_.find(to_lower(term));
    return it == entries_.end() ? nullptr : &it->second;
  }

  bool contains(std::string_view term) const { return find(term) != nullptr; }

  std::vector<LexiconEntry> to_entries() const {
    std::vector<LexiconEntry> out;
    out.reserve(entries_.size());
    for (const auto& [_, e] : entries_) out.push_back(e);
    return out;
  }

  friend bool operator==(const Lexicon&, const Lexicon&) = default;

 private:
  friend Lexicon merge(const std::vector<LexiconEntry>&, const std::vector<LexiconEntry>&,
                       double);
  friend Lexicon read_lexicon(const std::string&);

  std::map<std::string, LexiconEntry> entries_;
  double threshold_ = kDefaultLexiconThreshold;
};

namespace detail {

inline std::string checked_term(std::string_view raw, const std::string& where,
                                std::size_t line) {
  const auto t = trim(raw);
  if (t.empty()) throw ParseError(where, line, "empty term");
  for (char c : t) {
    if (is_space(c)) throw ParseError(where, line, "term contains whitespace");
  }
  return to_lower(t);
}

inline double checked_polarity(std::string_view raw, const std::string& where,
                               std::size_t line) {
  const auto p = parse_real(raw);
  if (!p) throw ParseError(where, line, "polarity is not a finite real: '" + std::string(raw) + "'");
  if (*p < -1.0 || *p > 1.0) throw ParseError(where, line, "polarity outside [-1, 1]");
  return *p;
}

}  // namespace detail

// Parses `term<TAB>polarity` lines; `#` lines and blank lines are skipped.
inline std::vector<LexiconEntry> parse_source(std::istream& in, LexiconSource source,
                                              const std::string& where = "<stream>") {
  std::vector<LexiconEntry> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line.front() == '#') continue;
    const auto fields = split_char(line, '\t');
    if (fields.size() != 2) {
      throw ParseError(where, lineno, "expected term<TAB>polarity");
    }
    out.push_back({detail::checked_term(fields[0], where, lineno),
                   detail::checked_polarity(fields[1], where, lineno), source});
  }
  return out;
}

inline std::vector<LexiconEntry> load_source(const std::string& path, LexiconSource source) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open lexicon source: " + path);
  return parse_source(in, source, path);
}

// Drop |polarity| < threshold from both inputs, then let primary win any term
// present in both. Within one source a later row replaces an earlier one.
inline Lexicon merge(const std::vector<LexiconEntry>& primary,
                     const std::vector<LexiconEntry>& secondary,
                     double threshold = kDefaultLexiconThreshold) {
  if (!(threshold >= 0.0)) throw std::invalid_argument("lexicon threshold must be >= 0");
  Lexicon lex;
  lex.threshold_ = threshold;
  auto keep = [threshold](const LexiconEntry& e) { return !(std::fabs(e.polarity) < threshold); };
  for (const auto& e : secondary) {
    if (keep(e)) lex.entries_[e.term] = e;
  }
  std::map<std::string, LexiconEntry> from_primary;
  for (const auto& e : primary) {
    if (keep(e)) from_primary[e.term] = e;
  }
  for (auto& [term, e] : from_primary) lex.entries_[term] = std::move(e);
  return lex;
}

// Export: `term<TAB>polarity<TAB>source`, sorted by term, preceded by a
// `# threshold` comment so the file reloads to an equal Lexicon.
inline void write_lexicon(std::ostream& out, const Lexicon& lex) {
  out << "# threshold\t" << format_real(lex.threshold()) << '\n';
  for (const auto& [term, e] : lex.entries()) {
    out << term << '\t' << format_real(e.polarity) << '\t' << to_string(e.source) << '\n';
  }
}

inline Lexicon read_lexicon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open lexicon: " + path);
  Lexicon lex;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    if (line.front() == '#') {
      const auto fields = split_char(line, '\t');
      if (fields.size() == 2 && trim(fields[0]) == "# threshold") {
        const auto t = parse_real(fields[1]);
        if (!t || *t < 0.0) throw ParseError(path, lineno, "bad threshold");
        lex.threshold_ = *t;
      }
      continue;
    }
    const auto fields = split_char(line, '\t');
    if (fields.size() != 3) throw ParseError(path, lineno, "expected term<TAB>polarity<TAB>source");
    const auto source = parse_lexicon_source(trim(fields[2]));
    if (!source) throw ParseError(path, lineno, "unknown source '" + std::string(fields[2]) + "'");
    LexiconEntry e{detail::checked_term(fields[0], path, lineno),
                   detail::checked_polarity(fields[1], path, lineno), *source};
    lex.entries_[e.term] = std::move(e);
  }
  return lex;
}

}  // namespace aspemb
