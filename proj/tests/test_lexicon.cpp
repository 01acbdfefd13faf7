#include <sstream>

#include <gtest/gtest.h>

#include "aspemb/lexicon.hpp"
#include "aspemb/rng.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace aspemb;

namespace {

std::vector<LexiconEntry> parse(const std::string& text, LexiconSource s = LexiconSource::Primary) {
  std::istringstream in(text);
  return parse_source(in, s);
}

LexiconEntry entry(std::string t, double p, LexiconSource s) { return {std::move(t), p, s}; }

}  // namespace

TEST(LexiconLoad, ParsesTermAndPolarity) {
  const auto e = parse("good\t0.7\n");
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(e[0], entry("good", 0.7, LexiconSource::Primary));
}

TEST(LexiconLoad, LowercasesTerms) {
  const auto e = parse("BAD\t-0.8\n", LexiconSource::Secondary);
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(e[0].term, "bad");
  EXPECT_DOUBLE_EQ(e[0].polarity, -0.8);
  EXPECT_EQ(e[0].source, LexiconSource::Secondary);
}

TEST(LexiconLoad, BadPolarityNamesLine) {
  try {
    parse("oops\tNaNish\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
}

TEST(LexiconLoad, SkipsCommentsAndBlankLines) {
  const auto e = parse("# header\n\ngreat\t0.8\n# more\nawful\t-0.9\n");
  ASSERT_EQ(e.size(), 2u);
  EXPECT_EQ(e[1].term, "awful");
}

TEST(LexiconLoad, RejectsMalformedRows) {
  EXPECT_THROW(parse("great 0.8\n"), ParseError);
  EXPECT_THROW(parse("great\t0.8\textra\n"), ParseError);
  EXPECT_THROW(parse("great\t1.5\n"), ParseError);
  EXPECT_THROW(parse("great\tnan\n"), ParseError);
  EXPECT_THROW(parse("two words\t0.5\n"), ParseError);
  try {
    parse("ok\t0.5\nbroken\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(LexiconLoad, EmoticonIsALegalTerm) {
  const auto e = parse(":)\t0.6\n");
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(e[0].term, ":)");
}

TEST(LexiconLoad, MissingFileIsIoError) {
  EXPECT_THROW(load_source("/nonexistent/lexicon.tsv", LexiconSource::Primary), IoError);
}

TEST(LexiconMerge, PrimaryWinsConflict) {
  const auto lex = merge({entry("good", 0.7, LexiconSource::Primary)}, {entry("good", 0.9, LexiconSource::Secondary)});
  ASSERT_EQ(lex.size(), 1u);
  EXPECT_DOUBLE_EQ(*lex.lookup("good"), 0.7);
  EXPECT_EQ(lex.find("good")->source, LexiconSource::Primary);
}

TEST(LexiconMerge, DropsBelowThreshold) {
  EXPECT_TRUE(merge({entry("ok", 0.10, LexiconSource::Primary)}, {}).empty());
}

TEST(LexiconMerge, SecondaryPassthrough) {
  const auto lex = merge({}, {entry("nasty", -0.8, LexiconSource::Secondary)});
  ASSERT_TRUE(lex.lookup("nasty"));
  EXPECT_DOUBLE_EQ(*lex.lookup("nasty"), -0.8);
  EXPECT_EQ(lex.find("nasty")->source, LexiconSource::Secondary);
}

TEST(LexiconMerge, ThresholdBoundaryIsKept) {
  const auto lex = merge({entry("edge", 0.25, LexiconSource::Primary), entry("neg", -0.25, LexiconSource::Primary),
                          entry("under", 0.2499999, LexiconSource::Primary)},
                         {});
  EXPECT_TRUE(lex.contains("edge"));
  EXPECT_TRUE(lex.contains("neg"));
  EXPECT_FALSE(lex.contains("under"));
}

TEST(LexiconMerge, WeakPrimaryDoesNotMaskStrongSecondary) {
  // Filtering happens before priority: a sub-threshold primary row is gone,
  // so the secondary value survives.
  const auto lex = merge({entry("fine", 0.1, LexiconSource::Primary)}, {entry("fine", 0.5, LexiconSource::Secondary)});
  ASSERT_TRUE(lex.lookup("fine"));
  EXPECT_DOUBLE_EQ(*lex.lookup("fine"), 0.5);
}

TEST(LexiconMerge, NegativeThresholdRejected) {
  EXPECT_THROW(merge({}, {}, -0.1), std::invalid_argument);
}

TEST(LexiconMerge, EmptyInputsGiveEmptyLexicon) { EXPECT_TRUE(merge({}, {}).empty()); }

TEST(LexiconMerge, Idempotent) {
  const auto lex = merge({entry("good", 0.7, LexiconSource::Primary), entry("meh", 0.1, LexiconSource::Primary)},
                         {entry("bad", -0.6, LexiconSource::Secondary)});
  const auto again = merge(lex.to_entries(), {}, lex.threshold());
  ASSERT_EQ(again.size(), lex.size());
  for (const auto& [t, e] : lex.entries()) EXPECT_DOUBLE_EQ(*again.lookup(t), e.polarity);
}

TEST(LexiconLookup, CaseInsensitive) {
  const auto lex = merge({entry("great", 0.8, LexiconSource::Primary)}, {});
  EXPECT_DOUBLE_EQ(*lex.lookup("great"), 0.8);
  EXPECT_DOUBLE_EQ(*lex.lookup("Great"), 0.8);
  EXPECT_FALSE(lex.lookup("terrible"));
}

TEST(LexiconMerge, MatchesOracleOnRandomInputs) {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::pair<std::string, double>> p, s;
    std::vector<LexiconEntry> pe, se;
    for (int i = 0; i < 30; ++i) {
      const auto term = "w" + std::to_string(rng.below(25));
      const double pol = rng.uniform(-1.0, 1.0);
      if (rng.below(2)) {
        p.emplace_back(term, pol);
        pe.push_back(entry(term, pol, LexiconSource::Primary));
      } else {
        s.emplace_back(term, pol);
        se.push_back(entry(term, pol, LexiconSource::Secondary));
      }
    }
    const double t = rng.uniform(0.0, 0.6);
    const auto lex = merge(pe, se, t);
    const auto want = oracle::merge_lexicons(p, s, t);
    ASSERT_EQ(lex.size(), want.size());
    for (const auto& [term, w] : want) {
      const auto* got = lex.find(term);
      ASSERT_NE(got, nullptr) << term;
      EXPECT_EQ(got->polarity, w.polarity);
      EXPECT_EQ(got->source == LexiconSource::Primary, w.from_primary);
    }
  }
}

TEST(LexiconExport, RoundTrip) {
  testutil::TempDir dir("lex");
  const auto lex = merge({entry("good", 0.7, LexiconSource::Primary), entry(":)", 0.6, LexiconSource::Primary)},
                         {entry("nasty", -0.8, LexiconSource::Secondary)}, 0.3);
  {
    std::ofstream out(dir.file("m.tsv"));
    write_lexicon(out, lex);
  }
  const auto back = read_lexicon(dir.file("m.tsv"));
  EXPECT_EQ(back, lex);
  EXPECT_DOUBLE_EQ(back.threshold(), 0.3);
}
