#include <sstream>

#include <gtest/gtest.h>

#include "aspemb/syntax.hpp"
#include "aspemb/rng.hpp"

using namespace aspemb;

namespace {

std::vector<ParsedSentence> parse(const std::string& text) {
  std::istringstream in(text);
  return parse_conllu(in, "mem");
}

std::string row(int id, const char* form, const char* lemma, const char* upos, int head, const char* rel) {
  std::ostringstream o;
  o << id << '\t' << form << '\t' << lemma << '\t' << upos << "\t_\t_\t" << head << '\t' << rel << "\t_\t_\n";
  return o.str();
}

}  // namespace

TEST(Conllu, AmodArc) {
  const auto s = parse(row(1, "great", "great", "ADJ", 2, "amod") + row(2, "salary", "salary", "NOUN", 0, "root") + "\n");
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].tokens, (TokenList{"great", "salary"}));
  EXPECT_EQ(s[0].pos, (std::vector<PosTag>{PosTag::Adj, PosTag::Noun}));
  ASSERT_EQ(s[0].arcs.size(), 1u);
  EXPECT_EQ(s[0].arcs[0], (DepArc{Relation::Amod, 1, 0}));
}

TEST(Conllu, UnknownRelationIsOther) {
  const auto s = parse(row(1, "in", "in", "ADP", 2, "case") + row(2, "office", "office", "NOUN", 3, "obl") +
                       row(3, "work", "work", "VERB", 0, "root"));
  ASSERT_EQ(s.size(), 1u);
  ASSERT_EQ(s[0].arcs.size(), 2u);
  for (const auto& a : s[0].arcs) EXPECT_EQ(a.relation, Relation::Other);
}

TEST(Conllu, EmptyFile) { EXPECT_TRUE(parse("").empty()); }

TEST(Conllu, ColumnCountErrorNamesLine) {
  try {
    parse("# c\n" + row(1, "a", "a", "DET", 0, "root") + "2\tbroken\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(Conllu, SubtypesNegationAndSkippedRows) {
  const auto s = parse("# doc_id = d1\n" + std::string("1-2\tdon't\t_\t_\t_\t_\t_\t_\t_\t_\n") +
                       row(1, "pay", "pay", "NOUN", 3, "nsubj:pass") + row(2, "not", "not", "PART", 3, "advmod") +
                       "2.1\tx\tx\tX\t_\t_\t_\t_\t_\t_\n" + row(3, "raised", "raise", "VERB", 0, "root"));
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].doc_id, "d1");
  EXPECT_EQ(s[0].tokens.size(), 3u);
  EXPECT_EQ(s[0].pos[1], PosTag::Neg);
  EXPECT_EQ(s[0].arcs[0].relation, Relation::Nsubj);
}

TEST(Conllu, RoundTrip) {
  PosTagger tagger;
  std::vector<ParsedSentence> in{heuristic_parse({"Very", "political", "management", "."}, tagger),
                                 heuristic_parse({"The", "salary", "is", "not", "bad", "pay"}, tagger)};
  in[0].doc_id = "x";
  in[1].doc_id = "x";
  std::ostringstream out;
  write_conllu(out, in);
  const auto back = parse(out.str());
  ASSERT_EQ(back.size(), in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    EXPECT_EQ(back[i].tokens, in[i].tokens);
    EXPECT_EQ(back[i].pos, in[i].pos);
    EXPECT_EQ(back[i].arcs, in[i].arcs);
  }
}

TEST(HeuristicParse, AdjNounIsAmod) {
  const auto s = heuristic_parse({"great", "salary"}, {PosTag::Adj, PosTag::Noun});
  ASSERT_EQ(s.arcs.size(), 1u);
  EXPECT_EQ(s.arcs[0], (DepArc{Relation::Amod, 1, 0}));
}

TEST(HeuristicParse, AdvAdjIsAdvmod) {
  const auto s = heuristic_parse({"very", "political"}, {PosTag::Adv, PosTag::Adj});
  ASSERT_EQ(s.arcs.size(), 1u);
  EXPECT_EQ(s.arcs[0], (DepArc{Relation::Advmod, 1, 0}));
}

TEST(HeuristicParse, SingleNounHasNoArcs) {
  EXPECT_TRUE(heuristic_parse({"salary"}, {PosTag::Noun}).arcs.empty());
}

TEST(HeuristicParse, CopulaLinksNearestNouns) {
  const auto s = heuristic_parse({"office", "salary", "is", "a", "joke", "culture"},
                                 {PosTag::Noun, PosTag::Noun, PosTag::Verb, PosTag::Other, PosTag::Noun, PosTag::Noun});
  ASSERT_EQ(s.arcs.size(), 1u);
  EXPECT_EQ(s.arcs[0], (DepArc{Relation::Nsubj, 4, 1}));
}

TEST(HeuristicParse, LengthMismatch) {
  EXPECT_THROW(heuristic_parse({"a", "b"}, std::vector<PosTag>{PosTag::Noun}), ShapeError);
}

TEST(HeuristicParse, ArcsInBounds) {
  Rng rng(3);
  const std::vector<PosTag> tags{PosTag::Adj, PosTag::Adv, PosTag::Noun, PosTag::Verb, PosTag::Neg, PosTag::Other};
  const TokenList words{"is", "x", "are", "y"};
  for (int t = 0; t < 500; ++t) {
    const auto n = rng.below(12);
    TokenList tok;
    std::vector<PosTag> pos;
    for (std::uint64_t i = 0; i < n; ++i) {
      tok.push_back(words[rng.below(words.size())]);
      pos.push_back(tags[rng.below(tags.size())]);
    }
    for (const auto& a : heuristic_parse(tok, pos).arcs) {
      EXPECT_LT(a.head, n);
      EXPECT_LT(a.dependent, n);
      EXPECT_NE(a.head, a.dependent);
    }
  }
}

TEST(Tagger, DictionarySuffixesAndOverrides) {
  PosTagger t;
  EXPECT_EQ(t.tag("Great"), PosTag::Adj);
  EXPECT_EQ(t.tag("very"), PosTag::Adv);
  EXPECT_EQ(t.tag("quickly"), PosTag::Adv);
  EXPECT_EQ(t.tag("political"), PosTag::Adj);
  EXPECT_EQ(t.tag("traveling"), PosTag::Verb);
  EXPECT_EQ(t.tag("isn't"), PosTag::Neg);
  EXPECT_EQ(t.tag("salary"), PosTag::Noun);
  EXPECT_EQ(t.tag("."), PosTag::Other);
  t.set("politics", PosTag::Noun);
  EXPECT_EQ(t.tag("Politics"), PosTag::Noun);
}

TEST(ModifiersOf, AmodHeadSide) {
  PosTagger t;
  const auto s = heuristic_parse({"Great", "opportunities", "for", "career", "growth", "."}, t);
  const auto m = modifiers_of(s, 1);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(s.tokens[m[0]], "Great");
}

TEST(ModifiersOf, NsubjDependentSide) {
  ParsedSentence s{{"perks", "of", "business", "traveling"},
                   {PosTag::Noun, PosTag::Other, PosTag::Noun, PosTag::Verb},
                   {{Relation::Nsubj, 3, 0}},
                   {}};
  const auto m = modifiers_of(s, 0);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(s.tokens[m[0]], "traveling");
}

TEST(ModifiersOf, NoArcsAndOtherRelations) {
  ParsedSentence s{{"a", "b"}, {PosTag::Noun, PosTag::Noun}, {{Relation::Other, 0, 1}}, {}};
  EXPECT_TRUE(modifiers_of(s, 0).empty());
  EXPECT_TRUE(modifiers_of(s, 1).empty());
  EXPECT_THROW(modifiers_of(s, 2), std::out_of_range);
}
