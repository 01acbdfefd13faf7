#include <cstdlib>
#include <string>

#include <gtest/gtest.h>

#include "json.hpp"
#include "test_util.hpp"

namespace {

int run(const std::string& args, const std::string& log) {
  const std::string cmd = std::string(ASPEMB_CLI) + " " + args + " >" + log + " 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::size_t count_lines(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

// Runs every stage into <root>/<stage>; returns false on the first failure.
bool pipeline(const testutil::TempDir& dir, const std::string& root) {
  const auto p = dir.file(root);
  const auto log = dir.file(root + ".log");
  const std::string s = p + "/synth", l = p + "/lex", i = p + "/ingest", d = p + "/docvec", e = p + "/elm",
                    sc = p + "/score", pr = p + "/profile", r = p + "/report";
  return run("synth --companies 4 --per 50 --seed 42 --out " + s, log) == 0 &&
         run("build-lexicon --primary " + s + "/lexicon_primary.tsv --secondary " + s +
                 "/lexicon_secondary.tsv --threshold 0.25 --out " + l,
             log) == 0 &&
         run("ingest --reviews " + s + "/reviews.jsonl --seed 42 --out " + i, log) == 0 &&
         run("train-docvec --docs " + i + "/docs.jsonl --epochs 5 --seed 42 --out " + d, log) == 0 &&
         run("train-elm --docs " + i + "/docs.jsonl --docvec " + d + "/docvec.json --seed 42 --out " + e, log) == 0 &&
         run("score --docs " + i + "/docs.jsonl --lexicon " + l + "/lexicon.tsv --docvec " + d + "/docvec.json --elm " +
                 e + "/elm.json --seed 42 --out " + sc,
             log) == 0 &&
         run("profile --scores " + sc + "/scores.jsonl --docs " + i + "/docs.jsonl --out " + pr, log) == 0 &&
         run("report --embeddings " + pr + "/embeddings.tsv --support " + pr + "/support.tsv --docs " + i +
                 "/docs.jsonl --out " + r,
             log) == 0;
}

}  // namespace

TEST(Cli, FullPipelineIsDeterministic) {
  testutil::TempDir dir("cli");
  ASSERT_TRUE(pipeline(dir, "a")) << testutil::slurp(dir.file("a.log"));
  ASSERT_TRUE(pipeline(dir, "b")) << testutil::slurp(dir.file("b.log"));
  const auto emb = testutil::slurp(dir.file("a/profile/embeddings.tsv"));
  EXPECT_EQ(count_lines(emb), 5u);  // header + 4 companies
  const auto header = emb.substr(0, emb.find('\n'));
  EXPECT_EQ(std::count(header.begin(), header.end(), '\t'), 31);
  for (const char* f : {"synth/reviews.jsonl", "lex/lexicon.tsv", "ingest/docs.jsonl", "docvec/docvec.json",
                        "elm/elm.json", "score/scores.jsonl", "score/tiers.tsv", "profile/embeddings.tsv",
                        "report/similarity.tsv", "report/rankings.tsv", "report/aspect_frequency.tsv",
                        "report/projection.tsv"}) {
    EXPECT_EQ(testutil::slurp(dir.file(std::string("a/") + f)), testutil::slurp(dir.file(std::string("b/") + f))) << f;
  }
  EXPECT_EQ(count_lines(testutil::slurp(dir.file("a/report/similarity.tsv"))), 7u);  // header + C(4,2)
  EXPECT_EQ(count_lines(testutil::slurp(dir.file("a/report/aspect_frequency.tsv"))), 31u);
}

TEST(Cli, ManifestRecordsSeedDigestsAndOutputs) {
  testutil::TempDir dir("cli-m");
  ASSERT_EQ(run("synth --companies 2 --per 3 --seed 7 --out " + dir.file("s"), dir.file("log")), 0);
  const auto m = nlohmann::json::parse(testutil::slurp(dir.file("s/synth.manifest.json")));
  EXPECT_EQ(m["seed"], 7);
  EXPECT_EQ(m["outputs"].size(), 3u);
  ASSERT_EQ(run("build-lexicon --primary " + dir.file("s/lexicon_primary.tsv") + " --secondary " +
                    dir.file("s/lexicon_secondary.tsv") + " --out " + dir.file("l"),
                dir.file("log")),
            0);
  const auto b = nlohmann::json::parse(testutil::slurp(dir.file("l/build-lexicon.manifest.json")));
  ASSERT_EQ(b["inputs"].size(), 2u);
  EXPECT_EQ(b["inputs"][0]["sha256"].get<std::string>().size(), 64u);
  EXPECT_EQ(b["config"]["threshold"], 0.25);
}

TEST(Cli, BuildLexiconHonoursPriority) {
  testutil::TempDir dir("cli-l");
  const auto a = dir.write("a.tsv", "good\t0.7\nok\t0.1\n");
  const auto b = dir.write("b.tsv", "good\t0.9\nnasty\t-0.8\n");
  ASSERT_EQ(run("build-lexicon --primary " + a + " --secondary " + b + " --threshold 0.25 --out " + dir.file("o"),
                dir.file("log")),
            0);
  EXPECT_EQ(testutil::slurp(dir.file("o/lexicon.tsv")),
            "# threshold\t0.25\ngood\t0.69999999999999996\tprimary\nnasty\t-0.80000000000000004\tsecondary\n");
}

TEST(Cli, ReportWithPairs) {
  testutil::TempDir dir("cli-p");
  std::string emb = "company\tsector";
  const auto catalog = nlohmann::json::parse(testutil::slurp(std::string(ASPEMB_DATA_DIR) + "/aspects30.json"));
  for (const auto& a : catalog["aspects"]) emb += "\t" + a["name"].get<std::string>();
  emb += "\n";
  for (const char* c : {"A", "B", "C"}) {
    emb += std::string(c) + "\ttech";
    for (int k = 0; k < 30; ++k) emb += "\t" + std::to_string((k * 7 + c[0]) % 5 - 2);
    emb += "\n";
  }
  const auto e = dir.write("emb.tsv", emb);
  const auto p = dir.write("pairs.tsv", "A\tB\nC\tA\n");
  ASSERT_EQ(run("report --similarity --pairs " + p + " --embeddings " + e + " --out " + dir.file("o"), dir.file("log")),
            0)
      << testutil::slurp(dir.file("log"));
  const auto sim = testutil::slurp(dir.file("o/similarity.tsv"));
  EXPECT_EQ(count_lines(sim), 3u);
  EXPECT_NE(sim.find("C\tA\t"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  testutil::TempDir dir("cli-x");
  EXPECT_EQ(run("frobnicate", dir.file("log")), 2);
  EXPECT_EQ(run("", dir.file("log")), 2);
  EXPECT_EQ(run("synth --out " + dir.file("o"), dir.file("log")), 2);  // --seed missing
  EXPECT_EQ(run("ingest --reviews /nonexistent/r.jsonl --seed 1 --out " + dir.file("o"), dir.file("log")), 1);
  EXPECT_NE(testutil::slurp(dir.file("log")).find("/nonexistent/r.jsonl"), std::string::npos);
  const auto bad = dir.write("bad.jsonl", "{\"id\":\"x\"}\n");
  EXPECT_EQ(run("ingest --reviews " + bad + " --seed 1 --out " + dir.file("o"), dir.file("log")), 1);
  EXPECT_EQ(run("--help", dir.file("log")), 0);
}
