// aspemb: command-line driver for the aspect-sentiment embedding pipeline.
//
//   synth -> build-lexicon -> ingest -> train-docvec -> train-elm -> score
//         -> profile -> report           (eval runs the ELM/baseline comparison)
//
// Every subcommand writes <out>/<subcommand>.manifest.json before touching its
// outputs. All randomness comes from --seed; stage seeds are
// derive_seed(seed, "<tag>") with the tags listed in stage_seed() below.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "aspemb/aspects.hpp"
#include "aspemb/cascade.hpp"
#include "aspemb/corpus.hpp"
#include "aspemb/docvec.hpp"
#include "aspemb/elm.hpp"
#include "aspemb/eval.hpp"
#include "aspemb/lexicon.hpp"
#include "aspemb/profile.hpp"
#include "aspemb/syntax.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

std::uint64_t stage_seed(std::uint64_t seed, const char* tag) {
  // tags: "shuffle" (ingest), "docvec", "elm", "cascade" (score), "eval"
  return aspemb::derive_seed(seed, tag);
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw aspemb::IoError("cannot open input: " + path);
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() > 0) EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return hex.str();
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Collects inputs/outputs/config for one subcommand; write() must run before
// any output file is opened.
class Run {
 public:
  Run(std::string name, std::string out_dir) : name_(std::move(name)), out_dir_(std::move(out_dir)) {}

  Run& input(const std::string& role, const std::string& path) {
    if (path.empty()) return *this;
    if (!fs::is_regular_file(path)) throw aspemb::IoError("missing input file: " + path);
    inputs_.push_back({role, path});
    return *this;
  }
  template <typename T>
  Run& config(const std::string& key, const T& value) {
    config_[key] = value;
    return *this;
  }
  Run& seed(std::uint64_t s) {
    seed_ = s;
    return *this;
  }
  std::string output(const std::string& file) {
    outputs_.push_back(file);
    return (fs::path(out_dir_) / file).string();
  }

  void write() {
    std::error_code ec;
    fs::create_directories(out_dir_, ec);
    if (ec) throw aspemb::IoError("cannot create output dir " + out_dir_ + ": " + ec.message());
    ordered_json j;
    j["subcommand"] = name_;
    j["seed"] = seed_ ? ordered_json(*seed_) : ordered_json(nullptr);
    j["config"] = config_;
    j["inputs"] = ordered_json::array();
    for (const auto& [role, path] : inputs_) {
      j["inputs"].push_back({{"role", role}, {"path", path}, {"sha256", sha256_file(path)}});
    }
    j["outputs"] = outputs_;
    j["timestamp"] = utc_timestamp();
    const auto path = (fs::path(out_dir_) / (name_ + ".manifest.json")).string();
    std::ofstream out(path);
    if (!out) throw aspemb::IoError("cannot write manifest: " + path);
    out << j.dump(2) << '\n';
  }

 private:
  std::string name_;
  std::string out_dir_;
  std::vector<std::pair<std::string, std::string>> inputs_;
  std::vector<std::string> outputs_;
  ordered_json config_ = ordered_json::object();
  std::optional<std::uint64_t> seed_;
};

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw aspemb::IoError("cannot write " + path);
  return out;
}

aspemb::AspectCatalog catalog_from(const std::string& path) {
  return aspemb::load_catalog(path.empty() ? aspemb::default_catalog_path() : path);
}

std::string catalog_path(const std::string& path) {
  return path.empty() ? aspemb::default_catalog_path() : path;
}

// Stacks trained doc vectors of labeled docs into (X, y).
std::pair<Eigen::MatrixXd, std::vector<int>> labeled_matrix(const std::vector<aspemb::ReviewDoc>& docs,
                                                             const aspemb::DocvecModel& dv) {
  std::vector<std::size_t> rows;
  std::vector<int> y;
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < dv.doc_ids.size(); ++i) index.emplace(dv.doc_ids[i], i);
  for (const auto& d : docs) {
    if (!d.label) continue;
    const auto it = index.find(d.id);
    if (it == index.end()) throw aspemb::SchemaError("doc '" + d.id + "' has no trained vector");
    rows.push_back(it->second);
    y.push_back(*d.label);
  }
  if (rows.empty()) throw aspemb::SchemaError("no labeled docs");
  Eigen::MatrixXd X(static_cast<Eigen::Index>(rows.size()), dv.doc_vectors.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    X.row(static_cast<Eigen::Index>(r)) = dv.doc_vectors.row(static_cast<Eigen::Index>(rows[r]));
  }
  return {std::move(X), std::move(y)};
}

// ---------------------------------------------------------------------------
// Subcommands

struct Options {
  std::string out = ".";
  std::uint64_t seed = 1;
  // synth
  std::size_t companies = 4;
  std::size_t per = 50;
  std::vector<std::string> twins;
  // build-lexicon
  std::string primary, secondary;
  double threshold = aspemb::kDefaultLexiconThreshold;
  // ingest
  std::string reviews;
  bool no_shuffle = false;
  // docvec
  std::string docs, docvec;
  std::size_t dims = 50, epochs = 50, negatives = 5;
  std::uint64_t min_count = 1;
  // elm
  std::string elm;
  std::size_t hidden = 100;
  double ridge = 1e-3;
  std::string activation = "sigmoid";
  // score
  std::string lexicon, catalog, conllu;
  std::size_t window = 5, infer_steps = 20;
  // profile/report
  std::string scores, embeddings, support, pairs, sector;
  std::size_t top = 5;
  // eval
  std::size_t folds = 10, baseline_epochs = 50;
  double reg = 1e-4;
  bool no_timing = false;
};

void cmd_synth(const Options& o) {
  Run run("synth", o.out);
  aspemb::SynthConfig cfg;
  for (const auto& t : o.twins) {
    const auto parts = aspemb::split_char(t, ':');
    std::size_t a = 0, b = 0;
    if (parts.size() != 2 || std::sscanf(std::string(parts[0]).c_str(), "%zu", &a) != 1 ||
        std::sscanf(std::string(parts[1]).c_str(), "%zu", &b) != 1 || a < 1 || b < 1) {
      throw CLI::ValidationError("--twins", "expected I:J with 1-based company numbers, got '" + t + "'");
    }
    cfg.twins.emplace_back(a - 1, b - 1);
  }
  run.seed(o.seed).config("companies", o.companies).config("per", o.per).config("twins", o.twins);
  const auto reviews_path = run.output("reviews.jsonl");
  const auto p_path = run.output("lexicon_primary.tsv");
  const auto s_path = run.output("lexicon_secondary.tsv");
  run.write();
  const auto reviews = aspemb::synth_corpus(o.companies, o.per, cfg, o.seed);
  auto out = open_out(reviews_path);
  aspemb::write_reviews(out, reviews);
  const auto lex = aspemb::synth_lexicons(cfg, o.seed);
  auto write_source = [](const std::string& path, const auto& rows) {
    auto f = open_out(path);
    f << "# term\tpolarity\n";
    for (const auto& [t, p] : rows) f << t << '\t' << aspemb::format_real(p) << '\n';
  };
  write_source(p_path, lex.primary);
  write_source(s_path, lex.secondary);
}

void cmd_build_lexicon(const Options& o) {
  Run run("build-lexicon", o.out);
  run.input("primary", o.primary).input("secondary", o.secondary).config("threshold", o.threshold);
  const auto path = run.output("lexicon.tsv");
  run.write();
  const auto lex = aspemb::merge(aspemb::load_source(o.primary, aspemb::LexiconSource::Primary),
                                 aspemb::load_source(o.secondary, aspemb::LexiconSource::Secondary), o.threshold);
  auto out = open_out(path);
  aspemb::write_lexicon(out, lex);
}

void cmd_ingest(const Options& o) {
  Run run("ingest", o.out);
  run.input("reviews", o.reviews).seed(o.seed).config("shuffle", !o.no_shuffle);
  const auto path = run.output("docs.jsonl");
  run.write();
  std::vector<aspemb::ReviewDoc> docs;
  for (const auto& r : aspemb::ingest(o.reviews)) {
    for (auto& d : aspemb::split_pros_cons(r)) docs.push_back(std::move(d));
  }
  if (!o.no_shuffle) docs = aspemb::shuffle(std::move(docs), stage_seed(o.seed, "shuffle"));
  auto out = open_out(path);
  aspemb::write_docs(out, docs);
}

void cmd_train_docvec(const Options& o) {
  Run run("train-docvec", o.out);
  run.input("docs", o.docs)
      .seed(o.seed)
      .config("dims", o.dims)
      .config("epochs", o.epochs)
      .config("negatives", o.negatives)
      .config("min_count", o.min_count);
  const auto path = run.output("docvec.json");
  run.write();
  const auto docs = aspemb::read_docs(o.docs);
  aspemb::DocvecConfig cfg;
  cfg.dims = o.dims;
  cfg.epochs = o.epochs;
  cfg.negatives = o.negatives;
  cfg.seed = stage_seed(o.seed, "docvec");
  const auto model = aspemb::train(docs, aspemb::build_vocab(docs, o.min_count), cfg);
  aspemb::save_docvec(model, path);
}

aspemb::ElmConfig elm_config(const Options& o, std::size_t input_dim) {
  const auto act = aspemb::parse_activation(o.activation);
  if (!act) throw CLI::ValidationError("--activation", "expected sigmoid, tanh or identity");
  aspemb::ElmConfig c;
  c.input_dim = input_dim;
  c.hidden_count = o.hidden;
  c.activation = *act;
  c.ridge = o.ridge;
  c.seed = stage_seed(o.seed, "elm");
  return c;
}

void cmd_train_elm(const Options& o) {
  Run run("train-elm", o.out);
  run.input("docs", o.docs)
      .input("docvec", o.docvec)
      .seed(o.seed)
      .config("hidden", o.hidden)
      .config("ridge", o.ridge)
      .config("activation", o.activation);
  const auto path = run.output("elm.json");
  run.write();
  const auto docs = aspemb::read_docs(o.docs);
  const auto dv = aspemb::load_docvec(o.docvec);
  const auto [X, y] = labeled_matrix(docs, dv);
  aspemb::ElmModel elm(elm_config(o, dv.dims()));
  Eigen::VectorXd yv(static_cast<Eigen::Index>(y.size()));
  for (std::size_t i = 0; i < y.size(); ++i) yv(static_cast<Eigen::Index>(i)) = y[i];
  elm.fit(X, yv);
  aspemb::save_elm(elm, path);
}

// Parses keyed by "# doc_id"; every sentence of a doc must carry the id.
std::map<std::string, std::vector<aspemb::ParsedSentence>> parses_by_doc(const std::string& path) {
  std::map<std::string, std::vector<aspemb::ParsedSentence>> out;
  for (auto& s : aspemb::read_conllu(path)) {
    if (s.doc_id.empty()) throw aspemb::SchemaError(path + ": sentence without '# doc_id'");
    out[s.doc_id].push_back(std::move(s));
  }
  return out;
}

void cmd_score(const Options& o) {
  Run run("score", o.out);
  run.input("docs", o.docs)
      .input("lexicon", o.lexicon)
      .input("docvec", o.docvec)
      .input("elm", o.elm)
      .input("catalog", catalog_path(o.catalog))
      .input("conllu", o.conllu)
      .seed(o.seed)
      .config("window", o.window)
      .config("infer_steps", o.infer_steps)
      .config("parser", o.conllu.empty() ? "heuristic" : "conllu");
  const auto scores_path = run.output("scores.jsonl");
  const auto tiers_path = run.output("tiers.tsv");
  run.write();

  const auto docs = aspemb::read_docs(o.docs);
  const auto lex = aspemb::read_lexicon(o.lexicon);
  const auto dv = aspemb::load_docvec(o.docvec);
  const auto elm = aspemb::load_elm(o.elm);
  const auto catalog = catalog_from(o.catalog);
  const auto tagger = aspemb::catalog_tagger(catalog);
  std::map<std::string, std::vector<aspemb::ParsedSentence>> parses;
  if (!o.conllu.empty()) parses = parses_by_doc(o.conllu);

  aspemb::CascadeContext ctx;
  ctx.lexicon = &lex;
  ctx.elm = &elm;
  ctx.docvec = &dv;
  ctx.window = o.window;
  ctx.seed = stage_seed(o.seed, "cascade");
  ctx.infer_steps = o.infer_steps;

  std::vector<aspemb::ScoreRecord> records;
  aspemb::TierCounts counts;
  for (auto doc : docs) {
    std::vector<aspemb::ParsedSentence> sentences;
    if (o.conllu.empty()) {
      sentences = aspemb::parse_doc(doc, tagger);
    } else {
      const auto it = parses.find(doc.id);
      if (it == parses.end()) throw aspemb::SchemaError(o.conllu + ": no parse for doc '" + doc.id + "'");
      sentences = it->second;
      doc.tokens.clear();
      for (const auto& s : sentences) doc.tokens.push_back(s.tokens);
    }
    const auto mentions = aspemb::extract(doc, catalog);
    const auto scored = aspemb::assign(doc, sentences, mentions, ctx);
    counts.add(scored);
    for (const auto& s : scored) records.push_back({doc.company, s});
  }
  auto out = open_out(scores_path);
  aspemb::write_scores(out, records);
  auto tiers = open_out(tiers_path);
  tiers << "tier\tcount\trate\n";
  for (auto t : {aspemb::Tier::ModifierLookup, aspemb::Tier::ContextPattern, aspemb::Tier::ElmLookup,
                 aspemb::Tier::ElmSemiRandom}) {
    tiers << aspemb::to_string(t) << '\t' << counts[t] << '\t' << aspemb::format_real(counts.rate(t)) << '\n';
  }
  tiers << "total\t" << counts.total() << "\t1\n";
  std::cerr << "score: " << counts.total() << " mentions, semi-random rate "
            << aspemb::format_real(counts.semi_random_rate()) << '\n';
}

std::map<std::string, aspemb::CompanyInfo> company_map(const std::vector<aspemb::ReviewDoc>& docs) {
  std::map<std::string, aspemb::CompanyInfo> out;
  for (const auto& d : docs) out[d.id] = {d.company, d.sector};
  return out;
}

void cmd_profile(const Options& o) {
  Run run("profile", o.out);
  run.input("scores", o.scores).input("docs", o.docs).input("catalog", catalog_path(o.catalog));
  const auto emb_path = run.output("embeddings.tsv");
  const auto sup_path = run.output("support.tsv");
  run.write();
  const auto catalog = catalog_from(o.catalog);
  std::vector<aspemb::AspectScore> scores;
  for (auto& r : aspemb::read_scores(o.scores)) scores.push_back(std::move(r.score));
  const auto emb = aspemb::build_embeddings(scores, company_map(aspemb::read_docs(o.docs)), catalog);
  auto out = open_out(emb_path);
  aspemb::write_embeddings(out, emb, catalog);
  auto sup = open_out(sup_path);
  aspemb::write_support(sup, emb, catalog);
}

std::vector<std::pair<std::string, std::string>> read_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw aspemb::IoError("cannot open pairs: " + path);
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (aspemb::trim(line).empty() || line.front() == '#') continue;
    const auto f = aspemb::split_char(line, '\t');
    if (f.size() != 2) throw aspemb::ParseError(path, lineno, "expected company<TAB>company");
    out.emplace_back(std::string(f[0]), std::string(f[1]));
  }
  return out;
}

void cmd_report(const Options& o) {
  Run run("report", o.out);
  run.input("embeddings", o.embeddings)
      .input("support", o.support)
      .input("docs", o.docs)
      .input("pairs", o.pairs)
      .input("catalog", catalog_path(o.catalog))
      .config("top", o.top)
      .config("sector", o.sector);
  const auto sim_path = run.output("similarity.tsv");
  const auto rank_path = run.output("rankings.tsv");
  const auto freq_path = o.docs.empty() ? std::string() : run.output("aspect_frequency.tsv");
  const auto proj_path = run.output("projection.tsv");
  run.write();

  const auto catalog = catalog_from(o.catalog);
  const auto emb = aspemb::read_embeddings(o.embeddings, catalog, o.support);

  std::optional<std::vector<std::pair<std::string, std::string>>> pairs;
  if (!o.pairs.empty()) pairs = read_pairs(o.pairs);
  const auto sim = aspemb::similarity_report(emb, pairs);
  for (const auto& w : sim.warnings) std::cerr << "report: " << w << '\n';
  auto so = open_out(sim_path);
  so << "company_a\tcompany_b\tcosine\n";
  for (const auto& r : sim.rows) so << r.first << '\t' << r.second << '\t' << aspemb::format_real(r.cosine) << '\n';

  auto ro = open_out(rank_path);
  ro << "aspect\tdirection\trank\tcompany\tsector\tscore\tsupport\n";
  const std::optional<std::string> sector = o.sector.empty() ? std::nullopt : std::optional(o.sector);
  for (const auto& a : catalog.aspects()) {
    for (auto dir : {aspemb::RankDirection::Best, aspemb::RankDirection::Worst}) {
      const auto ranked = aspemb::rank_by_aspect(emb, catalog, a.name, sector, o.top, dir);
      for (std::size_t i = 0; i < ranked.size(); ++i) {
        ro << a.name << '\t' << (dir == aspemb::RankDirection::Best ? "best" : "worst") << '\t' << i + 1 << '\t'
           << ranked[i].company << '\t' << ranked[i].sector << '\t' << aspemb::format_real(ranked[i].score) << '\t'
           << ranked[i].support << '\n';
      }
    }
  }

  if (!freq_path.empty()) {
    const auto freq = aspemb::corpus_frequency(aspemb::read_docs(o.docs), catalog);
    auto fo = open_out(freq_path);
    fo << "aspect\tfrequency\n";
    for (const auto& a : catalog.aspects()) fo << a.name << '\t' << freq.at(a.name) << '\n';
  }

  const auto proj = aspemb::project_2d(emb);
  auto po = open_out(proj_path);
  po << "company\tx\ty\n";
  for (const auto& p : proj.points) {
    po << p.company << '\t' << aspemb::format_real(p.x) << '\t' << aspemb::format_real(p.y) << '\n';
  }
  po << "# captured_variance\t" << aspemb::format_real(proj.captured_ratio()) << '\n';
}

void cmd_eval(const Options& o) {
  Run run("eval", o.out);
  run.input("docs", o.docs)
      .input("docvec", o.docvec)
      .seed(o.seed)
      .config("folds", o.folds)
      .config("hidden", o.hidden)
      .config("ridge", o.ridge)
      .config("activation", o.activation)
      .config("baseline_epochs", o.baseline_epochs)
      .config("reg", o.reg)
      .config("timing", !o.no_timing);
  const auto path = run.output("eval.tsv");
  run.write();
  const auto docs = aspemb::read_docs(o.docs);
  const auto dv = aspemb::load_docvec(o.docvec);
  const auto [X, y] = labeled_matrix(docs, dv);
  aspemb::BaselineConfig bc;
  bc.epochs = o.baseline_epochs;
  bc.reg = o.reg;
  bc.seed = stage_seed(o.seed, "eval");
  const auto rep = aspemb::kfold_compare(X, y, o.folds, elm_config(o, dv.dims()), bc, stage_seed(o.seed, "eval"));
  auto out = open_out(path);
  aspemb::write_kfold_report(out, rep, !o.no_timing);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"aspemb: aspect-sentiment company embeddings"};
  app.require_subcommand(1);
  Options o;
  std::function<void(const Options&)> action;

  auto add = [&](const char* name, const char* help, void (*fn)(const Options&)) {
    auto* sc = app.add_subcommand(name, help);
    sc->add_option("--out", o.out, "output directory")->required();
    sc->callback([&action, fn] { action = fn; });
    return sc;
  };
  auto seed = [&](CLI::App* sc) { sc->add_option("--seed", o.seed, "run seed")->required(); };
  auto catalog = [&](CLI::App* sc) { sc->add_option("--catalog", o.catalog, "aspect catalog JSON (default: shipped)"); };

  auto* synth = add("synth", "generate a synthetic review corpus and source lexicons", cmd_synth);
  seed(synth);
  synth->add_option("--companies", o.companies)->check(CLI::PositiveNumber);
  synth->add_option("--per", o.per, "reviews per company")->check(CLI::PositiveNumber);
  synth->add_option("--twins", o.twins, "I:J company pairs sharing a profile (1-based)");

  auto* bl = add("build-lexicon", "merge primary/secondary polarity sources", cmd_build_lexicon);
  bl->add_option("--primary", o.primary)->required();
  bl->add_option("--secondary", o.secondary)->required();
  bl->add_option("--threshold", o.threshold)->check(CLI::NonNegativeNumber);

  auto* ing = add("ingest", "split reviews into labeled pros/cons docs", cmd_ingest);
  seed(ing);
  ing->add_option("--reviews", o.reviews)->required();
  ing->add_flag("--no-shuffle", o.no_shuffle);

  auto* td = add("train-docvec", "train PV-DBOW document vectors", cmd_train_docvec);
  seed(td);
  td->add_option("--docs", o.docs)->required();
  td->add_option("--dims", o.dims)->check(CLI::PositiveNumber);
  td->add_option("--epochs", o.epochs)->check(CLI::PositiveNumber);
  td->add_option("--negatives", o.negatives)->check(CLI::PositiveNumber);
  td->add_option("--min-count", o.min_count)->check(CLI::PositiveNumber);

  auto* te = add("train-elm", "fit the ELM on trained doc vectors", cmd_train_elm);
  seed(te);
  te->add_option("--docs", o.docs)->required();
  te->add_option("--docvec", o.docvec)->required();
  te->add_option("--hidden", o.hidden)->check(CLI::PositiveNumber);
  te->add_option("--ridge", o.ridge)->check(CLI::NonNegativeNumber);
  te->add_option("--activation", o.activation);

  auto* sc = add("score", "assign cascade scores to aspect mentions", cmd_score);
  seed(sc);
  sc->add_option("--docs", o.docs)->required();
  sc->add_option("--lexicon", o.lexicon)->required();
  sc->add_option("--docvec", o.docvec)->required();
  sc->add_option("--elm", o.elm)->required();
  sc->add_option("--conllu", o.conllu, "pre-parsed CoNLL-U with '# doc_id' comments (default: heuristic parse)");
  sc->add_option("--window", o.window)->check(CLI::PositiveNumber);
  sc->add_option("--infer-steps", o.infer_steps)->check(CLI::PositiveNumber);
  catalog(sc);

  auto* pr = add("profile", "aggregate scores into company embeddings", cmd_profile);
  pr->add_option("--scores", o.scores)->required();
  pr->add_option("--docs", o.docs)->required();
  catalog(pr);

  auto* rp = add("report", "similarity, rankings, aspect frequency and 2-D projection", cmd_report);
  rp->add_option("--embeddings", o.embeddings)->required();
  rp->add_option("--support", o.support);
  rp->add_option("--docs", o.docs, "docs for the aspect-frequency table");
  rp->add_option("--pairs", o.pairs, "company pairs TSV; default all pairs");
  rp->add_flag("--similarity", "accepted for symmetry; similarity is always written");
  rp->add_option("--sector", o.sector, "restrict rankings to one sector");
  rp->add_option("--top", o.top)->check(CLI::PositiveNumber);
  catalog(rp);

  auto* ev = add("eval", "k-fold ELM vs linear baseline with paired t-test", cmd_eval);
  seed(ev);
  ev->add_option("--docs", o.docs)->required();
  ev->add_option("--docvec", o.docvec)->required();
  ev->add_option("--folds", o.folds)->check(CLI::Range(2, 1000));
  ev->add_option("--hidden", o.hidden)->check(CLI::PositiveNumber);
  ev->add_option("--ridge", o.ridge)->check(CLI::NonNegativeNumber);
  ev->add_option("--activation", o.activation);
  ev->add_option("--baseline-epochs", o.baseline_epochs);
  ev->add_option("--reg", o.reg)->check(CLI::PositiveNumber);
  ev->add_flag("--no-timing", o.no_timing, "omit wall-clock columns so the report is reproducible");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }
  try {
    action(o);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}
