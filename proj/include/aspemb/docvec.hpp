#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "aspemb/corpus.hpp"
#include "aspemb/error.hpp"
#include "aspemb/rng.hpp"

namespace aspemb {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Word -> (dense index, count). Indices are ordered by descending count, then
// by word, so equal corpora always give equal vocabularies.
class Vocab {
 public:
  Vocab() = default;

  static Vocab build(const std::vector<ReviewDoc>& docs, std::uint64_t min_count) {
    std::unordered_map<std::string, std::uint64_t> counts;
    for (const auto& d : docs) {
      for (const auto& sent : d.tokens) {
        for (const auto& w : sent) ++counts[w];
      }
    }
    std::vector<std::pair<std::string, std::uint64_t>> kept;
    for (auto& [w, c] : counts) {
      if (c >= min_count) kept.emplace_back(w, c);
    }
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
      return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    Vocab v;
    v.min_count_ = min_count;
    for (auto& [w, c] : kept) v.add(std::move(w), c);
    return v;
  }

  std::size_t size() const noexcept { return words_.size(); }
  bool empty() const noexcept { return words_.empty(); }
  std::uint64_t min_count() const noexcept { return min_count_; }
  const std::string& word(std::size_t i) const { return words_.at(i); }
  std::uint64_t count(std::size_t i) const { return counts_.at(i); }

  std::optional<std::size_t> index(const std::string& w) const {
    const auto it = index_.find(w);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  // In-vocabulary word indices of a doc, in reading order.
  std::vector<std::size_t> encode(const ReviewDoc& d) const {
    std::vector<std::size_t> out;
    for (const auto& sent : d.tokens) {
      for (const auto& w : sent) {
        if (const auto i = index(w)) out.push_back(*i);
      }
    }
    return out;
  }

  void add(std::string w, std::uint64_t c) {
    index_.emplace(w, words_.size());
    words_.push_back(std::move(w));
    counts_.push_back(c);
  }

  void set_min_count(std::uint64_t m) { min_count_ = m; }

 private:
  std::vector<std::string> words_;
  std::vector<std::uint64_t> counts_;
  std::unordered_map<std::string, std::size_t> index_;
  std::uint64_t min_count_ = 1;
};

inline Vocab build_vocab(const std::vector<ReviewDoc>& docs, std::uint64_t min_count) {
  return Vocab::build(docs, min_count);
}

struct DocvecConfig {
  std::size_t dims = 50;
  std::size_t epochs = 50;
  std::size_t negatives = 5;
  double alpha_start = 0.025;
  double alpha_end = 0.0001;
  std::uint64_t seed = 1;
};

struct DocvecModel {
  RowMatrix doc_vectors;   // D x dims
  RowMatrix word_vectors;  // V x dims (output side)
  std::vector<std::string> doc_ids;
  Vocab vocab;
  std::vector<double> epoch_loss;  // mean per (doc, word) pair

  std::size_t dims() const noexcept { return static_cast<std::size_t>(doc_vectors.cols()); }

  std::optional<std::size_t> doc_index(const std::string& id) const {
    const auto it = std::find(doc_ids.begin(), doc_ids.end(), id);
    if (it == doc_ids.end()) return std::nullopt;
    return static_cast<std::size_t>(it - doc_ids.begin());
  }
};

// ---------------------------------------------------------------------------
// Negative-sampling objective for one (doc, observed word, noise words) triple:
//   L = -log s(d.u_w) - sum_n log s(-d.u_n),   s = logistic
//   dL/dd   = (s(d.u_w) - 1) u_w + sum_n s(d.u_n) u_n
//   dL/du_w = (s(d.u_w) - 1) d
//   dL/du_n = s(d.u_n) d

struct NsGradient {
  double loss = 0.0;
  std::vector<double> doc;
  std::vector<double> target;
  std::vector<std::vector<double>> noise;
};

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// log(1 + exp(-x)), stable for large |x|.
inline double softplus_neg(double x) { return x > 0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x)); }

}  // namespace detail

inline double ns_loss(std::span<const double> doc, std::span<const double> target,
                      const std::vector<std::span<const double>>& noise) {
  double loss = detail::softplus_neg(detail::dot(doc, target));
  for (const auto& n : noise) loss += detail::softplus_neg(-detail::dot(doc, n));
  return loss;
}

// Fills `g` (buffers are resized, so reusing one NsGradient avoids allocation).
inline void ns_gradient(std::span<const double> doc, std::span<const double> target,
                        const std::vector<std::span<const double>>& noise, NsGradient& g) {
  const auto d = doc.size();
  g.doc.assign(d, 0.0);
  g.target.resize(d);
  g.noise.resize(noise.size());
  const double st = detail::dot(doc, target);
  g.loss = detail::softplus_neg(st);
  const double ct = detail::logistic(st) - 1.0;
  for (std::size_t i = 0; i < d; ++i) {
    g.doc[i] += ct * target[i];
    g.target[i] = ct * doc[i];
  }
  for (std::size_t k = 0; k < noise.size(); ++k) {
    const double sn = detail::dot(doc, noise[k]);
    g.loss += detail::softplus_neg(-sn);
    const double cn = detail::logistic(sn);
    g.noise[k].resize(d);
    for (std::size_t i = 0; i < d; ++i) {
      g.doc[i] += cn * noise[k][i];
      g.noise[k][i] = cn * doc[i];
    }
  }
}

namespace detail {

// Unigram^0.75 noise table as a cumulative distribution.
class NoiseSampler {
 public:
  explicit NoiseSampler(const Vocab& v) {
    cumulative_.reserve(v.size());
    double total = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      total += std::pow(static_cast<double>(v.count(i)), 0.75);
      cumulative_.push_back(total);
    }
  }

  std::size_t draw(Rng& rng) const {
    const double r = rng.uniform01() * cumulative_.back();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), r);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), cumulative_.size() - 1);
  }

  // k noise words, none equal to `target` (when V > 1).
  void draw_k(Rng& rng, std::size_t k, std::size_t target, std::vector<std::size_t>& out) const {
    out.clear();
    if (cumulative_.size() < 2) return;
    while (out.size() < k) {
      const auto w = draw(rng);
      if (w != target) out.push_back(w);
    }
  }

 private:
  std::vector<double> cumulative_;
};

inline double linear_rate(const DocvecConfig& cfg, std::size_t step, std::size_t steps) {
  if (steps <= 1) return cfg.alpha_start;
  return cfg.alpha_start + (cfg.alpha_end - cfg.alpha_start) * static_cast<double>(step) /
                               static_cast<double>(steps - 1);
}

inline void init_row(Rng& rng, double* row, std::size_t dims) {
  const double h = 0.5 / static_cast<double>(dims);
  for (std::size_t i = 0; i < dims; ++i) row[i] = rng.uniform(-h, h);
}

// One SGD step on a (doc, word) pair; returns the pair's loss. Word vectors
// are updated only when `writable` is given (it must alias `words`).
inline double sgd_pair(double* doc, const RowMatrix& words, RowMatrix* writable, std::size_t target,
                       const std::vector<std::size_t>& noise_ids, double alpha, NsGradient& g,
                       std::vector<std::span<const double>>& noise_views) {
  const auto d = static_cast<std::size_t>(words.cols());
  noise_views.clear();
  for (auto n : noise_ids) noise_views.emplace_back(words.row(static_cast<Eigen::Index>(n)).data(), d);
  ns_gradient({doc, d}, {words.row(static_cast<Eigen::Index>(target)).data(), d}, noise_views, g);
  if (writable) {
    double* t = writable->row(static_cast<Eigen::Index>(target)).data();
    for (std::size_t i = 0; i < d; ++i) t[i] -= alpha * g.target[i];
    for (std::size_t k = 0; k < noise_ids.size(); ++k) {
      double* n = writable->row(static_cast<Eigen::Index>(noise_ids[k])).data();
      for (std::size_t i = 0; i < d; ++i) n[i] -= alpha * g.noise[k][i];
    }
  }
  for (std::size_t i = 0; i < d; ++i) doc[i] -= alpha * g.doc[i];
  return g.loss;
}

}  // namespace detail

// PV-DBOW with negative sampling. Single-threaded; docs visited in input
// order every epoch, words in reading order.
inline DocvecModel train(const std::vector<ReviewDoc>& docs, const Vocab& vocab, const DocvecConfig& cfg) {
  if (vocab.empty()) throw std::invalid_argument("docvec train: empty vocabulary");
  if (cfg.dims < 1 || cfg.epochs < 1 || cfg.negatives < 1) {
    throw std::invalid_argument("docvec train: dims, epochs and negatives must be >= 1");
  }
  DocvecModel m;
  m.vocab = vocab;
  const auto D = docs.size();
  m.doc_vectors.resize(static_cast<Eigen::Index>(D), static_cast<Eigen::Index>(cfg.dims));
  m.word_vectors = RowMatrix::Zero(static_cast<Eigen::Index>(vocab.size()), static_cast<Eigen::Index>(cfg.dims));
  Rng rng(cfg.seed);
  for (std::size_t i = 0; i < D; ++i) {
    m.doc_ids.push_back(docs[i].id);
    detail::init_row(rng, m.doc_vectors.row(static_cast<Eigen::Index>(i)).data(), cfg.dims);
  }
  std::vector<std::vector<std::size_t>> encoded;
  encoded.reserve(D);
  for (const auto& d : docs) encoded.push_back(vocab.encode(d));

  const detail::NoiseSampler sampler(vocab);
  NsGradient g;
  std::vector<std::span<const double>> views;
  std::vector<std::size_t> noise;
  for (std::size_t e = 0; e < cfg.epochs; ++e) {
    const double alpha = detail::linear_rate(cfg, e, cfg.epochs);
    double total = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < D; ++i) {
      double* doc = m.doc_vectors.row(static_cast<Eigen::Index>(i)).data();
      for (auto w : encoded[i]) {
        sampler.draw_k(rng, cfg.negatives, w, noise);
        total += detail::sgd_pair(doc, m.word_vectors, &m.word_vectors, w, noise, alpha, g, views);
        ++pairs;
      }
    }
    m.epoch_loss.push_back(pairs ? total / static_cast<double>(pairs) : 0.0);
  }
  return m;
}

// Embeds an unseen doc: fresh vector from `seed`, `steps` passes over the
// doc's words with word vectors frozen.
inline Eigen::VectorXd infer(const DocvecModel& m, const ReviewDoc& doc, std::size_t steps,
                             std::uint64_t seed, const DocvecConfig& schedule = {}) {
  const auto words = m.vocab.encode(doc);
  if (words.empty()) throw DomainError("docvec infer: no known words in '" + doc.id + "'");
  const auto d = m.dims();
  Rng rng(seed);
  Eigen::VectorXd v(static_cast<Eigen::Index>(d));
  detail::init_row(rng, v.data(), d);
  const detail::NoiseSampler sampler(m.vocab);
  NsGradient g;
  std::vector<std::span<const double>> views;
  std::vector<std::size_t> noise;
  const std::size_t negatives = std::max<std::size_t>(schedule.negatives, 1);
  for (std::size_t s = 0; s < steps; ++s) {
    const double alpha = detail::linear_rate(schedule, s, steps);
    for (auto w : words) {
      sampler.draw_k(rng, negatives, w, noise);
      detail::sgd_pair(v.data(), m.word_vectors, nullptr, w, noise, alpha, g, views);
    }
  }
  return v;
}

// ---------------------------------------------------------------------------
// Persistence: JSON, format_version 1. Reals are written in shortest
// round-trip decimal form.

inline constexpr int kDocvecFormatVersion = 1;

inline void save_docvec(const DocvecModel& m, const std::string& path) {
  nlohmann::ordered_json j;
  j["format_version"] = kDocvecFormatVersion;
  j["dims"] = m.dims();
  j["D"] = m.doc_vectors.rows();
  j["V"] = m.word_vectors.rows();
  j["min_count"] = m.vocab.min_count();
  j["doc_ids"] = m.doc_ids;
  auto vocab = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < m.vocab.size(); ++i) vocab.push_back({m.vocab.word(i), m.vocab.count(i)});
  j["vocab"] = std::move(vocab);
  j["epoch_loss"] = m.epoch_loss;
  j["doc_vectors"] = std::vector<double>(m.doc_vectors.data(), m.doc_vectors.data() + m.doc_vectors.size());
  j["word_vectors"] = std::vector<double>(m.word_vectors.data(), m.word_vectors.data() + m.word_vectors.size());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write docvec model: " + path);
  out << j.dump() << '\n';
}

inline DocvecModel load_docvec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open docvec model: " + path);
  try {
    const auto j = nlohmann::json::parse(in);
    if (j.at("format_version").get<int>() != kDocvecFormatVersion) {
      throw SchemaError("docvec model: unsupported format_version");
    }
    const auto dims = j.at("dims").get<Eigen::Index>();
    const auto D = j.at("D").get<Eigen::Index>();
    const auto V = j.at("V").get<Eigen::Index>();
    DocvecModel m;
    m.doc_ids = j.at("doc_ids").get<std::vector<std::string>>();
    for (const auto& e : j.at("vocab")) m.vocab.add(e.at(0).get<std::string>(), e.at(1).get<std::uint64_t>());
    m.vocab.set_min_count(j.at("min_count").get<std::uint64_t>());
    m.epoch_loss = j.at("epoch_loss").get<std::vector<double>>();
    const auto dv = j.at("doc_vectors").get<std::vector<double>>();
    const auto wv = j.at("word_vectors").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(m.doc_ids.size()) != D || static_cast<Eigen::Index>(m.vocab.size()) != V ||
        static_cast<Eigen::Index>(dv.size()) != D * dims || static_cast<Eigen::Index>(wv.size()) != V * dims) {
      throw SchemaError("docvec model: header does not match array sizes");
    }
    m.doc_vectors = Eigen::Map<const RowMatrix>(dv.data(), D, dims);
    m.word_vectors = Eigen::Map<const RowMatrix>(wv.data(), V, dims);
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("docvec model " + path + ": " + e.what());
  }
}

}  // namespace aspemb
