#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "aspemb/corpus.hpp"
#include "aspemb/elm.hpp"
#include "aspemb/error.hpp"
#include "aspemb/rng.hpp"
#include "aspemb/text.hpp"

namespace aspemb {

// ---------------------------------------------------------------------------
// Metrics over binary labels

namespace detail {

inline void check_pairs(std::span<const int> pred, std::span<const int> gold) {
  if (pred.size() != gold.size()) throw ShapeError("metrics: prediction/gold length mismatch");
  if (pred.empty()) throw std::invalid_argument("metrics: empty input");
}

}  // namespace detail

inline double accuracy(std::span<const int> pred, std::span<const int> gold) {
  detail::check_pairs(pred, gold);
  std::size_t hit = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hit += pred[i] == gold[i];
  return static_cast<double>(hit) / static_cast<double>(pred.size());
}

// Unweighted mean of the F1 of classes 0 and 1. A class absent from both
// sequences scores 1; a class with tp = 0 otherwise scores 0. F1 is the
// harmonic mean of precision and recall.
inline double macro_f1(std::span<const int> pred, std::span<const int> gold) {
  detail::check_pairs(pred, gold);
  double total = 0.0;
  for (int cls : {0, 1}) {
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
      const bool p = pred[i] == cls, g = gold[i] == cls;
      tp += p && g;
      fp += p && !g;
      fn += !p && g;
    }
    if (tp + fp + fn == 0) {
      total += 1.0;
    } else if (tp > 0) {
      const double prec = static_cast<double>(tp) / static_cast<double>(tp + fp);
      const double rec = static_cast<double>(tp) / static_cast<double>(tp + fn);
      total += 2.0 * prec * rec / (prec + rec);
    }
  }
  return total / 2.0;
}

// ---------------------------------------------------------------------------
// Linear SVM baseline: Pegasos (primal hinge loss + L2, stochastic
// sub-gradient). The bias is an extra weight on a constant-1 feature.

struct BaselineConfig {
  std::size_t epochs = 50;
  double reg = 1e-4;
  std::uint64_t seed = 1;
};

struct LinearBaseline {
  Eigen::VectorXd weights;
  double bias = 0.0;
  int fallback_label = 1;  // majority training label; used when the score is exactly 0
  double train_seconds = 0.0;

  double decision(const Eigen::VectorXd& x) const { return weights.dot(x) + bias; }

  int classify(const Eigen::VectorXd& x) const {
    const double s = decision(x);
    if (s > 0) return 1;
    if (s < 0) return 0;
    return fallback_label;
  }
};

inline LinearBaseline train_linear_baseline(const Eigen::MatrixXd& X, std::span<const int> y,
                                            const BaselineConfig& cfg) {
  if (static_cast<std::size_t>(X.rows()) != y.size()) throw ShapeError("baseline: X rows != labels");
  if (!X.allFinite()) throw DomainError("baseline: non-finite input");
  if (!(cfg.reg > 0.0)) throw std::invalid_argument("baseline: reg must be > 0");
  const auto start = std::chrono::steady_clock::now();
  const auto n = static_cast<std::size_t>(X.rows());
  const auto d = X.cols();
  std::size_t positives = 0;
  for (int v : y) positives += v == 1;

  LinearBaseline model;
  model.fallback_label = 2 * positives >= n ? 1 : 0;
  // One contiguous column per sample, with the constant-1 feature appended.
  Eigen::MatrixXd Xa(d + 1, static_cast<Eigen::Index>(n));
  Xa.topRows(d) = X.transpose();
  Xa.row(d).setOnes();
  Eigen::VectorXd w = Eigen::VectorXd::Zero(d + 1);
  const double radius = 1.0 / std::sqrt(cfg.reg);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::uint64_t t = 0;
  for (std::size_t e = 0; e < cfg.epochs; ++e) {
    order = shuffle(std::move(order), derive_seed(cfg.seed, "pegasos-epoch", e));
    for (auto i : order) {
      ++t;
      const double eta = 1.0 / (cfg.reg * static_cast<double>(t));
      const auto xi = Xa.col(static_cast<Eigen::Index>(i));
      const double yi = y[i] == 1 ? 1.0 : -1.0;
      const double margin = yi * w.dot(xi);
      w *= 1.0 - eta * cfg.reg;
      if (margin < 1.0) w += eta * yi * xi;
      const double norm = w.norm();
      if (norm > radius) w *= radius / norm;
    }
  }
  model.weights = w.head(d);
  model.bias = w(d);
  model.train_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return model;
}

// ---------------------------------------------------------------------------
// Student t distribution

// Regularized incomplete beta I_x(a, b): continued fraction (modified Lentz),
// using the symmetry I_x(a,b) = 1 - I_{1-x}(b,a) where it converges faster.
inline double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  auto cf = [](double a, double b, double x) {
    constexpr double kTiny = 1e-300;
    constexpr double kEps = 1e-16;
    double c = 1.0;
    double d = 1.0 - (a + b) * x / (a + 1.0);
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 10000; ++m) {
      const double m2 = 2.0 * m;
      double aa = m * (b - m) * x / ((a + m2 - 1.0) * (a + m2));
      d = 1.0 + aa * d;
      if (std::fabs(d) < kTiny) d = kTiny;
      c = 1.0 + aa / c;
      if (std::fabs(c) < kTiny) c = kTiny;
      d = 1.0 / d;
      h *= d * c;
      aa = -(a + m) * (a + b + m) * x / ((a + m2) * (a + m2 + 1.0));
      d = 1.0 + aa * d;
      if (std::fabs(d) < kTiny) d = kTiny;
      c = 1.0 + aa / c;
      if (std::fabs(c) < kTiny) c = kTiny;
      d = 1.0 / d;
      const double del = d * c;
      h *= del;
      if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
  };
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  if (x < (a + 1.0) / (a + b + 2.0)) return std::exp(log_front) * cf(a, b, x) / a;
  return 1.0 - std::exp(log_front) * cf(b, a, 1.0 - x) / b;
}

// P(|T| >= |t|) for T ~ Student-t with `df` degrees of freedom.
inline double student_t_two_sided_p(double t, double df) {
  if (!std::isfinite(t)) return 0.0;
  return incomplete_beta(df / 2.0, 0.5, df / (df + t * t));
}

struct PairedTTest {
  double t = 0.0;
  double p = 1.0;
  std::size_t df = 0;
  bool degenerate_variance = false;
};

// t = mean(d) / (sd(d) / sqrt(k)), sd with the k - 1 denominator.
inline PairedTTest paired_t_test(std::span<const double> diffs) {
  const auto k = diffs.size();
  if (k < 2) throw std::invalid_argument("paired_t_test: need at least two differences");
  PairedTTest r;
  r.df = k - 1;
  const double mean = std::accumulate(diffs.begin(), diffs.end(), 0.0) / static_cast<double>(k);
  double ss = 0.0;
  for (double x : diffs) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(k - 1));
  const bool all_zero = std::all_of(diffs.begin(), diffs.end(), [](double x) { return x == 0.0; });
  if (all_zero) return r;
  // Equal differences have zero variance; rounding can leave sd a hair above 0.
  const bool all_equal =
      std::adjacent_find(diffs.begin(), diffs.end(), std::not_equal_to<double>()) == diffs.end();
  if (all_equal || sd == 0.0) {
    r.t = mean > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    r.p = 0.0;
    r.degenerate_variance = true;
    return r;
  }
  r.t = mean / (sd / std::sqrt(static_cast<double>(k)));
  r.p = student_t_two_sided_p(r.t, static_cast<double>(r.df));
  return r;
}

// ---------------------------------------------------------------------------
// k-fold comparison of the ELM against the linear baseline

struct FoldResult {
  std::size_t fold_index = 0;
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  double train_seconds = 0.0;
};

struct KFoldReport {
  std::size_t k = 0;
  std::vector<FoldResult> elm;
  std::vector<FoldResult> baseline;
  PairedTTest ttest;  // over elm.accuracy - baseline.accuracy
  double speed_ratio = 0.0;  // mean baseline train time / mean ELM train time

  static double mean(const std::vector<FoldResult>& v, double FoldResult::*field) {
    double s = 0.0;
    for (const auto& f : v) s += f.*field;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
  }
};

// Fold f holds positions [f*N/k, (f+1)*N/k) of shuffle(0..N-1, seed).
inline std::vector<std::vector<std::size_t>> kfold_indices(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k < 2 || n < k) throw std::invalid_argument("kfold: need k >= 2 and N >= k");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  perm = shuffle(std::move(perm), seed);
  std::vector<std::vector<std::size_t>> folds(k);
  for (std::size_t f = 0; f < k; ++f) {
    folds[f].assign(perm.begin() + static_cast<std::ptrdiff_t>(f * n / k),
                    perm.begin() + static_cast<std::ptrdiff_t>((f + 1) * n / k));
  }
  return folds;
}

inline KFoldReport kfold_compare(const Eigen::MatrixXd& X, std::span<const int> y, std::size_t k,
                                 const ElmConfig& elm_cfg, const BaselineConfig& base_cfg, std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(X.rows());
  if (y.size() != n) throw ShapeError("kfold_compare: X rows != labels");
  const auto folds = kfold_indices(n, k, seed);
  KFoldReport rep;
  rep.k = k;
  std::vector<double> diffs;
  for (std::size_t f = 0; f < k; ++f) {
    std::vector<char> held(n, 0);
    for (auto i : folds[f]) held[i] = 1;
    std::vector<std::size_t> train_idx;
    for (std::size_t i = 0; i < n; ++i) {
      if (!held[i]) train_idx.push_back(i);
    }
    Eigen::MatrixXd Xtr(static_cast<Eigen::Index>(train_idx.size()), X.cols());
    Eigen::VectorXd ytr(static_cast<Eigen::Index>(train_idx.size()));
    std::vector<int> ytr_int;
    for (std::size_t r = 0; r < train_idx.size(); ++r) {
      Xtr.row(static_cast<Eigen::Index>(r)) = X.row(static_cast<Eigen::Index>(train_idx[r]));
      ytr(static_cast<Eigen::Index>(r)) = y[train_idx[r]];
      ytr_int.push_back(y[train_idx[r]]);
    }

    const auto t0 = std::chrono::steady_clock::now();
    ElmModel elm(elm_cfg);
    elm.fit(Xtr, ytr);
    const double elm_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    BaselineConfig bc = base_cfg;
    bc.seed = derive_seed(base_cfg.seed, "fold", f);
    const auto base = train_linear_baseline(Xtr, ytr_int, bc);

    std::vector<int> gold, pe, pb;
    for (auto i : folds[f]) {
      const Eigen::VectorXd x = X.row(static_cast<Eigen::Index>(i)).transpose();
      gold.push_back(y[i]);
      pe.push_back(elm.classify(x));
      pb.push_back(base.classify(x));
    }
    rep.elm.push_back({f, accuracy(pe, gold), macro_f1(pe, gold), elm_seconds});
    rep.baseline.push_back({f, accuracy(pb, gold), macro_f1(pb, gold), base.train_seconds});
    diffs.push_back(rep.elm.back().accuracy - rep.baseline.back().accuracy);
  }
  rep.ttest = paired_t_test(diffs);
  const double te = KFoldReport::mean(rep.elm, &FoldResult::train_seconds);
  const double tb = KFoldReport::mean(rep.baseline, &FoldResult::train_seconds);
  rep.speed_ratio = te > 0 ? tb / te : std::numeric_limits<double>::infinity();
  return rep;
}

// Per-fold rows, one summary row per model, then a trailer line with t, p
// and the speed ratio.
inline void write_kfold_report(std::ostream& out, const KFoldReport& rep, bool include_timing = true) {
  out << "# protocol\t" << rep.k << "-fold cross-validation\n";
  out << "model\tfold\taccuracy\tmacro_f1\ttrain_seconds\n";
  auto rows = [&](const char* name, const std::vector<FoldResult>& v) {
    for (const auto& f : v) {
      out << name << '\t' << f.fold_index << '\t' << format_real(f.accuracy) << '\t' << format_real(f.macro_f1)
          << '\t' << (include_timing ? format_real(f.train_seconds) : std::string("-")) << '\n';
    }
  };
  rows("elm", rep.elm);
  rows("baseline", rep.baseline);
  out << "model\tmean_acc\tmean_macro_f1\tmean_time\n";
  auto summary = [&](const char* name, const std::vector<FoldResult>& v) {
    out << name << '\t' << format_real(KFoldReport::mean(v, &FoldResult::accuracy)) << '\t'
        << format_real(KFoldReport::mean(v, &FoldResult::macro_f1)) << '\t'
        << (include_timing ? format_real(KFoldReport::mean(v, &FoldResult::train_seconds)) : std::string("-"))
        << '\n';
  };
  summary("elm", rep.elm);
  summary("baseline", rep.baseline);
  out << "# t\t" << format_real(rep.ttest.t) << "\tp\t" << format_real(rep.ttest.p) << "\tdf\t" << rep.ttest.df
      << (rep.ttest.degenerate_variance ? "\tdegenerate variance" : "") << "\tspeed_ratio\t"
      << (include_timing ? format_real(rep.speed_ratio) : std::string("-")) << '\n';
}

}  // namespace aspemb
