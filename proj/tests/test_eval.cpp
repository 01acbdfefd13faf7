#include <numeric>
#include <sstream>

#include <gtest/gtest.h>

#include "aspemb/eval.hpp"
#include "oracles.hpp"

using namespace aspemb;

TEST(Accuracy, Examples) {
  EXPECT_DOUBLE_EQ(accuracy(std::vector<int>{1, 0, 1, 1}, std::vector<int>{1, 0, 0, 1}), 0.75);
  EXPECT_DOUBLE_EQ(accuracy(std::vector<int>{1, 0}, std::vector<int>{1, 0}), 1.0);
  EXPECT_DOUBLE_EQ(accuracy(std::vector<int>{1, 0}, std::vector<int>{0, 1}), 0.0);
  EXPECT_THROW(accuracy(std::vector<int>{1}, std::vector<int>{1, 0}), ShapeError);
  EXPECT_THROW(accuracy(std::vector<int>{}, std::vector<int>{}), std::invalid_argument);
}

TEST(MacroF1, Examples) {
  EXPECT_DOUBLE_EQ(macro_f1(std::vector<int>{1, 0, 1}, std::vector<int>{1, 0, 1}), 1.0);
  EXPECT_NEAR(macro_f1(std::vector<int>{1, 1, 1, 1}, std::vector<int>{1, 1, 0, 0}), 1.0 / 3.0, 1e-15);
  EXPECT_DOUBLE_EQ(macro_f1(std::vector<int>{0, 0, 1, 1}, std::vector<int>{1, 1, 0, 0}), 0.0);
  // Class 0 absent from both sides counts as 1.
  EXPECT_DOUBLE_EQ(macro_f1(std::vector<int>{1, 1}, std::vector<int>{1, 1}), 1.0);
  EXPECT_THROW(macro_f1(std::vector<int>{1}, std::vector<int>{1, 0}), ShapeError);
}

TEST(Metrics, PermutationInvariantAndOracle) {
  Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    const auto n = 1 + rng.below(30);
    std::vector<int> p(n), g(n);
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = static_cast<int>(rng.below(2));
      g[i] = static_cast<int>(rng.below(2));
    }
    EXPECT_EQ(macro_f1(p, g), oracle::macro_f1(p, g));
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    idx = shuffle(idx, t);
    std::vector<int> pp, gg;
    for (auto i : idx) {
      pp.push_back(p[i]);
      gg.push_back(g[i]);
    }
    EXPECT_DOUBLE_EQ(accuracy(pp, gg), accuracy(p, g));
    EXPECT_NEAR(macro_f1(pp, gg), macro_f1(p, g), 1e-15);
  }
}

namespace {

std::pair<Eigen::MatrixXd, std::vector<int>> blobs(std::size_t n, double gap, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd X(static_cast<Eigen::Index>(n), 2);
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = static_cast<int>(i % 2);
    const double c = y[i] ? gap : -gap;
    X(static_cast<Eigen::Index>(i), 0) = c + rng.uniform(-1, 1);
    X(static_cast<Eigen::Index>(i), 1) = c + rng.uniform(-1, 1);
  }
  return {X, y};
}

double train_accuracy(const LinearBaseline& m, const Eigen::MatrixXd& X, const std::vector<int>& y) {
  std::vector<int> p;
  for (Eigen::Index i = 0; i < X.rows(); ++i) p.push_back(m.classify(X.row(i).transpose()));
  return accuracy(p, y);
}

}  // namespace

TEST(Baseline, SeparableBlobs) {
  const auto [X, y] = blobs(200, 2.0, 1);
  BaselineConfig cfg;
  cfg.reg = 1e-3;
  const auto m = train_linear_baseline(X, y, cfg);
  EXPECT_DOUBLE_EQ(train_accuracy(m, X, y), 1.0);
  EXPECT_GE(m.train_seconds, 0.0);
}

TEST(Baseline, DeterministicUnderSeed) {
  const auto [X, y] = blobs(100, 0.5, 2);
  BaselineConfig cfg;
  cfg.seed = 4;
  const auto a = train_linear_baseline(X, y, cfg), b = train_linear_baseline(X, y, cfg);
  EXPECT_EQ(a.weights, b.weights);
  EXPECT_EQ(a.bias, b.bias);
}

TEST(Baseline, ZeroEpochsPredictsMajority) {
  auto [X, y] = blobs(10, 1.0, 3);
  y = {1, 1, 1, 1, 1, 1, 0, 0, 0, 0};
  BaselineConfig cfg;
  cfg.epochs = 0;
  const auto m = train_linear_baseline(X, y, cfg);
  EXPECT_TRUE(m.weights.isZero(0.0));
  EXPECT_EQ(m.bias, 0.0);
  EXPECT_DOUBLE_EQ(train_accuracy(m, X, y), 0.6);
}

TEST(Baseline, Errors) {
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(2, 2);
  X(1, 1) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(train_linear_baseline(X, std::vector<int>{0, 1}, {}), DomainError);
  EXPECT_THROW(train_linear_baseline(Eigen::MatrixXd::Zero(2, 2), std::vector<int>{0}, {}), ShapeError);
}

TEST(StudentT, AgainstOracles) {
  for (double df : {1.0, 2.0, 3.0, 9.0, 30.0}) {
    for (double t : {0.0, 0.1, 0.5, 1.0, 2.0, 5.196, 10.0, 40.0}) {
      EXPECT_NEAR(student_t_two_sided_p(t, df), oracle::t_two_sided_p(t, df), 1e-12) << t << " " << df;
      EXPECT_NEAR(student_t_two_sided_p(-t, df), student_t_two_sided_p(t, df), 1e-15);
    }
  }
  for (double t : {0.3, 1.7, 5.196152422706632}) {
    EXPECT_NEAR(student_t_two_sided_p(t, 2), oracle::t2_two_sided_p(t), 1e-12);
  }
}

TEST(PairedT, WorkedExample) {
  const std::vector<double> d{0.02, 0.04, 0.03};
  const auto r = paired_t_test(d);
  EXPECT_NEAR(r.t, 5.196152422706632, 1e-9);
  EXPECT_EQ(r.df, 2u);
  EXPECT_NEAR(r.p, oracle::t2_two_sided_p(r.t), 1e-12);
  EXPECT_NEAR(r.p, 0.0350992, 1e-6);
  EXPECT_FALSE(r.degenerate_variance);
}

TEST(PairedT, ZeroAndDegenerate) {
  const auto z = paired_t_test(std::vector<double>{0, 0, 0});
  EXPECT_EQ(z.t, 0.0);
  EXPECT_EQ(z.p, 1.0);
  EXPECT_FALSE(z.degenerate_variance);
  const auto d = paired_t_test(std::vector<double>{0.1, 0.1, 0.1});
  EXPECT_EQ(d.p, 0.0);
  EXPECT_TRUE(d.degenerate_variance);
  EXPECT_THROW(paired_t_test(std::vector<double>{0.1}), std::invalid_argument);
}

TEST(PairedT, SignFollowsMean) {
  Rng rng(8);
  for (int i = 0; i < 100; ++i) {
    std::vector<double> d(5);
    for (auto& x : d) x = rng.uniform(-1, 1);
    const double mean = std::accumulate(d.begin(), d.end(), 0.0);
    EXPECT_EQ(paired_t_test(d).t > 0, mean > 0);
  }
}

TEST(KFold, PartitionDeterministicAndComplete) {
  const auto a = kfold_indices(23, 5, 11), b = kfold_indices(23, 5, 11);
  EXPECT_EQ(a, b);
  std::vector<std::size_t> all;
  for (const auto& f : a) all.insert(all.end(), f.begin(), f.end());
  std::sort(all.begin(), all.end());
  std::vector<std::size_t> want(23);
  std::iota(want.begin(), want.end(), std::size_t{0});
  EXPECT_EQ(all, want);
  EXPECT_THROW(kfold_indices(3, 5, 1), std::invalid_argument);
  EXPECT_THROW(kfold_indices(10, 1, 1), std::invalid_argument);
}

TEST(KFold, CompareAndReport) {
  const auto [X, y] = blobs(200, 1.0, 5);
  ElmConfig ec;
  ec.input_dim = 2;
  ec.hidden_count = 20;
  const auto rep = kfold_compare(X, y, 5, ec, BaselineConfig{}, 3);
  ASSERT_EQ(rep.elm.size(), 5u);
  ASSERT_EQ(rep.baseline.size(), 5u);
  EXPECT_GT(rep.speed_ratio, 0.0);
  for (const auto& f : rep.elm) {
    EXPECT_GE(f.accuracy, 0.0);
    EXPECT_LE(f.accuracy, 1.0);
    EXPECT_GE(f.train_seconds, 0.0);
  }
  std::ostringstream out;
  write_kfold_report(out, rep, false);
  const auto text = out.str();
  EXPECT_NE(text.find("model\tmean_acc\tmean_macro_f1\tmean_time"), std::string::npos);
  EXPECT_NE(text.find("# t\t"), std::string::npos);
  const auto again = kfold_compare(X, y, 5, ec, BaselineConfig{}, 3);
  std::ostringstream out2;
  write_kfold_report(out2, again, false);
  EXPECT_EQ(text, out2.str());
}

TEST(KFold, IdenticalModelsGiveZeroT) {
  // Two identical fold-accuracy series.
  const std::vector<double> d(10, 0.0);
  const auto r = paired_t_test(d);
  EXPECT_EQ(r.t, 0.0);
  EXPECT_EQ(r.p, 1.0);
}
