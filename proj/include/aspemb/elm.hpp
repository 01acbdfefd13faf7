#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "json.hpp"

#include "aspemb/error.hpp"
#include "aspemb/rng.hpp"

namespace aspemb {

// Identity exists for linear-reduction fixtures (H = X W^T + b).
enum class Activation { Sigmoid, Tanh, Identity };

inline std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::Sigmoid: return "sigmoid";
    case Activation::Tanh: return "tanh";
    case Activation::Identity: return "identity";
  }
  return "sigmoid";
}

inline std::optional<Activation> parse_activation(std::string_view s) {
  if (s == "sigmoid") return Activation::Sigmoid;
  if (s == "tanh") return Activation::Tanh;
  if (s == "identity") return Activation::Identity;
  return std::nullopt;
}

inline double activate(Activation a, double x) {
  switch (a) {
    case Activation::Sigmoid: return 1.0 / (1.0 + std::exp(-x));
    case Activation::Tanh: return std::tanh(x);
    case Activation::Identity: return x;
  }
  return x;
}

struct ElmConfig {
  std::size_t input_dim = 1;
  std::size_t hidden_count = 100;
  Activation activation = Activation::Sigmoid;
  double ridge = 1e-3;
  std::uint64_t seed = 1;
  double classify_threshold = 0.5;

  void validate() const {
    if (input_dim < 1 || hidden_count < 1) throw std::invalid_argument("ElmConfig: dimensions must be >= 1");
    if (!(ridge >= 0.0) || !std::isfinite(ridge)) throw std::invalid_argument("ElmConfig: ridge must be >= 0");
    if (!(classify_threshold > 0.0 && classify_threshold < 1.0)) {
      throw std::invalid_argument("ElmConfig: classify_threshold must lie in (0, 1)");
    }
  }
};

// Single-hidden-layer network whose hidden weights and biases are fixed at
// construction. Only the output weights (no output bias) are learned, in
// closed form.
class ElmModel {
 public:
  // Hidden weights and biases drawn i.i.d. uniform[-1, 1): all weights row by
  // row first, then the biases.
  explicit ElmModel(const ElmConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    const auto nh = static_cast<Eigen::Index>(cfg_.hidden_count);
    const auto m = static_cast<Eigen::Index>(cfg_.input_dim);
    Rng rng(cfg_.seed);
    hidden_weights_.resize(nh, m);
    for (Eigen::Index j = 0; j < nh; ++j) {
      for (Eigen::Index k = 0; k < m; ++k) hidden_weights_(j, k) = rng.uniform(-1.0, 1.0);
    }
    hidden_biases_.resize(nh);
    for (Eigen::Index j = 0; j < nh; ++j) hidden_biases_(j) = rng.uniform(-1.0, 1.0);
  }

  // Explicit hidden layer (fixtures, deserialization).
  ElmModel(const ElmConfig& cfg, Eigen::MatrixXd hidden_weights, Eigen::VectorXd hidden_biases)
      : cfg_(cfg), hidden_weights_(std::move(hidden_weights)), hidden_biases_(std::move(hidden_biases)) {
    cfg_.validate();
    if (hidden_weights_.rows() != static_cast<Eigen::Index>(cfg_.hidden_count) ||
        hidden_weights_.cols() != static_cast<Eigen::Index>(cfg_.input_dim) ||
        hidden_biases_.size() != static_cast<Eigen::Index>(cfg_.hidden_count)) {
      throw ShapeError("ElmModel: hidden layer shape does not match config");
    }
  }

  const ElmConfig& config() const noexcept { return cfg_; }
  const Eigen::MatrixXd& hidden_weights() const noexcept { return hidden_weights_; }
  const Eigen::VectorXd& hidden_biases() const noexcept { return hidden_biases_; }
  const std::optional<Eigen::VectorXd>& output_weights() const noexcept { return output_weights_; }
  bool fitted() const noexcept { return output_weights_.has_value(); }

  // H(i, j) = phi(w_j . x_i + b_j); X is N x m.
  Eigen::MatrixXd activation_matrix(const Eigen::MatrixXd& X) const {
    if (X.cols() != hidden_weights_.cols()) {
      throw ShapeError("activation_matrix: X has " + std::to_string(X.cols()) + " columns, expected " +
                       std::to_string(hidden_weights_.cols()));
    }
    Eigen::MatrixXd H = X * hidden_weights_.transpose();
    H.rowwise() += hidden_biases_.transpose();
    apply_activation(H);
    return H;
  }

  // ridge > 0: solve (H^T H + ridge I) w = H^T y by Cholesky.
  // ridge = 0: w = pinv(H) y, the minimum-norm least-squares solution, via a
  // complete orthogonal decomposition.
  ElmModel& fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    if (X.rows() < 1) throw ShapeError("fit: need at least one sample");
    if (y.size() != X.rows()) throw ShapeError("fit: y length does not match X rows");
    if (!X.allFinite() || !y.allFinite()) throw DomainError("fit: non-finite entries in X or y");
    const Eigen::MatrixXd H = activation_matrix(X);
    if (cfg_.ridge > 0.0) {
      const auto nh = H.cols();
      Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nh, nh);
      A.selfadjointView<Eigen::Lower>().rankUpdate(H.transpose());
      A.diagonal().array() += cfg_.ridge;
      const Eigen::VectorXd rhs = H.transpose() * y;
      Eigen::LLT<Eigen::MatrixXd, Eigen::Lower> llt(A);
      if (llt.info() != Eigen::Success) throw DomainError("fit: normal matrix not positive definite");
      output_weights_ = llt.solve(rhs);
    } else {
      Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(H);
      output_weights_ = cod.solve(y);
    }
    return *this;
  }

  // f(x) = sum_j w_j phi(w_j . x + b_j)
  double predict(const Eigen::VectorXd& x) const {
    if (!output_weights_) throw StateError("predict: model is not fitted");
    if (x.size() != hidden_weights_.cols()) throw ShapeError("predict: input dimension mismatch");
    Eigen::VectorXd z = hidden_weights_ * x + hidden_biases_;
    apply_activation(z);
    return output_weights_->dot(z);
  }

  int classify(const Eigen::VectorXd& x) const { return predict(x) >= cfg_.classify_threshold ? 1 : 0; }

  void set_output_weights(Eigen::VectorXd w) {
    if (w.size() != hidden_weights_.rows()) throw ShapeError("output weights length must equal hidden_count");
    output_weights_ = std::move(w);
  }

 private:
  // Vectorized form of activate(); agrees with it to rounding.
  template <typename Derived>
  void apply_activation(Eigen::MatrixBase<Derived>& z) const {
    switch (cfg_.activation) {
      case Activation::Sigmoid: z = (1.0 + (-z.array()).exp()).inverse().matrix(); break;
      case Activation::Tanh: z = z.array().tanh().matrix(); break;
      case Activation::Identity: break;
    }
  }

  ElmConfig cfg_;
  Eigen::MatrixXd hidden_weights_;
  Eigen::VectorXd hidden_biases_;
  std::optional<Eigen::VectorXd> output_weights_;
};

// ---------------------------------------------------------------------------
// Persistence: JSON, format_version 1; arrays row-major.

inline constexpr int kElmFormatVersion = 1;

inline void save_elm(const ElmModel& m, const std::string& path) {
  const auto& c = m.config();
  nlohmann::ordered_json j;
  j["format_version"] = kElmFormatVersion;
  j["config"] = {{"input_dim", c.input_dim},   {"hidden_count", c.hidden_count},
                 {"activation", to_string(c.activation)}, {"ridge", c.ridge},
                 {"seed", c.seed},             {"classify_threshold", c.classify_threshold}};
  std::vector<double> w;
  for (Eigen::Index r = 0; r < m.hidden_weights().rows(); ++r) {
    for (Eigen::Index k = 0; k < m.hidden_weights().cols(); ++k) w.push_back(m.hidden_weights()(r, k));
  }
  j["hidden_weights"] = w;
  j["hidden_biases"] = std::vector<double>(m.hidden_biases().data(), m.hidden_biases().data() + m.hidden_biases().size());
  if (m.fitted()) {
    const auto& o = *m.output_weights();
    j["output_weights"] = std::vector<double>(o.data(), o.data() + o.size());
  } else {
    j["output_weights"] = nullptr;
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write ELM model: " + path);
  out << j.dump() << '\n';
}

inline ElmModel load_elm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open ELM model: " + path);
  try {
    const auto j = nlohmann::json::parse(in);
    if (j.at("format_version").get<int>() != kElmFormatVersion) throw SchemaError("ELM model: unsupported format_version");
    const auto& jc = j.at("config");
    ElmConfig c;
    c.input_dim = jc.at("input_dim").get<std::size_t>();
    c.hidden_count = jc.at("hidden_count").get<std::size_t>();
    const auto act = parse_activation(jc.at("activation").get<std::string>());
    if (!act) throw SchemaError("ELM model: unknown activation");
    c.activation = *act;
    c.ridge = jc.at("ridge").get<double>();
    c.seed = jc.at("seed").get<std::uint64_t>();
    c.classify_threshold = jc.at("classify_threshold").get<double>();
    const auto w = j.at("hidden_weights").get<std::vector<double>>();
    const auto b = j.at("hidden_biases").get<std::vector<double>>();
    if (w.size() != c.hidden_count * c.input_dim || b.size() != c.hidden_count) {
      throw SchemaError("ELM model: array sizes do not match config");
    }
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    Eigen::MatrixXd W = Eigen::Map<const RowMajor>(w.data(), static_cast<Eigen::Index>(c.hidden_count),
                                                   static_cast<Eigen::Index>(c.input_dim));
    Eigen::VectorXd B = Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size()));
    ElmModel m(c, std::move(W), std::move(B));
    if (!j.at("output_weights").is_null()) {
      const auto o = j.at("output_weights").get<std::vector<double>>();
      m.set_output_weights(Eigen::Map<const Eigen::VectorXd>(o.data(), static_cast<Eigen::Index>(o.size())));
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("ELM model " + path + ": " + e.what());
  }
}

}  // namespace aspemb
