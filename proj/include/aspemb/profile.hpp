#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "aspemb/aspects.hpp"
#include "aspemb/cascade.hpp"
#include "aspemb/error.hpp"
#include "aspemb/rng.hpp"
#include "aspemb/text.hpp"

namespace aspemb {

struct CompanyInfo {
  std::string company;
  std::string sector;
};

// One company's aspect-sentiment vector. Dimension i is the mean score of
// catalog aspect i over every mention in the company's reviews; dimensions
// without support hold 0.0.
struct CompanyEmbedding {
  std::string company;
  std::string sector;
  std::vector<double> vector;
  std::vector<std::size_t> support;
};

// Output is sorted by company name.
inline std::vector<CompanyEmbedding> build_embeddings(const std::vector<AspectScore>& scores,
                                                      const std::map<std::string, CompanyInfo>& company_of,
                                                      const AspectCatalog& catalog) {
  const auto n = catalog.size();
  std::map<std::string, CompanyEmbedding> by_company;
  std::map<std::string, std::vector<double>> sums;
  for (const auto& s : scores) {
    const auto it = company_of.find(s.mention.doc_id);
    if (it == company_of.end()) throw SchemaError("build_embeddings: unknown doc '" + s.mention.doc_id + "'");
    const auto dim = catalog.index_of(s.mention.aspect_name);
    if (!dim) throw SchemaError("build_embeddings: aspect '" + s.mention.aspect_name + "' not in catalog");
    auto [e, fresh] = by_company.try_emplace(it->second.company);
    if (fresh) {
      e->second.company = it->second.company;
      e->second.sector = it->second.sector;
      e->second.vector.assign(n, 0.0);
      e->second.support.assign(n, 0);
      sums[it->second.company].assign(n, 0.0);
    }
    sums[it->second.company][*dim] += s.score;
    ++e->second.support[*dim];
  }
  std::vector<CompanyEmbedding> out;
  for (auto& [name, e] : by_company) {
    const auto& sum = sums[name];
    for (std::size_t i = 0; i < n; ++i) {
      e.vector[i] = e.support[i] ? sum[i] / static_cast<double>(e.support[i]) : 0.0;
    }
    out.push_back(std::move(e));
  }
  return out;
}

inline double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ShapeError("cosine: length mismatch");
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (aa == 0.0 || bb == 0.0) throw DomainError("cosine: undefined similarity for a zero vector");
  return ab / (std::sqrt(aa) * std::sqrt(bb));
}

enum class RankDirection { Best, Worst };

struct RankedCompany {
  std::string company;
  std::string sector;
  double score = 0.0;
  std::size_t support = 0;
};

// Sorted by the aspect's dimension (descending for Best, ascending for
// Worst); ties go to the lexicographically smaller company name.
inline std::vector<RankedCompany> rank_by_aspect(const std::vector<CompanyEmbedding>& embeddings,
                                                 const AspectCatalog& catalog, const std::string& aspect,
                                                 const std::optional<std::string>& sector, std::size_t top_k,
                                                 RankDirection direction) {
  const auto dim = catalog.index_of(aspect);
  if (!dim) throw SchemaError("rank_by_aspect: unknown aspect '" + aspect + "'");
  std::vector<RankedCompany> out;
  for (const auto& e : embeddings) {
    if (sector && e.sector != *sector) continue;
    out.push_back({e.company, e.sector, e.vector.at(*dim), e.support.at(*dim)});
  }
  std::sort(out.begin(), out.end(), [direction](const RankedCompany& a, const RankedCompany& b) {
    if (a.score != b.score) return direction == RankDirection::Best ? a.score > b.score : a.score < b.score;
    return a.company < b.company;
  });
  if (out.size() > top_k) out.resize(top_k);
  return out;
}

struct SimilarityRow {
  std::string first;
  std::string second;
  double cosine = 0.0;
};

struct SimilarityReport {
  std::vector<SimilarityRow> rows;
  std::vector<std::string> warnings;
};

namespace detail {

inline bool is_zero(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

}  // namespace detail

// All unordered pairs in embedding order, or exactly the requested pairs.
// Zero-vector companies are skipped and named in `warnings`.
inline SimilarityReport similarity_report(
    const std::vector<CompanyEmbedding>& embeddings,
    const std::optional<std::vector<std::pair<std::string, std::string>>>& pairs = std::nullopt) {
  if (embeddings.size() < 2) throw std::invalid_argument("similarity_report: need at least two embeddings");
  SimilarityReport rep;
  std::map<std::string, const CompanyEmbedding*> by_name;
  for (const auto& e : embeddings) {
    by_name[e.company] = &e;
    if (detail::is_zero(e.vector)) rep.warnings.push_back("zero vector excluded: " + e.company);
  }
  auto row = [&](const CompanyEmbedding& a, const CompanyEmbedding& b) {
    if (detail::is_zero(a.vector) || detail::is_zero(b.vector)) return;
    rep.rows.push_back({a.company, b.company, cosine(a.vector, b.vector)});
  };
  if (pairs) {
    for (const auto& [x, y] : *pairs) {
      const auto ix = by_name.find(x), iy = by_name.find(y);
      if (ix == by_name.end() || iy == by_name.end()) {
        throw SchemaError("similarity_report: unknown company in pair (" + x + ", " + y + ")");
      }
      row(*ix->second, *iy->second);
    }
  } else {
    for (std::size_t i = 0; i < embeddings.size(); ++i) {
      for (std::size_t j = i + 1; j < embeddings.size(); ++j) row(embeddings[i], embeddings[j]);
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Principal-component projection

struct ProjectedCompany {
  std::string company;
  std::string sector;
  double x = 0.0;
  double y = 0.0;
};

struct Projection {
  std::vector<ProjectedCompany> points;
  Eigen::Vector2d eigenvalues = Eigen::Vector2d::Zero();
  Eigen::MatrixXd components;  // dims x 2
  double total_variance = 0.0;
  double captured_ratio() const { return total_variance > 0 ? eigenvalues.sum() / total_variance : 0.0; }
};

// Dominant eigenpair of a symmetric PSD matrix by power iteration, kept
// orthogonal to `against`.
inline std::pair<double, Eigen::VectorXd> power_iteration(const Eigen::MatrixXd& A, const Eigen::MatrixXd& against,
                                                         std::size_t max_iter = 200000, double tol = 1e-14) {
  const auto n = A.rows();
  Rng rng(0x9e3779b97f4a7c15ULL);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.uniform(-1.0, 1.0);
  auto orthonormalize = [&](Eigen::VectorXd& x) {
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index c = 0; c < against.cols(); ++c) x -= against.col(c).dot(x) * against.col(c);
    }
    const double nx = x.norm();
    if (nx > 0) x /= nx;
  };
  orthonormalize(v);
  for (std::size_t it = 0; it < max_iter; ++it) {
    Eigen::VectorXd next = A * v;
    orthonormalize(next);
    if (next.norm() == 0.0) break;  // A vanishes on the remaining subspace
    const double delta = (next - v).lpNorm<Eigen::Infinity>();
    v = std::move(next);
    if (delta < tol) break;
  }
  return {v.dot(A * v), v};
}

// Mean-centres, takes the top two eigenvectors of the sample covariance by
// power iteration with deflation, and projects. Each component is signed so
// that its largest-magnitude entry is positive.
inline Projection project_2d(const std::vector<CompanyEmbedding>& embeddings) {
  if (embeddings.size() < 2) throw std::invalid_argument("project_2d: need at least two embeddings");
  const auto n = static_cast<Eigen::Index>(embeddings.size());
  const auto d = static_cast<Eigen::Index>(embeddings.front().vector.size());
  Eigen::MatrixXd X(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& v = embeddings[static_cast<std::size_t>(i)].vector;
    if (static_cast<Eigen::Index>(v.size()) != d) throw ShapeError("project_2d: ragged embeddings");
    for (Eigen::Index k = 0; k < d; ++k) X(i, k) = v[static_cast<std::size_t>(k)];
  }
  const Eigen::RowVectorXd mean = X.colwise().mean();
  X.rowwise() -= mean;
  Eigen::MatrixXd cov = (X.transpose() * X) / static_cast<double>(n - 1);
  Projection p;
  p.total_variance = cov.trace();
  if (!(p.total_variance > 0.0)) throw DomainError("project_2d: zero variance");

  p.components = Eigen::MatrixXd::Zero(d, 2);
  Eigen::MatrixXd deflated = cov;
  for (int c = 0; c < 2 && c < d; ++c) {
    auto [lambda, v] = power_iteration(deflated, p.components.leftCols(c));
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0) v = -v;
    p.components.col(c) = v;
    p.eigenvalues(c) = lambda;
    deflated -= lambda * v * v.transpose();
  }
  const Eigen::MatrixXd coords = X * p.components;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& e = embeddings[static_cast<std::size_t>(i)];
    p.points.push_back({e.company, e.sector, coords(i, 0), coords(i, 1)});
  }
  return p;
}

// ---------------------------------------------------------------------------
// TSV export

inline void write_embeddings(std::ostream& out, const std::vector<CompanyEmbedding>& embeddings,
                             const AspectCatalog& catalog) {
  out << "company\tsector";
  for (const auto& a : catalog.aspects()) out << '\t' << a.name;
  out << '\n';
  for (const auto& e : embeddings) {
    out << e.company << '\t' << e.sector;
    for (double v : e.vector) out << '\t' << format_real(v);
    out << '\n';
  }
}

// Support counts in the same layout as the embeddings file.
inline void write_support(std::ostream& out, const std::vector<CompanyEmbedding>& embeddings,
                          const AspectCatalog& catalog) {
  out << "company\tsector";
  for (const auto& a : catalog.aspects()) out << '\t' << a.name;
  out << '\n';
  for (const auto& e : embeddings) {
    out << e.company << '\t' << e.sector;
    for (auto s : e.support) out << '\t' << s;
    out << '\n';
  }
}

// Reads an embeddings TSV (and optionally its support TSV). The header must
// list the catalog's aspect names in order.
inline std::vector<CompanyEmbedding> read_embeddings(const std::string& path, const AspectCatalog& catalog,
                                                     const std::string& support_path = {}) {
  auto read_table = [&](const std::string& p) {
    std::ifstream in(p);
    if (!in) throw IoError("cannot open " + p);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      std::vector<std::string> row;
      for (auto f : split_char(line, '\t')) row.emplace_back(f);
      if (row.size() != catalog.size() + 2) throw ParseError(p, lineno, "wrong column count");
      if (rows.empty()) {
        for (std::size_t i = 0; i < catalog.size(); ++i) {
          if (row[i + 2] != catalog[i].name) throw ParseError(p, lineno, "header does not match catalog order");
        }
      }
      rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError(p, 1, "missing header");
    return rows;
  };
  const auto rows = read_table(path);
  std::vector<CompanyEmbedding> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    CompanyEmbedding e;
    e.company = rows[r][0];
    e.sector = rows[r][1];
    for (std::size_t i = 0; i < catalog.size(); ++i) {
      const auto v = parse_real(rows[r][i + 2]);
      if (!v) throw ParseError(path, r + 1, "bad real '" + rows[r][i + 2] + "'");
      e.vector.push_back(*v);
    }
    e.support.assign(catalog.size(), 0);
    out.push_back(std::move(e));
  }
  if (!support_path.empty()) {
    const auto srows = read_table(support_path);
    if (srows.size() != rows.size()) throw SchemaError("support table does not match embeddings");
    for (std::size_t r = 1; r < srows.size(); ++r) {
      if (srows[r][0] != out[r - 1].company) throw SchemaError("support table company order differs");
      for (std::size_t i = 0; i < catalog.size(); ++i) out[r - 1].support[i] = std::stoull(srows[r][i + 2]);
    }
  }
  return out;
}

}  // namespace aspemb
