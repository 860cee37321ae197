// Copyright 2026 The pkddi Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pkddi/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "pkddi/error.hpp"
#include "pkddi/kernels.hpp"
#include "pkddi/linalg.hpp"

namespace pkddi {
namespace {

constexpr int kStandardPcaSizes[] = {100, 200, 400, 600, 800, 1000};

std::string_view weighting_name(Weighting w) {
  switch (w) {
    case Weighting::kNone: return "none";
    case Weighting::kIdf: return "idf";
    case Weighting::kTfidf: return "tfidf";
  }
  return "none";
}

Eigen::VectorXd column_totals(const SparseMatrix& x) {
  Eigen::VectorXd totals = Eigen::VectorXd::Zero(x.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (SparseMatrix::InnerIterator it(x, r); it; ++it) totals(it.col()) += it.value();
  }
  return totals;
}

SparseMatrix dense_to_rows(const Eigen::MatrixXd& d) {
  SparseMatrix out(d.rows(), d.cols());
  out.reserve(d.size());
  for (Eigen::Index r = 0; r < d.rows(); ++r) {
    out.startVec(r);
    for (Eigen::Index c = 0; c < d.cols(); ++c) {
      if (d(r, c) != 0.0) out.insertBack(r, c) = d(r, c);
    }
  }
  out.finalize();
  return out;
}

}  // namespace

void TransformSpec::validate() const {
  if (!pca_components) return;
  const int k = *pca_components;
  if (k <= 0) throw ConfigError("PCA component count must be positive");
  if (!free_pca && std::find(std::begin(kStandardPcaSizes), std::end(kStandardPcaSizes), k) ==
                       std::end(kStandardPcaSizes)) {
    throw ConfigError("PCA component count " + std::to_string(k) +
                      " is not one of 100, 200, 400, 600, 800, 1000 (enable free PCA mode for other values)");
  }
}

std::string TransformSpec::name() const {
  std::string out;
  auto add = [&out](std::string_view part) {
    if (!out.empty()) out += '+';
    out += part;
  };
  if (weighting != Weighting::kNone) add(weighting_name(weighting));
  if (l2_normalize) add("l2");
  if (pca_components) add("pca" + std::to_string(*pca_components));
  return out.empty() ? "none" : out;
}

TransformSpec TransformSpec::parse(std::string_view text, bool free_pca) {
  TransformSpec spec;
  spec.free_pca = free_pca;
  if (text.empty() || text == "none") return spec;
  int stage = 0;  // 1 weighting, 2 l2, 3 pca
  size_t start = 0;
  while (start <= text.size()) {
    const size_t plus = text.find('+', start);
    const std::string_view part = text.substr(start, plus == std::string_view::npos ? text.npos : plus - start);
    int this_stage = 0;
    if (part == "idf" || part == "tfidf") {
      this_stage = 1;
      spec.weighting = part == "idf" ? Weighting::kIdf : Weighting::kTfidf;
    } else if (part == "l2") {
      this_stage = 2;
      spec.l2_normalize = true;
    } else if (part.starts_with("pca")) {
      this_stage = 3;
      int k = 0;
      std::istringstream in{std::string(part.substr(3))};
      if (!(in >> k) || !in.eof()) throw ConfigError("bad PCA step '" + std::string(part) + "'");
      spec.pca_components = k;
    } else {
      throw ConfigError("unknown transform step '" + std::string(part) + "'");
    }
    if (this_stage <= stage) {
      throw ConfigError("transform '" + std::string(text) +
                        "': steps must be ordered weighting, l2, pca and appear once");
    }
    stage = this_stage;
    if (plus == std::string_view::npos) break;
    start = plus + 1;
  }
  spec.validate();
  return spec;
}

Eigen::VectorXd idf_values(const Eigen::VectorXd& totals, double documents) {
  Eigen::VectorXd idf(totals.size());
  for (Eigen::Index i = 0; i < totals.size(); ++i) idf(i) = std::log(documents / (totals(i) + 1.0));
  return idf;
}

FittedTransform fit_idf(const FeatureMatrix& train) {
  FittedTransform t;
  t.spec.weighting = Weighting::kIdf;
  t.idf_values = idf_values(column_totals(train.text), static_cast<double>(train.rows()));
  return t;
}

FeatureMatrix apply_weighting(const FeatureMatrix& m, const FittedTransform& t, const TransformSpec& spec) {
  if (spec.weighting == Weighting::kNone) return m;
  if (!t.idf_values || t.idf_values->size() != m.text_columns()) {
    throw ConfigError("apply_weighting: transform has no IDF table matching " +
                      std::to_string(m.text_columns()) + " columns");
  }
  FeatureMatrix out = m;
  const Eigen::VectorXd& idf = *t.idf_values;
  for (Eigen::Index r = 0; r < out.text.rows(); ++r) {
    int64_t present = 0;
    for (SparseMatrix::InnerIterator it(out.text, r); it; ++it) {
      if (it.value() != 0.0) ++present;
    }
    const double divisor = spec.weighting == Weighting::kTfidf && present > 0 ? static_cast<double>(present) : 1.0;
    for (SparseMatrix::InnerIterator it(out.text, r); it; ++it) it.valueRef() = it.value() * idf(it.col()) / divisor;
  }
  out.text.prune(0.0);
  return out;
}

FeatureMatrix l2_normalize(const FeatureMatrix& m) {
  FeatureMatrix out = m;
  for (Eigen::Index r = 0; r < out.text.rows(); ++r) {
    double sq = 0.0;
    for (SparseMatrix::InnerIterator it(out.text, r); it; ++it) sq += it.value() * it.value();
    if (sq == 0.0) continue;
    const double norm = std::sqrt(sq);
    for (SparseMatrix::InnerIterator it(out.text, r); it; ++it) it.valueRef() = it.value() / norm;
  }
  return out;
}

FittedTransform fit_pca(const FeatureMatrix& train, int k, const PcaOptions& options) {
  const SparseMatrix& x = train.text;
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  if (k < 1 || k > std::min<Eigen::Index>(n - 1, d)) {
    throw ConfigError("PCA: k=" + std::to_string(k) + " must lie in [1, min(rows-1, columns)] = [1, " +
                      std::to_string(std::min<Eigen::Index>(n - 1, d)) + "]");
  }
  FittedTransform t;
  t.spec.pca_components = k;
  t.spec.free_pca = true;
  const Eigen::VectorXd mean = column_totals(x) / static_cast<double>(n);

  PcaRoute route = options.route;
  if (route == PcaRoute::kAuto) {
    if (static_cast<double>(n) * static_cast<double>(d) <= 4e6) {
      route = PcaRoute::kDenseSvd;
    } else {
      route = n <= d ? PcaRoute::kGram : PcaRoute::kCovariance;
    }
  }

  Eigen::VectorXd singular;
  Eigen::MatrixXd basis;
  Eigen::Index rank = 0;
  auto require_rank = [&](Eigen::Index r) {
    if (k > r) {
      throw NumericalError("PCA: requested " + std::to_string(k) + " components but the effective rank is " +
                           std::to_string(r));
    }
  };

  if (route == PcaRoute::kDenseSvd) {
    Eigen::MatrixXd centered = Eigen::MatrixXd(x);
    centered.rowwise() -= mean.transpose();
    Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
    const Eigen::VectorXd& s = svd.singularValues();
    const double cutoff = s.size() > 0 ? options.rank_tolerance * s(0) : 0.0;
    while (rank < s.size() && s(rank) > cutoff) ++rank;
    require_rank(rank);
    singular = s.head(rank);
    basis = svd.matrixV().leftCols(k);
  } else if (route == PcaRoute::kGram) {
    Eigen::MatrixXd g = kernels::gram(x);
    const Eigen::VectorXd r = kernels::multiply(x, mean);
    const double mm = mean.squaredNorm();
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i < n; ++i) g(i, j) += mm - r(i) - r(j);
    }
    const SymmetricEigen eig = symmetric_eigen(std::move(g));
    rank = eigen_rank(eig.values, options.rank_tolerance);
    require_rank(rank);
    singular = eig.values.head(rank).cwiseSqrt();
    // V = Xc^T U S^-1, then re-orthonormalised.
    const Eigen::MatrixXd u = eig.vectors.leftCols(k);
    const SparseMatrix xt = x.transpose();
    Eigen::MatrixXd v = kernels::multiply_dense(xt, u);
    v -= mean * u.colwise().sum();
    for (int c = 0; c < k; ++c) v.col(c) /= singular(c);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(v);
    basis = qr.householderQ() * Eigen::MatrixXd::Identity(d, k);
    for (int c = 0; c < k; ++c) {
      if (basis.col(c).dot(v.col(c)) < 0.0) basis.col(c) *= -1.0;
    }
  } else {
    Eigen::MatrixXd c = kernels::cross_product(x);
    c.noalias() -= static_cast<double>(n) * mean * mean.transpose();
    const SymmetricEigen eig = symmetric_eigen(std::move(c));
    rank = eigen_rank(eig.values, options.rank_tolerance);
    require_rank(rank);
    singular = eig.values.head(rank).cwiseSqrt();
    basis = eig.vectors.leftCols(k);
  }
  canonicalize_signs(basis);

  t.pca_mean = mean;
  t.pca_basis = std::move(basis);
  t.singular_values = singular;
  t.explained_variance = singular.array().square() / static_cast<double>(std::max<Eigen::Index>(n - 1, 1));
  t.effective_rank = rank;
  return t;
}

FeatureMatrix project(const FeatureMatrix& m, const FittedTransform& t) {
  if (!t.pca_basis || !t.pca_mean) throw ConfigError("project: transform has no PCA basis");
  const Eigen::MatrixXd& basis = *t.pca_basis;
  if (basis.rows() != m.text_columns()) {
    throw ConfigError("project: matrix has " + std::to_string(m.text_columns()) +
                      " text columns, basis expects " + std::to_string(basis.rows()));
  }
  Eigen::MatrixXd projected = kernels::multiply_dense(m.text, basis);
  const Eigen::RowVectorXd offset = t.pca_mean->transpose() * basis;
  projected.rowwise() -= offset;

  FeatureMatrix out;
  out.row_ids = m.row_ids;
  out.counts = m.counts;
  for (Eigen::Index c = 0; c < basis.cols(); ++c) out.feature_keys.push_back("pc" + std::to_string(c + 1));
  out.text = dense_to_rows(projected);
  return out;
}

FittedTransform fit_transform(const FeatureMatrix& train, const TransformSpec& spec, const PcaOptions& options) {
  spec.validate();
  FittedTransform fitted;
  fitted.spec = spec;
  FeatureMatrix current = train;
  if (spec.weighting != Weighting::kNone) {
    fitted.idf_values = fit_idf(train).idf_values;
    current = apply_weighting(current, fitted, spec);
  }
  if (spec.l2_normalize) current = l2_normalize(current);
  if (spec.pca_components) {
    FittedTransform pca = fit_pca(current, *spec.pca_components, options);
    fitted.pca_mean = std::move(pca.pca_mean);
    fitted.pca_basis = std::move(pca.pca_basis);
    fitted.singular_values = std::move(pca.singular_values);
    fitted.explained_variance = std::move(pca.explained_variance);
    fitted.effective_rank = pca.effective_rank;
  }
  return fitted;
}

FeatureMatrix apply_transform(const FeatureMatrix& m, const FittedTransform& t) {
  FeatureMatrix current = apply_weighting(m, t, t.spec);
  if (t.spec.l2_normalize) current = l2_normalize(current);
  if (t.spec.pca_components) current = project(current, t);
  return current;
}

namespace {

void write_vector(std::ostream& out, std::string_view tag, const Eigen::VectorXd& v) {
  out << tag << ' ' << v.size();
  for (Eigen::Index i = 0; i < v.size(); ++i) out << ' ' << v(i);
  out << '\n';
}

Eigen::VectorXd read_vector(std::istream& in, std::string_view tag) {
  std::string word;
  Eigen::Index n = 0;
  if (!(in >> word) || word != tag || !(in >> n) || n < 0) {
    throw ParseError("transform file: expected '" + std::string(tag) + "'", -1);
  }
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(in >> v(i))) throw ParseError("transform file: truncated '" + std::string(tag) + "'", -1);
  }
  return v;
}

}  // namespace

void write_transform(std::ostream& out, const FittedTransform& t) {
  const auto old_precision = out.precision(17);
  out << "pkddi-transform 1\n";
  out << "spec " << t.spec.name() << ' ' << (t.spec.free_pca ? 1 : 0) << '\n';
  out << "rank " << t.effective_rank << '\n';
  write_vector(out, "idf", t.idf_values.value_or(Eigen::VectorXd()));
  write_vector(out, "mean", t.pca_mean.value_or(Eigen::VectorXd()));
  write_vector(out, "singular", t.singular_values);
  write_vector(out, "explained", t.explained_variance);
  const Eigen::MatrixXd basis = t.pca_basis.value_or(Eigen::MatrixXd());
  out << "basis " << basis.rows() << ' ' << basis.cols() << '\n';
  for (Eigen::Index r = 0; r < basis.rows(); ++r) {
    for (Eigen::Index c = 0; c < basis.cols(); ++c) out << (c ? " " : "") << basis(r, c);
    out << '\n';
  }
  out.precision(old_precision);
}

FittedTransform read_transform(std::istream& in) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "pkddi-transform" || version != 1) {
    throw ParseError("not a pkddi-transform v1 file", 1);
  }
  std::string word;
  std::string name;
  int free = 0;
  if (!(in >> word >> name >> free) || word != "spec") throw ParseError("transform file: expected 'spec'", 2);
  FittedTransform t;
  t.spec = TransformSpec::parse(name, free != 0);
  if (!(in >> word >> t.effective_rank) || word != "rank") throw ParseError("transform file: expected 'rank'", 3);
  Eigen::VectorXd idf = read_vector(in, "idf");
  Eigen::VectorXd mean = read_vector(in, "mean");
  t.singular_values = read_vector(in, "singular");
  t.explained_variance = read_vector(in, "explained");
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  if (!(in >> word >> rows >> cols) || word != "basis") throw ParseError("transform file: expected 'basis'", -1);
  Eigen::MatrixXd basis(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      if (!(in >> basis(r, c))) throw ParseError("transform file: truncated basis", -1);
    }
  }
  if (t.spec.weighting != Weighting::kNone) t.idf_values = std::move(idf);
  if (t.spec.pca_components) {
    t.pca_mean = std::move(mean);
    t.pca_basis = std::move(basis);
  }
  return t;
}

}  // namespace pkddi
