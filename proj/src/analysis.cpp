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

#include "pkddi/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>

#include <Eigen/SVD>

#include "pkddi/error.hpp"
#include "pkddi/transforms.hpp"

namespace pkddi {
namespace {

std::vector<std::string> combined_keys(const TrainedModel& model) {
  std::vector<std::string> keys = model.feature_keys;
  for (const auto& r : model.resources) keys.push_back("count:" + r);
  return keys;
}

}  // namespace

FeatureRanking top_features(const TrainedModel& model, size_t k) {
  const std::vector<std::string> keys = combined_keys(model);
  const Eigen::VectorXd w = combined_weights(model);
  const bool have_sd = model.column_sd.size() == w.size();
  std::vector<RankedFeature> pos;
  std::vector<RankedFeature> neg;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    RankedFeature f{keys[static_cast<size_t>(i)], w(i),
                    have_sd ? w(i) * model.column_sd(i) : std::numeric_limits<double>::quiet_NaN()};
    if (w(i) > 0.0) pos.push_back(std::move(f));
    else if (w(i) < 0.0) neg.push_back(std::move(f));
  }
  auto take = [k](std::vector<RankedFeature>& v, auto better) {
    const size_t m = std::min(k, v.size());
    std::partial_sort(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m), v.end(), better);
    v.resize(m);
  };
  take(pos, [](const RankedFeature& a, const RankedFeature& b) {
    return a.weight != b.weight ? a.weight > b.weight : a.key < b.key;
  });
  take(neg, [](const RankedFeature& a, const RankedFeature& b) {
    return a.weight != b.weight ? a.weight < b.weight : a.key < b.key;
  });
  return {std::move(pos), std::move(neg)};
}

Eigen::VectorXd column_sd(const FeatureMatrix& train) {
  const SparseMatrix x = train.combined();
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (SparseMatrix::InnerIterator it(x, r); it; ++it) mean(it.col()) += it.value();
  }
  if (n > 0) mean /= static_cast<double>(n);
  Eigen::VectorXd ss = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd nnz = Eigen::VectorXd::Zero(d);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (SparseMatrix::InnerIterator it(x, r); it; ++it) {
      const double dev = it.value() - mean(it.col());
      ss(it.col()) += dev * dev;
      nnz(it.col()) += 1.0;
    }
  }
  Eigen::VectorXd sd(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const double total = ss(j) + (static_cast<double>(n) - nnz(j)) * mean(j) * mean(j);
    sd(j) = n > 1 ? std::sqrt(total / static_cast<double>(n - 1)) : 0.0;
  }
  return sd;
}

Eigen::VectorXd standardized_coefficients(const TrainedModel& model, const FeatureMatrix& train) {
  const Eigen::VectorXd sd = column_sd(train);
  if (sd.size() != model.columns()) {
    throw ConfigError("standardized_coefficients: model has " + std::to_string(model.columns()) +
                      " columns, training matrix " + std::to_string(sd.size()));
  }
  return combined_weights(model).cwiseProduct(sd);
}

WeightPanel make_weight_panel(std::span<const std::string> names, std::span<const TrainedModel> models,
                              std::span<const Eigen::VectorXd> coefficients) {
  if (names.size() != models.size()) throw ConfigError("weight panel: names and models differ in length");
  if (!coefficients.empty() && coefficients.size() != models.size()) {
    throw ConfigError("weight panel: one coefficient vector per model expected");
  }
  std::vector<std::map<std::string, double>> maps(models.size());
  for (size_t m = 0; m < models.size(); ++m) {
    const std::vector<std::string> keys = combined_keys(models[m]);
    const Eigen::VectorXd w = coefficients.empty() ? combined_weights(models[m]) : coefficients[m];
    if (w.size() != static_cast<Eigen::Index>(keys.size())) throw ConfigError("weight panel: coefficient length mismatch");
    for (size_t i = 0; i < keys.size(); ++i) maps[m][keys[i]] = w(static_cast<Eigen::Index>(i));
  }
  WeightPanel panel;
  panel.rows.assign(names.begin(), names.end());
  if (!maps.empty()) {
    for (const auto& [key, value] : maps[0]) {
      bool shared = true;
      for (size_t m = 1; m < maps.size() && shared; ++m) shared = maps[m].count(key) > 0;
      if (shared) panel.keys.push_back(key);
    }
  }
  panel.values.resize(static_cast<Eigen::Index>(models.size()), static_cast<Eigen::Index>(panel.keys.size()));
  for (size_t m = 0; m < maps.size(); ++m) {
    for (size_t k = 0; k < panel.keys.size(); ++k) {
      panel.values(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k)) = maps[m].at(panel.keys[k]);
    }
  }
  return panel;
}

WeightPca weight_pca(const WeightPanel& panel, int k) {
  const Eigen::Index rows = panel.values.rows();
  const Eigen::Index cols = panel.values.cols();
  if (rows < 2) throw ConfigError("weight PCA needs at least 2 configurations");
  if (k < 1 || k >= rows) {
    throw ConfigError("weight PCA: k=" + std::to_string(k) + " must lie in [1, configurations - 1]");
  }
  if (cols == 0) throw ConfigError("weight PCA: the models share no features");

  // Rank of the centered panel decides how many components exist at all.
  Eigen::MatrixXd centered = panel.values;
  centered.rowwise() -= centered.colwise().mean();
  const Eigen::VectorXd sv = Eigen::BDCSVD<Eigen::MatrixXd>(centered).singularValues();
  const PcaOptions options{PcaRoute::kDenseSvd, 1e-10};
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > options.rank_tolerance * sv(0)) ++rank;

  WeightPca out;
  out.loadings = Eigen::MatrixXd::Zero(cols, k);
  out.projections = Eigen::MatrixXd::Zero(rows, k);
  out.explained_ratio = Eigen::VectorXd::Zero(rank);
  if (rank == 0) return out;

  FeatureMatrix m;
  m.row_ids = panel.rows;
  m.feature_keys = panel.keys;
  m.text = panel.values.sparseView();
  const int used = static_cast<int>(std::min<Eigen::Index>(k, rank));
  FittedTransform t = fit_pca(m, used, options);
  const FeatureMatrix projected = project(m, t);
  out.loadings.leftCols(used) = *t.pca_basis;
  out.projections.leftCols(used) = Eigen::MatrixXd(projected.text);
  out.explained_ratio = t.explained_variance / t.explained_variance.sum();
  return out;
}

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

void write_top_features_tsv(std::ostream& out, const FeatureRanking& ranking) {
  out << "direction\trank\tkey\tweight\tstandardized_weight\n";
  for (size_t i = 0; i < ranking.relevant_top.size(); ++i) {
    const auto& f = ranking.relevant_top[i];
    out << "relevant\t" << i + 1 << '\t' << f.key << '\t' << num(f.weight) << '\t' << num(f.standardized) << '\n';
  }
  for (size_t i = 0; i < ranking.irrelevant_top.size(); ++i) {
    const auto& f = ranking.irrelevant_top[i];
    out << "irrelevant\t" << i + 1 << '\t' << f.key << '\t' << num(f.weight) << '\t' << num(f.standardized) << '\n';
  }
}

void write_projections_tsv(std::ostream& out, const WeightPanel& panel, const WeightPca& pca) {
  out << "config";
  for (Eigen::Index c = 0; c < pca.projections.cols(); ++c) out << "\tpc" << c + 1;
  out << '\n';
  for (Eigen::Index r = 0; r < pca.projections.rows(); ++r) {
    out << panel.rows[static_cast<size_t>(r)];
    for (Eigen::Index c = 0; c < pca.projections.cols(); ++c) out << '\t' << num(pca.projections(r, c));
    out << '\n';
  }
  out << "explained_variance_ratio";
  for (Eigen::Index c = 0; c < pca.projections.cols(); ++c) {
    out << '\t' << num(c < pca.explained_ratio.size() ? pca.explained_ratio(c) : 0.0);
  }
  out << '\n';
}

void write_loadings_tsv(std::ostream& out, const WeightPanel& panel, const WeightPca& pca) {
  out << "key";
  for (Eigen::Index c = 0; c < pca.loadings.cols(); ++c) out << "\tpc" << c + 1;
  out << '\n';
  for (Eigen::Index r = 0; r < pca.loadings.rows(); ++r) {
    out << panel.keys[static_cast<size_t>(r)];
    for (Eigen::Index c = 0; c < pca.loadings.cols(); ++c) out << '\t' << num(pca.loadings(r, c));
    out << '\n';
  }
}

}  // namespace pkddi
