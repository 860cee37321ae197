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

#pragma once

// Feature transforms, fitted on a training split and applied to any split:
// IDF or TFIDF weighting, then optional row L2 normalization, then optional
// PCA projection. Count columns (NER/dictionary) pass through untouched.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "pkddi/featurizer.hpp"

namespace pkddi {

enum class Weighting { kNone, kIdf, kTfidf };

struct TransformSpec {
  Weighting weighting = Weighting::kNone;
  bool l2_normalize = false;
  std::optional<int> pca_components;
  // Allows any positive component count instead of the standard set
  // {100, 200, 400, 600, 800, 1000}.
  bool free_pca = false;

  bool is_identity() const { return weighting == Weighting::kNone && !l2_normalize && !pca_components; }
  void validate() const;
  // Canonical name such as "none", "tfidf+l2", "idf+l2+pca400".
  std::string name() const;
  // Inverse of name(). Steps must appear in the order weighting, l2, pca.
  static TransformSpec parse(std::string_view text, bool free_pca = false);

  bool operator==(const TransformSpec&) const = default;
};

struct FittedTransform {
  TransformSpec spec;
  std::optional<Eigen::VectorXd> idf_values;
  std::optional<Eigen::VectorXd> pca_mean;
  std::optional<Eigen::MatrixXd> pca_basis;  // text_columns x k, orthonormal columns
  Eigen::VectorXd singular_values;           // of the centered training matrix
  Eigen::VectorXd explained_variance;        // singular_value^2 / (rows - 1)
  Eigen::Index effective_rank = 0;
};

// idf(i) = ln(N / (c_i + 1)), N training documents, c_i column sum.
FittedTransform fit_idf(const FeatureMatrix& train);
Eigen::VectorXd idf_values(const Eigen::VectorXd& column_totals, double documents);

FeatureMatrix apply_weighting(const FeatureMatrix& m, const FittedTransform& t, const TransformSpec& spec);
FeatureMatrix l2_normalize(const FeatureMatrix& m);

enum class PcaRoute { kAuto, kDenseSvd, kGram, kCovariance };

struct PcaOptions {
  PcaRoute route = PcaRoute::kAuto;
  double rank_tolerance = 1e-10;  // relative to the largest singular value
};

// Mean-centered PCA of the text block. Throws ConfigError when
// k > min(rows - 1, columns) and NumericalError when k exceeds the effective
// rank (the message names the rank).
FittedTransform fit_pca(const FeatureMatrix& train, int k, const PcaOptions& options = {});
// (row - mean) * basis; dense k-column text block, count columns unchanged.
FeatureMatrix project(const FeatureMatrix& m, const FittedTransform& t);

// All three stages, in order, fitted on `train`.
FittedTransform fit_transform(const FeatureMatrix& train, const TransformSpec& spec,
                              const PcaOptions& options = {});
FeatureMatrix apply_transform(const FeatureMatrix& m, const FittedTransform& t);

void write_transform(std::ostream& out, const FittedTransform& t);
FittedTransform read_transform(std::istream& in);

}  // namespace pkddi
