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

// Feature-weight analysis over trained models.

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "pkddi/classifiers.hpp"
#include "pkddi/featurizer.hpp"

namespace pkddi {

struct RankedFeature {
  std::string key;
  double weight = 0.0;
  double standardized = 0.0;  // NaN when no training spread is known
};

struct FeatureRanking {
  std::vector<RankedFeature> relevant_top;    // weight > 0, descending
  std::vector<RankedFeature> irrelevant_top;  // weight < 0, ascending
};

// Text and count columns together; count columns use the key
// "count:<resource>". Equal weights are ordered by key.
FeatureRanking top_features(const TrainedModel& model, size_t k);

// w_i * sd_i over the combined columns, sd the (n - 1) standard deviation of
// the matrix the model was trained on. Zero spread gives 0.
Eigen::VectorXd column_sd(const FeatureMatrix& train);
Eigen::VectorXd standardized_coefficients(const TrainedModel& model, const FeatureMatrix& train);

// Configurations x features, aligned on the keys every model shares.
struct WeightPanel {
  std::vector<std::string> rows;
  std::vector<std::string> keys;
  Eigen::MatrixXd values;
};

// `coefficients[i]` (combined columns of models[i]) defaults to the raw
// weights when empty.
WeightPanel make_weight_panel(std::span<const std::string> names, std::span<const TrainedModel> models,
                              std::span<const Eigen::VectorXd> coefficients = {});

struct WeightPca {
  Eigen::VectorXd explained_ratio;  // every non-zero component; sums to 1 unless the panel has no spread
  Eigen::MatrixXd loadings;         // keys x k
  Eigen::MatrixXd projections;      // rows x k
};

// Components beyond the panel's rank are returned as zero columns. Throws
// ConfigError when k >= rows or k < 1.
WeightPca weight_pca(const WeightPanel& panel, int k);

void write_top_features_tsv(std::ostream& out, const FeatureRanking& ranking);
void write_projections_tsv(std::ostream& out, const WeightPanel& panel, const WeightPca& pca);
void write_loadings_tsv(std::ostream& out, const WeightPanel& panel, const WeightPca& pca);

}  // namespace pkddi
