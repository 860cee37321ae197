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

// Shared pieces of the classifier implementations. Not installed.

#include <span>
#include <vector>

#include "pkddi/classifiers.hpp"

namespace pkddi::detail {

// +1 for Relevant, -1 for Irrelevant.
Eigen::VectorXd signed_labels(std::span<const Label> labels);

// Model with kind, hyperparameters, keys, resources and hash filled in.
TrainedModel model_shell(ClassifierKind kind, const FeatureMatrix& m, Hyperparams h);

// Splits a weight vector over the combined columns into text and count parts.
void set_combined_weights(TrainedModel& model, const Eigen::VectorXd& w, Eigen::Index text_columns);

std::vector<PathEntry> lda_path(const FeatureMatrix& m, std::span<const Label> labels,
                                std::span<const double> shrinks, const LdaOptions& options);
std::vector<PathEntry> logreg_path(const FeatureMatrix& m, std::span<const Label> labels,
                                   std::span<const double> cs, const SolverOptions& options);
std::vector<PathEntry> svm_path(const FeatureMatrix& m, std::span<const Label> labels,
                                std::span<const double> cs, const SolverOptions& options);

}  // namespace pkddi::detail
