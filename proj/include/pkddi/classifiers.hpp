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

// Six linear classifiers behind one contract: train() returns a TrainedModel
// whose score is w . x_text + v . x_counts + b, and predict() thresholds the
// score at 0 (exactly 0 is Irrelevant).

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "pkddi/corpus.hpp"
#include "pkddi/featurizer.hpp"

namespace pkddi {

enum class ClassifierKind { kVtt, kNaiveBayes, kDlda, kLda, kLogreg, kSvm };

inline constexpr ClassifierKind kAllClassifiers[] = {ClassifierKind::kVtt,  ClassifierKind::kNaiveBayes,
                                                     ClassifierKind::kDlda, ClassifierKind::kLda,
                                                     ClassifierKind::kLogreg, ClassifierKind::kSvm};

// Short names used in configs and files: vtt, nb, dlda, lda, logreg, svm.
std::string_view classifier_name(ClassifierKind kind);
// Names used in summary tables: VTT, Naive Bayes, dLDA, LDA, Log Reg, SVM.
std::string_view classifier_display_name(ClassifierKind kind);
std::optional<ClassifierKind> parse_classifier(std::string_view name);

// One grid point. Single value for nb (alpha), dlda/lda (shrink),
// logreg/svm (c); one beta per count resource for vtt (empty without NER).
using Hyperparams = std::vector<double>;

std::string format_hyperparams(const Hyperparams& h);

struct TrainedModel {
  ClassifierKind kind = ClassifierKind::kLda;
  Hyperparams hyperparams;
  uint64_t vocabulary_hash = 0;
  std::vector<std::string> feature_keys;  // text columns
  Eigen::VectorXd weights;                // text columns
  double bias = 0.0;
  std::vector<std::string> resources;     // count columns
  Eigen::VectorXd ner_weights;            // hyperplane coefficients of the count columns
  Eigen::VectorXd ner_beta;               // vtt only
  std::vector<std::string> warnings;      // e.g. iteration caps reached
  // Standard deviation of each combined column in the training matrix; set
  // by callers that want standardized coefficients later, empty otherwise.
  Eigen::VectorXd column_sd;

  Eigen::Index columns() const { return weights.size() + ner_weights.size(); }
};

// Class-conditional occurrence probabilities of binary features.
struct ClassStats {
  Eigen::VectorXd p;  // Relevant
  Eigen::VectorXd n;  // Irrelevant
};

ClassStats class_stats(const FeatureMatrix& m, std::span<const Label> labels);

// atan(p/n) - pi/4 with the one-sided limits pi/4 (n = 0 < p), -pi/4
// (p = 0 < n) and 0 (p = n = 0).
double vtt_angle(double p, double n);
// sum_i phi_i (p_i + n_i) / 2
double vtt_threshold(const Eigen::VectorXd& phi, const ClassStats& stats);

TrainedModel vtt_train(const FeatureMatrix& m, std::span<const Label> labels, const Hyperparams& beta);
TrainedModel nb_train(const FeatureMatrix& m, std::span<const Label> labels, double alpha);
TrainedModel dlda_train(const FeatureMatrix& m, std::span<const Label> labels, double shrink);

struct LdaOptions {
  double rank_tolerance = 1e-10;  // singular values below tol * max are dropped
};
TrainedModel lda_train(const FeatureMatrix& m, std::span<const Label> labels, double shrink,
                       const LdaOptions& options = {});

struct SolverOptions {
  double gradient_tolerance = 1e-6;  // logreg: stop at ||grad|| <= tol
  int newton_iterations = 200;
  double gap_tolerance = 1e-6;       // svm: stop at duality gap <= tol * primal
  int64_t smo_iterations = 1000000;
};
TrainedModel logreg_train(const FeatureMatrix& m, std::span<const Label> labels, double c,
                          const SolverOptions& options = {});
TrainedModel svm_train(const FeatureMatrix& m, std::span<const Label> labels, double c,
                       const SolverOptions& options = {});

// Objectives minimised by the two convex solvers, evaluated at (w, b) over
// the combined text + count columns.
double logreg_objective(const FeatureMatrix& m, std::span<const Label> labels, const Eigen::VectorXd& w,
                        double b, double c);
double svm_objective(const FeatureMatrix& m, std::span<const Label> labels, const Eigen::VectorXd& w,
                     double b, double c);
// Model weights as one vector over the combined columns.
Eigen::VectorXd combined_weights(const TrainedModel& model);

TrainedModel train(ClassifierKind kind, const FeatureMatrix& m, std::span<const Label> labels,
                   const Hyperparams& h);

// Trains every grid point on the same data, sharing decompositions and warm
// starts. A failing grid point yields an error message instead of a model.
struct PathEntry {
  std::optional<TrainedModel> model;
  std::string error;
};
std::vector<PathEntry> train_path(ClassifierKind kind, const FeatureMatrix& m, std::span<const Label> labels,
                                  std::span<const Hyperparams> grid);

// Default grids, ascending. vtt takes the cartesian product of the beta set
// over `resources` count columns.
std::vector<Hyperparams> default_grid(ClassifierKind kind, size_t resources);

// Throws ConfigError when the classifier cannot take this input (non-binary
// text for vtt/nb, missing class, wrong hyperparameter arity or range).
void check_trainable(ClassifierKind kind, const FeatureMatrix& m, std::span<const Label> labels,
                     const Hyperparams& h);

Eigen::VectorXd score(const TrainedModel& model, const FeatureMatrix& m);
double score(const TrainedModel& model, const Eigen::VectorXd& text, const Eigen::VectorXd& counts = {});
Label predict(double score);
std::vector<Label> predict(const TrainedModel& model, const FeatureMatrix& m);

void write_model(std::ostream& out, const TrainedModel& model);
TrainedModel read_model(std::istream& in);

}  // namespace pkddi
