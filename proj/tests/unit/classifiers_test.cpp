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

#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pkddi/classifiers.hpp"
#include "pkddi/error.hpp"
#include "test_util.hpp"

namespace pkddi {
namespace {

using test::dense_matrix;
using test::labels_from;

constexpr double kQuarter = std::numbers::pi / 4.0;

TEST(Vtt, Angles) {
  EXPECT_EQ(vtt_angle(0.5, 0.5), 0.0);
  EXPECT_EQ(vtt_angle(0.1, 0.0), kQuarter);
  EXPECT_EQ(vtt_angle(0.0, 0.3), -kQuarter);
  EXPECT_EQ(vtt_angle(0.0, 0.0), 0.0);
  EXPECT_NEAR(vtt_angle(0.2, 0.1), 0.3217505543966422, 1e-15);
  EXPECT_GT(vtt_angle(0.3, 0.2), 0.0);
  EXPECT_LT(vtt_angle(0.2, 0.3), 0.0);
}

// 5 relevant, 5 irrelevant: feature 0 at rates 0.4 / 0.2, feature 1 at 0.2 / 0.2
FeatureMatrix vtt_fixture(std::vector<Label>& labels) {
  Eigen::MatrixXd x(10, 2);
  x << 1, 1,
       1, 0,
       0, 0,
       0, 0,
       0, 0,
       1, 1,
       0, 0,
       0, 0,
       0, 0,
       0, 0;
  labels = labels_from({1, 1, 1, 1, 1, 0, 0, 0, 0, 0});
  return dense_matrix(x);
}

TEST(Vtt, WeightsAndThreshold) {
  std::vector<Label> y;
  FeatureMatrix m = vtt_fixture(y);
  ClassStats s = class_stats(m, y);
  EXPECT_DOUBLE_EQ(s.p(0), 0.4);
  EXPECT_DOUBLE_EQ(s.n(0), 0.2);
  TrainedModel model = vtt_train(m, y, {});
  EXPECT_NEAR(model.weights(0), 0.321751, 1e-6);
  EXPECT_EQ(model.weights(1), 0.0);
  EXPECT_NEAR(-model.bias, 0.096525, 1e-6);
  EXPECT_NEAR(-model.bias, vtt_threshold(model.weights, s), 1e-15);
  // pseudo-document
  const Eigen::VectorXd pseudo = (s.p + s.n) / 2.0;
  EXPECT_NEAR(score(model, pseudo), 0.0, 1e-12);
}

TEST(Vtt, NerTermCancelsAtBeta) {
  std::vector<Label> y;
  FeatureMatrix m = vtt_fixture(y);
  m.counts.push_back({"i-CYPS", Eigen::VectorXd::LinSpaced(10, 0, 9)});
  TrainedModel model = vtt_train(m, y, {2.0});
  const Eigen::Vector2d x(1, 0);
  const double text_only = model.weights.dot(x) - vtt_threshold(model.weights, class_stats(m, y));
  EXPECT_NEAR(score(model, x, Eigen::VectorXd::Constant(1, 2.0)), text_only, 1e-12);
  // each extra count adds 1/beta
  EXPECT_NEAR(score(model, x, Eigen::VectorXd::Constant(1, 4.0)), text_only + 1.0, 1e-12);
  EXPECT_THROW(vtt_train(m, y, {}), ConfigError);
  EXPECT_THROW(vtt_train(m, y, {0.0}), ConfigError);
}

TEST(Vtt, SingleFeatureFlipsAtLambda) {
  Eigen::MatrixXd x(4, 1);
  x << 1, 1, 1, 0;
  auto y = labels_from({1, 1, 0, 0});
  TrainedModel model = vtt_train(dense_matrix(x), y, {});
  const double lambda = -model.bias;
  const double phi = model.weights(0);
  EXPECT_EQ(predict(score(model, Eigen::VectorXd::Constant(1, lambda / phi * 0.999))), Label::kIrrelevant);
  EXPECT_EQ(predict(score(model, Eigen::VectorXd::Constant(1, lambda / phi * 1.001))), Label::kRelevant);
}

TEST(Vtt, RejectsNonBinary) {
  Eigen::MatrixXd x(2, 1);
  x << 0.5, 1;
  EXPECT_THROW(vtt_train(dense_matrix(x), labels_from({1, 0}), {}), ConfigError);
}

TEST(NaiveBayes, PosteriorMeanWeights) {
  // feature 0: absent from all 10 relevant docs, present in 5 of 10 irrelevant
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(20, 1);
  for (int r = 10; r < 15; ++r) x(r, 0) = 1;
  std::vector<Label> y(20, Label::kIrrelevant);
  for (int r = 0; r < 10; ++r) y[r] = Label::kRelevant;
  TrainedModel m = nb_train(dense_matrix(x), y, 1.0);
  const double tr = 1.0 / 12.0;  // (0 + 1) / (10 + 2)
  const double ti = 6.0 / 12.0;
  EXPECT_NEAR(m.weights(0), std::log(tr * (1 - ti)) - std::log(ti * (1 - tr)), 1e-14);
  EXPECT_NEAR(m.bias, std::log(1 - tr) - std::log(1 - ti), 1e-14);
  EXPECT_THROW(nb_train(dense_matrix(x), y, 0.0), ConfigError);
}

TEST(NaiveBayes, MaximumLikelihoodLimit) {
  // k = m: theta -> 1 as alpha -> 0, so the weight grows without bound
  Eigen::MatrixXd x(4, 1);
  x << 1, 1, 0, 1;
  auto y = labels_from({1, 1, 0, 0});
  const double w1 = nb_train(dense_matrix(x), y, 1e-3).weights(0);
  const double w2 = nb_train(dense_matrix(x), y, 1e-6).weights(0);
  EXPECT_GT(w2, w1);
  EXPECT_GT(w1, 5.0);
}

TEST(NaiveBayes, SymmetricCaseScoresZero) {
  Eigen::MatrixXd x(4, 2);
  x << 1, 0,
       0, 1,
       1, 0,
       0, 1;
  TrainedModel m = nb_train(dense_matrix(x), labels_from({1, 1, 0, 0}), 1.0);
  Eigen::VectorXd s = score(m, dense_matrix(x));
  EXPECT_LT(s.cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Dlda, DiagonalWeights) {
  const double a1 = std::sqrt(0.5), a2 = std::sqrt(2.0);
  Eigen::MatrixXd x(4, 2);
  x << 3 + a1, 3 + a2,
       3 - a1, 3 - a2,
       2 + a1, 2 + a2,
       2 - a1, 2 - a2;
  auto y = labels_from({1, 1, 0, 0});
  TrainedModel m = dlda_train(dense_matrix(x), y, 0.0);
  EXPECT_NEAR(m.weights(0), 1.0, 1e-12);
  EXPECT_NEAR(m.weights(1), 0.25, 1e-12);
  // full shrinkage: common variance (1 + 4) / 2
  m = dlda_train(dense_matrix(x), y, 1.0);
  EXPECT_NEAR(m.weights(0), 0.4, 1e-12);
  EXPECT_NEAR(m.weights(1), 0.4, 1e-12);
}

TEST(Dlda, EqualMeansGiveZeroWeights) {
  Eigen::MatrixXd x(4, 1);
  x << 1, 3, 3, 1;
  TrainedModel m = dlda_train(dense_matrix(x), labels_from({1, 1, 0, 0}), 0.5);
  EXPECT_EQ(m.weights(0), 0.0);
  EXPECT_THROW(dlda_train(dense_matrix(Eigen::MatrixXd::Ones(4, 1)), labels_from({1, 1, 0, 0}), 0.0),
               NumericalError);
}

// Pooled within-class scatter proportional to [[2,1],[1,2]], mean difference (1,0).
FeatureMatrix lda_fixture(std::vector<Label>& y) {
  const double s = std::sqrt(1.5), t = std::sqrt(0.5);
  Eigen::MatrixXd dev(4, 2);
  dev << s, s,
         -s, -s,
         t, -t,
         -t, t;
  Eigen::MatrixXd x(8, 2);
  for (int i = 0; i < 4; ++i) {
    x.row(i) = dev.row(i) + Eigen::RowVector2d(6, 5);
    x.row(4 + i) = dev.row(i) + Eigen::RowVector2d(5, 5);
  }
  y = labels_from({1, 1, 1, 1, 0, 0, 0, 0});
  return dense_matrix(x);
}

TEST(Lda, ClosedFormDirection) {
  std::vector<Label> y;
  FeatureMatrix m = lda_fixture(y);
  TrainedModel model = lda_train(m, y, 0.0);
  const Eigen::Vector2d expected = Eigen::Vector2d(2.0 / 3.0, -1.0 / 3.0).normalized();
  EXPECT_LT((model.weights.normalized() - expected).norm(), 1e-10);

  model = lda_train(m, y, 1.0);
  EXPECT_GT(model.weights.normalized().dot(Eigen::Vector2d(1, 0)), 1 - 1e-10);
}

TEST(Lda, IsotropicScatter) {
  Eigen::MatrixXd dev(4, 2);
  dev << 1, 0,
         -1, 0,
         0, 1,
         0, -1;
  Eigen::MatrixXd x(8, 2);
  for (int i = 0; i < 4; ++i) {
    x.row(i) = dev.row(i) + Eigen::RowVector2d(3, 4);
    x.row(4 + i) = dev.row(i) + Eigen::RowVector2d(2, 2);
  }
  TrainedModel model = lda_train(dense_matrix(x), labels_from({1, 1, 1, 1, 0, 0, 0, 0}), 0.0);
  EXPECT_GT(model.weights.normalized().dot(Eigen::Vector2d(1, 2).normalized()), 1 - 1e-10);
}

TEST(Lda, DuplicatedColumnKeepsPredictions) {
  Rng rng(21);
  Eigen::MatrixXd x = test::random_gaussian(rng, 40, 4);
  std::vector<Label> y(40);
  for (int r = 0; r < 40; ++r) {
    y[r] = x(r, 0) + 0.5 * x(r, 1) + 0.3 * x(r, 3) > 0.1 ? Label::kRelevant : Label::kIrrelevant;
  }
  Eigen::MatrixXd dup(40, 5);
  dup << x, x.col(2);
  const auto a = predict(lda_train(dense_matrix(x), y, 0.0), dense_matrix(x));
  const auto b = predict(lda_train(dense_matrix(dup), y, 0.0), dense_matrix(dup));
  EXPECT_EQ(a, b);
  // the naive classifier double counts the duplicated feature
  const Eigen::VectorXd s1 = score(dlda_train(dense_matrix(x), y, 0.0), dense_matrix(x));
  const Eigen::VectorXd s2 = score(dlda_train(dense_matrix(dup), y, 0.0), dense_matrix(dup));
  EXPECT_GT((s1 - s2).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Lda, RankDeficientNeedsShrinkOrBasis) {
  // more columns than rows: the reduced basis keeps it solvable
  Rng rng(22);
  Eigen::MatrixXd x = test::random_binary(rng, 12, 40, 0.3);
  auto y = labels_from({1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0});
  const std::vector<Hyperparams> grid{{0.0}, {0.5}, {1.0}};
  auto path = train_path(ClassifierKind::kLda, dense_matrix(x), y, grid);
  ASSERT_EQ(path.size(), 3u);
  for (size_t g = 1; g < 3; ++g) {
    ASSERT_TRUE(path[g].model) << path[g].error;
    TrainedModel single = lda_train(dense_matrix(x), y, grid[g][0]);
    EXPECT_LT((single.weights - path[g].model->weights).norm(), 1e-9 * (1 + single.weights.norm()));
  }
}

oracle::Mat to_rows(const Eigen::MatrixXd& x) {
  oracle::Mat out(static_cast<size_t>(x.rows()), oracle::Vec(static_cast<size_t>(x.cols())));
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) out[r][c] = x(r, c);
  }
  return out;
}

std::vector<int> signs(const std::vector<Label>& y) {
  std::vector<int> out;
  for (Label l : y) out.push_back(l == Label::kRelevant ? 1 : -1);
  return out;
}

TEST(Logreg, FourPointOracle) {
  Eigen::MatrixXd x(4, 2);
  x << 2, 1,
       1, 2,
       -1, 0,
       0, -2;
  auto y = labels_from({1, 1, 0, 0});
  TrainedModel m = logreg_train(dense_matrix(x), y, 1.0);
  oracle::Linear o = oracle::logreg(to_rows(x), signs(y), 1.0L);
  EXPECT_NEAR(m.weights(0), static_cast<double>(o.w[0]), 1e-4);
  EXPECT_NEAR(m.weights(1), static_cast<double>(o.w[1]), 1e-4);
  EXPECT_NEAR(m.bias, static_cast<double>(o.b), 1e-4);
  EXPECT_NEAR(logreg_objective(dense_matrix(x), y, m.weights, m.bias, 1.0), static_cast<double>(o.objective),
              1e-9);
}

TEST(Logreg, MirroredDataHasZeroBias) {
  Eigen::MatrixXd x(6, 2);
  x << 1, 2,
       2, 0.5,
       0.3, 1,
       -1, -2,
       -2, -0.5,
       -0.3, -1;
  TrainedModel m = logreg_train(dense_matrix(x), labels_from({1, 1, 1, 0, 0, 0}), 10.0);
  EXPECT_NEAR(m.bias, 0.0, 1e-6);
}

TEST(Logreg, VanishingC) {
  Rng rng(23);
  Eigen::MatrixXd x = test::random_gaussian(rng, 10, 3);
  auto y = labels_from({1, 0, 1, 0, 1, 0, 1, 0, 1, 1});
  EXPECT_LT(logreg_train(dense_matrix(x), y, 1e-7).weights.norm(), 1e-5);
  EXPECT_LT(svm_train(dense_matrix(x), y, 1e-7).weights.norm(), 1e-5);
}

TEST(Svm, OneDimensionalMargin) {
  Eigen::MatrixXd x(2, 1);
  x << -1, 1;
  TrainedModel m = svm_train(dense_matrix(x), labels_from({0, 1}), 1000.0);
  EXPECT_NEAR(m.weights(0), 1.0, 1e-4);
  EXPECT_NEAR(m.bias, 0.0, 1e-4);
}

TEST(Svm, SmallFixturesMatchOracle) {
  Rng rng(24);
  for (int f = 0; f < 8; ++f) {
    const int n = 6 + f;
    Eigen::MatrixXd x = test::random_gaussian(rng, n, 3);
    std::vector<Label> y(static_cast<size_t>(n));
    for (int r = 0; r < n; ++r) {
      y[r] = r % 2 ? Label::kRelevant : Label::kIrrelevant;
      if (y[r] == Label::kRelevant) x(r, 0) += 1.0;
    }
    const double c = f % 2 ? 1.0 : 0.1;
    TrainedModel m = svm_train(dense_matrix(x), y, c);
    oracle::Linear o = oracle::svm(to_rows(x), signs(y), c);
    ASSERT_LT(o.check, 1e-12L);
    oracle::Vec w(m.weights.data(), m.weights.data() + m.weights.size());
    const auto lib = oracle::svm_objective(to_rows(x), signs(y), w, m.bias, c);
    EXPECT_LE(std::fabs(lib - o.objective), 1e-6L * o.objective) << "fixture " << f;
  }
}

TEST(Svm, DuplicatedPointsWithHalfC) {
  Rng rng(25);
  Eigen::MatrixXd x = test::random_gaussian(rng, 12, 2);
  std::vector<Label> y;
  for (int r = 0; r < 12; ++r) y.push_back(x(r, 0) + 0.3 * x(r, 1) > 0 ? Label::kRelevant : Label::kIrrelevant);
  y[0] = y[0] == Label::kRelevant ? Label::kIrrelevant : Label::kRelevant;  // not separable
  Eigen::MatrixXd xx(24, 2);
  xx << x, x;
  std::vector<Label> yy(y);
  yy.insert(yy.end(), y.begin(), y.end());
  TrainedModel a = svm_train(dense_matrix(x), y, 1.0);
  TrainedModel b = svm_train(dense_matrix(xx), yy, 0.5);
  EXPECT_LT((a.weights - b.weights).norm(), 1e-3);
}

class AllKinds : public ::testing::TestWithParam<ClassifierKind> {};

TEST_P(AllKinds, ScoreIsAffine) {
  const ClassifierKind kind = GetParam();
  Rng rng(26);
  Eigen::MatrixXd x = test::random_binary(rng, 30, 6, 0.4);
  std::vector<Label> y;
  for (int r = 0; r < 30; ++r) y.push_back(x(r, 0) + x(r, 1) >= 1 ? Label::kRelevant : Label::kIrrelevant);
  const Hyperparams h = kind == ClassifierKind::kVtt ? Hyperparams{} : default_grid(kind, 0)[2];
  TrainedModel m = train(kind, dense_matrix(x), y, h);
  const Eigen::VectorXd u = x.row(3).transpose();
  const Eigen::VectorXd v = x.row(7).transpose();
  for (double a : {0.0, 0.25, 0.5, 1.0}) {
    EXPECT_NEAR(score(m, Eigen::VectorXd(a * u + (1 - a) * v)), a * score(m, u) + (1 - a) * score(m, v), 1e-10);
  }
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(6);
  EXPECT_NEAR(score(m, Eigen::VectorXd(u + v)) + score(m, zero), score(m, u) + score(m, v), 1e-10);
  EXPECT_THROW(score(m, Eigen::VectorXd::Zero(5)), ConfigError);

  std::stringstream s;
  write_model(s, m);
  TrainedModel r = read_model(s);
  EXPECT_EQ(r.kind, kind);
  EXPECT_EQ(r.hyperparams, m.hyperparams);
  EXPECT_EQ(r.feature_keys, m.feature_keys);
  EXPECT_EQ(r.weights, m.weights);
  EXPECT_EQ(r.bias, m.bias);
}

INSTANTIATE_TEST_SUITE_P(Kinds, AllKinds, ::testing::ValuesIn(kAllClassifiers),
                         [](const auto& info) { return std::string(classifier_name(info.param)); });

TEST(Naive, ColumnPermutationPermutesWeights) {
  Rng rng(27);
  Eigen::MatrixXd x = test::random_binary(rng, 20, 5, 0.5);
  auto y = labels_from({1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 1, 1, 0, 0, 1, 0, 1, 0, 1});
  Eigen::PermutationMatrix<Eigen::Dynamic> p(5);
  p.indices() << 3, 0, 4, 1, 2;
  const Eigen::MatrixXd xp = x * p;
  for (ClassifierKind kind : {ClassifierKind::kVtt, ClassifierKind::kNaiveBayes, ClassifierKind::kDlda}) {
    const Hyperparams h = kind == ClassifierKind::kVtt ? Hyperparams{} : Hyperparams{0.5};
    const Eigen::VectorXd w = train(kind, dense_matrix(x), y, h).weights;
    const Eigen::VectorXd wp = train(kind, dense_matrix(xp), y, h).weights;
    EXPECT_LT((p.transpose() * w - wp).cwiseAbs().maxCoeff(), 1e-14) << classifier_name(kind);
  }
}

TEST(Predict, TieRule) {
  EXPECT_EQ(predict(0.3), Label::kRelevant);
  EXPECT_EQ(predict(-0.3), Label::kIrrelevant);
  EXPECT_EQ(predict(0.0), Label::kIrrelevant);
}

TEST(Grid, Defaults) {
  EXPECT_EQ(default_grid(ClassifierKind::kLogreg, 0).size(), 5u);
  EXPECT_EQ(default_grid(ClassifierKind::kNaiveBayes, 0).size(), 6u);
  EXPECT_EQ(default_grid(ClassifierKind::kLda, 0).size(), 11u);
  EXPECT_EQ(default_grid(ClassifierKind::kVtt, 0).size(), 1u);
  EXPECT_EQ(default_grid(ClassifierKind::kVtt, 2).size(), 36u);
  for (ClassifierKind k : kAllClassifiers) {
    EXPECT_EQ(parse_classifier(classifier_name(k)), k);
  }
  EXPECT_FALSE(parse_classifier("knn"));
}

TEST(Persistence, RejectsGarbage) {
  std::istringstream in("not a model\n");
  EXPECT_THROW(read_model(in), ParseError);
}

}  // namespace
}  // namespace pkddi
