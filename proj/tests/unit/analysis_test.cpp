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

#include <algorithm>
#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "pkddi/analysis.hpp"
#include "pkddi/error.hpp"
#include "test_util.hpp"

namespace pkddi {
namespace {

TrainedModel model_with(std::vector<std::string> keys, std::vector<double> w) {
  TrainedModel m;
  m.kind = ClassifierKind::kLogreg;
  m.feature_keys = std::move(keys);
  m.weights = Eigen::Map<Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
  return m;
}

TEST(TopFeatures, Basic) {
  TrainedModel m = model_with({"a", "b", "c"}, {2, -1, 0.5});
  FeatureRanking r = top_features(m, 1);
  ASSERT_EQ(r.relevant_top.size(), 1u);
  ASSERT_EQ(r.irrelevant_top.size(), 1u);
  EXPECT_EQ(r.relevant_top[0].key, "a");
  EXPECT_EQ(r.irrelevant_top[0].key, "b");
  EXPECT_TRUE(std::isnan(r.relevant_top[0].standardized));

  r = top_features(m, 10);
  EXPECT_EQ(r.relevant_top.size(), 2u);
  EXPECT_EQ(r.relevant_top[1].key, "c");
}

TEST(TopFeatures, ZeroWeightsAndTies) {
  FeatureRanking r = top_features(model_with({"a", "b"}, {0, 0}), 5);
  EXPECT_TRUE(r.relevant_top.empty());
  EXPECT_TRUE(r.irrelevant_top.empty());

  r = top_features(model_with({"zeta", "alpha", "mid", "neg2", "neg1"}, {1, 1, 1, -3, -3}), 2);
  EXPECT_EQ(r.relevant_top[0].key, "alpha");
  EXPECT_EQ(r.relevant_top[1].key, "mid");
  EXPECT_EQ(r.irrelevant_top[0].key, "neg1");
}

TEST(TopFeatures, ScaleInvariantAndCountColumns) {
  TrainedModel m = model_with({"a", "b", "c", "d"}, {0.3, -2, 1.1, -0.01});
  m.resources = {"i-CYPS"};
  m.ner_weights = Eigen::VectorXd::Constant(1, 0.7);
  TrainedModel s = m;
  s.weights *= 4.5;
  s.ner_weights *= 4.5;
  FeatureRanking a = top_features(m, 3);
  FeatureRanking b = top_features(s, 3);
  ASSERT_EQ(a.relevant_top.size(), b.relevant_top.size());
  for (size_t i = 0; i < a.relevant_top.size(); ++i) EXPECT_EQ(a.relevant_top[i].key, b.relevant_top[i].key);
  for (size_t i = 0; i < a.irrelevant_top.size(); ++i) EXPECT_EQ(a.irrelevant_top[i].key, b.irrelevant_top[i].key);
  EXPECT_EQ(a.relevant_top[1].key, "count:i-CYPS");

  std::ostringstream out;
  write_top_features_tsv(out, a);
  EXPECT_NE(out.str().find("relevant\t1\tc\t1.1\tNA"), std::string::npos);
}

TEST(Standardized, Coefficients) {
  // column sds 0.1 and 0.25 with n - 1 in the denominator
  Eigen::MatrixXd x(3, 3);
  x << 0.0, 0.0, 1,
       0.1, 0.0, 1,
       0.2, 0.5, 1;
  FeatureMatrix train = test::dense_matrix(x);
  Eigen::VectorXd sd = column_sd(train);
  EXPECT_NEAR(sd(0), 0.1, 1e-15);
  EXPECT_NEAR(sd(1), std::sqrt(0.25 / 3.0), 1e-15);
  EXPECT_EQ(sd(2), 0.0);

  TrainedModel m = model_with(train.feature_keys, {2, -1, 5});
  Eigen::VectorXd s = standardized_coefficients(m, train);
  EXPECT_NEAR(s(0), 0.2, 1e-15);
  EXPECT_NEAR(s(1), -std::sqrt(0.25 / 3.0), 1e-15);
  EXPECT_EQ(s(2), 0.0);
  EXPECT_THROW(standardized_coefficients(model_with({"a"}, {1}), train), ConfigError);
}

TEST(WeightPanel, SharedKeysOnly) {
  std::vector<TrainedModel> models{model_with({"a", "b", "c"}, {1, 2, 3}), model_with({"c", "a"}, {4, 5})};
  std::vector<std::string> names{"m1", "m2"};
  WeightPanel p = make_weight_panel(names, models);
  EXPECT_EQ(p.keys, (std::vector<std::string>{"a", "c"}));
  EXPECT_EQ(p.values(0, 1), 3.0);
  EXPECT_EQ(p.values(1, 0), 5.0);
}

WeightPanel random_panel(Rng& rng, int rows, int cols) {
  WeightPanel p;
  for (int r = 0; r < rows; ++r) p.rows.push_back("cfg" + std::to_string(r));
  for (int c = 0; c < cols; ++c) p.keys.push_back("k" + std::to_string(c));
  p.values = test::random_gaussian(rng, rows, cols);
  return p;
}

TEST(WeightPcaTest, RatiosAndErrors) {
  Rng rng(5);
  WeightPanel p = random_panel(rng, 6, 40);
  WeightPca w = weight_pca(p, 3);
  EXPECT_EQ(w.explained_ratio.size(), 5);
  EXPECT_NEAR(w.explained_ratio.sum(), 1.0, 1e-12);
  for (Eigen::Index i = 1; i < w.explained_ratio.size(); ++i) EXPECT_GE(w.explained_ratio(i - 1), w.explained_ratio(i));
  EXPECT_LT((w.loadings.transpose() * w.loadings - Eigen::MatrixXd::Identity(3, 3)).norm(), 1e-10);
  EXPECT_THROW(weight_pca(p, 6), ConfigError);
  EXPECT_THROW(weight_pca(p, 0), ConfigError);
}

TEST(WeightPcaTest, IdenticalRowsHaveNoComponents) {
  WeightPanel p;
  p.rows = {"x", "y", "z"};
  p.keys = {"a", "b"};
  p.values = Eigen::MatrixXd(3, 2);
  p.values << 1, 2, 1, 2, 1, 2;
  WeightPca w = weight_pca(p, 2);
  EXPECT_EQ(w.explained_ratio.size(), 0);
  EXPECT_EQ(w.projections.norm(), 0.0);
}

TEST(WeightPcaTest, ConstantShiftDoesNotMove) {
  Rng rng(6);
  WeightPanel p = random_panel(rng, 5, 12);
  WeightPanel q = p;
  q.values.array() += 3.25;
  WeightPca a = weight_pca(p, 2);
  WeightPca b = weight_pca(q, 2);
  EXPECT_LT((a.projections - b.projections).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT((a.explained_ratio - b.explained_ratio).cwiseAbs().maxCoeff(), 1e-12);

  std::ostringstream proj, load;
  write_projections_tsv(proj, p, a);
  write_loadings_tsv(load, p, a);
  EXPECT_EQ(proj.str().substr(0, 14), "config\tpc1\tpc2");
  const std::string text = load.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 13);
}

}  // namespace
}  // namespace pkddi
