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
#include <sstream>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "pkddi/error.hpp"
#include "pkddi/transforms.hpp"
#include "test_util.hpp"

namespace pkddi {
namespace {

using test::dense_matrix;

TEST(Idf, Formula) {
  Eigen::VectorXd totals(3);
  totals << 99, 9, 0;
  Eigen::VectorXd idf = idf_values(totals, 100);
  EXPECT_NEAR(idf(0), 0.0, 1e-15);
  EXPECT_NEAR(idf(1), std::log(10.0), 1e-15);
  EXPECT_NEAR(idf_values(Eigen::VectorXd::Zero(1), 10)(0), 2.302585092994046, 1e-15);
}

TEST(Idf, FittedOnColumnSums) {
  Eigen::MatrixXd x(4, 3);
  x << 1, 0, 1,
       1, 0, 0,
       1, 1, 0,
       0, 0, 0;
  FittedTransform t = fit_idf(dense_matrix(x));
  ASSERT_TRUE(t.idf_values);
  EXPECT_NEAR((*t.idf_values)(0), std::log(4.0 / 4.0), 1e-15);
  EXPECT_NEAR((*t.idf_values)(1), std::log(4.0 / 2.0), 1e-15);
  EXPECT_NEAR((*t.idf_values)(2), std::log(4.0 / 2.0), 1e-15);
  // rarer feature, larger weight
  Eigen::VectorXd totals(3);
  totals << 1, 5, 20;
  Eigen::VectorXd idf = idf_values(totals, 50);
  EXPECT_GT(idf(0), idf(1));
  EXPECT_GT(idf(1), idf(2));
}

TEST(Weighting, TfidfDividesByFeaturesPresent) {
  Eigen::MatrixXd x(2, 3);
  x << 1, 1, 0,
       0, 0, 0;
  FittedTransform t;
  t.idf_values = Eigen::Vector3d(2, 4, 8);
  TransformSpec spec;
  spec.weighting = Weighting::kTfidf;
  FeatureMatrix m = apply_weighting(dense_matrix(x), t, spec);
  EXPECT_EQ(m.text.coeff(0, 0), 1.0);
  EXPECT_EQ(m.text.coeff(0, 1), 2.0);
  EXPECT_EQ(m.text.row(1).nonZeros(), 0);

  spec.weighting = Weighting::kIdf;
  m = apply_weighting(dense_matrix(x), t, spec);
  EXPECT_EQ(m.text.coeff(0, 0), 2.0);
  EXPECT_EQ(m.text.coeff(0, 1), 4.0);

  spec.weighting = Weighting::kNone;
  m = apply_weighting(dense_matrix(x), t, spec);
  EXPECT_EQ(Eigen::MatrixXd(m.text), x);
}

TEST(L2, Rows) {
  Eigen::MatrixXd x(3, 2);
  x << 3, 4,
       0, 0,
       -1e-3, 7;
  FeatureMatrix m = l2_normalize(dense_matrix(x));
  EXPECT_NEAR(m.text.coeff(0, 0), 0.6, 1e-15);
  EXPECT_NEAR(m.text.coeff(0, 1), 0.8, 1e-15);
  EXPECT_EQ(m.text.row(1).nonZeros(), 0);
  EXPECT_NEAR(Eigen::MatrixXd(m.text).row(2).norm(), 1.0, 1e-12);
}

TEST(L2, CountColumnsUntouched) {
  Eigen::MatrixXd x(1, 2);
  x << 3, 4;
  FeatureMatrix m = dense_matrix(x);
  m.counts.push_back({"dict", Eigen::VectorXd::Constant(1, 5.0)});
  FeatureMatrix out = l2_normalize(m);
  EXPECT_EQ(out.counts[0].values(0), 5.0);
}

TEST(Spec, NamesAndValidation) {
  TransformSpec s = TransformSpec::parse("tfidf+l2+pca400");
  EXPECT_EQ(s.weighting, Weighting::kTfidf);
  EXPECT_TRUE(s.l2_normalize);
  EXPECT_EQ(*s.pca_components, 400);
  EXPECT_EQ(s.name(), "tfidf+l2+pca400");
  EXPECT_TRUE(TransformSpec::parse("none").is_identity());
  EXPECT_THROW(TransformSpec::parse("l2+idf"), ConfigError);
  EXPECT_THROW(TransformSpec::parse("pca150"), ConfigError);
  EXPECT_EQ(*TransformSpec::parse("pca150", true).pca_components, 150);
  EXPECT_THROW(TransformSpec::parse("idf+idf"), ConfigError);
  EXPECT_THROW(TransformSpec::parse("bogus"), ConfigError);
}

TEST(Pca, CollinearPoints) {
  Eigen::MatrixXd x(4, 2);
  x << 0, 0,
       1, 1,
       2, 2,
       5, 5;
  for (PcaRoute route : {PcaRoute::kDenseSvd, PcaRoute::kGram, PcaRoute::kCovariance}) {
    FittedTransform t = fit_pca(dense_matrix(x), 1, {route});
    const Eigen::VectorXd v = t.pca_basis->col(0);
    EXPECT_NEAR(v(0), std::sqrt(0.5), 1e-12);
    EXPECT_NEAR(v(1), std::sqrt(0.5), 1e-12);
    EXPECT_EQ(t.effective_rank, 1);
    EXPECT_THROW(fit_pca(dense_matrix(x), 2, {route}), NumericalError);
  }
}

TEST(Pca, KOutOfRange) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Identity(3, 5);
  EXPECT_THROW(fit_pca(dense_matrix(x), 3), ConfigError);
  EXPECT_THROW(fit_pca(dense_matrix(x), 0), ConfigError);
}

TEST(Pca, ReconstructionAtFullRank) {
  Rng rng(11);
  Eigen::MatrixXd x = test::random_gaussian(rng, 5, 3);
  FittedTransform t = fit_pca(dense_matrix(x), 3);
  FeatureMatrix p = project(dense_matrix(x), t);
  Eigen::MatrixXd back = Eigen::MatrixXd(p.text) * t.pca_basis->transpose();
  back.rowwise() += t.pca_mean->transpose();
  EXPECT_LT((back - x).cwiseAbs().maxCoeff(), 1e-9);

  // eigenvalues of the sample covariance, computed independently
  Eigen::MatrixXd c = x.rowwise() - x.colwise().mean();
  Eigen::MatrixXd cov = c.transpose() * c / 4.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  Eigen::VectorXd expected = es.eigenvalues().reverse();
  EXPECT_LT((t.explained_variance - expected).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Pca, RoutesAgreeAndMeanMapsToZero) {
  Rng rng(12);
  Eigen::MatrixXd x = test::random_binary(rng, 30, 12, 0.3);
  Eigen::MatrixXd test_rows = test::random_binary(rng, 4, 12, 0.3);
  FittedTransform a = fit_pca(dense_matrix(x), 5, {PcaRoute::kDenseSvd});
  FittedTransform b = fit_pca(dense_matrix(x), 5, {PcaRoute::kGram});
  FittedTransform c = fit_pca(dense_matrix(x), 5, {PcaRoute::kCovariance});
  EXPECT_LT((*a.pca_basis - *b.pca_basis).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LT((*a.pca_basis - *c.pca_basis).cwiseAbs().maxCoeff(), 1e-8);

  FeatureMatrix mean_row = dense_matrix(a.pca_mean->transpose());
  EXPECT_LT(Eigen::MatrixXd(project(mean_row, a).text).norm(), 1e-12);

  // test rows: manual (x - mu) V
  Eigen::MatrixXd manual = (test_rows.rowwise() - a.pca_mean->transpose()) * *a.pca_basis;
  EXPECT_LT((Eigen::MatrixXd(project(dense_matrix(test_rows), a).text) - manual).cwiseAbs().maxCoeff(), 1e-12);

  EXPECT_THROW(project(dense_matrix(Eigen::MatrixXd::Ones(1, 3)), a), ConfigError);
}

TEST(Pipeline, OrderAndCounts) {
  Rng rng(13);
  Eigen::MatrixXd x = test::random_binary(rng, 20, 8, 0.4);
  FeatureMatrix m = dense_matrix(x);
  m.counts.push_back({"dict", Eigen::VectorXd::LinSpaced(20, 0, 19)});
  TransformSpec spec = TransformSpec::parse("tfidf+l2+pca3", true);
  FittedTransform t = fit_transform(m, spec);
  FeatureMatrix out = apply_transform(m, t);
  EXPECT_EQ(out.text_columns(), 3);
  ASSERT_EQ(out.counts.size(), 1u);
  EXPECT_EQ(out.counts[0].values, m.counts[0].values);

  // same thing by hand
  FeatureMatrix step = l2_normalize(apply_weighting(m, t, spec));
  FittedTransform p = fit_pca(step, 3);
  EXPECT_LT((Eigen::MatrixXd(project(step, p).text) - Eigen::MatrixXd(out.text)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Pipeline, Serialization) {
  Rng rng(14);
  FeatureMatrix m = dense_matrix(test::random_binary(rng, 15, 6, 0.5));
  FittedTransform t = fit_transform(m, TransformSpec::parse("idf+pca2", true));
  std::stringstream s;
  write_transform(s, t);
  FittedTransform r = read_transform(s);
  EXPECT_EQ(r.spec, t.spec);
  EXPECT_LT((Eigen::MatrixXd(apply_transform(m, r).text) - Eigen::MatrixXd(apply_transform(m, t).text))
                .cwiseAbs()
                .maxCoeff(),
            1e-12);
  std::istringstream bad("garbage\n");
  EXPECT_THROW(read_transform(bad), ParseError);
}

}  // namespace
}  // namespace pkddi
