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

#include <omp.h>

#include <gtest/gtest.h>

#include "pkddi/kernels.hpp"
#include "pkddi/linalg.hpp"
#include "pkddi/random.hpp"
#include "test_util.hpp"

namespace pkddi {
namespace {

kernels::RowSparse sparse(Rng& rng, int rows, int cols, double density) {
  Eigen::MatrixXd d = test::random_binary(rng, rows, cols, density);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (d(r, c) != 0.0) d(r, c) = rng.uniform() * 3.0 - 1.0;
    }
  }
  kernels::RowSparse s = d.sparseView();
  s.makeCompressed();
  return s;
}

class KernelShapes : public ::testing::TestWithParam<std::tuple<int, int, double>> {};

TEST_P(KernelShapes, ParallelEqualsSerialBitForBit) {
  const auto [rows, cols, density] = GetParam();
  Rng rng(static_cast<uint64_t>(rows * 1000 + cols));
  const kernels::RowSparse x = sparse(rng, rows, cols, density);
  const kernels::ColSparse xc(x);
  Eigen::VectorXd v_cols = test::random_gaussian(rng, cols, 1);
  Eigen::VectorXd v_rows = test::random_gaussian(rng, rows, 1);
  Eigen::MatrixXd b = test::random_gaussian(rng, cols, 3);

  for (int threads : {1, 3}) {
    omp_set_num_threads(threads);
    EXPECT_EQ(kernels::gram(x), kernels::serial::gram(x));
    EXPECT_EQ(kernels::cross_product(x), kernels::serial::cross_product(x));
    EXPECT_EQ(kernels::multiply(x, v_cols), kernels::serial::multiply(x, v_cols));
    EXPECT_EQ(kernels::multiply_transpose(xc, v_rows), kernels::serial::multiply_transpose(xc, v_rows));
    EXPECT_EQ(kernels::multiply_dense(x, b), kernels::serial::multiply_dense(x, b));
  }
  omp_set_num_threads(omp_get_num_procs());

  // and the serial versions against dense Eigen
  const Eigen::MatrixXd d(x);
  EXPECT_LT((kernels::serial::gram(x) - d * d.transpose()).norm(), 1e-9);
  EXPECT_LT((kernels::serial::cross_product(x) - d.transpose() * d).norm(), 1e-9);
  EXPECT_LT((kernels::serial::multiply(x, v_cols) - d * v_cols).norm(), 1e-9);
  EXPECT_LT((kernels::serial::multiply_transpose(xc, v_rows) - d.transpose() * v_rows).norm(), 1e-9);
  EXPECT_LT((kernels::serial::multiply_dense(x, b) - d * b).norm(), 1e-9);
}

INSTANTIATE_TEST_SUITE_P(Shapes, KernelShapes,
                         ::testing::Values(std::make_tuple(1, 1, 1.0), std::make_tuple(7, 3, 0.5),
                                           std::make_tuple(40, 200, 0.05), std::make_tuple(150, 30, 0.3),
                                           std::make_tuple(20, 20, 0.0)));

TEST(Linalg, SymmetricEigenDescending) {
  Rng rng(3);
  Eigen::MatrixXd a = test::random_gaussian(rng, 30, 30);
  a = (a + a.transpose()).eval();
  SymmetricEigen e = symmetric_eigen(a);
  for (Eigen::Index i = 1; i < e.values.size(); ++i) EXPECT_GE(e.values(i - 1), e.values(i));
  EXPECT_LT((a * e.vectors - e.vectors * e.values.asDiagonal()).norm(), 1e-10);
  EXPECT_LT((e.vectors.transpose() * e.vectors - Eigen::MatrixXd::Identity(30, 30)).norm(), 1e-10);
}

TEST(Linalg, RankAndSigns) {
  Eigen::VectorXd v(4);
  v << 9.0, 1.0, 1e-25, 0.0;
  EXPECT_EQ(eigen_rank(v, 1e-10), 2);
  EXPECT_EQ(eigen_rank(Eigen::VectorXd::Zero(3), 1e-10), 0);
  Eigen::MatrixXd m(2, 2);
  m << -3, 1, 1, 2;
  canonicalize_signs(m);
  EXPECT_EQ(m(0, 0), 3);
  EXPECT_EQ(m(1, 0), -1);
  EXPECT_EQ(m(1, 1), 2);
}

}  // namespace
}  // namespace pkddi
