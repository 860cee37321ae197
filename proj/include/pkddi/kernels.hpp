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

// Data-parallel inner loops shared by transforms and classifiers. Every kernel
// has an OpenMP version (pkddi::kernels) and a plain serial reference
// (pkddi::kernels::serial) that the tests and the benchmark compare against.
//
// The parallel versions give bit-identical results for any thread count: each
// output element is produced by exactly one thread, in a fixed order.

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace pkddi::kernels {

using RowSparse = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;
using ColSparse = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

// X * X^T (rows x rows).
Eigen::MatrixXd gram(const RowSparse& x);
// X^T * X (cols x cols).
Eigen::MatrixXd cross_product(const RowSparse& x);
// X * v.
Eigen::VectorXd multiply(const RowSparse& x, const Eigen::VectorXd& v);
// X^T * v, with X given column-major.
Eigen::VectorXd multiply_transpose(const ColSparse& x, const Eigen::VectorXd& v);
// X * B for dense B (rows x B.cols()).
Eigen::MatrixXd multiply_dense(const RowSparse& x, const Eigen::MatrixXd& b);

namespace serial {

Eigen::MatrixXd gram(const RowSparse& x);
Eigen::MatrixXd cross_product(const RowSparse& x);
Eigen::VectorXd multiply(const RowSparse& x, const Eigen::VectorXd& v);
Eigen::VectorXd multiply_transpose(const ColSparse& x, const Eigen::VectorXd& v);
Eigen::MatrixXd multiply_dense(const RowSparse& x, const Eigen::MatrixXd& b);

}  // namespace serial

}  // namespace pkddi::kernels
