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

#include "pkddi/kernels.hpp"

namespace pkddi::kernels {

Eigen::MatrixXd gram(const RowSparse& x) {
  const Eigen::Index n = x.rows();
  const ColSparse by_column(x);
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
  // Row i accumulates G(i, j) for j <= i by walking the columns of its
  // non-zeros; only the thread that owns row i writes to it.
#pragma omp parallel for schedule(dynamic, 16)
  for (Eigen::Index i = 0; i < n; ++i) {
    for (RowSparse::InnerIterator it(x, i); it; ++it) {
      const double v = it.value();
      for (ColSparse::InnerIterator jt(by_column, it.col()); jt && jt.row() <= i; ++jt) {
        g(i, jt.row()) += v * jt.value();
      }
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) g(j, i) = g(i, j);
  }
  return g;
}

Eigen::MatrixXd cross_product(const RowSparse& x) {
  const RowSparse transposed = x.transpose();
  return gram(transposed);
}

Eigen::VectorXd multiply(const RowSparse& x, const Eigen::VectorXd& v) {
  Eigen::VectorXd out(x.rows());
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    double s = 0.0;
    for (RowSparse::InnerIterator it(x, i); it; ++it) s += it.value() * v(it.col());
    out(i) = s;
  }
  return out;
}

Eigen::VectorXd multiply_transpose(const ColSparse& x, const Eigen::VectorXd& v) {
  Eigen::VectorXd out(x.cols());
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    double s = 0.0;
    for (ColSparse::InnerIterator it(x, j); it; ++it) s += it.value() * v(it.row());
    out(j) = s;
  }
  return out;
}

Eigen::MatrixXd multiply_dense(const RowSparse& x, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(x.rows(), b.cols());
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (RowSparse::InnerIterator it(x, i); it; ++it) out.row(i) += it.value() * b.row(it.col());
  }
  return out;
}

namespace serial {

Eigen::MatrixXd gram(const RowSparse& x) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      double s = 0.0;
      RowSparse::InnerIterator a(x, i);
      RowSparse::InnerIterator b(x, j);
      while (a && b) {
        if (a.col() < b.col()) {
          ++a;
        } else if (b.col() < a.col()) {
          ++b;
        } else {
          s += a.value() * b.value();
          ++a;
          ++b;
        }
      }
      g(i, j) = s;
      g(j, i) = s;
    }
  }
  return g;
}

Eigen::MatrixXd cross_product(const RowSparse& x) {
  const RowSparse transposed = x.transpose();
  return gram(transposed);
}

Eigen::VectorXd multiply(const RowSparse& x, const Eigen::VectorXd& v) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (RowSparse::InnerIterator it(x, i); it; ++it) out(i) += it.value() * v(it.col());
  }
  return out;
}

Eigen::VectorXd multiply_transpose(const ColSparse& x, const Eigen::VectorXd& v) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    for (ColSparse::InnerIterator it(x, j); it; ++it) out(j) += it.value() * v(it.row());
  }
  return out;
}

Eigen::MatrixXd multiply_dense(const RowSparse& x, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(x.rows(), b.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (RowSparse::InnerIterator it(x, i); it; ++it) {
      for (Eigen::Index c = 0; c < b.cols(); ++c) out(i, c) += it.value() * b(it.col(), c);
    }
  }
  return out;
}

}  // namespace serial

}  // namespace pkddi::kernels
