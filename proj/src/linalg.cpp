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

#include "pkddi/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pkddi/error.hpp"

namespace pkddi {

SymmetricEigen symmetric_eigen(Eigen::MatrixXd a) {
  if (a.rows() != a.cols()) throw NumericalError("symmetric_eigen: matrix is not square");
  SymmetricEigen out;
  if (a.rows() == 0) return out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success) throw NumericalError("symmetric eigensolver did not converge");
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

Eigen::Index eigen_rank(const Eigen::VectorXd& descending_values, double singular_tolerance) {
  if (descending_values.size() == 0 || descending_values(0) <= 0.0) return 0;
  const double eps = std::numeric_limits<double>::epsilon();
  const double relative = std::max(singular_tolerance * singular_tolerance,
                                   64.0 * static_cast<double>(descending_values.size()) * eps);
  const double cutoff = relative * descending_values(0);
  Eigen::Index r = 0;
  while (r < descending_values.size() && descending_values(r) > cutoff) ++r;
  return r;
}

void canonicalize_signs(Eigen::MatrixXd& columns) {
  for (Eigen::Index c = 0; c < columns.cols(); ++c) {
    Eigen::Index arg = 0;
    columns.col(c).cwiseAbs().maxCoeff(&arg);
    if (columns(arg, c) < 0.0) columns.col(c) *= -1.0;
  }
}

}  // namespace pkddi
