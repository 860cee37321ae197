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

#include <Eigen/Core>

namespace pkddi {

// Eigenpairs of a symmetric matrix, eigenvalues in decreasing order.
struct SymmetricEigen {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;  // columns
};

// Throws NumericalError when the solver does not converge.
SymmetricEigen symmetric_eigen(Eigen::MatrixXd a);

// Number of leading eigenvalues above the numerical-rank cutoff
// max(tolerance^2, 64 * size * eps) * max eigenvalue. `tolerance` is relative
// to the largest singular value, the eigenvalues being squared singular values.
Eigen::Index eigen_rank(const Eigen::VectorXd& descending_values, double singular_tolerance);

// Flips each column so that its largest-magnitude entry is positive.
void canonicalize_signs(Eigen::MatrixXd& columns);

}  // namespace pkddi
