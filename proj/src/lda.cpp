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

// Shrinkage LDA in the SVD basis of the centered training matrix.
//
// With V the right singular vectors and lambda the squared singular values,
// the pooled within-class scatter in that basis is diag(lambda) - k dm dm^T
// (k = nr ni / n, dm the class mean difference), since the between-class part
// of the total scatter is rank one. Shrinking toward t I keeps the
// diagonal-plus-rank-one shape, so every grid point is one Sherman-Morrison
// solve on top of a single eigendecomposition.

#include <cmath>
#include <string>

#include "classifier_detail.hpp"
#include "pkddi/error.hpp"
#include "pkddi/kernels.hpp"
#include "pkddi/linalg.hpp"

namespace pkddi::detail {

std::vector<PathEntry> lda_path(const FeatureMatrix& m, std::span<const Label> labels,
                                std::span<const double> shrinks, const LdaOptions& options) {
  const SparseMatrix x = m.combined();
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  const Eigen::VectorXd y = signed_labels(labels);
  const double nr = static_cast<double>((y.array() > 0).count());
  const double ni = static_cast<double>(n) - nr;

  Eigen::VectorXd rel_ind = (y.array() > 0).cast<double>();
  Eigen::VectorXd irr_ind = Eigen::VectorXd::Ones(n) - rel_ind;
  const kernels::ColSparse xc(x);
  const Eigen::VectorXd mu_r = kernels::multiply_transpose(xc, rel_ind) / nr;
  const Eigen::VectorXd mu_i = kernels::multiply_transpose(xc, irr_ind) / ni;
  const Eigen::VectorXd mu = (nr * mu_r + ni * mu_i) / static_cast<double>(n);
  const Eigen::VectorXd delta = mu_r - mu_i;

  // Basis coordinates of delta, and a map from basis coefficients a to
  // feature-space weights.
  Eigen::VectorXd lambda;
  Eigen::VectorXd dm;
  Eigen::MatrixXd v;          // covariance route: d x r
  Eigen::MatrixXd u_scaled;   // gram route: n x r, U Sigma^-1
  bool gram_route = d > n;
  Eigen::Index rank = 0;
  if (!gram_route) {
    Eigen::MatrixXd c = kernels::cross_product(x);
    c.noalias() -= static_cast<double>(n) * mu * mu.transpose();
    SymmetricEigen eig = symmetric_eigen(std::move(c));
    rank = eigen_rank(eig.values, options.rank_tolerance);
    lambda = eig.values.head(rank);
    v = eig.vectors.leftCols(rank);
    dm = v.transpose() * delta;
  } else {
    Eigen::MatrixXd g = kernels::gram(x);
    const Eigen::VectorXd r = kernels::multiply(x, mu);
    const double mm = mu.squaredNorm();
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i < n; ++i) g(i, j) += mm - r(i) - r(j);
    }
    SymmetricEigen eig = symmetric_eigen(std::move(g));
    rank = eigen_rank(eig.values, options.rank_tolerance);
    lambda = eig.values.head(rank);
    u_scaled = eig.vectors.leftCols(rank) * lambda.cwiseSqrt().cwiseInverse().asDiagonal();
    // V^T delta = Sigma^-1 U^T Xc delta
    const Eigen::VectorXd xc_delta = (kernels::multiply(x, delta).array() - mu.dot(delta)).matrix();
    dm = u_scaled.transpose() * xc_delta;
  }

  std::vector<PathEntry> out(shrinks.size());
  if (rank == 0) {
    for (auto& e : out) e.error = "lda: centered training matrix has rank 0";
    return out;
  }
  const double dof = std::max(static_cast<double>(n) - 2.0, 1.0);
  const double k = nr * ni / static_cast<double>(n);
  const double trace = (lambda.sum() - k * dm.squaredNorm()) / dof;
  const double t = trace / static_cast<double>(rank);

  for (size_t s = 0; s < shrinks.size(); ++s) {
    const double shrink = shrinks[s];
    const Eigen::VectorXd diag = ((1.0 - shrink) / dof) * lambda.array() + shrink * t;
    const double gamma = (1.0 - shrink) * k / dof;
    if ((diag.array() <= 0.0).any()) {
      out[s].error = "lda: shrunk covariance is singular at shrink=" + std::to_string(shrink) + "; use shrink > 0";
      continue;
    }
    const Eigen::VectorXd dinv_dm = dm.cwiseQuotient(diag);
    const double denom = 1.0 - gamma * dm.dot(dinv_dm);
    if (!(denom > 1e-8)) {
      out[s].error = "lda: within-class covariance is singular in the reduced basis at shrink=" +
                     std::to_string(shrink) + "; use shrink > 0";
      continue;
    }
    const Eigen::VectorXd a = dinv_dm / denom;
    Eigen::VectorXd w;
    if (!gram_route) {
      w = v * a;
    } else {
      // w = Xc^T U Sigma^-1 a
      const Eigen::VectorXd g = u_scaled * a;
      w = kernels::multiply_transpose(xc, g) - mu * g.sum();
    }
    TrainedModel model = model_shell(ClassifierKind::kLda, m, {shrink});
    set_combined_weights(model, w, m.text_columns());
    model.bias = -w.dot(mu_r + mu_i) / 2.0 + std::log(nr / ni);
    out[s].model = std::move(model);
  }
  return out;
}

}  // namespace pkddi::detail
