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

// L2-regularised logistic regression, primal truncated Newton (conjugate
// gradient inner solves, Armijo backtracking). The intercept is not
// regularised. Grid points are solved in increasing c, each warm-started from
// the previous solution.

#include <cmath>
#include <string>

#include "classifier_detail.hpp"
#include "pkddi/kernels.hpp"

namespace pkddi::detail {
namespace {

double log1pexp(double t) { return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

class Problem {
 public:
  Problem(const SparseMatrix& x, const Eigen::VectorXd& y) : x_(x), xt_(x), y_(y) {}

  Eigen::Index dim() const { return x_.cols(); }

  Eigen::VectorXd margins(const Eigen::VectorXd& w, double b) const {
    return (kernels::multiply(x_, w).array() + b).matrix();
  }

  double objective(const Eigen::VectorXd& w, double b, double c) const {
    const Eigen::VectorXd z = margins(w, b);
    double loss = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i) loss += log1pexp(-y_(i) * z(i));
    return 0.5 * w.squaredNorm() + c * loss;
  }

  // Gradient at (w, b); fills the Hessian weights D.
  void gradient(const Eigen::VectorXd& w, double b, double c, Eigen::VectorXd& gw, double& gb,
                Eigen::VectorXd& dweights) const {
    const Eigen::VectorXd z = margins(w, b);
    Eigen::VectorXd dz(z.size());
    dweights.resize(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      const double s = 1.0 / (1.0 + std::exp(y_(i) * z(i)));  // sigma(-y z)
      dz(i) = -y_(i) * s;
      dweights(i) = s * (1.0 - s);
    }
    gw = w + c * kernels::multiply_transpose(xt_, dz);
    gb = c * dz.sum();
  }

  void hessian_times(const Eigen::VectorXd& dweights, double c, const Eigen::VectorXd& vw, double vb,
                     Eigen::VectorXd& hw, double& hb) const {
    Eigen::VectorXd t = (kernels::multiply(x_, vw).array() + vb).matrix();
    t = t.cwiseProduct(dweights);
    hw = vw + c * kernels::multiply_transpose(xt_, t);
    hb = c * t.sum();
  }

 private:
  const SparseMatrix& x_;
  kernels::ColSparse xt_;
  const Eigen::VectorXd& y_;
};

}  // namespace

std::vector<PathEntry> logreg_path(const FeatureMatrix& m, std::span<const Label> labels,
                                   std::span<const double> cs, const SolverOptions& options) {
  const SparseMatrix x = m.combined();
  const Eigen::VectorXd y = signed_labels(labels);
  const Problem problem(x, y);
  const Eigen::Index d = problem.dim();
  const int cg_cap = static_cast<int>(std::min<Eigen::Index>(d + 1, 5000));

  Eigen::VectorXd w = Eigen::VectorXd::Zero(d);
  double b = 0.0;
  std::vector<PathEntry> out(cs.size());
  for (size_t k = 0; k < cs.size(); ++k) {
    const double c = cs[k];
    TrainedModel model = model_shell(ClassifierKind::kLogreg, m, {c});
    Eigen::VectorXd gw;
    double gb = 0.0;
    Eigen::VectorXd dweights;
    double f = problem.objective(w, b, c);
    bool converged = false;
    bool stalled = false;
    int iter = 0;
    for (; iter < options.newton_iterations; ++iter) {
      problem.gradient(w, b, c, gw, gb, dweights);
      const double gnorm = std::sqrt(gw.squaredNorm() + gb * gb);
      if (gnorm <= options.gradient_tolerance) {
        converged = true;
        break;
      }
      // CG on H p = -g.
      const double cg_tol = std::min(0.5, std::sqrt(gnorm)) * gnorm;
      Eigen::VectorXd pw = Eigen::VectorXd::Zero(d);
      double pb = 0.0;
      Eigen::VectorXd rw = -gw;
      double rb = -gb;
      Eigen::VectorXd sw = rw;
      double sb = rb;
      double rr = rw.squaredNorm() + rb * rb;
      Eigen::VectorXd hw;
      double hb = 0.0;
      for (int j = 0; j < cg_cap && std::sqrt(rr) > cg_tol; ++j) {
        problem.hessian_times(dweights, c, sw, sb, hw, hb);
        const double shs = sw.dot(hw) + sb * hb;
        if (!(shs > 0.0)) break;
        const double alpha = rr / shs;
        pw += alpha * sw;
        pb += alpha * sb;
        rw -= alpha * hw;
        rb -= alpha * hb;
        const double rr_new = rw.squaredNorm() + rb * rb;
        sw = rw + (rr_new / rr) * sw;
        sb = rb + (rr_new / rr) * sb;
        rr = rr_new;
      }
      double slope = gw.dot(pw) + gb * pb;
      if (!(slope < 0.0)) {
        pw = -gw;
        pb = -gb;
        slope = -(gnorm * gnorm);
      }
      double step = 1.0;
      bool accepted = false;
      for (int ls = 0; ls < 60; ++ls) {
        const Eigen::VectorXd w_try = w + step * pw;
        const double b_try = b + step * pb;
        const double f_try = problem.objective(w_try, b_try, c);
        if (f_try <= f + 1e-4 * step * slope) {
          w = w_try;
          b = b_try;
          f = f_try;
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) {
        stalled = true;
        break;
      }
    }
    if (!converged) {
      problem.gradient(w, b, c, gw, gb, dweights);
      const double gnorm = std::sqrt(gw.squaredNorm() + gb * gb);
      if (gnorm <= options.gradient_tolerance) {
        converged = true;
      } else {
        model.warnings.push_back(std::string(stalled ? "line search stalled" : "Newton iteration cap reached") +
                                 " at c=" + std::to_string(c) + ", gradient norm " + std::to_string(gnorm));
      }
    }
    set_combined_weights(model, w, m.text_columns());
    model.bias = b;
    out[k].model = std::move(model);
  }
  return out;
}

}  // namespace pkddi::detail
