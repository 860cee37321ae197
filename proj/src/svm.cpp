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

// L1-loss linear SVM through its dual, solved by SMO with second-order
// working-set selection (the libsvm scheme) on a precomputed linear kernel.
// The SMO tolerance is tightened until the primal-dual gap, with the
// intercept re-optimised exactly for the current w, meets the requested
// relative tolerance.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "classifier_detail.hpp"
#include "pkddi/kernels.hpp"

namespace pkddi::detail {
namespace {

constexpr double kTau = 1e-12;

class Smo {
 public:
  Smo(const Eigen::MatrixXd& k, const Eigen::VectorXd& y) : k_(k), y_(y), n_(y.size()) {
    alpha_ = Eigen::VectorXd::Zero(n_);
    grad_ = -Eigen::VectorXd::Ones(n_);
    qd_ = k_.diagonal();
  }

  // Rescales a solution for bound c to a feasible point for bound c_new.
  void rescale(double c_new) {
    if (c_ > 0.0) {
      const double r = c_new / c_;
      alpha_ *= r;
      grad_ = r * (grad_.array() + 1.0) - 1.0;
    }
    c_ = c_new;
  }

  // Runs until the maximal violating pair is within eps. Returns the number
  // of iterations used; stops early at `budget`.
  int64_t solve(double eps, int64_t budget) {
    int64_t iter = 0;
    while (iter < budget) {
      Eigen::Index i = -1;
      Eigen::Index j = -1;
      if (select(eps, i, j)) break;
      update(i, j);
      ++iter;
    }
    return iter;
  }

  const Eigen::VectorXd& alpha() const { return alpha_; }
  const Eigen::VectorXd& grad() const { return grad_; }

 private:
  double q(Eigen::Index i, Eigen::Index j) const { return y_(i) * y_(j) * k_(j, i); }
  bool upper(Eigen::Index t) const { return alpha_(t) >= c_; }
  bool lower(Eigen::Index t) const { return alpha_(t) <= 0.0; }

  bool select(double eps, Eigen::Index& out_i, Eigen::Index& out_j) const {
    double gmax = -std::numeric_limits<double>::infinity();
    double gmax2 = -std::numeric_limits<double>::infinity();
    Eigen::Index gmax_idx = -1;
    Eigen::Index gmin_idx = -1;
    double obj_diff_min = std::numeric_limits<double>::infinity();
    for (Eigen::Index t = 0; t < n_; ++t) {
      if (y_(t) > 0) {
        if (!upper(t) && -grad_(t) >= gmax) {
          gmax = -grad_(t);
          gmax_idx = t;
        }
      } else {
        if (!lower(t) && grad_(t) >= gmax) {
          gmax = grad_(t);
          gmax_idx = t;
        }
      }
    }
    const Eigen::Index i = gmax_idx;
    if (i < 0) return true;
    const double* ki = k_.col(i).data();
    for (Eigen::Index t = 0; t < n_; ++t) {
      const double qit = y_(i) * y_(t) * ki[t];
      if (y_(t) > 0) {
        if (!lower(t)) {
          const double grad_diff = gmax + grad_(t);
          gmax2 = std::max(gmax2, grad_(t));
          if (grad_diff > 0) {
            const double quad = qd_(i) + qd_(t) - 2.0 * y_(i) * qit;
            const double obj = -(grad_diff * grad_diff) / (quad > 0 ? quad : kTau);
            if (obj <= obj_diff_min) {
              gmin_idx = t;
              obj_diff_min = obj;
            }
          }
        }
      } else {
        if (!upper(t)) {
          const double grad_diff = gmax - grad_(t);
          gmax2 = std::max(gmax2, -grad_(t));
          if (grad_diff > 0) {
            const double quad = qd_(i) + qd_(t) + 2.0 * y_(i) * qit;
            const double obj = -(grad_diff * grad_diff) / (quad > 0 ? quad : kTau);
            if (obj <= obj_diff_min) {
              gmin_idx = t;
              obj_diff_min = obj;
            }
          }
        }
      }
    }
    if (gmax + gmax2 < eps || gmin_idx < 0) return true;
    out_i = i;
    out_j = gmin_idx;
    return false;
  }

  void update(Eigen::Index i, Eigen::Index j) {
    const double old_i = alpha_(i);
    const double old_j = alpha_(j);
    const double qij = q(i, j);
    double& ai = alpha_(i);
    double& aj = alpha_(j);
    if (y_(i) != y_(j)) {
      double quad = qd_(i) + qd_(j) + 2.0 * qij;
      if (quad <= 0) quad = kTau;
      const double delta = (-grad_(i) - grad_(j)) / quad;
      const double diff = ai - aj;
      ai += delta;
      aj += delta;
      if (diff > 0) {
        if (aj < 0) {
          aj = 0;
          ai = diff;
        }
      } else if (ai < 0) {
        ai = 0;
        aj = -diff;
      }
      if (diff > 0) {
        if (ai > c_) {
          ai = c_;
          aj = c_ - diff;
        }
      } else if (aj > c_) {
        aj = c_;
        ai = c_ + diff;
      }
    } else {
      double quad = qd_(i) + qd_(j) - 2.0 * qij;
      if (quad <= 0) quad = kTau;
      const double delta = (grad_(i) - grad_(j)) / quad;
      const double sum = ai + aj;
      ai -= delta;
      aj += delta;
      if (sum > c_) {
        if (ai > c_) {
          ai = c_;
          aj = sum - c_;
        }
      } else if (aj < 0) {
        aj = 0;
        ai = sum;
      }
      if (sum > c_) {
        if (aj > c_) {
          aj = c_;
          ai = sum - c_;
        }
      } else if (ai < 0) {
        ai = 0;
        aj = sum;
      }
    }
    const double dai = ai - old_i;
    const double daj = aj - old_j;
    const double* ki = k_.col(i).data();
    const double* kj = k_.col(j).data();
    const double yi = y_(i) * dai;
    const double yj = y_(j) * daj;
    for (Eigen::Index t = 0; t < n_; ++t) grad_(t) += y_(t) * (ki[t] * yi + kj[t] * yj);
  }

  const Eigen::MatrixXd& k_;
  const Eigen::VectorXd& y_;
  Eigen::Index n_;
  Eigen::VectorXd alpha_;
  Eigen::VectorXd grad_;  // Q alpha - 1
  Eigen::VectorXd qd_;
  double c_ = 0.0;
};

// Minimiser of sum_i max(0, 1 - y_i (f_i + b)) over b. Each breakpoint
// y_i - f_i raises the slope by one, starting from -(positives), so the flat
// optimum lies between the P-th and (P+1)-th smallest breakpoints.
double optimal_bias(const Eigen::VectorXd& f, const Eigen::VectorXd& y) {
  std::vector<double> t(static_cast<size_t>(f.size()));
  size_t positives = 0;
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    t[static_cast<size_t>(i)] = y(i) - f(i);
    if (y(i) > 0) ++positives;
  }
  std::sort(t.begin(), t.end());
  return 0.5 * (t[positives - 1] + t[positives]);
}

}  // namespace

std::vector<PathEntry> svm_path(const FeatureMatrix& m, std::span<const Label> labels,
                                std::span<const double> cs, const SolverOptions& options) {
  const SparseMatrix x = m.combined();
  const Eigen::VectorXd y = signed_labels(labels);
  const Eigen::MatrixXd kernel = kernels::gram(x);
  const kernels::ColSparse xt(x);
  Smo smo(kernel, y);

  std::vector<PathEntry> out(cs.size());
  for (size_t k = 0; k < cs.size(); ++k) {
    const double c = cs[k];
    smo.rescale(c);
    TrainedModel model = model_shell(ClassifierKind::kSvm, m, {c});
    int64_t budget = options.smo_iterations;
    double eps = 1e-3;
    double b = 0.0;
    bool met = false;
    double gap = 0.0;
    double primal = 0.0;
    while (true) {
      budget -= smo.solve(eps, budget);
      const Eigen::VectorXd& a = smo.alpha();
      const Eigen::VectorXd& g = smo.grad();
      const Eigen::VectorXd f = y.cwiseProduct((g.array() + 1.0).matrix());  // w . x_i
      const double wnorm2 = a.dot((g.array() + 1.0).matrix());
      b = optimal_bias(f, y);
      double hinge = 0.0;
      for (Eigen::Index i = 0; i < f.size(); ++i) hinge += std::max(0.0, 1.0 - y(i) * (f(i) + b));
      primal = 0.5 * wnorm2 + c * hinge;
      const double dual = a.sum() - 0.5 * wnorm2;
      gap = primal - dual;
      if (gap <= options.gap_tolerance * primal) {
        met = true;
        break;
      }
      if (budget <= 0 || eps < 1e-15) break;
      eps /= 10.0;
    }
    if (!met) {
      model.warnings.push_back(std::string(budget <= 0 ? "SMO iteration cap reached" : "SMO tolerance floor reached") +
                               " at c=" + std::to_string(c) + ", relative duality gap " +
                               std::to_string(gap / primal));
    }
    const Eigen::VectorXd ay = smo.alpha().cwiseProduct(y);
    set_combined_weights(model, kernels::multiply_transpose(xt, ay), m.text_columns());
    model.bias = b;
    out[k].model = std::move(model);
  }
  return out;
}

}  // namespace pkddi::detail
