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

#include "pkddi/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "classifier_detail.hpp"
#include "pkddi/error.hpp"
#include "pkddi/kernels.hpp"

namespace pkddi {

std::string_view classifier_name(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::kVtt: return "vtt";
    case ClassifierKind::kNaiveBayes: return "nb";
    case ClassifierKind::kDlda: return "dlda";
    case ClassifierKind::kLda: return "lda";
    case ClassifierKind::kLogreg: return "logreg";
    case ClassifierKind::kSvm: return "svm";
  }
  return "?";
}

std::string_view classifier_display_name(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::kVtt: return "VTT";
    case ClassifierKind::kNaiveBayes: return "Naive Bayes";
    case ClassifierKind::kDlda: return "dLDA";
    case ClassifierKind::kLda: return "LDA";
    case ClassifierKind::kLogreg: return "Log Reg";
    case ClassifierKind::kSvm: return "SVM";
  }
  return "?";
}

std::optional<ClassifierKind> parse_classifier(std::string_view name) {
  for (ClassifierKind k : kAllClassifiers) {
    if (classifier_name(k) == name) return k;
  }
  return std::nullopt;
}

std::string format_hyperparams(const Hyperparams& h) {
  if (h.empty()) return "-";
  std::ostringstream out;
  out.precision(6);
  for (size_t i = 0; i < h.size(); ++i) out << (i ? "," : "") << h[i];
  return out.str();
}

namespace detail {

Eigen::VectorXd signed_labels(std::span<const Label> labels) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(labels.size()));
  for (size_t i = 0; i < labels.size(); ++i) y(static_cast<Eigen::Index>(i)) = labels[i] == Label::kRelevant ? 1.0 : -1.0;
  return y;
}

TrainedModel model_shell(ClassifierKind kind, const FeatureMatrix& m, Hyperparams h) {
  TrainedModel model;
  model.kind = kind;
  model.hyperparams = std::move(h);
  model.feature_keys = m.feature_keys;
  model.vocabulary_hash = keys_fingerprint(m.feature_keys);
  for (const auto& c : m.counts) model.resources.push_back(c.resource);
  model.weights = Eigen::VectorXd::Zero(m.text_columns());
  model.ner_weights = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m.counts.size()));
  return model;
}

void set_combined_weights(TrainedModel& model, const Eigen::VectorXd& w, Eigen::Index text_columns) {
  model.weights = w.head(text_columns);
  model.ner_weights = w.tail(w.size() - text_columns);
}

}  // namespace detail

namespace {

struct ClassSizes {
  int64_t relevant = 0;
  int64_t irrelevant = 0;
};

ClassSizes class_sizes(std::span<const Label> labels) {
  ClassSizes s;
  for (Label l : labels) (l == Label::kRelevant ? s.relevant : s.irrelevant)++;
  return s;
}

void require_rows(const FeatureMatrix& m, std::span<const Label> labels) {
  if (static_cast<Eigen::Index>(labels.size()) != m.rows()) {
    throw ConfigError("training matrix has " + std::to_string(m.rows()) + " rows but " +
                      std::to_string(labels.size()) + " labels were given");
  }
  const ClassSizes s = class_sizes(labels);
  if (s.relevant == 0 || s.irrelevant == 0) throw ConfigError("training data must contain both classes");
}

// Per-class column sums of x != 0 indicators.
void occurrence_counts(const SparseMatrix& x, std::span<const Label> labels, Eigen::VectorXd& rel,
                       Eigen::VectorXd& irr) {
  rel = Eigen::VectorXd::Zero(x.cols());
  irr = Eigen::VectorXd::Zero(x.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    Eigen::VectorXd& target = labels[static_cast<size_t>(r)] == Label::kRelevant ? rel : irr;
    for (SparseMatrix::InnerIterator it(x, r); it; ++it) {
      if (it.value() != 0.0) target(it.col()) += 1.0;
    }
  }
}

void require_single(ClassifierKind kind, const Hyperparams& h) {
  if (h.size() != 1) {
    throw ConfigError(std::string(classifier_name(kind)) + " takes exactly one hyperparameter, got " +
                      std::to_string(h.size()));
  }
}

}  // namespace

void check_trainable(ClassifierKind kind, const FeatureMatrix& m, std::span<const Label> labels,
                     const Hyperparams& h) {
  require_rows(m, labels);
  switch (kind) {
    case ClassifierKind::kVtt:
      if (!m.text_is_binary()) {
        throw ConfigError(
            "vtt needs binary occurrence features; skip it for weighted, normalised or PCA-projected data");
      }
      if (h.size() != m.counts.size()) {
        throw ConfigError("vtt takes one beta per count resource: " + std::to_string(m.counts.size()) +
                          " expected, " + std::to_string(h.size()) + " given");
      }
      for (double b : h) {
        if (!(b > 0.0)) throw ConfigError("vtt beta must be positive");
      }
      break;
    case ClassifierKind::kNaiveBayes:
      require_single(kind, h);
      if (!m.text_is_binary()) {
        throw ConfigError("nb is a Bernoulli model and needs binary occurrence features");
      }
      if (!(h[0] > 0.0)) throw ConfigError("nb alpha must be positive");
      break;
    case ClassifierKind::kDlda:
    case ClassifierKind::kLda:
      require_single(kind, h);
      if (!(h[0] >= 0.0 && h[0] <= 1.0)) throw ConfigError("shrink must lie in [0, 1]");
      break;
    case ClassifierKind::kLogreg:
    case ClassifierKind::kSvm:
      require_single(kind, h);
      if (!(h[0] > 0.0)) throw ConfigError(std::string(classifier_name(kind)) + " c must be positive");
      break;
  }
}

ClassStats class_stats(const FeatureMatrix& m, std::span<const Label> labels) {
  require_rows(m, labels);
  const ClassSizes s = class_sizes(labels);
  ClassStats stats;
  occurrence_counts(m.text, labels, stats.p, stats.n);
  stats.p /= static_cast<double>(s.relevant);
  stats.n /= static_cast<double>(s.irrelevant);
  return stats;
}

double vtt_angle(double p, double n) {
  constexpr double kQuarter = std::numbers::pi / 4.0;
  if (n == 0.0) return p > 0.0 ? kQuarter : 0.0;
  if (p == 0.0) return -kQuarter;
  return std::atan(p / n) - kQuarter;
}

double vtt_threshold(const Eigen::VectorXd& phi, const ClassStats& stats) {
  double lambda = 0.0;
  for (Eigen::Index i = 0; i < phi.size(); ++i) lambda += phi(i) * (stats.p(i) + stats.n(i)) / 2.0;
  return lambda;
}

TrainedModel vtt_train(const FeatureMatrix& m, std::span<const Label> labels, const Hyperparams& beta) {
  check_trainable(ClassifierKind::kVtt, m, labels, beta);
  const ClassStats stats = class_stats(m, labels);
  TrainedModel model = detail::model_shell(ClassifierKind::kVtt, m, beta);
  for (Eigen::Index i = 0; i < model.weights.size(); ++i) model.weights(i) = vtt_angle(stats.p(i), stats.n(i));
  const double lambda = vtt_threshold(model.weights, stats);
  // -sum_j (beta_j - c_j) / beta_j = sum_j c_j / beta_j - J
  model.ner_beta = Eigen::Map<const Eigen::VectorXd>(beta.data(), static_cast<Eigen::Index>(beta.size()));
  model.ner_weights = model.ner_beta.cwiseInverse();
  model.bias = -lambda - static_cast<double>(beta.size());
  return model;
}

TrainedModel nb_train(const FeatureMatrix& m, std::span<const Label> labels, double alpha) {
  check_trainable(ClassifierKind::kNaiveBayes, m, labels, {alpha});
  const ClassSizes s = class_sizes(labels);
  Eigen::VectorXd k_rel;
  Eigen::VectorXd k_irr;
  occurrence_counts(m.text, labels, k_rel, k_irr);
  TrainedModel model = detail::model_shell(ClassifierKind::kNaiveBayes, m, {alpha});
  double bias = std::log(static_cast<double>(s.relevant) / static_cast<double>(s.irrelevant));
  for (Eigen::Index i = 0; i < k_rel.size(); ++i) {
    const double tr = (k_rel(i) + alpha) / (static_cast<double>(s.relevant) + 2.0 * alpha);
    const double ti = (k_irr(i) + alpha) / (static_cast<double>(s.irrelevant) + 2.0 * alpha);
    model.weights(i) = std::log(tr) + std::log1p(-ti) - std::log(ti) - std::log1p(-tr);
    bias += std::log1p(-tr) - std::log1p(-ti);
  }
  model.bias = bias;
  return model;
}

TrainedModel dlda_train(const FeatureMatrix& m, std::span<const Label> labels, double shrink) {
  check_trainable(ClassifierKind::kDlda, m, labels, {shrink});
  const ClassSizes s = class_sizes(labels);
  const SparseMatrix x = m.combined();
  const Eigen::Index d = x.cols();
  const double nr = static_cast<double>(s.relevant);
  const double ni = static_cast<double>(s.irrelevant);

  Eigen::VectorXd mu_r = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd mu_i = Eigen::VectorXd::Zero(d);
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    Eigen::VectorXd& mu = labels[static_cast<size_t>(r)] == Label::kRelevant ? mu_r : mu_i;
    for (SparseMatrix::InnerIterator it(x, r); it; ++it) mu(it.col()) += it.value();
  }
  mu_r /= nr;
  mu_i /= ni;

  // Sum of squared deviations: non-zeros explicitly, implicit zeros as mu^2.
  Eigen::VectorXd ss = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd nnz_r = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd nnz_i = Eigen::VectorXd::Zero(d);
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const bool rel = labels[static_cast<size_t>(r)] == Label::kRelevant;
    const Eigen::VectorXd& mu = rel ? mu_r : mu_i;
    Eigen::VectorXd& nnz = rel ? nnz_r : nnz_i;
    for (SparseMatrix::InnerIterator it(x, r); it; ++it) {
      const double dev = it.value() - mu(it.col());
      ss(it.col()) += dev * dev;
      nnz(it.col()) += 1.0;
    }
  }
  for (Eigen::Index j = 0; j < d; ++j) {
    ss(j) += (nr - nnz_r(j)) * mu_r(j) * mu_r(j) + (ni - nnz_i(j)) * mu_i(j) * mu_i(j);
  }
  const double dof = std::max(nr + ni - 2.0, 1.0);
  const Eigen::VectorXd v = ss / dof;
  const double v_mean = d > 0 ? v.mean() : 0.0;
  if (!(v_mean > 0.0)) throw NumericalError("dlda: every feature has zero within-class variance");

  Eigen::VectorXd w(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const double vt = (1.0 - shrink) * v(j) + shrink * v_mean;
    w(j) = vt > 0.0 ? (mu_r(j) - mu_i(j)) / vt : 0.0;
  }
  TrainedModel model = detail::model_shell(ClassifierKind::kDlda, m, {shrink});
  detail::set_combined_weights(model, w, m.text_columns());
  model.bias = -w.dot(mu_r + mu_i) / 2.0 + std::log(nr / ni);
  return model;
}

TrainedModel lda_train(const FeatureMatrix& m, std::span<const Label> labels, double shrink,
                       const LdaOptions& options) {
  check_trainable(ClassifierKind::kLda, m, labels, {shrink});
  const double s[] = {shrink};
  std::vector<PathEntry> path = detail::lda_path(m, labels, s, options);
  if (!path[0].model) throw NumericalError(path[0].error);
  return std::move(*path[0].model);
}

TrainedModel logreg_train(const FeatureMatrix& m, std::span<const Label> labels, double c,
                          const SolverOptions& options) {
  check_trainable(ClassifierKind::kLogreg, m, labels, {c});
  const double cs[] = {c};
  std::vector<PathEntry> path = detail::logreg_path(m, labels, cs, options);
  if (!path[0].model) throw NumericalError(path[0].error);
  return std::move(*path[0].model);
}

TrainedModel svm_train(const FeatureMatrix& m, std::span<const Label> labels, double c,
                       const SolverOptions& options) {
  check_trainable(ClassifierKind::kSvm, m, labels, {c});
  const double cs[] = {c};
  std::vector<PathEntry> path = detail::svm_path(m, labels, cs, options);
  if (!path[0].model) throw NumericalError(path[0].error);
  return std::move(*path[0].model);
}

Eigen::VectorXd combined_weights(const TrainedModel& model) {
  Eigen::VectorXd w(model.columns());
  w << model.weights, model.ner_weights;
  return w;
}

double logreg_objective(const FeatureMatrix& m, std::span<const Label> labels, const Eigen::VectorXd& w,
                        double b, double c) {
  const Eigen::VectorXd z = kernels::serial::multiply(m.combined(), w).array() + b;
  const Eigen::VectorXd y = detail::signed_labels(labels);
  double loss = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double t = -y(i) * z(i);
    loss += t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
  }
  return 0.5 * w.squaredNorm() + c * loss;
}

double svm_objective(const FeatureMatrix& m, std::span<const Label> labels, const Eigen::VectorXd& w,
                     double b, double c) {
  const Eigen::VectorXd z = kernels::serial::multiply(m.combined(), w).array() + b;
  const Eigen::VectorXd y = detail::signed_labels(labels);
  double loss = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) loss += std::max(0.0, 1.0 - y(i) * z(i));
  return 0.5 * w.squaredNorm() + c * loss;
}

TrainedModel train(ClassifierKind kind, const FeatureMatrix& m, std::span<const Label> labels,
                   const Hyperparams& h) {
  check_trainable(kind, m, labels, h);
  switch (kind) {
    case ClassifierKind::kVtt: return vtt_train(m, labels, h);
    case ClassifierKind::kNaiveBayes: return nb_train(m, labels, h[0]);
    case ClassifierKind::kDlda: return dlda_train(m, labels, h[0]);
    case ClassifierKind::kLda: return lda_train(m, labels, h[0]);
    case ClassifierKind::kLogreg: return logreg_train(m, labels, h[0]);
    case ClassifierKind::kSvm: return svm_train(m, labels, h[0]);
  }
  throw ConfigError("unknown classifier");
}

std::vector<PathEntry> train_path(ClassifierKind kind, const FeatureMatrix& m, std::span<const Label> labels,
                                  std::span<const Hyperparams> grid) {
  std::vector<PathEntry> out(grid.size());
  // Arity and input checks per grid point; failures are recorded, not thrown.
  std::vector<double> values;
  std::vector<size_t> valid;
  for (size_t g = 0; g < grid.size(); ++g) {
    try {
      check_trainable(kind, m, labels, grid[g]);
      valid.push_back(g);
      if (!grid[g].empty()) values.push_back(grid[g][0]);
    } catch (const Error& e) {
      out[g].error = e.what();
    }
  }
  if (valid.empty()) return out;

  std::vector<PathEntry> shared;
  if (kind == ClassifierKind::kLda) {
    shared = detail::lda_path(m, labels, values, {});
  } else if (kind == ClassifierKind::kLogreg) {
    shared = detail::logreg_path(m, labels, values, {});
  } else if (kind == ClassifierKind::kSvm) {
    shared = detail::svm_path(m, labels, values, {});
  }
  for (size_t k = 0; k < valid.size(); ++k) {
    const size_t g = valid[k];
    if (!shared.empty()) {
      out[g] = std::move(shared[k]);
      continue;
    }
    try {
      out[g].model = train(kind, m, labels, grid[g]);
    } catch (const Error& e) {
      out[g].error = e.what();
    }
  }
  return out;
}

std::vector<Hyperparams> default_grid(ClassifierKind kind, size_t resources) {
  std::vector<Hyperparams> grid;
  switch (kind) {
    case ClassifierKind::kVtt: {
      const double betas[] = {0.5, 1, 2, 4, 8, 16};
      grid.push_back({});
      for (size_t r = 0; r < resources; ++r) {
        std::vector<Hyperparams> next;
        for (const auto& prefix : grid) {
          for (double b : betas) {
            Hyperparams h = prefix;
            h.push_back(b);
            next.push_back(std::move(h));
          }
        }
        grid = std::move(next);
      }
      break;
    }
    case ClassifierKind::kNaiveBayes:
      for (double a : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0}) grid.push_back({a});
      break;
    case ClassifierKind::kDlda:
    case ClassifierKind::kLda:
      for (int i = 0; i <= 10; ++i) grid.push_back({i / 10.0});
      break;
    case ClassifierKind::kLogreg:
    case ClassifierKind::kSvm:
      for (double c : {0.01, 0.1, 1.0, 10.0, 100.0}) grid.push_back({c});
      break;
  }
  return grid;
}

namespace {

void require_shape(const TrainedModel& model, Eigen::Index text_columns, size_t count_columns) {
  if (text_columns != model.weights.size() || static_cast<Eigen::Index>(count_columns) != model.ner_weights.size()) {
    throw ConfigError("dimension mismatch: model has " + std::to_string(model.weights.size()) + "+" +
                      std::to_string(model.ner_weights.size()) + " columns, input has " +
                      std::to_string(text_columns) + "+" + std::to_string(count_columns));
  }
}

}  // namespace

Eigen::VectorXd score(const TrainedModel& model, const FeatureMatrix& m) {
  require_shape(model, m.text_columns(), m.counts.size());
  Eigen::VectorXd s = kernels::multiply(m.text, model.weights);
  for (size_t j = 0; j < m.counts.size(); ++j) s += model.ner_weights(static_cast<Eigen::Index>(j)) * m.counts[j].values;
  s.array() += model.bias;
  return s;
}

double score(const TrainedModel& model, const Eigen::VectorXd& text, const Eigen::VectorXd& counts) {
  require_shape(model, text.size(), static_cast<size_t>(counts.size()));
  return model.weights.dot(text) + (counts.size() ? model.ner_weights.dot(counts) : 0.0) + model.bias;
}

Label predict(double s) { return s > 0.0 ? Label::kRelevant : Label::kIrrelevant; }

std::vector<Label> predict(const TrainedModel& model, const FeatureMatrix& m) {
  const Eigen::VectorXd s = score(model, m);
  std::vector<Label> out(static_cast<size_t>(s.size()));
  for (Eigen::Index i = 0; i < s.size(); ++i) out[static_cast<size_t>(i)] = predict(s(i));
  return out;
}

// Model file: a line-oriented text format, tab-separated where keys may
// contain spaces (bigrams, MeSH headings).
void write_model(std::ostream& out, const TrainedModel& model) {
  const auto old_precision = out.precision(17);
  out << "pkddi-model\t1\n";
  out << "kind\t" << classifier_name(model.kind) << '\n';
  out << "hyperparams\t" << model.hyperparams.size();
  for (double h : model.hyperparams) out << '\t' << h;
  out << '\n';
  out << "vocabulary\t" << std::hex << model.vocabulary_hash << std::dec << '\n';
  out << "bias\t" << model.bias << '\n';
  for (const auto& w : model.warnings) out << "warning\t" << w << '\n';
  out << "weights\t" << model.weights.size() << '\n';
  for (Eigen::Index i = 0; i < model.weights.size(); ++i) {
    out << model.feature_keys[static_cast<size_t>(i)] << '\t' << model.weights(i) << '\n';
  }
  out << "ner_weights\t" << model.ner_weights.size() << '\n';
  for (Eigen::Index j = 0; j < model.ner_weights.size(); ++j) {
    out << model.resources[static_cast<size_t>(j)] << '\t' << model.ner_weights(j);
    if (model.ner_beta.size() == model.ner_weights.size()) out << '\t' << model.ner_beta(j);
    out << '\n';
  }
  out << "column_sd\t" << model.column_sd.size() << '\n';
  for (Eigen::Index j = 0; j < model.column_sd.size(); ++j) out << model.column_sd(j) << '\n';
  out.precision(old_precision);
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> parts;
  size_t start = 0;
  while (true) {
    const size_t tab = line.find('\t', start);
    parts.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return parts;
}

double to_double(const std::string& s, int64_t line) {
  size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw ParseError("model file: bad number '" + s + "'", line);
  return v;
}

}  // namespace

TrainedModel read_model(std::istream& in) {
  std::string line;
  int64_t line_no = 0;
  auto next = [&]() -> std::vector<std::string> {
    if (!std::getline(in, line)) throw ParseError("model file: unexpected end of file", line_no + 1);
    ++line_no;
    chomp_cr(line);
    return split_tabs(line);
  };
  auto expect = [&](const std::string& tag, size_t min_parts) {
    std::vector<std::string> p = next();
    if (p[0] != tag || p.size() < min_parts) throw ParseError("model file: expected '" + tag + "'", line_no);
    return p;
  };

  auto header = next();
  if (header.size() != 2 || header[0] != "pkddi-model" || header[1] != "1") {
    throw ParseError("not a pkddi-model v1 file", 1);
  }
  TrainedModel model;
  auto kind = parse_classifier(expect("kind", 2)[1]);
  if (!kind) throw ParseError("model file: unknown classifier", line_no);
  model.kind = *kind;
  auto hp = expect("hyperparams", 2);
  const size_t nh = static_cast<size_t>(to_double(hp[1], line_no));
  if (hp.size() != nh + 2) throw ParseError("model file: hyperparameter count mismatch", line_no);
  for (size_t i = 0; i < nh; ++i) model.hyperparams.push_back(to_double(hp[i + 2], line_no));
  model.vocabulary_hash = std::stoull(expect("vocabulary", 2)[1], nullptr, 16);
  model.bias = to_double(expect("bias", 2)[1], line_no);

  std::vector<std::string> p = next();
  while (p[0] == "warning" && p.size() >= 2) {
    model.warnings.push_back(p[1]);
    p = next();
  }
  if (p[0] != "weights" || p.size() != 2) throw ParseError("model file: expected 'weights'", line_no);
  const auto nw = static_cast<Eigen::Index>(to_double(p[1], line_no));
  model.weights.resize(nw);
  for (Eigen::Index i = 0; i < nw; ++i) {
    p = next();
    if (p.size() != 2) throw ParseError("model file: weight lines are key<TAB>value", line_no);
    model.feature_keys.push_back(p[0]);
    model.weights(i) = to_double(p[1], line_no);
  }
  p = expect("ner_weights", 2);
  const auto nn = static_cast<Eigen::Index>(to_double(p[1], line_no));
  model.ner_weights.resize(nn);
  std::vector<double> betas;
  for (Eigen::Index j = 0; j < nn; ++j) {
    p = next();
    if (p.size() != 2 && p.size() != 3) throw ParseError("model file: bad ner_weights line", line_no);
    model.resources.push_back(p[0]);
    model.ner_weights(j) = to_double(p[1], line_no);
    if (p.size() == 3) betas.push_back(to_double(p[2], line_no));
  }
  if (!betas.empty()) {
    if (static_cast<Eigen::Index>(betas.size()) != nn) throw ParseError("model file: partial beta column", line_no);
    model.ner_beta = Eigen::Map<Eigen::VectorXd>(betas.data(), nn);
  }
  p = expect("column_sd", 2);
  const auto ns = static_cast<Eigen::Index>(to_double(p[1], line_no));
  if (ns != 0 && ns != model.columns()) throw ParseError("model file: column_sd length mismatch", line_no);
  model.column_sd.resize(ns);
  for (Eigen::Index j = 0; j < ns; ++j) model.column_sd(j) = to_double(next()[0], line_no);
  if (keys_fingerprint(model.feature_keys) != model.vocabulary_hash) {
    throw ParseError("model file: feature keys do not match the stored vocabulary hash", line_no);
  }
  return model;
}

}  // namespace pkddi
