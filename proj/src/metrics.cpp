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

#include "pkddi/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pkddi/error.hpp"

namespace pkddi {

ConfusionCounts confusion(std::span<const Label> truth, std::span<const Label> predicted) {
  if (truth.size() != predicted.size()) {
    throw ConfigError("confusion: " + std::to_string(truth.size()) + " labels vs " +
                      std::to_string(predicted.size()) + " predictions");
  }
  ConfusionCounts c;
  for (size_t i = 0; i < truth.size(); ++i) {
    const bool t = truth[i] == Label::kRelevant;
    const bool p = predicted[i] == Label::kRelevant;
    if (t && p) ++c.tp;
    else if (!t && p) ++c.fp;
    else if (t) ++c.fn;
    else ++c.tn;
  }
  return c;
}

double f1(const ConfusionCounts& c) {
  if (c.tp == 0) return 0.0;
  return static_cast<double>(2 * c.tp) / static_cast<double>(2 * c.tp + c.fp + c.fn);
}

double mcc(const ConfusionCounts& c) {
  const int64_t a = c.tp + c.fp;
  const int64_t b = c.tp + c.fn;
  const int64_t d = c.tn + c.fp;
  const int64_t e = c.tn + c.fn;
  if (a == 0 || b == 0 || d == 0 || e == 0) return 0.0;
  const double num = static_cast<double>(c.tp * c.tn - c.fp * c.fn);
  return num / std::sqrt(static_cast<double>(a) * static_cast<double>(b) * static_cast<double>(d) *
                         static_cast<double>(e));
}

double iauc(std::span<const ScoredLabel> ranked, PrInterpolation mode) {
  std::vector<ScoredLabel> items(ranked.begin(), ranked.end());
  int64_t positives = 0;
  for (const auto& it : items) {
    if (std::isnan(it.score)) throw ConfigError("iauc: NaN score");
    if (it.label == Label::kRelevant) ++positives;
  }
  if (positives == 0 || positives == static_cast<int64_t>(items.size())) {
    throw ConfigError("iauc needs at least one relevant and one irrelevant item");
  }
  std::stable_sort(items.begin(), items.end(),
                   [](const ScoredLabel& a, const ScoredLabel& b) { return a.score > b.score; });

  // One PR point per block of tied scores.
  std::vector<double> recall;
  std::vector<double> precision;
  int64_t tp = 0;
  int64_t seen = 0;
  for (size_t i = 0; i < items.size();) {
    size_t j = i;
    while (j < items.size() && items[j].score == items[i].score) {
      if (items[j].label == Label::kRelevant) ++tp;
      ++j;
    }
    seen += static_cast<int64_t>(j - i);
    recall.push_back(static_cast<double>(tp) / static_cast<double>(positives));
    precision.push_back(static_cast<double>(tp) / static_cast<double>(seen));
    i = j;
  }
  // Interpolate from the right.
  for (size_t k = precision.size() - 1; k-- > 0;) precision[k] = std::max(precision[k], precision[k + 1]);

  if (mode == PrInterpolation::kElevenPoint) {
    double sum = 0.0;
    size_t k = 0;
    for (int step = 0; step <= 10; ++step) {
      const double r = step / 10.0;
      while (k < recall.size() && recall[k] < r - 1e-12) ++k;
      sum += k < recall.size() ? precision[k] : 0.0;
    }
    return sum / 11.0;
  }
  double area = 0.0;
  double previous = 0.0;
  for (size_t k = 0; k < recall.size(); ++k) {
    area += (recall[k] - previous) * precision[k];
    previous = recall[k];
  }
  return area;
}

double iauc(std::span<const double> scores, std::span<const Label> labels, PrInterpolation mode) {
  if (scores.size() != labels.size()) throw ConfigError("iauc: scores and labels differ in length");
  std::vector<ScoredLabel> items(scores.size());
  for (size_t i = 0; i < scores.size(); ++i) items[i] = {scores[i], labels[i]};
  return iauc(items, mode);
}

std::vector<int> competition_ranks(std::span<const double> values, int decimals) {
  const double scale = std::pow(10.0, decimals);
  std::vector<double> keys(values.size());
  for (size_t i = 0; i < values.size(); ++i) keys[i] = std::round(values[i] * scale);
  std::vector<int> ranks(values.size(), 1);
  for (size_t i = 0; i < values.size(); ++i) {
    for (size_t j = 0; j < values.size(); ++j) {
      if (keys[j] > keys[i]) ++ranks[i];
    }
  }
  return ranks;
}

}  // namespace pkddi
