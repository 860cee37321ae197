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

#include <cmath>
#include <limits>
#include <string>

#include "pkddi/error.hpp"
#include "pkddi/evaluation.hpp"
#include "pkddi/random.hpp"

namespace pkddi {

double paired_permutation_test(std::span<const double> a, std::span<const double> b, Tails tails,
                               const PermutationOptions& options) {
  if (a.size() != b.size()) {
    throw ConfigError("permutation test: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()) +
                      " paired values");
  }
  const size_t n = a.size();
  if (n == 0) throw ConfigError("permutation test needs at least one pair");
  std::vector<double> d(n);
  double scale = 0.0;
  for (size_t i = 0; i < n; ++i) {
    d[i] = a[i] - b[i];
    scale += std::abs(d[i]);
  }
  // Sums are compared instead of means; every assignment is summed in index
  // order, so the observed one reproduces `observed` bit for bit and the
  // tolerance only absorbs rounding between different sign patterns.
  double observed = 0.0;
  for (double v : d) observed += v;
  const double tol = 1e-12 * scale;
  auto extreme = [&](double s) {
    return tails == Tails::kOne ? s >= observed - tol : std::abs(s) >= std::abs(observed) - tol;
  };

  if (!options.force_monte_carlo && n <= static_cast<size_t>(options.exact_limit) && n < 63) {
    const uint64_t total = uint64_t{1} << n;
    uint64_t hits = 0;
    for (uint64_t mask = 0; mask < total; ++mask) {
      double s = 0.0;
      for (size_t i = 0; i < n; ++i) s += (mask >> i) & 1 ? -d[i] : d[i];
      if (extreme(s)) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(total);
  }

  Rng rng(substream_seed(options.seed, "permutation"));
  int64_t hits = 0;
  for (int64_t draw = 0; draw < options.draws; ++draw) {
    double s = 0.0;
    uint64_t bits = 0;
    for (size_t i = 0; i < n; ++i) {
      if (i % 64 == 0) bits = rng.next();
      s += (bits >> (i % 64)) & 1 ? -d[i] : d[i];
    }
    if (extreme(s)) ++hits;
  }
  return static_cast<double>(1 + hits) / static_cast<double>(1 + options.draws);
}

Significance significance(const EvalReport& report, Metric metric, double alpha, const PermutationOptions& options) {
  const size_t n = report.configs.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  Significance s;
  s.metric = metric;
  s.p_vs_best.assign(n, nan);
  s.indistinguishable.assign(n, false);
  s.pairwise.assign(n, std::vector<double>(n, nan));

  auto mean_of = [&](size_t c) {
    const ConfigSummary& cs = report.summary.at(c);
    return metric == Metric::kF1 ? cs.mean_f1 : metric == Metric::kMcc ? cs.mean_mcc : cs.mean_iauc;
  };
  bool found = false;
  for (size_t c = 0; c < n; ++c) {
    if (!report.summary.at(c).complete) continue;
    if (!found || mean_of(c) > mean_of(s.best)) {
      s.best = c;
      found = true;
    }
  }
  if (!found) return s;

  std::vector<std::vector<double>> values(n);
  for (size_t c = 0; c < n; ++c) values[c] = report.fold_values(c, metric);
  for (size_t c = 0; c < n; ++c) {
    if (!report.summary[c].complete) continue;
    s.p_vs_best[c] = paired_permutation_test(values[s.best], values[c], Tails::kOne, options);
    s.indistinguishable[c] = s.p_vs_best[c] > alpha;
    for (size_t o = 0; o < n; ++o) {
      if (!report.summary[o].complete) continue;
      s.pairwise[c][o] = o < c ? s.pairwise[o][c] : paired_permutation_test(values[c], values[o], Tails::kTwo, options);
    }
  }
  return s;
}

}  // namespace pkddi
