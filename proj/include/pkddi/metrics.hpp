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

#include <cstdint>
#include <span>
#include <vector>

#include "pkddi/corpus.hpp"

namespace pkddi {

struct ConfusionCounts {
  int64_t tp = 0;
  int64_t fp = 0;
  int64_t fn = 0;
  int64_t tn = 0;

  int64_t total() const { return tp + fp + fn + tn; }
  bool operator==(const ConfusionCounts&) const = default;
};

ConfusionCounts confusion(std::span<const Label> truth, std::span<const Label> predicted);

// 2tp / (2tp + fp + fn); 0 when tp = 0.
double f1(const ConfusionCounts& c);
// 0 when any marginal is 0.
double mcc(const ConfusionCounts& c);

struct ScoredLabel {
  double score = 0.0;
  Label label = Label::kIrrelevant;
};

enum class PrInterpolation { kStaircase, kElevenPoint };

// Area under the precision/recall curve with precision at recall r replaced by
// the maximum precision at any recall >= r. Items with equal scores enter the
// ranking together. Throws ConfigError unless both classes are present.
double iauc(std::span<const ScoredLabel> ranked, PrInterpolation mode = PrInterpolation::kStaircase);
double iauc(std::span<const double> scores, std::span<const Label> labels,
            PrInterpolation mode = PrInterpolation::kStaircase);

// Competition ranks (1 = best, ties share the lowest rank) of values compared
// after rounding to `decimals`. Higher values rank better.
std::vector<int> competition_ranks(std::span<const double> values, int decimals = 3);

inline int64_t rp3(int rank_f1, int rank_mcc, int rank_iauc) {
  return static_cast<int64_t>(rank_f1) * rank_mcc * rank_iauc;
}

}  // namespace pkddi
