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

// Two-class token-emission model that writes MEDLINE records and labels.
// Words are pseudo-words the stemmer leaves unchanged, so the feature keys of
// the generated corpus are exactly the emitted words.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "pkddi/corpus.hpp"

namespace pkddi {

struct SyntheticSpec {
  int64_t documents = 1200;
  int signal_relevant = 50;
  int signal_irrelevant = 50;
  int noise = 500;
  double prior = 0.75;          // P(Relevant)
  double signal_rate = 0.1;     // per own-class signal word
  double cross_rate = 0.01;     // per other-class signal word
  double noise_rate = 0.02;     // per noise word
  int min_signal = 1;           // own-class signal words forced into every document
  int authors = 200;            // label-independent metadata pools
  int journals = 20;
  int mesh_terms = 40;
  uint64_t seed = 1;

  // Throws ConfigError on counts <= 0 or probabilities outside (0, 1)
  // (rates may be 0).
  void validate() const;
};

SyntheticSpec parse_synthetic_spec(std::string_view json_text);
std::string synthetic_spec_json(const SyntheticSpec& spec);

struct SyntheticCorpus {
  std::vector<AbstractRecord> records;
  std::map<std::string, Label> labels;
};

SyntheticCorpus generate_synthetic(const SyntheticSpec& spec);

// Distinct pseudo-word for each index (consonant-vowel syllables ending in
// "o"), stable under the Porter stemmer.
std::string pseudo_word(uint64_t index);

}  // namespace pkddi
