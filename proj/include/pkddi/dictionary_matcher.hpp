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
#include <map>
#include <span>
#include <string_view>
#include <vector>

#include "pkddi/corpus.hpp"

namespace pkddi {

// Counts dictionary entries in raw text: case-insensitive, matches must start
// and end on word boundaries, the longest entry wins at each position and
// matches never overlap.
class DictionaryMatcher {
 public:
  explicit DictionaryMatcher(const Dictionary& dictionary);

  int64_t count(std::string_view text) const;

 private:
  struct Node {
    std::map<unsigned char, int32_t> next;
    bool terminal = false;
  };
  std::vector<Node> nodes_;
};

int64_t dictionary_counts(std::string_view doc_text, const Dictionary& dictionary);

// Per-document counts for a whole corpus, as a table named after the dictionary.
NerCountTable dictionary_count_table(const Dictionary& dictionary, std::span<const Document> documents);

}  // namespace pkddi
