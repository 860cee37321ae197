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

#include "pkddi/dictionary_matcher.hpp"

namespace pkddi {
namespace {

bool is_word_byte(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}

unsigned char fold(unsigned char c) { return (c >= 'A' && c <= 'Z') ? c - 'A' + 'a' : c; }

}  // namespace

DictionaryMatcher::DictionaryMatcher(const Dictionary& dictionary) : nodes_(1) {
  for (const auto& entry : dictionary.entries) {
    int32_t node = 0;
    for (unsigned char c : entry) {
      const unsigned char f = fold(c);
      auto it = nodes_[node].next.find(f);
      if (it == nodes_[node].next.end()) {
        const auto child = static_cast<int32_t>(nodes_.size());
        nodes_[node].next.emplace(f, child);
        nodes_.emplace_back();
        node = child;
      } else {
        node = it->second;
      }
    }
    if (node != 0) nodes_[node].terminal = true;
  }
}

int64_t DictionaryMatcher::count(std::string_view text) const {
  const size_t n = text.size();
  auto byte = [&text](size_t i) { return static_cast<unsigned char>(text[i]); };
  int64_t matches = 0;
  size_t i = 0;
  while (i < n) {
    const bool starts_at_boundary = i == 0 || !is_word_byte(byte(i - 1)) || !is_word_byte(byte(i));
    size_t best_end = 0;
    if (starts_at_boundary) {
      int32_t node = 0;
      for (size_t p = i; p < n; ++p) {
        const auto it = nodes_[node].next.find(fold(byte(p)));
        if (it == nodes_[node].next.end()) break;
        node = it->second;
        const size_t end = p + 1;
        const bool ends_at_boundary = end == n || !is_word_byte(byte(end)) || !is_word_byte(byte(p));
        if (nodes_[node].terminal && ends_at_boundary) best_end = end;
      }
    }
    if (best_end > 0) {
      ++matches;
      i = best_end;
    } else {
      ++i;
    }
  }
  return matches;
}

int64_t dictionary_counts(std::string_view doc_text, const Dictionary& dictionary) {
  return DictionaryMatcher(dictionary).count(doc_text);
}

NerCountTable dictionary_count_table(const Dictionary& dictionary, std::span<const Document> documents) {
  const DictionaryMatcher matcher(dictionary);
  NerCountTable table{dictionary.name, {}};
  for (const auto& doc : documents) {
    const int64_t c = matcher.count(doc.raw_text());
    if (c > 0) table.counts.emplace(doc.id, c);
  }
  return table;
}

}  // namespace pkddi
