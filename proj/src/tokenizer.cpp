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

#include "pkddi/tokenizer.hpp"

#include <algorithm>

#include "pkddi/porter_stemmer.hpp"

namespace pkddi {
namespace {

bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

// Bytes >= 0x80 belong to multi-byte UTF-8 sequences and are kept inside
// tokens rather than treated as separators.
bool is_word_byte(unsigned char c) {
  return is_digit(c) || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
}

char to_lower(unsigned char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c);
}

std::string mask_digits(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (size_t i = 0; i < raw.size(); ++i) {
    if (is_digit(static_cast<unsigned char>(raw[i]))) {
      if (i == 0 || !is_digit(static_cast<unsigned char>(raw[i - 1]))) out.push_back('#');
    } else {
      out.push_back(raw[i]);
    }
  }
  return out;
}

bool all_lower_alpha(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return c >= 'a' && c <= 'z'; });
}

std::string trimmed(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

}  // namespace

std::string_view source_field_name(SourceField field) {
  switch (field) {
    case SourceField::kTitle: return "title";
    case SourceField::kAbstract: return "abstract";
    case SourceField::kSentenceText: return "sentence";
    case SourceField::kAuthor: return "author";
    case SourceField::kJournal: return "journal";
    case SourceField::kMesh: return "mesh";
    case SourceField::kRn: return "rn";
    case SourceField::kSi: return "si";
  }
  return "unknown";
}

std::vector<Token> tokenize(std::string_view text, SourceField field) {
  std::vector<Token> tokens;
  const size_t n = text.size();
  size_t i = 0;
  std::string raw;
  while (i < n) {
    while (i < n && !is_word_byte(static_cast<unsigned char>(text[i]))) ++i;
    if (i >= n) break;
    raw.clear();
    while (i < n) {
      const unsigned char c = static_cast<unsigned char>(text[i]);
      if (is_word_byte(c)) {
        raw.push_back(to_lower(c));
        ++i;
        continue;
      }
      const bool has_next = i + 1 < n;
      const unsigned char next = has_next ? static_cast<unsigned char>(text[i + 1]) : 0;
      const unsigned char prev = static_cast<unsigned char>(text[i - 1]);
      if (c == '-' && has_next && is_word_byte(next)) {
        raw.push_back('-');
        ++i;
      } else if ((c == '.' || c == ',') && has_next && is_digit(prev) && is_digit(next)) {
        raw.push_back(static_cast<char>(c));
        ++i;
      } else {
        break;
      }
    }
    std::string surface = mask_digits(raw);
    if (surface.size() < 2) continue;
    if (all_lower_alpha(surface)) {
      surface = porter_stem(surface);
      if (surface.size() < 2) continue;
    }
    tokens.push_back(Token{std::move(surface), field});
  }
  return tokens;
}

std::string substance_name(std::string_view rn_value) {
  const std::string value = trimmed(rn_value);
  const size_t open = value.find(" (");
  if (open == std::string::npos || value.empty() || value.back() != ')') return value;
  std::string name = trimmed(std::string_view(value).substr(open + 2, value.size() - open - 3));
  return name.empty() ? value : name;
}

std::vector<Token> metadata_tokens(const AbstractRecord& record) {
  std::vector<Token> tokens;
  auto add = [&tokens](std::string_view prefix, const std::string& value, SourceField field) {
    std::string v = trimmed(value);
    if (v.empty()) return;
    tokens.push_back(Token{std::string(prefix) + v, field});
  };
  for (const auto& a : record.authors) add("Author:", a, SourceField::kAuthor);
  add("Journal:", record.journal, SourceField::kJournal);
  for (const auto& m : record.mesh_terms) add("MeSH:", m, SourceField::kMesh);
  for (const auto& s : record.rn_substances) add("Substance:", substance_name(s), SourceField::kRn);
  for (const auto& s : record.si_substances) add("Substance:", s, SourceField::kSi);
  return tokens;
}

}  // namespace pkddi
