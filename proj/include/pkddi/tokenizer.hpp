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

#include <string>
#include <string_view>
#include <vector>

#include "pkddi/corpus.hpp"

namespace pkddi {

enum class SourceField { kTitle, kAbstract, kSentenceText, kAuthor, kJournal, kMesh, kRn, kSi };

std::string_view source_field_name(SourceField field);

struct Token {
  std::string surface;
  SourceField source_field = SourceField::kAbstract;

  bool operator==(const Token&) const = default;
};

// Lowercases, splits on whitespace and punctuation, masks every maximal digit
// run as '#', drops tokens shorter than two characters and Porter-stems the
// purely alphabetic ones.
//
// A hyphen stays inside a token when both neighbours are alphanumeric, and
// '.' or ',' stay when both neighbours are digits, so "3.4-fold" becomes
// "#.#-fold".
std::vector<Token> tokenize(std::string_view text, SourceField field = SourceField::kAbstract);

// Author, journal, MeSH, RN and SI values as single unstemmed tokens,
// prefixed "Author:", "Journal:", "MeSH:" and "Substance:". An RN value of
// the form "<code> (<name>)" contributes its name.
std::vector<Token> metadata_tokens(const AbstractRecord& record);

// Text of a registry-number entry, e.g. "0 (Enzyme Inhibitors)" -> "Enzyme Inhibitors".
std::string substance_name(std::string_view rn_value);

}  // namespace pkddi
