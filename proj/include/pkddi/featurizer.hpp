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

// Binary unigram/bigram occurrence matrices plus NER/dictionary count columns.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "pkddi/corpus.hpp"
#include "pkddi/tokenizer.hpp"

namespace pkddi {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;

enum class NgramOrder { kUnigram, kUnigramBigram };

std::string_view ngram_order_name(NgramOrder order);
std::optional<NgramOrder> parse_ngram_order(std::string_view name);

// Tokens of one document. Bigrams are formed only inside a text segment
// (one source field, or one sentence); metadata tokens never pair up.
struct TokenizedDocument {
  std::vector<std::vector<Token>> segments;
  std::vector<Token> metadata;
};

TokenizedDocument tokenize_document(const Document& document);

// Distinct feature keys of a document, sorted. Bigram keys are "a b".
std::vector<std::string> feature_keys(const TokenizedDocument& document, NgramOrder order);

// Corpus-wide interning of feature keys. Global ids follow lexicographic key
// order, so sorting by id sorts by key. Carries no statistics.
class FeatureIndex {
 public:
  FeatureIndex(std::span<const TokenizedDocument> documents, std::vector<std::string> doc_ids,
               NgramOrder order);

  NgramOrder order() const { return order_; }
  size_t size() const { return keys_.size(); }
  size_t documents() const { return doc_features_.size(); }
  const std::string& key(int32_t id) const { return keys_[static_cast<size_t>(id)]; }
  const std::string& doc_id(size_t row) const { return doc_ids_[row]; }
  // Sorted distinct global ids of a document.
  std::span<const int32_t> features(size_t row) const { return doc_features_[row]; }

 private:
  NgramOrder order_;
  std::vector<std::string> keys_;
  std::vector<std::string> doc_ids_;
  std::vector<std::vector<int32_t>> doc_features_;
};

class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(std::vector<std::string> keys, std::vector<int64_t> doc_freq, std::vector<int32_t> global_ids = {});

  size_t size() const { return keys_.size(); }
  bool empty() const { return keys_.empty(); }
  const std::vector<std::string>& keys() const { return keys_; }
  const std::vector<int64_t>& doc_freq() const { return doc_freq_; }
  std::optional<int32_t> find(const std::string& key) const;
  // Column of a FeatureIndex global id, if the vocabulary was built from one.
  std::optional<int32_t> column_of_global(int32_t global_id) const;
  uint64_t fingerprint() const;

 private:
  std::vector<std::string> keys_;
  std::vector<int64_t> doc_freq_;
  std::vector<int32_t> global_ids_;
  std::unordered_map<std::string, int32_t> index_;
};

// Hash of an ordered key list; equals Vocabulary::fingerprint for its keys.
uint64_t keys_fingerprint(std::span<const std::string> keys);

inline constexpr int64_t kMinDocumentFrequency = 2;

// Vocabulary over the given training rows only. Throws ConfigError when no
// feature reaches the document-frequency threshold.
Vocabulary build_vocabulary(const FeatureIndex& index, std::span<const size_t> train_rows,
                            int64_t min_doc_freq = kMinDocumentFrequency);
Vocabulary build_vocabulary(std::span<const TokenizedDocument> train_docs, NgramOrder order,
                            int64_t min_doc_freq = kMinDocumentFrequency);

struct CountColumn {
  std::string resource;
  Eigen::VectorXd values;
};

// Documents x features. Textual features are sparse and binary when built;
// transforms make them real-valued, and PCA makes them dense.
struct FeatureMatrix {
  std::vector<std::string> row_ids;
  std::vector<std::string> feature_keys;
  SparseMatrix text;
  std::vector<CountColumn> counts;

  Eigen::Index rows() const { return text.rows(); }
  Eigen::Index text_columns() const { return text.cols(); }
  Eigen::Index columns() const { return text.cols() + static_cast<Eigen::Index>(counts.size()); }
  bool text_is_binary() const;
  // Text block followed by one column per count resource.
  SparseMatrix combined() const;
  FeatureMatrix select_rows(std::span<const size_t> rows) const;
};

FeatureMatrix occurrence_matrix(const FeatureIndex& index, std::span<const size_t> rows,
                                const Vocabulary& vocab);
FeatureMatrix occurrence_matrix(std::span<const TokenizedDocument> docs,
                                std::span<const std::string> doc_ids, const Vocabulary& vocab,
                                NgramOrder order);

// Appends one count column per table, in order. Documents absent from a
// table get 0. Throws on a duplicate resource name.
FeatureMatrix attach_counts(const FeatureMatrix& m, std::span<const NerCountTable> tables);
FeatureMatrix detach_counts(const FeatureMatrix& m, const std::string& resource);

// Triplets (row_id, feature_key, value) for non-zero entries; count columns
// use the key "count:<resource>".
void write_matrix_tsv(std::ostream& out, const FeatureMatrix& m);
// Rows (column, key, doc_freq).
void write_vocabulary_tsv(std::ostream& out, const Vocabulary& vocab);

}  // namespace pkddi
