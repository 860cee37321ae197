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

#include "pkddi/featurizer.hpp"

#include <algorithm>
#include <ostream>
#include <set>
#include <unordered_map>

#include "pkddi/error.hpp"
#include "pkddi/random.hpp"

namespace pkddi {

std::string_view ngram_order_name(NgramOrder order) {
  return order == NgramOrder::kUnigram ? "unigram" : "bigram";
}

std::optional<NgramOrder> parse_ngram_order(std::string_view name) {
  if (name == "unigram") return NgramOrder::kUnigram;
  if (name == "bigram") return NgramOrder::kUnigramBigram;
  return std::nullopt;
}

TokenizedDocument tokenize_document(const Document& document) {
  TokenizedDocument out;
  if (document.sentence) {
    out.segments.push_back(tokenize(document.sentence->text, SourceField::kSentenceText));
  } else if (document.abstract) {
    out.segments.push_back(tokenize(document.abstract->title, SourceField::kTitle));
    out.segments.push_back(tokenize(document.abstract->abstract_text, SourceField::kAbstract));
    out.metadata = metadata_tokens(*document.abstract);
  }
  return out;
}

std::vector<std::string> feature_keys(const TokenizedDocument& document, NgramOrder order) {
  std::set<std::string> keys;
  for (const auto& segment : document.segments) {
    for (size_t i = 0; i < segment.size(); ++i) {
      keys.insert(segment[i].surface);
      if (order == NgramOrder::kUnigramBigram && i + 1 < segment.size()) {
        keys.insert(segment[i].surface + " " + segment[i + 1].surface);
      }
    }
  }
  for (const auto& t : document.metadata) keys.insert(t.surface);
  return {keys.begin(), keys.end()};
}

FeatureIndex::FeatureIndex(std::span<const TokenizedDocument> documents, std::vector<std::string> doc_ids,
                           NgramOrder order)
    : order_(order), doc_ids_(std::move(doc_ids)) {
  if (doc_ids_.size() != documents.size()) {
    throw ConfigError("FeatureIndex: " + std::to_string(doc_ids_.size()) + " ids for " +
                      std::to_string(documents.size()) + " documents");
  }
  std::vector<std::vector<std::string>> per_doc;
  per_doc.reserve(documents.size());
  for (const auto& d : documents) {
    per_doc.push_back(feature_keys(d, order));
    keys_.insert(keys_.end(), per_doc.back().begin(), per_doc.back().end());
  }
  std::sort(keys_.begin(), keys_.end());
  keys_.erase(std::unique(keys_.begin(), keys_.end()), keys_.end());

  std::unordered_map<std::string_view, int32_t> id_of;
  id_of.reserve(keys_.size());
  for (size_t i = 0; i < keys_.size(); ++i) id_of.emplace(keys_[i], static_cast<int32_t>(i));

  doc_features_.reserve(per_doc.size());
  for (const auto& keys : per_doc) {
    std::vector<int32_t> ids;
    ids.reserve(keys.size());
    for (const auto& k : keys) ids.push_back(id_of.at(k));
    // feature_keys() is sorted and so is the global table.
    doc_features_.push_back(std::move(ids));
  }
}

Vocabulary::Vocabulary(std::vector<std::string> keys, std::vector<int64_t> doc_freq,
                       std::vector<int32_t> global_ids)
    : keys_(std::move(keys)), doc_freq_(std::move(doc_freq)), global_ids_(std::move(global_ids)) {
  if (doc_freq_.size() != keys_.size()) throw ConfigError("Vocabulary: doc_freq size mismatch");
  if (!global_ids_.empty() && global_ids_.size() != keys_.size()) {
    throw ConfigError("Vocabulary: global id size mismatch");
  }
  index_.reserve(keys_.size());
  for (size_t i = 0; i < keys_.size(); ++i) {
    if (!index_.emplace(keys_[i], static_cast<int32_t>(i)).second) {
      throw ConfigError("Vocabulary: duplicate key '" + keys_[i] + "'");
    }
  }
}

std::optional<int32_t> Vocabulary::find(const std::string& key) const {
  const auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<int32_t> Vocabulary::column_of_global(int32_t global_id) const {
  const auto it = std::lower_bound(global_ids_.begin(), global_ids_.end(), global_id);
  if (it == global_ids_.end() || *it != global_id) return std::nullopt;
  return static_cast<int32_t>(it - global_ids_.begin());
}

uint64_t keys_fingerprint(std::span<const std::string> keys) {
  uint64_t h = fnv1a("vocabulary");
  for (const auto& k : keys) {
    h = fnv1a(k, h);
    h = fnv1a(std::string_view("\x1f", 1), h);
  }
  return h;
}

uint64_t Vocabulary::fingerprint() const { return keys_fingerprint(keys_); }

Vocabulary build_vocabulary(const FeatureIndex& index, std::span<const size_t> train_rows,
                            int64_t min_doc_freq) {
  std::vector<int32_t> df(index.size(), 0);
  for (size_t row : train_rows) {
    for (int32_t id : index.features(row)) ++df[static_cast<size_t>(id)];
  }
  std::vector<std::string> keys;
  std::vector<int64_t> freq;
  std::vector<int32_t> global;
  for (size_t id = 0; id < df.size(); ++id) {
    if (df[id] >= min_doc_freq) {
      keys.push_back(index.key(static_cast<int32_t>(id)));
      freq.push_back(df[id]);
      global.push_back(static_cast<int32_t>(id));
    }
  }
  if (keys.empty()) {
    throw ConfigError("empty vocabulary: no feature occurs in " + std::to_string(min_doc_freq) +
                      " or more of " + std::to_string(train_rows.size()) + " training documents");
  }
  return Vocabulary(std::move(keys), std::move(freq), std::move(global));
}

Vocabulary build_vocabulary(std::span<const TokenizedDocument> train_docs, NgramOrder order,
                            int64_t min_doc_freq) {
  std::vector<std::string> ids(train_docs.size());
  for (size_t i = 0; i < ids.size(); ++i) ids[i] = std::to_string(i);
  const FeatureIndex index(train_docs, std::move(ids), order);
  std::vector<size_t> rows(train_docs.size());
  for (size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  return build_vocabulary(index, rows, min_doc_freq);
}

bool FeatureMatrix::text_is_binary() const {
  for (Eigen::Index k = 0; k < text.nonZeros(); ++k) {
    const double v = text.valuePtr()[k];
    if (v != 0.0 && v != 1.0) return false;
  }
  return true;
}

SparseMatrix FeatureMatrix::combined() const {
  if (counts.empty()) return text;
  const Eigen::Index n = rows();
  const Eigen::Index t = text_columns();
  SparseMatrix out(n, columns());
  out.reserve(text.nonZeros() + n * static_cast<Eigen::Index>(counts.size()));
  for (Eigen::Index r = 0; r < n; ++r) {
    out.startVec(r);
    for (SparseMatrix::InnerIterator it(text, r); it; ++it) out.insertBack(r, it.col()) = it.value();
    for (size_t j = 0; j < counts.size(); ++j) {
      const double v = counts[j].values(r);
      if (v != 0.0) out.insertBack(r, t + static_cast<Eigen::Index>(j)) = v;
    }
  }
  out.finalize();
  return out;
}

FeatureMatrix FeatureMatrix::select_rows(std::span<const size_t> rows) const {
  FeatureMatrix out;
  out.feature_keys = feature_keys;
  out.text.resize(static_cast<Eigen::Index>(rows.size()), text.cols());
  out.text.reserve(text.nonZeros());
  for (size_t i = 0; i < rows.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(rows[i]);
    out.row_ids.push_back(row_ids[rows[i]]);
    out.text.startVec(static_cast<Eigen::Index>(i));
    for (SparseMatrix::InnerIterator it(text, r); it; ++it) {
      out.text.insertBack(static_cast<Eigen::Index>(i), it.col()) = it.value();
    }
  }
  out.text.finalize();
  for (const auto& c : counts) {
    CountColumn col{c.resource, Eigen::VectorXd(static_cast<Eigen::Index>(rows.size()))};
    for (size_t i = 0; i < rows.size(); ++i) col.values(static_cast<Eigen::Index>(i)) = c.values(static_cast<Eigen::Index>(rows[i]));
    out.counts.push_back(std::move(col));
  }
  return out;
}

FeatureMatrix occurrence_matrix(const FeatureIndex& index, std::span<const size_t> rows,
                                const Vocabulary& vocab) {
  FeatureMatrix m;
  m.feature_keys = vocab.keys();
  m.text.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(vocab.size()));
  size_t nnz = 0;
  for (size_t row : rows) nnz += index.features(row).size();
  m.text.reserve(static_cast<Eigen::Index>(nnz));
  for (size_t i = 0; i < rows.size(); ++i) {
    m.row_ids.push_back(index.doc_id(rows[i]));
    const auto r = static_cast<Eigen::Index>(i);
    m.text.startVec(r);
    for (int32_t id : index.features(rows[i])) {
      if (const auto col = vocab.column_of_global(id)) m.text.insertBack(r, *col) = 1.0;
    }
  }
  m.text.finalize();
  return m;
}

FeatureMatrix occurrence_matrix(std::span<const TokenizedDocument> docs,
                                std::span<const std::string> doc_ids, const Vocabulary& vocab,
                                NgramOrder order) {
  if (docs.size() != doc_ids.size()) throw ConfigError("occurrence_matrix: ids/documents size mismatch");
  FeatureMatrix m;
  m.feature_keys = vocab.keys();
  m.text.resize(static_cast<Eigen::Index>(docs.size()), static_cast<Eigen::Index>(vocab.size()));
  for (size_t i = 0; i < docs.size(); ++i) {
    m.row_ids.push_back(doc_ids[i]);
    std::vector<int32_t> cols;
    for (const auto& key : feature_keys(docs[i], order)) {
      if (const auto c = vocab.find(key)) cols.push_back(*c);
    }
    std::sort(cols.begin(), cols.end());
    const auto r = static_cast<Eigen::Index>(i);
    m.text.startVec(r);
    for (int32_t c : cols) m.text.insertBack(r, c) = 1.0;
  }
  m.text.finalize();
  return m;
}

FeatureMatrix attach_counts(const FeatureMatrix& m, std::span<const NerCountTable> tables) {
  FeatureMatrix out = m;
  std::set<std::string> names;
  for (const auto& c : m.counts) names.insert(c.resource);
  for (const auto& table : tables) {
    if (!names.insert(table.resource).second) {
      throw ConfigError("duplicate count resource '" + table.resource + "'");
    }
    CountColumn col{table.resource, Eigen::VectorXd(m.rows())};
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      col.values(r) = static_cast<double>(table.count_for(m.row_ids[static_cast<size_t>(r)]));
    }
    out.counts.push_back(std::move(col));
  }
  return out;
}

FeatureMatrix detach_counts(const FeatureMatrix& m, const std::string& resource) {
  FeatureMatrix out = m;
  const auto it = std::find_if(out.counts.begin(), out.counts.end(),
                               [&resource](const CountColumn& c) { return c.resource == resource; });
  if (it == out.counts.end()) throw ConfigError("no count resource '" + resource + "' to detach");
  out.counts.erase(it);
  return out;
}

void write_matrix_tsv(std::ostream& out, const FeatureMatrix& m) {
  const auto old_precision = out.precision(17);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const auto& id = m.row_ids[static_cast<size_t>(r)];
    for (SparseMatrix::InnerIterator it(m.text, r); it; ++it) {
      out << id << '\t' << m.feature_keys[static_cast<size_t>(it.col())] << '\t' << it.value() << '\n';
    }
    for (const auto& c : m.counts) {
      if (c.values(r) != 0.0) out << id << "\tcount:" << c.resource << '\t' << c.values(r) << '\n';
    }
  }
  out.precision(old_precision);
}

void write_vocabulary_tsv(std::ostream& out, const Vocabulary& vocab) {
  for (size_t i = 0; i < vocab.size(); ++i) {
    out << i << '\t' << vocab.keys()[i] << '\t' << vocab.doc_freq()[i] << '\n';
  }
}

}  // namespace pkddi
