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

#include <algorithm>
#include <numeric>
#include <sstream>

#include <gtest/gtest.h>

#include "pkddi/error.hpp"
#include "pkddi/featurizer.hpp"
#include "pkddi/random.hpp"

namespace pkddi {
namespace {

Document sentence(std::string id, std::string text) {
  Document d;
  d.id = std::move(id);
  d.sentence = SentenceRecord{"1", 0, std::move(text)};
  return d;
}

Document abstract(std::string id, std::string title, std::string body, std::vector<std::string> mesh = {}) {
  Document d;
  d.id = id;
  AbstractRecord r;
  r.pmid = std::move(id);
  r.title = std::move(title);
  r.abstract_text = std::move(body);
  r.mesh_terms = std::move(mesh);
  d.abstract = r;
  return d;
}

std::vector<TokenizedDocument> tokens(const std::vector<Document>& docs) {
  std::vector<TokenizedDocument> out;
  for (const auto& d : docs) out.push_back(tokenize_document(d));
  return out;
}

bool has(const Vocabulary& v, const std::string& k) { return v.find(k).has_value(); }

TEST(Vocabulary, DocumentFrequencyThreshold) {
  auto docs = tokens({sentence("a", "auc rose"), sentence("b", "the auc fell"), sentence("c", "unique word")});
  Vocabulary v = build_vocabulary(docs, NgramOrder::kUnigram);
  EXPECT_TRUE(has(v, "auc"));
  EXPECT_FALSE(has(v, "rose"));
  EXPECT_FALSE(has(v, "uniqu"));
  EXPECT_EQ(v.doc_freq()[static_cast<size_t>(*v.find("auc"))], 2);
}

TEST(Vocabulary, Bigrams) {
  auto docs = tokens({sentence("a", "interactions between drugs"), sentence("b", "no interaction between them")});
  Vocabulary uni = build_vocabulary(docs, NgramOrder::kUnigram);
  Vocabulary bi = build_vocabulary(docs, NgramOrder::kUnigramBigram);
  EXPECT_TRUE(has(bi, "interact between"));
  EXPECT_FALSE(has(uni, "interact between"));
  // every unigram survives in the bigram vocabulary
  for (const auto& k : uni.keys()) EXPECT_TRUE(has(bi, k)) << k;
  EXPECT_TRUE(std::is_sorted(bi.keys().begin(), bi.keys().end()));
}

TEST(Vocabulary, BigramsStayInsideAField) {
  auto docs = tokens({abstract("1", "plasma levels", "clearance fell", {"Humans", "Drug Interactions"}),
                      abstract("2", "plasma levels", "clearance rose", {"Humans", "Drug Interactions"})});
  Vocabulary v = build_vocabulary(docs, NgramOrder::kUnigramBigram);
  EXPECT_TRUE(has(v, "plasma level"));
  EXPECT_FALSE(has(v, "level clearanc"));
  EXPECT_TRUE(has(v, "MeSH:Humans"));
  EXPECT_TRUE(has(v, "MeSH:Drug Interactions"));
  for (const auto& k : v.keys()) {
    if (k.rfind("MeSH:", 0) == 0) continue;
    EXPECT_EQ(k.find("MeSH"), std::string::npos) << k;
  }
}

TEST(Vocabulary, EmptyIsError) {
  auto docs = tokens({sentence("a", "alpha"), sentence("b", "beta")});
  EXPECT_THROW(build_vocabulary(docs, NgramOrder::kUnigram), ConfigError);
}

TEST(Vocabulary, IndexedBuildMatchesDirectBuild) {
  std::vector<Document> docs;
  Rng rng(5);
  const char* words[] = {"kinetic", "dose", "plasma", "auc", "inhibitor", "clearance", "renal", "hepatic"};
  for (int i = 0; i < 40; ++i) {
    std::string text;
    for (int w = 0; w < 6; ++w) text += std::string(words[rng.below(8)]) + " ";
    docs.push_back(sentence("d" + std::to_string(i), text));
  }
  auto tok = tokens(docs);
  std::vector<std::string> ids;
  for (const auto& d : docs) ids.push_back(d.id);
  FeatureIndex index(tok, ids, NgramOrder::kUnigramBigram);
  std::vector<size_t> rows;
  for (size_t i = 0; i < docs.size(); i += 3) rows.push_back(i);
  std::vector<TokenizedDocument> subset;
  for (size_t r : rows) subset.push_back(tok[r]);
  Vocabulary a = build_vocabulary(index, rows);
  Vocabulary b = build_vocabulary(subset, NgramOrder::kUnigramBigram);
  EXPECT_EQ(a.keys(), b.keys());
  EXPECT_EQ(a.doc_freq(), b.doc_freq());
  EXPECT_EQ(a.fingerprint(), b.fingerprint());
  EXPECT_EQ(a.fingerprint(), keys_fingerprint(b.keys()));

  std::vector<std::string> sub_ids;
  for (size_t r : rows) sub_ids.push_back(ids[r]);
  FeatureMatrix ma = occurrence_matrix(index, rows, a);
  FeatureMatrix mb = occurrence_matrix(subset, sub_ids, b, NgramOrder::kUnigramBigram);
  EXPECT_EQ(Eigen::MatrixXd(ma.text), Eigen::MatrixXd(mb.text));
  EXPECT_EQ(ma.row_ids, mb.row_ids);
}

TEST(Vocabulary, AddingADocumentNeverRemovesFeatures) {
  std::vector<Document> docs{sentence("a", "auc rose sharply"), sentence("b", "auc rose"), sentence("c", "sharply")};
  Vocabulary before = build_vocabulary(tokens(docs), NgramOrder::kUnigramBigram);
  docs.push_back(sentence("d", "something else entirely"));
  Vocabulary after = build_vocabulary(tokens(docs), NgramOrder::kUnigramBigram);
  for (const auto& k : before.keys()) EXPECT_TRUE(has(after, k)) << k;
}

TEST(Occurrence, BinaryAndOutOfVocabulary) {
  auto train = tokens({sentence("a", "auc auc auc auc auc dose"), sentence("b", "auc dose")});
  Vocabulary v = build_vocabulary(train, NgramOrder::kUnigram);
  auto test = tokens({sentence("t1", "auc unseen tokens"), sentence("t2", "nothing known")});
  std::vector<std::string> ids{"t1", "t2"};
  FeatureMatrix m = occurrence_matrix(test, ids, v, NgramOrder::kUnigram);
  EXPECT_EQ(m.text_columns(), 2);
  EXPECT_TRUE(m.text_is_binary());
  EXPECT_EQ(m.text.coeff(0, *v.find("auc")), 1.0);
  EXPECT_EQ(m.text.row(1).nonZeros(), 0);
  const size_t size_before = v.size();
  std::vector<std::string> train_ids{"a", "b"};
  FeatureMatrix mt = occurrence_matrix(train, train_ids, v, NgramOrder::kUnigram);
  EXPECT_EQ(mt.text.coeff(0, *v.find("auc")), 1.0);
  EXPECT_EQ(v.size(), size_before);
}

TEST(Occurrence, Deterministic) {
  auto docs = tokens({sentence("a", "one two three"), sentence("b", "two three four"), sentence("c", "one four")});
  std::vector<std::string> ids{"a", "b", "c"};
  Vocabulary v1 = build_vocabulary(docs, NgramOrder::kUnigramBigram);
  Vocabulary v2 = build_vocabulary(docs, NgramOrder::kUnigramBigram);
  EXPECT_EQ(v1.keys(), v2.keys());
  std::ostringstream a, b;
  write_matrix_tsv(a, occurrence_matrix(docs, ids, v1, NgramOrder::kUnigramBigram));
  write_matrix_tsv(b, occurrence_matrix(docs, ids, v2, NgramOrder::kUnigramBigram));
  EXPECT_EQ(a.str(), b.str());
  EXPECT_FALSE(a.str().empty());
}

FeatureMatrix small_matrix() {
  auto docs = tokens({sentence("1", "auc dose"), sentence("2", "auc"), sentence("3", "dose")});
  std::vector<std::string> ids{"1", "2", "3"};
  return occurrence_matrix(docs, ids, build_vocabulary(docs, NgramOrder::kUnigram), NgramOrder::kUnigram);
}

TEST(Counts, AttachAndDetach) {
  FeatureMatrix m = small_matrix();
  std::istringstream in("1\tBICEPP\t3\n3\tBICEPP\t7\n");
  auto tables = load_ner_counts(in);
  FeatureMatrix with = attach_counts(m, tables);
  EXPECT_EQ(with.columns(), m.columns() + 1);
  ASSERT_EQ(with.counts.size(), 1u);
  EXPECT_EQ(with.counts[0].resource, "BICEPP");
  EXPECT_EQ(with.counts[0].values, Eigen::Vector3d(3, 0, 7));
  // count column sits after the text block
  SparseMatrix combined = with.combined();
  EXPECT_EQ(combined.coeff(2, m.text_columns()), 7.0);

  FeatureMatrix back = detach_counts(with, "BICEPP");
  EXPECT_TRUE(back.counts.empty());
  EXPECT_EQ(Eigen::MatrixXd(back.text), Eigen::MatrixXd(m.text));
  EXPECT_EQ(back.feature_keys, m.feature_keys);

  std::vector<NerCountTable> twice{tables[0], tables[0]};
  EXPECT_THROW(attach_counts(m, twice), ConfigError);
  EXPECT_THROW(detach_counts(m, "BICEPP"), ConfigError);
}

TEST(Export, TripletsAndVocabulary) {
  FeatureMatrix m = small_matrix();
  std::istringstream in("2\tOSCAR4\t4\n");
  m = attach_counts(m, load_ner_counts(in));
  std::ostringstream out;
  write_matrix_tsv(out, m);
  EXPECT_NE(out.str().find("1\tauc\t1"), std::string::npos);
  EXPECT_NE(out.str().find("2\tcount:OSCAR4\t4"), std::string::npos);
  std::ostringstream voc;
  write_vocabulary_tsv(voc, Vocabulary({"auc", "dose"}, {2, 2}));
  EXPECT_NE(voc.str().find("0\tauc\t2"), std::string::npos);
  EXPECT_NE(voc.str().find("1\tdose\t2"), std::string::npos);
}

TEST(Ngram, Names) {
  EXPECT_EQ(parse_ngram_order("unigram"), NgramOrder::kUnigram);
  EXPECT_EQ(parse_ngram_order("bigram"), NgramOrder::kUnigramBigram);
  EXPECT_FALSE(parse_ngram_order("trigram"));
}

}  // namespace
}  // namespace pkddi
