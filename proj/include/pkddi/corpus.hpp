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

// Corpus ingestion: MEDLINE tagged records, label/sentence TSV files,
// entity dictionaries and precomputed NER count tables.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pkddi {

enum class Label : uint8_t { kIrrelevant = 0, kRelevant = 1 };

std::string_view label_name(Label label);
// Case-insensitive "relevant"/"irrelevant".
std::optional<Label> parse_label(std::string_view token);

struct AbstractRecord {
  std::string pmid;
  std::string title;
  std::string abstract_text;
  std::vector<std::string> authors;
  std::string journal;
  std::vector<std::string> mesh_terms;
  std::vector<std::string> rn_substances;
  std::vector<std::string> si_substances;

  bool operator==(const AbstractRecord&) const = default;
};

struct SentenceRecord {
  std::string pmid;
  int index = 0;
  std::string text;

  bool operator==(const SentenceRecord&) const = default;
};

struct LabeledSentence {
  SentenceRecord record;
  Label label = Label::kIrrelevant;

  bool operator==(const LabeledSentence&) const = default;
};

// Entries are case-folded, deduplicated and sorted.
struct Dictionary {
  std::string name;
  std::vector<std::string> entries;
};

// Occurrence counts of one resource's entities per document id.
struct NerCountTable {
  std::string resource;
  std::map<std::string, int64_t> counts;

  // Documents missing from the table count as zero.
  int64_t count_for(std::string_view doc_id) const;
};

struct MedlineOptions {
  // In strict mode a non-blank line that is neither a "TAG - value" line nor
  // a continuation is an error instead of being skipped.
  bool strict = false;
};

struct MedlineStats {
  int64_t records = 0;
  int64_t ignored_tag_lines = 0;     // known-format lines with tags we do not map
  int64_t skipped_garbage_lines = 0; // only in non-strict mode
};

std::vector<AbstractRecord> parse_medline(std::istream& in, const MedlineOptions& options = {},
                                          MedlineStats* stats = nullptr);
// Canonical MEDLINE output; parse_medline(write_medline(x)) == x.
void write_medline(std::ostream& out, std::span<const AbstractRecord> records);

// Tab-separated alternative to MEDLINE: pmid, title, abstract, and optionally
// authors, journal, MeSH, RN, SI, list fields separated by '|'.
std::vector<AbstractRecord> parse_abstracts_tsv(std::istream& in);
void write_abstracts_tsv(std::ostream& out, std::span<const AbstractRecord> records);

std::map<std::string, Label> parse_labels(std::istream& in);
void write_labels(std::ostream& out, const std::map<std::string, Label>& labels);

std::vector<LabeledSentence> parse_sentences(std::istream& in);
void write_sentences(std::ostream& out, std::span<const LabeledSentence> sentences);

Dictionary load_dictionary(std::istream& in, std::string name);

// TSV rows "doc_id, resource, count"; one table per resource, in order of
// first appearance.
std::vector<NerCountTable> load_ner_counts(std::istream& in);

// One document of the canonical corpus, abstract or sentence.
struct Document {
  std::string id;
  Label label = Label::kIrrelevant;
  std::optional<AbstractRecord> abstract;
  std::optional<SentenceRecord> sentence;

  // Raw text used for dictionary matching (title + abstract, or sentence).
  std::string raw_text() const;
};

enum class Task { kAbstract, kSentence };

struct Corpus {
  Task task = Task::kAbstract;
  std::vector<Document> documents;
  // Records present in MEDLINE but absent from the label file.
  int64_t dropped_unlabeled = 0;
  // Label ids without a MEDLINE record.
  int64_t missing_records = 0;

  int64_t count(Label label) const;
  std::vector<Label> labels() const;
  std::vector<std::string> ids() const;
};

// The label file is authoritative: unlabeled records are dropped. Document
// order follows the MEDLINE file.
Corpus build_abstract_corpus(std::vector<AbstractRecord> records,
                             const std::map<std::string, Label>& labels);
// Sentence ids are "<pmid>:<index>".
Corpus build_sentence_corpus(std::vector<LabeledSentence> sentences);

// Strips a trailing '\r' (CRLF input).
void chomp_cr(std::string& line);

}  // namespace pkddi
