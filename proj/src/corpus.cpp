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

#include "pkddi/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "pkddi/error.hpp"

namespace pkddi {

ParseError::ParseError(const std::string& message, int64_t line, int64_t byte_offset)
    : Error(message), line_(line), byte_offset_(byte_offset) {}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string_view> split_tabs(std::string_view line, size_t max_fields) {
  std::vector<std::string_view> fields;
  while (fields.size() + 1 < max_fields) {
    const size_t tab = line.find('\t');
    if (tab == std::string_view::npos) break;
    fields.push_back(line.substr(0, tab));
    line.remove_prefix(tab + 1);
  }
  fields.push_back(line);
  return fields;
}

template <typename T>
bool parse_integer(std::string_view s, T& out) {
  s = trim(s);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

// "TAG - value" with the tag left-justified in four columns.
bool split_tagged(std::string_view line, std::string_view& tag, std::string_view& value) {
  if (line.size() < 5 || !std::isalpha(static_cast<unsigned char>(line[0]))) return false;
  if (line[4] != '-') return false;
  for (size_t i = 0; i < 4; ++i) {
    const unsigned char c = static_cast<unsigned char>(line[i]);
    if (!(std::isupper(c) || std::isdigit(c) || c == ' ')) return false;
  }
  if (line.size() > 5 && line[5] != ' ') return false;
  tag = trim(line.substr(0, 4));
  value = trim(line.substr(5));
  return true;
}

bool is_continuation(std::string_view line) {
  return line.size() > 4 && line.substr(0, 4) == "    " && !trim(line).empty();
}

class MedlineBuilder {
 public:
  explicit MedlineBuilder(std::vector<AbstractRecord>& out) : out_(out) {}

  void begin(int64_t offset) {
    if (!open_) {
      record_ = {};
      journal_ta_.reset();
      journal_jt_.reset();
      offset_ = offset;
      open_ = true;
      has_fields_ = false;
      last_ = nullptr;
    }
  }

  bool open() const { return open_; }
  bool has_pmid() const { return !record_.pmid.empty(); }
  bool has_fields() const { return has_fields_; }

  // Returns false for tags we do not map.
  bool add(std::string_view tag, std::string_view value) {
    has_fields_ = true;
    if (tag == "PMID") return set(record_.pmid, value);
    if (tag == "TI") return set(record_.title, value);
    if (tag == "AB") return set(record_.abstract_text, value);
    if (tag == "AU") return push(record_.authors, value);
    if (tag == "TA") return set(journal_ta_.emplace(), value);
    if (tag == "JT") return set(journal_jt_.emplace(), value);
    if (tag == "MH") return push(record_.mesh_terms, value);
    if (tag == "RN") return push(record_.rn_substances, value);
    if (tag == "SI") return push(record_.si_substances, value);
    last_ = nullptr;
    return false;
  }

  void continue_last(std::string_view text) {
    if (last_ == nullptr) return;
    if (!last_->empty()) last_->push_back(' ');
    last_->append(text);
  }

  void finish(std::unordered_set<std::string>& seen) {
    if (!open_) return;
    open_ = false;
    if (!has_fields_) return;
    if (record_.pmid.empty()) {
      throw ParseError("MEDLINE record without PMID at byte offset " + std::to_string(offset_), -1,
                       offset_);
    }
    if (!seen.insert(record_.pmid).second) {
      throw ParseError("duplicate PMID " + record_.pmid + " at byte offset " + std::to_string(offset_),
                       -1, offset_);
    }
    if (journal_ta_) {
      record_.journal = *journal_ta_;
    } else if (journal_jt_) {
      record_.journal = *journal_jt_;
    }
    out_.push_back(std::move(record_));
  }

 private:
  bool set(std::string& field, std::string_view value) {
    field.assign(value);
    last_ = &field;
    return true;
  }
  bool push(std::vector<std::string>& list, std::string_view value) {
    list.emplace_back(value);
    last_ = &list.back();
    return true;
  }

  std::vector<AbstractRecord>& out_;
  AbstractRecord record_;
  std::optional<std::string> journal_ta_;
  std::optional<std::string> journal_jt_;
  std::string* last_ = nullptr;
  int64_t offset_ = 0;
  bool open_ = false;
  bool has_fields_ = false;
};

}  // namespace

void chomp_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

std::string_view label_name(Label label) {
  return label == Label::kRelevant ? "relevant" : "irrelevant";
}

std::optional<Label> parse_label(std::string_view token) {
  const std::string t = lower_ascii(trim(token));
  if (t == "relevant") return Label::kRelevant;
  if (t == "irrelevant") return Label::kIrrelevant;
  return std::nullopt;
}

int64_t NerCountTable::count_for(std::string_view doc_id) const {
  const auto it = counts.find(std::string(doc_id));
  return it == counts.end() ? 0 : it->second;
}

std::vector<AbstractRecord> parse_medline(std::istream& in, const MedlineOptions& options,
                                          MedlineStats* stats) {
  std::vector<AbstractRecord> records;
  std::unordered_set<std::string> seen;
  MedlineBuilder builder(records);
  MedlineStats local;
  std::string line;
  int64_t offset = 0;
  int64_t line_number = 0;

  while (std::getline(in, line)) {
    const int64_t line_offset = offset;
    offset += static_cast<int64_t>(line.size()) + 1;
    ++line_number;
    chomp_cr(line);

    if (trim(line).empty()) {
      builder.finish(seen);
      continue;
    }
    std::string_view tag;
    std::string_view value;
    if (split_tagged(line, tag, value)) {
      if (tag == "PMID" && builder.open() && builder.has_pmid()) builder.finish(seen);
      builder.begin(line_offset);
      if (!builder.add(tag, value)) ++local.ignored_tag_lines;
    } else if (is_continuation(line) && builder.open()) {
      builder.continue_last(trim(line));
    } else if (options.strict) {
      throw ParseError("unrecognised MEDLINE line " + std::to_string(line_number) +
                           " at byte offset " + std::to_string(line_offset),
                       line_number, line_offset);
    } else {
      ++local.skipped_garbage_lines;
    }
  }
  builder.finish(seen);
  local.records = static_cast<int64_t>(records.size());
  if (stats != nullptr) *stats = local;
  return records;
}

void write_medline(std::ostream& out, std::span<const AbstractRecord> records) {
  auto line = [&out](std::string_view tag, std::string_view value) {
    std::string padded(tag);
    padded.resize(4, ' ');
    out << padded << "- " << value << '\n';
  };
  bool first = true;
  for (const AbstractRecord& r : records) {
    if (!first) out << '\n';
    first = false;
    line("PMID", r.pmid);
    if (!r.title.empty()) line("TI", r.title);
    if (!r.abstract_text.empty()) line("AB", r.abstract_text);
    for (const auto& a : r.authors) line("AU", a);
    if (!r.journal.empty()) line("TA", r.journal);
    for (const auto& m : r.mesh_terms) line("MH", m);
    for (const auto& s : r.rn_substances) line("RN", s);
    for (const auto& s : r.si_substances) line("SI", s);
  }
}

namespace {

std::vector<std::string> split_list(std::string_view field) {
  std::vector<std::string> out;
  field = trim(field);
  while (!field.empty()) {
    const size_t bar = field.find('|');
    const std::string_view item = trim(field.substr(0, bar));
    if (!item.empty()) out.emplace_back(item);
    if (bar == std::string_view::npos) break;
    field.remove_prefix(bar + 1);
  }
  return out;
}

std::string join_list(const std::vector<std::string>& items) {
  std::string out;
  for (size_t i = 0; i < items.size(); ++i) out += (i ? "|" : "") + items[i];
  return out;
}

}  // namespace

std::vector<AbstractRecord> parse_abstracts_tsv(std::istream& in) {
  std::vector<AbstractRecord> records;
  std::unordered_set<std::string> seen;
  std::string line;
  int64_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    chomp_cr(line);
    if (trim(line).empty() || line[0] == '#') continue;
    const auto fields = split_tabs(line, 9);
    const std::string where = "abstract line " + std::to_string(line_number);
    if (fields.size() != 3 && fields.size() != 8) {
      throw ParseError(where + ": expected 3 or 8 tab-separated columns, found " + std::to_string(fields.size()),
                       line_number);
    }
    AbstractRecord r;
    r.pmid = std::string(trim(fields[0]));
    if (r.pmid.empty()) throw ParseError(where + ": empty pmid", line_number);
    if (!seen.insert(r.pmid).second) throw ParseError(where + ": duplicate PMID " + r.pmid, line_number);
    r.title = std::string(trim(fields[1]));
    r.abstract_text = std::string(trim(fields[2]));
    if (fields.size() == 8) {
      r.authors = split_list(fields[3]);
      r.journal = std::string(trim(fields[4]));
      r.mesh_terms = split_list(fields[5]);
      r.rn_substances = split_list(fields[6]);
      r.si_substances = split_list(fields[7]);
    }
    records.push_back(std::move(r));
  }
  return records;
}

void write_abstracts_tsv(std::ostream& out, std::span<const AbstractRecord> records) {
  for (const AbstractRecord& r : records) {
    out << r.pmid << '\t' << r.title << '\t' << r.abstract_text << '\t' << join_list(r.authors) << '\t' << r.journal
        << '\t' << join_list(r.mesh_terms) << '\t' << join_list(r.rn_substances) << '\t'
        << join_list(r.si_substances) << '\n';
  }
}

std::map<std::string, Label> parse_labels(std::istream& in) {
  std::map<std::string, Label> labels;
  std::string line;
  int64_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    chomp_cr(line);
    if (trim(line).empty() || line[0] == '#') continue;
    const auto fields = split_tabs(line, 2);
    if (fields.size() != 2) {
      throw ParseError("label line " + std::to_string(line_number) + ": expected 'id<TAB>label'",
                       line_number);
    }
    const std::string id(trim(fields[0]));
    const auto label = parse_label(fields[1]);
    if (id.empty()) throw ParseError("label line " + std::to_string(line_number) + ": empty id", line_number);
    if (!label) {
      throw ParseError("label line " + std::to_string(line_number) + ": unknown label '" +
                           std::string(trim(fields[1])) + "'",
                       line_number);
    }
    const auto [it, inserted] = labels.emplace(id, *label);
    if (!inserted && it->second != *label) {
      throw ParseError("label line " + std::to_string(line_number) + ": conflicting label for id " + id,
                       line_number);
    }
  }
  return labels;
}

void write_labels(std::ostream& out, const std::map<std::string, Label>& labels) {
  for (const auto& [id, label] : labels) out << id << '\t' << label_name(label) << '\n';
}

std::vector<LabeledSentence> parse_sentences(std::istream& in) {
  std::vector<LabeledSentence> sentences;
  std::set<std::pair<std::string, int>> seen;
  std::string line;
  int64_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    chomp_cr(line);
    if (trim(line).empty() || line[0] == '#') continue;
    const auto fields = split_tabs(line, 4);
    const std::string where = "sentence line " + std::to_string(line_number);
    if (fields.size() != 4) throw ParseError(where + ": expected 4 tab-separated columns", line_number);
    LabeledSentence s;
    s.record.pmid = std::string(trim(fields[0]));
    if (s.record.pmid.empty()) throw ParseError(where + ": empty pmid", line_number);
    if (!parse_integer(fields[1], s.record.index) || s.record.index < 0) {
      throw ParseError(where + ": index '" + std::string(fields[1]) + "' is not a non-negative integer",
                       line_number);
    }
    const auto label = parse_label(fields[2]);
    if (!label) throw ParseError(where + ": unknown label '" + std::string(fields[2]) + "'", line_number);
    s.label = *label;
    s.record.text = std::string(trim(fields[3]));
    if (!seen.emplace(s.record.pmid, s.record.index).second) {
      throw ParseError(where + ": duplicate (pmid, index)", line_number);
    }
    sentences.push_back(std::move(s));
  }
  return sentences;
}

void write_sentences(std::ostream& out, std::span<const LabeledSentence> sentences) {
  for (const auto& s : sentences) {
    out << s.record.pmid << '\t' << s.record.index << '\t' << label_name(s.label) << '\t'
        << s.record.text << '\n';
  }
}

Dictionary load_dictionary(std::istream& in, std::string name) {
  std::set<std::string> entries;
  std::string line;
  while (std::getline(in, line)) {
    chomp_cr(line);
    const std::string_view t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    entries.insert(lower_ascii(t));
  }
  if (entries.empty()) throw ConfigError("dictionary '" + name + "' has no entries");
  return Dictionary{std::move(name), std::vector<std::string>(entries.begin(), entries.end())};
}

std::vector<NerCountTable> load_ner_counts(std::istream& in) {
  std::vector<NerCountTable> tables;
  std::map<std::string, size_t> by_resource;
  std::string line;
  int64_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    chomp_cr(line);
    if (trim(line).empty() || line[0] == '#') continue;
    const auto fields = split_tabs(line, 3);
    const std::string where = "NER count line " + std::to_string(line_number);
    if (fields.size() != 3) throw ParseError(where + ": expected 'doc<TAB>resource<TAB>count'", line_number);
    int64_t count = 0;
    if (!parse_integer(fields[2], count)) throw ParseError(where + ": count is not an integer", line_number);
    if (count < 0) throw ParseError(where + ": negative count", line_number);
    const std::string resource(trim(fields[1]));
    auto [it, inserted] = by_resource.emplace(resource, tables.size());
    if (inserted) tables.push_back(NerCountTable{resource, {}});
    NerCountTable& table = tables[it->second];
    if (!table.counts.emplace(std::string(trim(fields[0])), count).second) {
      throw ParseError(where + ": duplicate row for document/resource", line_number);
    }
  }
  return tables;
}

std::string Document::raw_text() const {
  if (sentence) return sentence->text;
  if (!abstract) return {};
  if (abstract->title.empty()) return abstract->abstract_text;
  if (abstract->abstract_text.empty()) return abstract->title;
  return abstract->title + " " + abstract->abstract_text;
}

int64_t Corpus::count(Label label) const {
  return std::count_if(documents.begin(), documents.end(),
                       [label](const Document& d) { return d.label == label; });
}

std::vector<Label> Corpus::labels() const {
  std::vector<Label> out;
  out.reserve(documents.size());
  for (const auto& d : documents) out.push_back(d.label);
  return out;
}

std::vector<std::string> Corpus::ids() const {
  std::vector<std::string> out;
  out.reserve(documents.size());
  for (const auto& d : documents) out.push_back(d.id);
  return out;
}

Corpus build_abstract_corpus(std::vector<AbstractRecord> records,
                             const std::map<std::string, Label>& labels) {
  Corpus corpus;
  corpus.task = Task::kAbstract;
  std::unordered_set<std::string> present;
  for (auto& r : records) {
    present.insert(r.pmid);
    const auto it = labels.find(r.pmid);
    if (it == labels.end()) {
      ++corpus.dropped_unlabeled;
      continue;
    }
    Document d;
    d.id = r.pmid;
    d.label = it->second;
    d.abstract = std::move(r);
    corpus.documents.push_back(std::move(d));
  }
  for (const auto& [id, label] : labels) {
    if (!present.contains(id)) ++corpus.missing_records;
  }
  return corpus;
}

Corpus build_sentence_corpus(std::vector<LabeledSentence> sentences) {
  Corpus corpus;
  corpus.task = Task::kSentence;
  for (auto& s : sentences) {
    Document d;
    d.id = s.record.pmid + ":" + std::to_string(s.record.index);
    d.label = s.label;
    d.sentence = std::move(s.record);
    corpus.documents.push_back(std::move(d));
  }
  return corpus;
}

}  // namespace pkddi
