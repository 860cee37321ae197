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

// Declarative experiment file (JSON). Schema, all keys optional unless noted:
//
//   task               "abstract" (default) or "sentence"
//   medline, labels    abstract corpus files (required for "abstract")
//   abstracts          tab-separated abstracts, instead of "medline"
//   sentences          sentence TSV (required for "sentence")
//   dictionaries       [{"name": ..., "path": ...}]  counted into count columns
//   ner_counts         [path, ...]  precomputed (doc, resource, count) TSVs
//   seed               integer, default 1
//   output             output directory, default "pkddi-out"
//   threads            0 = OpenMP default
//   stratify           bool, default true
//   strict_paper_vocab bool, default false (prune on the whole corpus when true)
//   audit              bool, default true
//   permutation_draws  Monte Carlo draws for tests beyond 20 folds, default 100000
//   configurations     (required) list of entries; "classifier", "features"
//                      and "transform" may each be a string or a list, and
//                      lists expand to their cartesian product. Optional
//                      "resources" (list), "grid" (list of lists) and
//                      "free_pca" (bool). "classifier": "all" means all six.
//
// Relative paths resolve against the directory of the config file.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "pkddi/corpus.hpp"
#include "pkddi/evaluation.hpp"

namespace pkddi {

struct DictionarySource {
  std::string name;
  std::filesystem::path path;
};

struct ExperimentConfig {
  Task task = Task::kAbstract;
  std::filesystem::path medline;
  std::filesystem::path abstracts;  // TSV alternative to medline
  std::filesystem::path labels;
  std::filesystem::path sentences;
  std::vector<DictionarySource> dictionaries;
  std::vector<std::filesystem::path> ner_counts;
  uint64_t seed = 1;
  std::filesystem::path output = "pkddi-out";
  int threads = 0;
  bool stratify = true;
  bool strict_paper_vocab = false;
  bool audit = true;
  int64_t permutation_draws = 100000;
  std::vector<RunConfig> configurations;

  // Hash of the resolved settings that influence results (not output or
  // threads).
  uint64_t fingerprint() const;
  // Resolved configuration as JSON.
  std::string to_json() const;
  // Throws ConfigError naming the first missing file.
  void check_paths() const;
};

ExperimentConfig parse_experiment_config(std::string_view json_text, const std::filesystem::path& base_dir);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

// PKDDI_OUT replaces the output directory and PKDDI_THREADS the thread count.
void apply_environment(ExperimentConfig& config);

struct LoadedCorpus {
  Corpus corpus;
  std::vector<NerCountTable> tables;  // dictionary counts, then NER files
};

LoadedCorpus load_corpus(const ExperimentConfig& config, const MedlineOptions& medline_options = {});

}  // namespace pkddi
