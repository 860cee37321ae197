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

// Subcommand bodies of the pkddi tool, kept out of main() so tests can drive
// them without a process boundary.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pkddi/experiment.hpp"

namespace pkddi::cli {

// Flags shared by every subcommand. Unset values leave the config (or the
// environment) in charge.
struct GlobalOptions {
  std::optional<std::filesystem::path> config;
  std::optional<uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::filesystem::path> out;
  bool strict_paper_vocab = false;
  std::optional<bool> stratify;
  bool quiet = false;
};

// Config file, then PKDDI_OUT / PKDDI_THREADS, then explicit flags.
ExperimentConfig resolve_config(const GlobalOptions& g);

struct IngestOptions {
  std::filesystem::path medline;
  std::filesystem::path abstracts;
  std::filesystem::path labels;
  std::filesystem::path sentences;
  int preview = 10;
};
int cmd_ingest(const GlobalOptions& g, const IngestOptions& o, std::ostream& out);

struct SynthOptions {
  std::optional<std::filesystem::path> spec;
  std::optional<int64_t> documents;
};
int cmd_synth(const GlobalOptions& g, const SynthOptions& o, std::ostream& out);

int cmd_run(const GlobalOptions& g, std::ostream& out);

struct CompareOptions {
  std::vector<std::filesystem::path> reports;
  double alpha = 0.05;
};
int cmd_compare(const GlobalOptions& g, const CompareOptions& o, std::ostream& out);

struct TopFeaturesOptions {
  std::vector<std::filesystem::path> models;
  size_t k = 20;
  int pca = 0;  // weight-PCA components, 0 = none
  bool standardized_pca = false;
};
int cmd_top_features(const GlobalOptions& g, const TopFeaturesOptions& o, std::ostream& out);

struct ReportOptions {
  std::filesystem::path report;
  double alpha = 0.05;
};
int cmd_report(const GlobalOptions& g, const ReportOptions& o, std::ostream& out);

// File-name form of a configuration name ("lda/bigram/none" -> "lda_bigram_none").
std::string file_stem(const std::string& config_name);

}  // namespace pkddi::cli
