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

// Nested cross-validation: a fold plan shared by every configuration, inner
// hyperparameter selection by mean MCC, outer-fold scoring, RP3 ranking and
// paired permutation tests.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pkddi/classifiers.hpp"
#include "pkddi/corpus.hpp"
#include "pkddi/featurizer.hpp"
#include "pkddi/metrics.hpp"
#include "pkddi/transforms.hpp"

namespace pkddi {

// Row indices into the corpus.
struct Fold {
  std::vector<size_t> train;
  std::vector<size_t> test;
};

struct PlanOptions {
  int repeats = 4;
  int partitions = 4;
  bool stratified = true;
  int max_retries = 100;
};

struct FoldPlan {
  uint64_t seed = 0;
  PlanOptions options;
  std::vector<std::string> ids;
  std::vector<Fold> outer;
  std::vector<std::vector<Fold>> inner;  // inner[o] partitions outer[o].train

  // Hash of seed, options, ids and every split.
  uint64_t fingerprint() const;
};

// Throws ConfigError for fewer than 8 documents, a missing class, or when no
// partition with both classes in every training split is found within
// `max_retries` attempts.
FoldPlan make_fold_plan(std::span<const std::string> ids, std::span<const Label> labels, uint64_t seed,
                        const PlanOptions& options = {});
// Repeated k-way partitions of `rows`; exposed for tests.
std::vector<Fold> partition_rows(std::span<const size_t> rows, std::span<const Label> labels, uint64_t seed,
                                 const PlanOptions& options);

struct RunConfig {
  ClassifierKind classifier = ClassifierKind::kLda;
  NgramOrder ngram = NgramOrder::kUnigramBigram;
  TransformSpec transform;
  std::vector<std::string> resources;  // count tables attached as extra columns
  std::vector<Hyperparams> grid;       // empty: default_grid()

  // e.g. "lda/bigram/none" or "vtt/unigram/none/+i-CYPS".
  std::string name() const;
  std::vector<Hyperparams> effective_grid() const;
  // Throws ConfigError (vtt with weighting or PCA, bad grid, ...).
  void validate() const;
  bool operator==(const RunConfig&) const = default;
};

// Audit of fit calls: each stage that estimates anything from data records
// the ids of the rows it consumed; a call is a violation when any of them
// belongs to the held-out split of its fold.
struct AuditEntry {
  size_t config = 0;
  int outer_fold = 0;
  int inner_fold = -1;  // -1 for the outer fit
  std::string stage;    // vocabulary, transform, train
  size_t rows = 0;
  uint64_t row_hash = 0;
  size_t held_out_rows = 0;
};

struct AuditSummary {
  int64_t fit_calls = 0;
  int64_t violations = 0;
  uint64_t digest = 0;  // order-independent combination of all row hashes
  std::vector<AuditEntry> violating;
};

// Thread-safe collector behind the audit mode.
class AuditLog {
 public:
  void record(AuditEntry entry);
  // Entries sorted by (config, outer fold, inner fold, stage), so the summary
  // does not depend on task completion order.
  AuditSummary summary() const;
  std::vector<AuditEntry> entries() const;

 private:
  mutable std::mutex mutex_;
  std::vector<AuditEntry> entries_;
};

enum class Metric { kF1, kMcc, kIauc };
std::string_view metric_name(Metric m);

struct FoldRecord {
  size_t config = 0;
  int fold = 0;
  double f1 = 0.0;
  double mcc = 0.0;
  double iauc = 0.0;
  ConfusionCounts counts;
  Hyperparams chosen;
  std::string error;  // empty on success
  std::vector<std::string> warnings;

  bool ok() const { return error.empty(); }
};

struct ConfigSummary {
  bool complete = false;  // every fold succeeded
  double mean_f1 = 0.0;
  double mean_mcc = 0.0;
  double mean_iauc = 0.0;
  int rank_f1 = 0;  // 0 when excluded from ranking
  int rank_mcc = 0;
  int rank_iauc = 0;
  int64_t rp3 = 0;
};

struct EvalReport {
  uint64_t seed = 0;
  uint64_t plan_fingerprint = 0;
  uint64_t config_fingerprint = 0;
  bool stratified = true;
  bool global_vocabulary = false;
  int folds_per_config = 0;
  std::vector<RunConfig> configs;
  std::vector<FoldRecord> records;  // config-major, fold-minor
  std::vector<ConfigSummary> summary;
  std::optional<AuditSummary> audit;

  const FoldRecord& record(size_t config, int fold) const;
  std::vector<double> fold_values(size_t config, Metric metric) const;
  // Ranked configurations first (RP3 ascending, then mean MCC descending,
  // then name), then incomplete ones.
  std::vector<size_t> order() const;
};

// Recomputes means, ranks and RP3 from the records.
void summarize(EvalReport& report);

// Documents plus everything derived from them without looking at labels:
// tokens, the global key index per n-gram order, and count tables.
class EvalData {
 public:
  // Throws ConfigError when a table repeats a resource or names a document
  // that is not in the corpus.
  EvalData(const Corpus& corpus, std::vector<NerCountTable> tables = {});

  const Corpus& corpus() const { return corpus_; }
  size_t size() const { return corpus_.documents.size(); }
  const FeatureIndex& index(NgramOrder order) const;
  std::vector<Label> labels(std::span<const size_t> rows) const;
  const NerCountTable& table(const std::string& resource) const;
  bool has_table(const std::string& resource) const;

 private:
  const Corpus& corpus_;
  std::vector<TokenizedDocument> tokens_;
  std::map<std::string, NerCountTable> tables_;
  std::unique_ptr<FeatureIndex> unigram_;
  std::unique_ptr<FeatureIndex> bigram_;
};

struct SplitOptions {
  bool global_vocabulary = false;  // prune on the whole corpus, as the original study did
  AuditLog* audit = nullptr;
  // Rows held out at an enclosing level (the outer test split, for inner folds).
  std::span<const size_t> also_held_out;
  size_t config = 0;
  int outer_fold = 0;
  int inner_fold = -1;
};

// Vocabulary, matrices and fitted transform for one train/test split.
struct PreparedSplit {
  Vocabulary vocabulary;
  FittedTransform transform;
  FeatureMatrix train;
  FeatureMatrix test;
  std::vector<Label> train_labels;
  std::vector<Label> test_labels;
};

PreparedSplit prepare_split(const EvalData& data, const RunConfig& config, const Fold& fold,
                            const SplitOptions& options = {});

struct InnerSelection {
  Hyperparams chosen;
  std::vector<double> mean_mcc;   // per grid point; NaN when disqualified
  std::vector<std::string> errors;  // first error per disqualified grid point
};

// Highest mean MCC over the inner folds of outer fold `outer`; ties go to the
// earliest (smallest) grid point. A single-point grid is returned without
// evaluation. Throws NumericalError when every grid point fails.
InnerSelection inner_select(const EvalData& data, const RunConfig& config, const FoldPlan& plan, size_t outer,
                            const SplitOptions& options = {});

struct GridOptions {
  int threads = 0;  // 0: OpenMP default
  bool audit = true;
  bool global_vocabulary = false;
  std::function<void(size_t done, size_t total)> progress;
};

EvalReport run_grid(const EvalData& data, std::span<const RunConfig> configs, const FoldPlan& plan,
                    const GridOptions& options = {});

uint64_t configs_fingerprint(std::span<const RunConfig> configs, uint64_t seed, bool stratified,
                             bool global_vocabulary);

enum class Tails { kOne, kTwo };

struct PermutationOptions {
  int exact_limit = 20;   // enumerate all 2^n sign flips up to this n
  int64_t draws = 100000;  // Monte Carlo draws beyond it
  uint64_t seed = 0;
  bool force_monte_carlo = false;
};

// Paired sign-flip test on the mean difference a - b. One-tailed tests the
// alternative mean(a) > mean(b). The observed assignment is always counted.
double paired_permutation_test(std::span<const double> a, std::span<const double> b, Tails tails,
                               const PermutationOptions& options = {});

struct Significance {
  Metric metric = Metric::kMcc;
  size_t best = 0;
  std::vector<double> p_vs_best;          // one-tailed; NaN for incomplete configs
  std::vector<bool> indistinguishable;    // p_vs_best > alpha
  std::vector<std::vector<double>> pairwise;  // two-tailed
};

Significance significance(const EvalReport& report, Metric metric, double alpha = 0.05,
                          const PermutationOptions& options = {});

// Report files.
void write_folds_tsv(std::ostream& out, const EvalReport& report);
void write_summary_tsv(std::ostream& out, const EvalReport& report);
void write_significance_tsv(std::ostream& out, const EvalReport& report, std::span<const Significance> tests);
// Table-1-style listing: one row per configuration in RP3 order, means with
// ranks, '*' marking configurations not distinguishable from the best.
void write_summary_table(std::ostream& out, const EvalReport& report, std::span<const Significance> tests);
// Everything above at full precision. `metadata_json` (a JSON object, may be
// empty) is stored under "metadata" and is the only non-deterministic part.
void write_report_json(std::ostream& out, const EvalReport& report, std::span<const Significance> tests,
                       const std::string& metadata_json = "");
EvalReport read_report_json(std::istream& in);

}  // namespace pkddi
