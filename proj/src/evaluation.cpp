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

#include "pkddi/evaluation.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <unordered_set>

#include "pkddi/error.hpp"
#include "pkddi/random.hpp"

namespace pkddi {

// ---------------------------------------------------------------- fold plan

std::vector<Fold> partition_rows(std::span<const size_t> rows, std::span<const Label> labels, uint64_t seed,
                                 const PlanOptions& options) {
  const auto k = static_cast<size_t>(options.partitions);
  if (options.partitions < 2 || options.repeats < 1) throw ConfigError("fold plan needs >= 2 partitions and >= 1 repeat");
  if (rows.size() < 2 * k) {
    throw ConfigError("cannot partition " + std::to_string(rows.size()) + " documents into " + std::to_string(k) +
                      " folds");
  }
  std::vector<Fold> folds;
  for (int r = 0; r < options.repeats; ++r) {
    bool done = false;
    for (int attempt = 0; attempt <= options.max_retries && !done; ++attempt) {
      Rng rng(substream_seed(seed, "partition", static_cast<uint64_t>(r) * 1000003ULL + static_cast<uint64_t>(attempt)));
      std::vector<std::vector<size_t>> parts(k);
      size_t slot = 0;
      auto deal = [&](std::vector<size_t> group) {
        rng.shuffle(std::span<size_t>(group));
        for (size_t row : group) parts[slot++ % k].push_back(row);
      };
      if (options.stratified) {
        std::vector<size_t> rel;
        std::vector<size_t> irr;
        for (size_t row : rows) (labels[row] == Label::kRelevant ? rel : irr).push_back(row);
        deal(std::move(rel));
        deal(std::move(irr));
      } else {
        deal(std::vector<size_t>(rows.begin(), rows.end()));
      }
      std::vector<Fold> repeat(k);
      bool usable = true;
      for (size_t p = 0; p < k; ++p) {
        std::sort(parts[p].begin(), parts[p].end());
        repeat[p].test = parts[p];
        for (size_t q = 0; q < k; ++q) {
          if (q != p) repeat[p].train.insert(repeat[p].train.end(), parts[q].begin(), parts[q].end());
        }
        std::sort(repeat[p].train.begin(), repeat[p].train.end());
        bool has_rel = false;
        bool has_irr = false;
        for (size_t row : repeat[p].train) (labels[row] == Label::kRelevant ? has_rel : has_irr) = true;
        usable = usable && has_rel && has_irr;
      }
      if (usable) {
        folds.insert(folds.end(), repeat.begin(), repeat.end());
        done = true;
      }
    }
    if (!done) {
      throw ConfigError("no partition with both classes in every training split after " +
                        std::to_string(options.max_retries) + " retries");
    }
  }
  return folds;
}

FoldPlan make_fold_plan(std::span<const std::string> ids, std::span<const Label> labels, uint64_t seed,
                        const PlanOptions& options) {
  if (ids.size() != labels.size()) throw ConfigError("fold plan: ids and labels differ in length");
  if (ids.size() < 8) throw ConfigError("fold plan needs at least 8 documents, got " + std::to_string(ids.size()));
  const auto rel = std::count(labels.begin(), labels.end(), Label::kRelevant);
  if (rel == 0 || rel == static_cast<std::ptrdiff_t>(labels.size())) {
    throw ConfigError("fold plan needs documents of both classes");
  }
  FoldPlan plan;
  plan.seed = seed;
  plan.options = options;
  plan.ids.assign(ids.begin(), ids.end());
  std::vector<size_t> all(ids.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = i;
  plan.outer = partition_rows(all, labels, substream_seed(seed, "outer-folds"), options);
  for (size_t o = 0; o < plan.outer.size(); ++o) {
    plan.inner.push_back(partition_rows(plan.outer[o].train, labels, substream_seed(seed, "inner-folds", o), options));
  }
  return plan;
}

namespace {

uint64_t mix(uint64_t h, uint64_t v) { return splitmix64(h ^ v); }

uint64_t hash_rows(uint64_t h, const std::vector<size_t>& rows) {
  h = mix(h, rows.size());
  for (size_t r : rows) h = mix(h, r);
  return h;
}

}  // namespace

uint64_t FoldPlan::fingerprint() const {
  uint64_t h = fnv1a("fold-plan");
  h = mix(h, seed);
  h = mix(h, static_cast<uint64_t>(options.repeats));
  h = mix(h, static_cast<uint64_t>(options.partitions));
  h = mix(h, options.stratified ? 1 : 0);
  for (const auto& id : ids) h = mix(h, fnv1a(id));
  for (size_t o = 0; o < outer.size(); ++o) {
    h = hash_rows(hash_rows(h, outer[o].train), outer[o].test);
    for (const Fold& f : inner[o]) h = hash_rows(hash_rows(h, f.train), f.test);
  }
  return h;
}

// ------------------------------------------------------------ run configs

std::string RunConfig::name() const {
  std::string out = std::string(classifier_name(classifier)) + "/" + std::string(ngram_order_name(ngram)) + "/" +
                    transform.name();
  if (!resources.empty()) {
    out += "/";
    for (const auto& r : resources) out += "+" + r;
  }
  return out;
}

std::vector<Hyperparams> RunConfig::effective_grid() const {
  return grid.empty() ? default_grid(classifier, resources.size()) : grid;
}

void RunConfig::validate() const {
  transform.validate();
  if (classifier == ClassifierKind::kVtt && (transform.weighting != Weighting::kNone || transform.l2_normalize ||
                                             transform.pca_components)) {
    throw ConfigError("vtt is defined on binary occurrence data only; use transform 'none' (got '" +
                      transform.name() + "')");
  }
  if (classifier == ClassifierKind::kNaiveBayes && !transform.is_identity()) {
    throw ConfigError("nb needs binary occurrence data; use transform 'none' (got '" + transform.name() + "')");
  }
  std::set<std::string> seen;
  for (const auto& r : resources) {
    if (!seen.insert(r).second) throw ConfigError("resource '" + r + "' listed twice in " + name());
  }
  const std::vector<Hyperparams> g = effective_grid();
  if (g.empty()) throw ConfigError("empty hyperparameter grid for " + name());
  const size_t arity = classifier == ClassifierKind::kVtt ? resources.size() : 1;
  for (size_t i = 0; i < g.size(); ++i) {
    if (g[i].size() != arity) {
      throw ConfigError(name() + ": grid points need " + std::to_string(arity) + " value(s)");
    }
    for (double v : g[i]) {
      if (!std::isfinite(v)) throw ConfigError(name() + ": non-finite grid value");
      const bool bounded = classifier == ClassifierKind::kLda || classifier == ClassifierKind::kDlda;
      if (bounded ? (v < 0.0 || v > 1.0) : v <= 0.0) {
        throw ConfigError(name() + ": grid value " + std::to_string(v) + " out of range");
      }
    }
    if (arity == 1 && i > 0 && !(g[i][0] > g[i - 1][0])) {
      throw ConfigError(name() + ": grid values must be strictly increasing");
    }
  }
}

uint64_t configs_fingerprint(std::span<const RunConfig> configs, uint64_t seed, bool stratified,
                             bool global_vocabulary) {
  uint64_t h = fnv1a("configs");
  h = mix(h, seed);
  h = mix(h, stratified ? 1 : 0);
  h = mix(h, global_vocabulary ? 1 : 0);
  for (const auto& c : configs) {
    h = mix(h, fnv1a(c.name()));
    h = mix(h, c.transform.free_pca ? 1 : 0);
    for (const auto& g : c.effective_grid()) {
      h = mix(h, fnv1a(format_hyperparams(g)));
    }
  }
  return h;
}

// ------------------------------------------------------------------ audit

void AuditLog::record(AuditEntry entry) {
  std::lock_guard lock(mutex_);
  entries_.push_back(std::move(entry));
}

std::vector<AuditEntry> AuditLog::entries() const {
  std::lock_guard lock(mutex_);
  std::vector<AuditEntry> out = entries_;
  std::sort(out.begin(), out.end(), [](const AuditEntry& a, const AuditEntry& b) {
    return std::tie(a.config, a.outer_fold, a.inner_fold, a.stage, a.row_hash) <
           std::tie(b.config, b.outer_fold, b.inner_fold, b.stage, b.row_hash);
  });
  return out;
}

AuditSummary AuditLog::summary() const {
  AuditSummary s;
  for (const AuditEntry& e : entries()) {
    ++s.fit_calls;
    s.digest += mix(fnv1a(e.stage, e.row_hash), (static_cast<uint64_t>(e.config) << 32) ^
                                                    (static_cast<uint64_t>(e.outer_fold) << 8) ^
                                                    static_cast<uint64_t>(e.inner_fold + 1));
    if (e.held_out_rows > 0) {
      ++s.violations;
      s.violating.push_back(e);
    }
  }
  return s;
}

// --------------------------------------------------------------- data

EvalData::EvalData(const Corpus& corpus, std::vector<NerCountTable> tables) : corpus_(corpus) {
  tokens_.reserve(corpus.documents.size());
  for (const Document& d : corpus.documents) tokens_.push_back(tokenize_document(d));
  unigram_ = std::make_unique<FeatureIndex>(tokens_, corpus.ids(), NgramOrder::kUnigram);
  bigram_ = std::make_unique<FeatureIndex>(tokens_, corpus.ids(), NgramOrder::kUnigramBigram);
  std::unordered_set<std::string> known;
  for (const Document& d : corpus.documents) known.insert(d.id);
  for (auto& t : tables) {
    for (const auto& [doc, count] : t.counts) {
      if (!known.count(doc)) {
        throw ConfigError("count table '" + t.resource + "' names document '" + doc + "' which is not in the corpus");
      }
    }
    const std::string name = t.resource;
    if (!tables_.emplace(name, std::move(t)).second) throw ConfigError("duplicate count resource '" + name + "'");
  }
}

const FeatureIndex& EvalData::index(NgramOrder order) const {
  return order == NgramOrder::kUnigram ? *unigram_ : *bigram_;
}

std::vector<Label> EvalData::labels(std::span<const size_t> rows) const {
  std::vector<Label> out;
  out.reserve(rows.size());
  for (size_t r : rows) out.push_back(corpus_.documents[r].label);
  return out;
}

const NerCountTable& EvalData::table(const std::string& resource) const {
  auto it = tables_.find(resource);
  if (it == tables_.end()) throw ConfigError("unknown count resource '" + resource + "'");
  return it->second;
}

bool EvalData::has_table(const std::string& resource) const { return tables_.count(resource) > 0; }

// --------------------------------------------------------------- splits

namespace {

void audit_fit(const SplitOptions& options, std::string stage, std::span<const std::string> fit_ids,
               const std::unordered_set<std::string>& held_out) {
  if (!options.audit) return;
  AuditEntry e;
  e.config = options.config;
  e.outer_fold = options.outer_fold;
  e.inner_fold = options.inner_fold;
  e.stage = std::move(stage);
  e.rows = fit_ids.size();
  uint64_t h = fnv1a("rows");
  for (const auto& id : fit_ids) {
    h = fnv1a(id, h);
    h = fnv1a(std::string_view("\n", 1), h);
    if (held_out.count(id)) ++e.held_out_rows;
  }
  e.row_hash = h;
  options.audit->record(std::move(e));
}

std::unordered_set<std::string> held_out_ids(const EvalData& data, const Fold& fold, const SplitOptions& options) {
  std::unordered_set<std::string> out;
  if (!options.audit) return out;
  for (size_t r : fold.test) out.insert(data.corpus().documents[r].id);
  for (size_t r : options.also_held_out) out.insert(data.corpus().documents[r].id);
  return out;
}

}  // namespace

PreparedSplit prepare_split(const EvalData& data, const RunConfig& config, const Fold& fold,
                            const SplitOptions& options) {
  const std::unordered_set<std::string> held_out = held_out_ids(data, fold, options);
  const FeatureIndex& index = data.index(config.ngram);
  PreparedSplit split;

  std::vector<size_t> vocab_rows;
  if (options.global_vocabulary) {
    vocab_rows.resize(data.size());
    for (size_t i = 0; i < vocab_rows.size(); ++i) vocab_rows[i] = i;
  } else {
    vocab_rows = fold.train;
  }
  if (options.audit) {
    std::vector<std::string> ids;
    for (size_t r : vocab_rows) ids.push_back(index.doc_id(r));
    audit_fit(options, "vocabulary", ids, held_out);
  }
  split.vocabulary = build_vocabulary(index, vocab_rows);
  split.train = occurrence_matrix(index, fold.train, split.vocabulary);
  split.test = occurrence_matrix(index, fold.test, split.vocabulary);
  if (!config.resources.empty()) {
    std::vector<NerCountTable> tables;
    for (const auto& r : config.resources) tables.push_back(data.table(r));
    split.train = attach_counts(split.train, tables);
    split.test = attach_counts(split.test, tables);
  }
  split.transform.spec = config.transform;
  if (!config.transform.is_identity()) {
    audit_fit(options, "transform", split.train.row_ids, held_out);
    split.transform = fit_transform(split.train, config.transform);
    split.train = apply_transform(split.train, split.transform);
    split.test = apply_transform(split.test, split.transform);
  }
  split.train_labels = data.labels(fold.train);
  split.test_labels = data.labels(fold.test);
  return split;
}

namespace {

void audit_train(const EvalData& data, const Fold& fold, const SplitOptions& options, const FeatureMatrix& train) {
  if (!options.audit) return;
  audit_fit(options, "train", train.row_ids, held_out_ids(data, fold, options));
}

}  // namespace

InnerSelection inner_select(const EvalData& data, const RunConfig& config, const FoldPlan& plan, size_t outer,
                            const SplitOptions& options) {
  const std::vector<Hyperparams> grid = config.effective_grid();
  InnerSelection sel;
  if (grid.size() == 1) {
    sel.chosen = grid[0];
    sel.mean_mcc.assign(1, std::numeric_limits<double>::quiet_NaN());
    sel.errors.assign(1, "");
    return sel;
  }
  std::vector<double> sums(grid.size(), 0.0);
  sel.errors.assign(grid.size(), "");
  const auto& inner = plan.inner.at(outer);
  SplitOptions inner_options = options;
  inner_options.also_held_out = plan.outer.at(outer).test;
  for (size_t i = 0; i < inner.size(); ++i) {
    inner_options.inner_fold = static_cast<int>(i);
    const PreparedSplit split = prepare_split(data, config, inner[i], inner_options);
    audit_train(data, inner[i], inner_options, split.train);
    std::vector<PathEntry> path = train_path(config.classifier, split.train, split.train_labels, grid);
    for (size_t g = 0; g < grid.size(); ++g) {
      if (!sel.errors[g].empty()) continue;
      if (!path[g].model) {
        sel.errors[g] = path[g].error;
        continue;
      }
      const std::vector<Label> pred = predict(*path[g].model, split.test);
      sums[g] += mcc(confusion(split.test_labels, pred));
    }
  }
  sel.mean_mcc.resize(grid.size());
  double best = -std::numeric_limits<double>::infinity();
  int best_index = -1;
  for (size_t g = 0; g < grid.size(); ++g) {
    if (!sel.errors[g].empty()) {
      sel.mean_mcc[g] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    sel.mean_mcc[g] = sums[g] / static_cast<double>(inner.size());
    if (sel.mean_mcc[g] > best) {
      best = sel.mean_mcc[g];
      best_index = static_cast<int>(g);
    }
  }
  if (best_index < 0) {
    throw NumericalError("every grid point failed during inner selection for " + config.name() + ": " +
                         sel.errors[0]);
  }
  sel.chosen = grid[static_cast<size_t>(best_index)];
  return sel;
}

// ------------------------------------------------------------------ grid

EvalReport run_grid(const EvalData& data, std::span<const RunConfig> configs, const FoldPlan& plan,
                    const GridOptions& options) {
  if (plan.ids != data.corpus().ids()) throw ConfigError("fold plan was built for a different corpus");
  for (const RunConfig& c : configs) {
    c.validate();
    for (const auto& r : c.resources) data.table(r);
  }
  EvalReport report;
  report.seed = plan.seed;
  report.plan_fingerprint = plan.fingerprint();
  report.stratified = plan.options.stratified;
  report.global_vocabulary = options.global_vocabulary;
  report.config_fingerprint = configs_fingerprint(configs, plan.seed, plan.options.stratified,
                                                  options.global_vocabulary);
  report.folds_per_config = static_cast<int>(plan.outer.size());
  report.configs.assign(configs.begin(), configs.end());

  const size_t folds = plan.outer.size();
  const size_t tasks = configs.size() * folds;
  report.records.resize(tasks);
  AuditLog audit;
  size_t done = 0;

  omp_set_max_active_levels(1);
  const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (size_t t = 0; t < tasks; ++t) {
    const size_t ci = t / folds;
    const size_t fi = t % folds;
    const RunConfig& config = configs[ci];
    FoldRecord rec;
    rec.config = ci;
    rec.fold = static_cast<int>(fi);
    SplitOptions split_options;
    split_options.global_vocabulary = options.global_vocabulary;
    split_options.audit = options.audit ? &audit : nullptr;
    split_options.config = ci;
    split_options.outer_fold = static_cast<int>(fi);
    try {
      const InnerSelection sel = inner_select(data, config, plan, fi, split_options);
      rec.chosen = sel.chosen;
      split_options.inner_fold = -1;
      const PreparedSplit split = prepare_split(data, config, plan.outer[fi], split_options);
      audit_train(data, plan.outer[fi], split_options, split.train);
      const TrainedModel model = train(config.classifier, split.train, split.train_labels, rec.chosen);
      rec.warnings = model.warnings;
      const Eigen::VectorXd s = score(model, split.test);
      std::vector<Label> pred(static_cast<size_t>(s.size()));
      for (Eigen::Index i = 0; i < s.size(); ++i) pred[static_cast<size_t>(i)] = predict(s(i));
      rec.counts = confusion(split.test_labels, pred);
      rec.f1 = f1(rec.counts);
      rec.mcc = mcc(rec.counts);
      rec.iauc = iauc(std::span<const double>(s.data(), static_cast<size_t>(s.size())), split.test_labels);
    } catch (const std::exception& e) {
      rec.error = e.what();
      if (rec.error.empty()) rec.error = "unknown error";
    }
    report.records[t] = std::move(rec);
    if (options.progress) {
#pragma omp critical(pkddi_progress)
      options.progress(++done, tasks);
    }
  }
  if (options.audit) report.audit = audit.summary();
  summarize(report);
  return report;
}

// --------------------------------------------------------------- summary

std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::kF1: return "f1";
    case Metric::kMcc: return "mcc";
    case Metric::kIauc: return "iauc";
  }
  return "?";
}

const FoldRecord& EvalReport::record(size_t config, int fold) const {
  return records.at(config * static_cast<size_t>(folds_per_config) + static_cast<size_t>(fold));
}

std::vector<double> EvalReport::fold_values(size_t config, Metric metric) const {
  std::vector<double> out;
  for (int f = 0; f < folds_per_config; ++f) {
    const FoldRecord& r = record(config, f);
    out.push_back(metric == Metric::kF1 ? r.f1 : metric == Metric::kMcc ? r.mcc : r.iauc);
  }
  return out;
}

void summarize(EvalReport& report) {
  const size_t n = report.configs.size();
  report.summary.assign(n, ConfigSummary{});
  if (report.records.size() != n * static_cast<size_t>(report.folds_per_config)) {
    throw ConfigError("report has " + std::to_string(report.records.size()) + " records, expected " +
                      std::to_string(n * static_cast<size_t>(report.folds_per_config)));
  }
  std::vector<size_t> complete;
  for (size_t c = 0; c < n; ++c) {
    ConfigSummary& s = report.summary[c];
    int ok = 0;
    for (int f = 0; f < report.folds_per_config; ++f) {
      const FoldRecord& r = report.record(c, f);
      if (!r.ok()) continue;
      ++ok;
      s.mean_f1 += r.f1;
      s.mean_mcc += r.mcc;
      s.mean_iauc += r.iauc;
    }
    if (ok > 0) {
      s.mean_f1 /= ok;
      s.mean_mcc /= ok;
      s.mean_iauc /= ok;
    }
    s.complete = ok == report.folds_per_config && ok > 0;
    if (s.complete) complete.push_back(c);
  }
  std::vector<double> f1s;
  std::vector<double> mccs;
  std::vector<double> iaucs;
  for (size_t c : complete) {
    f1s.push_back(report.summary[c].mean_f1);
    mccs.push_back(report.summary[c].mean_mcc);
    iaucs.push_back(report.summary[c].mean_iauc);
  }
  const std::vector<int> rf = competition_ranks(f1s);
  const std::vector<int> rm = competition_ranks(mccs);
  const std::vector<int> ri = competition_ranks(iaucs);
  for (size_t k = 0; k < complete.size(); ++k) {
    ConfigSummary& s = report.summary[complete[k]];
    s.rank_f1 = rf[k];
    s.rank_mcc = rm[k];
    s.rank_iauc = ri[k];
    s.rp3 = rp3(rf[k], rm[k], ri[k]);
  }
}

std::vector<size_t> EvalReport::order() const {
  std::vector<size_t> idx(configs.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [this](size_t a, size_t b) {
    const ConfigSummary& sa = summary[a];
    const ConfigSummary& sb = summary[b];
    if (sa.complete != sb.complete) return sa.complete;
    if (!sa.complete) return false;
    if (sa.rp3 != sb.rp3) return sa.rp3 < sb.rp3;
    if (sa.mean_mcc != sb.mean_mcc) return sa.mean_mcc > sb.mean_mcc;
    return configs[a].name() < configs[b].name();
  });
  return idx;
}

}  // namespace pkddi
