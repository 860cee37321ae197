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

#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "pkddi/analysis.hpp"
#include "pkddi/error.hpp"
#include "pkddi/evaluation.hpp"
#include "pkddi/synth.hpp"

namespace pkddi::cli {
namespace fs = std::filesystem;

namespace {

constexpr Metric kMetrics[] = {Metric::kF1, Metric::kMcc, Metric::kIauc};

std::string hex(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p);
  if (!f) throw ConfigError("cannot write " + p.string());
  return f;
}

std::ifstream open_in(const fs::path& p, const char* what) {
  if (!fs::exists(p)) throw ConfigError(std::string(what) + " not found: " + p.string());
  std::ifstream f(p);
  if (!f) throw ConfigError(std::string("cannot read ") + what + " " + p.string());
  return f;
}

void make_dir(const fs::path& p) {
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw ConfigError("cannot create output directory " + p.string() + ": " + ec.message());
}

// One comment line tying a text output to its plan and configuration set.
void stamp(std::ostream& out, const EvalReport& r) {
  out << "# pkddi seed=" << r.seed << " plan=" << hex(r.plan_fingerprint) << " configs=" << hex(r.config_fingerprint)
      << '\n';
}

fs::path output_dir(const GlobalOptions& g) {
  if (g.out) return *g.out;
  if (const char* env = std::getenv("PKDDI_OUT"); env && *env) return env;
  return "pkddi-out";
}

std::vector<Significance> all_tests(const EvalReport& r, double alpha, int64_t draws) {
  PermutationOptions p;
  p.seed = r.seed;
  p.draws = draws;
  std::vector<Significance> tests;
  bool any_complete = false;
  for (const auto& s : r.summary) any_complete = any_complete || s.complete;
  if (!any_complete) return tests;
  for (Metric m : kMetrics) tests.push_back(significance(r, m, alpha, p));
  return tests;
}

void write_report_files(const fs::path& dir, const EvalReport& r, const std::vector<Significance>& tests) {
  {
    auto f = open_out(dir / "folds.tsv");
    stamp(f, r);
    write_folds_tsv(f, r);
  }
  {
    auto f = open_out(dir / "summary.tsv");
    stamp(f, r);
    write_summary_tsv(f, r);
  }
  {
    auto f = open_out(dir / "significance.tsv");
    stamp(f, r);
    write_significance_tsv(f, r, tests);
  }
  {
    auto f = open_out(dir / "summary_table.txt");
    stamp(f, r);
    write_summary_table(f, r, tests);
  }
}

// Most frequent hyperparameter over successful outer folds; ties go to the
// earliest grid point.
std::optional<Hyperparams> modal_choice(const EvalReport& r, size_t config) {
  const auto grid = r.configs[config].effective_grid();
  std::vector<int> votes(grid.size(), 0);
  for (int f = 0; f < r.folds_per_config; ++f) {
    const FoldRecord& rec = r.record(config, f);
    if (!rec.ok()) continue;
    auto it = std::find(grid.begin(), grid.end(), rec.chosen);
    if (it != grid.end()) ++votes[static_cast<size_t>(it - grid.begin())];
  }
  auto best = std::max_element(votes.begin(), votes.end());
  if (best == votes.end() || *best == 0) return std::nullopt;
  return grid[static_cast<size_t>(best - votes.begin())];
}

void print_corpus_summary(std::ostream& out, const Corpus& corpus) {
  if (corpus.task == Task::kAbstract) {
    out << corpus.documents.size() << " documents, " << corpus.count(Label::kRelevant) << " relevant, "
        << corpus.count(Label::kIrrelevant) << " irrelevant\n";
  } else {
    std::set<std::string> abstracts;
    for (const auto& d : corpus.documents) abstracts.insert(d.sentence->pmid);
    out << corpus.documents.size() << " sentences, " << abstracts.size() << " abstracts ("
        << corpus.count(Label::kRelevant) << " relevant, " << corpus.count(Label::kIrrelevant) << " irrelevant)\n";
  }
}

}  // namespace

std::string file_stem(const std::string& config_name) {
  std::string s = config_name;
  std::replace(s.begin(), s.end(), '/', '_');
  return s;
}

ExperimentConfig resolve_config(const GlobalOptions& g) {
  if (!g.config) throw ConfigError("this command needs --config <experiment.json>");
  if (!fs::exists(*g.config)) throw ConfigError("config file not found: " + g.config->string());
  ExperimentConfig c = load_experiment_config(*g.config);
  apply_environment(c);
  if (g.seed) c.seed = *g.seed;
  if (g.threads) c.threads = *g.threads;
  if (g.out) c.output = *g.out;
  if (g.strict_paper_vocab) c.strict_paper_vocab = true;
  if (g.stratify) c.stratify = *g.stratify;
  if (c.threads < 0) throw ConfigError("--threads must be >= 0");
  return c;
}

int cmd_ingest(const GlobalOptions& g, const IngestOptions& o, std::ostream& out) {
  ExperimentConfig c;
  if (g.config) {
    c = resolve_config(g);
  } else {
    if (!o.sentences.empty()) {
      c.task = Task::kSentence;
      c.sentences = o.sentences;
    } else if ((!o.medline.empty() || !o.abstracts.empty()) && !o.labels.empty()) {
      c.medline = o.medline;
      c.abstracts = o.abstracts;
      c.labels = o.labels;
    } else {
      throw ConfigError("ingest needs --labels with --medline or --abstracts, --sentences, or --config");
    }
    if (g.out) c.output = *g.out;
    if (const char* env = std::getenv("PKDDI_OUT"); env && *env && !g.out) c.output = env;
  }
  LoadedCorpus lc = load_corpus(c);
  const Corpus& corpus = lc.corpus;
  print_corpus_summary(out, corpus);
  if (corpus.task == Task::kAbstract && (corpus.dropped_unlabeled > 0 || corpus.missing_records > 0)) {
    out << corpus.dropped_unlabeled << " unlabeled records dropped, " << corpus.missing_records
        << " labels without a record\n";
  }

  EvalData data(corpus, lc.tables);
  std::vector<size_t> all(data.size());
  std::iota(all.begin(), all.end(), size_t{0});
  make_dir(c.output);
  for (NgramOrder order : {NgramOrder::kUnigram, NgramOrder::kUnigramBigram}) {
    const Vocabulary vocab = build_vocabulary(data.index(order), all);
    const std::string name(ngram_order_name(order));
    out << name << " vocabulary: " << vocab.size() << " features (document frequency >= " << kMinDocumentFrequency
        << ")\n";
    auto vf = open_out(c.output / ("vocabulary_" + name + ".tsv"));
    write_vocabulary_tsv(vf, vocab);
    if (order == NgramOrder::kUnigram) {
      std::vector<size_t> idx(vocab.size());
      std::iota(idx.begin(), idx.end(), size_t{0});
      std::stable_sort(idx.begin(), idx.end(),
                       [&](size_t a, size_t b) { return vocab.doc_freq()[a] > vocab.doc_freq()[b]; });
      out << "most frequent:";
      for (size_t i = 0; i < std::min<size_t>(idx.size(), static_cast<size_t>(std::max(o.preview, 0))); ++i) {
        out << ' ' << vocab.keys()[idx[i]] << '(' << vocab.doc_freq()[idx[i]] << ')';
      }
      out << '\n';
    }
    FeatureMatrix m = attach_counts(occurrence_matrix(data.index(order), all, vocab), lc.tables);
    auto mf = open_out(c.output / ("matrix_" + name + ".tsv"));
    write_matrix_tsv(mf, m);
  }
  for (const auto& t : lc.tables) {
    int64_t docs = 0;
    for (const auto& d : corpus.documents) docs += t.count_for(d.id) > 0 ? 1 : 0;
    out << "count table " << t.resource << ": " << docs << " documents with a non-zero count\n";
  }
  {
    std::map<std::string, Label> labels;
    for (const auto& d : corpus.documents) labels[d.id] = d.label;
    auto lf = open_out(c.output / "labels.tsv");
    write_labels(lf, labels);
  }
  if (corpus.task == Task::kAbstract) {
    std::vector<AbstractRecord> records;
    for (const auto& d : corpus.documents) records.push_back(*d.abstract);
    auto f = open_out(c.output / "corpus.medline");
    write_medline(f, records);
  } else {
    std::vector<LabeledSentence> sentences;
    for (const auto& d : corpus.documents) sentences.push_back({*d.sentence, d.label});
    auto f = open_out(c.output / "sentences.tsv");
    write_sentences(f, sentences);
  }
  out << "cache written to " << c.output.string() << '\n';
  return 0;
}

int cmd_synth(const GlobalOptions& g, const SynthOptions& o, std::ostream& out) {
  SyntheticSpec spec;
  if (o.spec) {
    auto in = open_in(*o.spec, "synthetic spec");
    std::stringstream buf;
    buf << in.rdbuf();
    spec = parse_synthetic_spec(buf.str());
  }
  if (g.seed) spec.seed = *g.seed;
  if (o.documents) spec.documents = *o.documents;
  spec.validate();
  const fs::path dir = output_dir(g);
  make_dir(dir);
  const SyntheticCorpus corpus = generate_synthetic(spec);
  {
    auto f = open_out(dir / "corpus.medline");
    write_medline(f, corpus.records);
  }
  {
    auto f = open_out(dir / "labels.tsv");
    write_labels(f, corpus.labels);
  }
  {
    auto f = open_out(dir / "synth.json");
    f << synthetic_spec_json(spec) << '\n';
  }
  {
    // Ready-to-run experiment over the generated files: every classifier on
    // both feature sets.
    nlohmann::ordered_json e;
    e["task"] = "abstract";
    e["medline"] = "corpus.medline";
    e["labels"] = "labels.tsv";
    e["seed"] = spec.seed;
    e["output"] = "results";
    e["configurations"] = nlohmann::ordered_json::array(
        {{{"classifier", "all"}, {"features", {"unigram", "bigram"}}, {"transform", "none"}}});
    auto f = open_out(dir / "experiment.json");
    f << e.dump(2) << '\n';
  }
  int64_t relevant = 0;
  for (const auto& [id, l] : corpus.labels) relevant += l == Label::kRelevant ? 1 : 0;
  out << corpus.records.size() << " documents, " << relevant << " relevant, "
      << static_cast<int64_t>(corpus.records.size()) - relevant << " irrelevant\n";
  out << "written to " << dir.string() << '\n';
  return 0;
}

int cmd_run(const GlobalOptions& g, std::ostream& out) {
  ExperimentConfig c = resolve_config(g);
  c.check_paths();
  LoadedCorpus lc = load_corpus(c);
  EvalData data(lc.corpus, lc.tables);
  for (const RunConfig& rc : c.configurations) {
    for (const auto& r : rc.resources) {
      if (!data.has_table(r)) throw ConfigError(rc.name() + ": no count table named '" + r + "'");
    }
  }
  make_dir(c.output);
  print_corpus_summary(out, lc.corpus);

  PlanOptions po;
  po.stratified = c.stratify;
  const std::vector<std::string> ids = lc.corpus.ids();
  const std::vector<Label> labels = lc.corpus.labels();
  const FoldPlan plan = make_fold_plan(ids, labels, c.seed, po);

  GridOptions go;
  go.threads = c.threads;
  go.audit = c.audit;
  go.global_vocabulary = c.strict_paper_vocab;
  if (!g.quiet && isatty(STDERR_FILENO)) {
    go.progress = [](size_t done, size_t total) {
      std::cerr << "\rfold tasks " << done << '/' << total << std::flush;
      if (done == total) std::cerr << '\n';
    };
  }
  const auto start = std::chrono::steady_clock::now();
  EvalReport report = run_grid(data, c.configurations, plan, go);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto tests = all_tests(report, 0.05, c.permutation_draws);

  write_report_files(c.output, report, tests);
  {
    nlohmann::ordered_json meta;
    meta["created"] = utc_now();
    meta["elapsed_seconds"] = seconds;
    meta["threads"] = c.threads;
    meta["experiment_fingerprint"] = hex(c.fingerprint());
    meta["experiment"] = nlohmann::ordered_json::parse(c.to_json());
    auto f = open_out(c.output / "report.json");
    write_report_json(f, report, tests, meta.dump());
  }
  if (report.audit) {
    auto f = open_out(c.output / "audit.tsv");
    stamp(f, report);
    f << "fit_calls\tviolations\tdigest\n"
      << report.audit->fit_calls << '\t' << report.audit->violations << '\t' << hex(report.audit->digest) << '\n';
    for (const AuditEntry& e : report.audit->violating) {
      f << "violation\t" << report.configs[e.config].name() << '\t' << e.outer_fold + 1 << '\t' << e.inner_fold + 1
        << '\t' << e.stage << '\t' << e.held_out_rows << '\n';
    }
  }

  // Final models: every configuration refit on the whole corpus with its most
  // frequently selected hyperparameter.
  const fs::path models = c.output / "models";
  make_dir(models);
  std::vector<size_t> all(data.size());
  std::iota(all.begin(), all.end(), size_t{0});
  SplitOptions so;
  so.global_vocabulary = c.strict_paper_vocab;
  for (size_t i = 0; i < report.configs.size(); ++i) {
    const RunConfig& rc = report.configs[i];
    const auto h = modal_choice(report, i);
    if (!h) {
      std::cerr << rc.name() << ": no successful fold, model not written\n";
      continue;
    }
    try {
      PreparedSplit split = prepare_split(data, rc, Fold{all, {}}, so);
      TrainedModel m = train(rc.classifier, split.train, split.train_labels, *h);
      m.column_sd = column_sd(split.train);
      auto f = open_out(models / (file_stem(rc.name()) + ".model"));
      write_model(f, m);
      if (!rc.transform.is_identity()) {
        auto t = open_out(models / (file_stem(rc.name()) + ".transform"));
        write_transform(t, split.transform);
      }
    } catch (const Error& e) {
      std::cerr << rc.name() << ": final model failed: " << e.what() << '\n';
    }
  }

  {
    std::ostringstream table;
    write_summary_table(table, report, tests);
    out << table.str();
  }
  if (report.audit) {
    out << "audit: " << report.audit->fit_calls << " fit calls, " << report.audit->violations << " violations\n";
  }
  int failed = 0;
  for (const auto& r : report.records) failed += r.ok() ? 0 : 1;
  if (failed > 0) out << failed << " fold records failed; see folds.tsv\n";
  out << "results in " << c.output.string() << '\n';
  return 0;
}

int cmd_compare(const GlobalOptions& g, const CompareOptions& o, std::ostream& out) {
  if (o.reports.size() < 2) throw ConfigError("compare needs at least two report.json files");
  std::vector<EvalReport> reports;
  for (const auto& p : o.reports) {
    auto in = open_in(p, "report");
    reports.push_back(read_report_json(in));
  }
  const EvalReport& first = reports.front();
  for (size_t i = 1; i < reports.size(); ++i) {
    const EvalReport& r = reports[i];
    if (r.plan_fingerprint != first.plan_fingerprint || r.seed != first.seed) {
      throw ConfigError("reports are not paired: " + o.reports[0].string() + " (seed " + std::to_string(first.seed) +
                        ", plan " + hex(first.plan_fingerprint) + ") vs " + o.reports[i].string() + " (seed " +
                        std::to_string(r.seed) + ", plan " + hex(r.plan_fingerprint) + ")");
    }
    if (r.global_vocabulary != first.global_vocabulary) {
      throw ConfigError("reports differ in vocabulary pruning mode (--strict-paper-vocab)");
    }
  }
  EvalReport merged;
  merged.seed = first.seed;
  merged.plan_fingerprint = first.plan_fingerprint;
  merged.stratified = first.stratified;
  merged.global_vocabulary = first.global_vocabulary;
  merged.folds_per_config = first.folds_per_config;
  for (const EvalReport& r : reports) {
    for (size_t c = 0; c < r.configs.size(); ++c) {
      if (std::find(merged.configs.begin(), merged.configs.end(), r.configs[c]) != merged.configs.end()) continue;
      const size_t index = merged.configs.size();
      merged.configs.push_back(r.configs[c]);
      for (int f = 0; f < r.folds_per_config; ++f) {
        FoldRecord rec = r.record(c, f);
        rec.config = index;
        merged.records.push_back(std::move(rec));
      }
    }
  }
  merged.config_fingerprint =
      configs_fingerprint(merged.configs, merged.seed, merged.stratified, merged.global_vocabulary);
  summarize(merged);
  const auto tests = all_tests(merged, o.alpha, PermutationOptions{}.draws);
  if (g.out) {
    make_dir(*g.out);
    write_report_files(*g.out, merged, tests);
    out << "comparison written to " << g.out->string() << '\n';
  } else {
    stamp(out, merged);
    write_significance_tsv(out, merged, tests);
  }
  return 0;
}

int cmd_top_features(const GlobalOptions& g, const TopFeaturesOptions& o, std::ostream& out) {
  if (o.models.empty()) throw ConfigError("top-features needs at least one --model");
  std::vector<TrainedModel> models;
  std::vector<std::string> names;
  for (const auto& p : o.models) {
    auto in = open_in(p, "model");
    models.push_back(read_model(in));
    names.push_back(p.stem().string());
  }
  if (g.out) make_dir(*g.out);
  for (size_t i = 0; i < models.size(); ++i) {
    const FeatureRanking ranking = top_features(models[i], o.k);
    if (g.out) {
      auto f = open_out(*g.out / ("top_features_" + names[i] + ".tsv"));
      write_top_features_tsv(f, ranking);
    } else {
      out << "# " << o.models[i].string() << '\n';
      write_top_features_tsv(out, ranking);
    }
  }
  if (o.pca > 0) {
    std::vector<Eigen::VectorXd> coefficients;
    if (o.standardized_pca) {
      for (size_t i = 0; i < models.size(); ++i) {
        if (models[i].column_sd.size() != models[i].columns()) {
          throw ConfigError(o.models[i].string() + " carries no column spreads; standardized PCA needs models from "
                            "'pkddi run'");
        }
        coefficients.push_back(combined_weights(models[i]).cwiseProduct(models[i].column_sd));
      }
    }
    const WeightPanel panel = make_weight_panel(names, models, coefficients);
    const WeightPca pca = weight_pca(panel, o.pca);
    if (g.out) {
      auto p = open_out(*g.out / "pca_projections.tsv");
      write_projections_tsv(p, panel, pca);
      auto l = open_out(*g.out / "pca_loadings.tsv");
      write_loadings_tsv(l, panel, pca);
      out << "weight PCA over " << panel.keys.size() << " shared features written to " << g.out->string() << '\n';
    } else {
      out << "# weight PCA over " << panel.keys.size() << " shared features\n";
      write_projections_tsv(out, panel, pca);
    }
  }
  return 0;
}

int cmd_report(const GlobalOptions& g, const ReportOptions& o, std::ostream& out) {
  auto in = open_in(o.report, "report");
  const EvalReport report = read_report_json(in);
  const auto tests = all_tests(report, o.alpha, PermutationOptions{}.draws);
  if (g.out) {
    make_dir(*g.out);
    write_report_files(*g.out, report, tests);
  }
  stamp(out, report);
  write_summary_table(out, report, tests);
  if (report.audit) {
    out << "audit: " << report.audit->fit_calls << " fit calls, " << report.audit->violations << " violations\n";
  }
  return 0;
}

}  // namespace pkddi::cli
