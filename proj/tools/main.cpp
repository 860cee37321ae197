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

#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "commands.hpp"
#include "pkddi/error.hpp"

namespace {

// One JSON object per failure on stderr, so wrappers can parse it.
int fail(const char* kind, const std::string& message, int code, long long line = -1) {
  nlohmann::ordered_json j;
  j["error"] = kind;
  j["message"] = message;
  if (line > 0) j["line"] = line;
  std::cerr << j.dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace pkddi::cli;
  CLI::App app{"pkddi: pharmacokinetic DDI evidence classification toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  std::string config, out, stratify;
  uint64_t seed = 0;
  int threads = 0;
  auto* config_opt = app.add_option("--config", config, "experiment file (JSON)");
  auto* seed_opt = app.add_option("--seed", seed, "top-level random seed");
  auto* threads_opt = app.add_option("--threads", threads, "worker threads, 0 = all available")->check(CLI::NonNegativeNumber);
  auto* out_opt = app.add_option("--out", out, "output directory");
  app.add_flag("--strict-paper-vocab", g.strict_paper_vocab,
               "prune the vocabulary on the whole corpus instead of each training split");
  auto* stratify_opt =
      app.add_option("--stratify", stratify, "class-stratified folds")->check(CLI::IsMember({"on", "off"}));
  app.add_flag("-q,--quiet", g.quiet, "no progress output");

  IngestOptions ingest;
  auto* c_ingest = app.add_subcommand("ingest", "parse a corpus, print its summary and write a feature cache");
  c_ingest->add_option("--medline", ingest.medline, "MEDLINE file");
  c_ingest->add_option("--abstracts", ingest.abstracts, "tab-separated abstracts instead of MEDLINE");
  c_ingest->add_option("--labels", ingest.labels, "label TSV (pmid, label)");
  c_ingest->add_option("--sentences", ingest.sentences, "sentence TSV");
  c_ingest->add_option("--preview", ingest.preview, "number of frequent stems to print");

  SynthOptions synth;
  std::string synth_spec;
  int64_t synth_docs = 0;
  auto* c_synth = app.add_subcommand("synth", "generate a synthetic two-class MEDLINE corpus");
  auto* spec_opt = c_synth->add_option("--spec", synth_spec, "synthetic spec (JSON); defaults otherwise");
  auto* docs_opt = c_synth->add_option("--documents", synth_docs, "override the document count");

  auto* c_run = app.add_subcommand("run", "nested cross-validation over every configuration in --config");

  CompareOptions compare;
  auto* c_compare = app.add_subcommand("compare", "permutation tests across reports built on the same fold plan");
  c_compare->add_option("reports", compare.reports, "report.json files")->required()->check(CLI::ExistingFile);
  c_compare->add_option("--alpha", compare.alpha, "significance level");

  TopFeaturesOptions top;
  auto* c_top = app.add_subcommand("top-features", "strongest weights of trained models, optional weight PCA");
  c_top->add_option("--model", top.models, "model file (repeatable)")->required();
  c_top->add_option("-k", top.k, "features per direction");
  c_top->add_option("--pca", top.pca, "weight-PCA components over the given models");
  c_top->add_flag("--standardized", top.standardized_pca, "PCA on standardized coefficients");

  ReportOptions report;
  auto* c_report = app.add_subcommand("report", "re-render tables from a report.json");
  c_report->add_option("report", report.report, "report.json")->required();
  c_report->add_option("--alpha", report.alpha, "significance level");

  CLI11_PARSE(app, argc, argv);

  if (*config_opt) g.config = config;
  if (*seed_opt) g.seed = seed;
  if (*threads_opt) g.threads = threads;
  if (*out_opt) g.out = out;
  if (*stratify_opt) g.stratify = stratify == "on";
  if (*spec_opt) synth.spec = synth_spec;
  if (*docs_opt) synth.documents = synth_docs;

  try {
    if (*c_ingest) return cmd_ingest(g, ingest, std::cout);
    if (*c_synth) return cmd_synth(g, synth, std::cout);
    if (*c_run) return cmd_run(g, std::cout);
    if (*c_compare) return cmd_compare(g, compare, std::cout);
    if (*c_top) return cmd_top_features(g, top, std::cout);
    if (*c_report) return cmd_report(g, report, std::cout);
  } catch (const pkddi::ParseError& e) {
    return fail("parse", e.what(), 3, e.line());
  } catch (const pkddi::ConfigError& e) {
    return fail("config", e.what(), 2);
  } catch (const pkddi::NumericalError& e) {
    return fail("numerical", e.what(), 4);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), 1);
  }
  return 1;
}
