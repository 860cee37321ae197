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

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "pkddi/error.hpp"
#include "pkddi/evaluation.hpp"

namespace pkddi {
namespace {

using Json = nlohmann::ordered_json;

std::string fixed(double v, int digits = 6) {
  if (std::isnan(v)) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// ".842" style, as in the published tables.
std::string table_number(double v) {
  std::string s = fixed(v, 3);
  if (s.rfind("0.", 0) == 0) s.erase(0, 1);
  if (s.rfind("-0.", 0) == 0) s.erase(1, 1);
  return s;
}

std::string hex(uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

uint64_t parse_hex(const std::string& s) {
  size_t used = 0;
  const uint64_t v = std::stoull(s, &used, 16);
  if (used != s.size()) throw ParseError("report: bad fingerprint '" + s + "'", -1);
  return v;
}

std::string resources_cell(const RunConfig& c) {
  std::string out;
  for (const auto& r : c.resources) out += (out.empty() ? "" : ",") + r;
  return out.empty() ? "-" : out;
}

std::string one_line(std::string s) {
  for (char& ch : s) {
    if (ch == '\t' || ch == '\n' || ch == '\r') ch = ' ';
  }
  return s;
}

const Significance* find_test(std::span<const Significance> tests, Metric m) {
  for (const auto& t : tests) {
    if (t.metric == m) return &t;
  }
  return nullptr;
}

Json number_or_null(double v) { return std::isnan(v) ? Json(nullptr) : Json(v); }

double number_from(const Json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

}  // namespace

void write_folds_tsv(std::ostream& out, const EvalReport& report) {
  out << "config\tfold\tf1\tmcc\tiauc\thyperparam\ttp\tfp\tfn\ttn\tstatus\n";
  for (const FoldRecord& r : report.records) {
    out << report.configs[r.config].name() << '\t' << r.fold + 1 << '\t';
    if (r.ok()) {
      out << fixed(r.f1) << '\t' << fixed(r.mcc) << '\t' << fixed(r.iauc) << '\t' << format_hyperparams(r.chosen)
          << '\t' << r.counts.tp << '\t' << r.counts.fp << '\t' << r.counts.fn << '\t' << r.counts.tn << '\t'
          << (r.warnings.empty() ? "ok" : "warning: " + one_line(r.warnings.front())) << '\n';
    } else {
      out << "NA\tNA\tNA\t" << format_hyperparams(r.chosen) << "\tNA\tNA\tNA\tNA\terror: " << one_line(r.error)
          << '\n';
    }
  }
}

void write_summary_tsv(std::ostream& out, const EvalReport& report) {
  out << "config\tclassifier\tfeatures\ttransform\tresources\tf1\tf1_rank\tmcc\tmcc_rank\tiauc\tiauc_rank\trp3\t"
         "failed_folds\n";
  for (size_t c : report.order()) {
    const RunConfig& cfg = report.configs[c];
    const ConfigSummary& s = report.summary[c];
    int failed = 0;
    for (int f = 0; f < report.folds_per_config; ++f) failed += report.record(c, f).ok() ? 0 : 1;
    auto rank = [&](int r) { return s.complete ? std::to_string(r) : std::string("-"); };
    out << cfg.name() << '\t' << classifier_display_name(cfg.classifier) << '\t'
        << (cfg.ngram == NgramOrder::kUnigram ? "Unigram" : "Bigram") << '\t' << cfg.transform.name() << '\t'
        << resources_cell(cfg) << '\t' << fixed(s.mean_f1) << '\t' << rank(s.rank_f1) << '\t' << fixed(s.mean_mcc)
        << '\t' << rank(s.rank_mcc) << '\t' << fixed(s.mean_iauc) << '\t' << rank(s.rank_iauc) << '\t'
        << (s.complete ? std::to_string(s.rp3) : std::string("-")) << '\t' << failed << '\n';
  }
}

void write_significance_tsv(std::ostream& out, const EvalReport& report, std::span<const Significance> tests) {
  out << "metric\ttest\tconfig_a\tconfig_b\tp_value\tindistinguishable_from_best\n";
  for (const Significance& t : tests) {
    const std::string best = report.configs.at(t.best).name();
    for (size_t c = 0; c < report.configs.size(); ++c) {
      out << metric_name(t.metric) << "\tone_tailed_vs_best\t" << best << '\t' << report.configs[c].name() << '\t'
          << fixed(t.p_vs_best[c], 8) << '\t' << (std::isnan(t.p_vs_best[c]) ? "NA" : t.indistinguishable[c] ? "yes" : "no")
          << '\n';
    }
    for (size_t a = 0; a < report.configs.size(); ++a) {
      for (size_t b = a + 1; b < report.configs.size(); ++b) {
        out << metric_name(t.metric) << "\ttwo_tailed\t" << report.configs[a].name() << '\t'
            << report.configs[b].name() << '\t' << fixed(t.pairwise[a][b], 8) << "\t-\n";
      }
    }
  }
}

void write_summary_table(std::ostream& out, const EvalReport& report, std::span<const Significance> tests) {
  const Metric metrics[] = {Metric::kF1, Metric::kMcc, Metric::kIauc};
  char line[512];
  std::snprintf(line, sizeof line, "%-12s %-8s %-12s %-14s %-11s %-11s %-11s %s\n", "Classifier", "Features",
                "Transform", "Resources", "F1", "MCC", "iAUC", "RP3");
  out << line;
  for (size_t c : report.order()) {
    const RunConfig& cfg = report.configs[c];
    const ConfigSummary& s = report.summary[c];
    std::string cells[3];
    const double means[] = {s.mean_f1, s.mean_mcc, s.mean_iauc};
    const int ranks[] = {s.rank_f1, s.rank_mcc, s.rank_iauc};
    for (int m = 0; m < 3; ++m) {
      if (!s.complete) {
        cells[m] = "failed";
        continue;
      }
      cells[m] = table_number(means[m]) + " (" + std::to_string(ranks[m]) + ")";
      const Significance* t = find_test(tests, metrics[m]);
      if (t && t->indistinguishable[c]) cells[m] += "*";
    }
    std::snprintf(line, sizeof line, "%-12s %-8s %-12s %-14s %-11s %-11s %-11s %s\n",
                  std::string(classifier_display_name(cfg.classifier)).c_str(),
                  cfg.ngram == NgramOrder::kUnigram ? "Unigram" : "Bigram", cfg.transform.name().c_str(),
                  resources_cell(cfg).c_str(), cells[0].c_str(), cells[1].c_str(), cells[2].c_str(),
                  s.complete ? std::to_string(s.rp3).c_str() : "-");
    out << line;
  }
  out << "* not significantly different from the best configuration (one-tailed paired permutation test, "
         "p > 0.05)\n";
}

void write_report_json(std::ostream& out, const EvalReport& report, std::span<const Significance> tests,
                       const std::string& metadata_json) {
  Json j;
  j["format"] = "pkddi-report";
  j["version"] = 1;
  j["seed"] = report.seed;
  j["plan_fingerprint"] = hex(report.plan_fingerprint);
  j["config_fingerprint"] = hex(report.config_fingerprint);
  j["stratified"] = report.stratified;
  j["global_vocabulary"] = report.global_vocabulary;
  j["folds_per_config"] = report.folds_per_config;
  Json configs = Json::array();
  for (const RunConfig& c : report.configs) {
    Json grid = Json::array();
    for (const auto& h : c.effective_grid()) grid.push_back(h);
    configs.push_back({{"name", c.name()},
                       {"classifier", classifier_name(c.classifier)},
                       {"ngram", ngram_order_name(c.ngram)},
                       {"transform", c.transform.name()},
                       {"free_pca", c.transform.free_pca},
                       {"resources", c.resources},
                       {"grid", grid}});
  }
  j["configs"] = configs;
  Json records = Json::array();
  for (const FoldRecord& r : report.records) {
    records.push_back({{"config", r.config},
                       {"fold", r.fold},
                       {"f1", r.f1},
                       {"mcc", r.mcc},
                       {"iauc", r.iauc},
                       {"tp", r.counts.tp},
                       {"fp", r.counts.fp},
                       {"fn", r.counts.fn},
                       {"tn", r.counts.tn},
                       {"chosen", r.chosen},
                       {"error", r.error},
                       {"warnings", r.warnings}});
  }
  j["records"] = records;
  Json summary = Json::array();
  for (size_t c : report.order()) {
    const ConfigSummary& s = report.summary[c];
    summary.push_back({{"config", report.configs[c].name()},
                       {"complete", s.complete},
                       {"mean_f1", s.mean_f1},
                       {"mean_mcc", s.mean_mcc},
                       {"mean_iauc", s.mean_iauc},
                       {"rank_f1", s.rank_f1},
                       {"rank_mcc", s.rank_mcc},
                       {"rank_iauc", s.rank_iauc},
                       {"rp3", s.rp3}});
  }
  j["summary"] = summary;
  Json sig = Json::array();
  for (const Significance& t : tests) {
    Json p = Json::array();
    Json flags = Json::array();
    Json pairwise = Json::array();
    for (size_t c = 0; c < t.p_vs_best.size(); ++c) {
      p.push_back(number_or_null(t.p_vs_best[c]));
      flags.push_back(static_cast<bool>(t.indistinguishable[c]));
      Json row = Json::array();
      for (double v : t.pairwise[c]) row.push_back(number_or_null(v));
      pairwise.push_back(row);
    }
    sig.push_back({{"metric", metric_name(t.metric)},
                   {"best", report.configs.at(t.best).name()},
                   {"p_vs_best", p},
                   {"indistinguishable", flags},
                   {"pairwise_two_tailed", pairwise}});
  }
  j["significance"] = sig;
  if (report.audit) {
    Json violating = Json::array();
    for (const AuditEntry& e : report.audit->violating) {
      violating.push_back({{"config", e.config},
                           {"outer_fold", e.outer_fold},
                           {"inner_fold", e.inner_fold},
                           {"stage", e.stage},
                           {"rows", e.rows},
                           {"held_out_rows", e.held_out_rows}});
    }
    j["audit"] = {{"fit_calls", report.audit->fit_calls},
                  {"violations", report.audit->violations},
                  {"digest", hex(report.audit->digest)},
                  {"violating", violating}};
  }
  j["metadata"] = metadata_json.empty() ? Json::object() : Json::parse(metadata_json);
  out << j.dump(2) << '\n';
}

EvalReport read_report_json(std::istream& in) {
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("report JSON: ") + e.what(), -1);
  }
  try {
    if (j.at("format") != "pkddi-report" || j.at("version") != 1) throw ParseError("not a pkddi-report v1 file", -1);
    EvalReport r;
    r.seed = j.at("seed").get<uint64_t>();
    r.plan_fingerprint = parse_hex(j.at("plan_fingerprint").get<std::string>());
    r.config_fingerprint = parse_hex(j.at("config_fingerprint").get<std::string>());
    r.stratified = j.at("stratified").get<bool>();
    r.global_vocabulary = j.at("global_vocabulary").get<bool>();
    r.folds_per_config = j.at("folds_per_config").get<int>();
    for (const Json& c : j.at("configs")) {
      RunConfig cfg;
      auto kind = parse_classifier(c.at("classifier").get<std::string>());
      auto order = parse_ngram_order(c.at("ngram").get<std::string>());
      if (!kind || !order) throw ParseError("report: unknown classifier or n-gram order", -1);
      cfg.classifier = *kind;
      cfg.ngram = *order;
      cfg.transform = TransformSpec::parse(c.at("transform").get<std::string>(), c.at("free_pca").get<bool>());
      cfg.resources = c.at("resources").get<std::vector<std::string>>();
      cfg.grid = c.at("grid").get<std::vector<Hyperparams>>();
      r.configs.push_back(std::move(cfg));
    }
    for (const Json& x : j.at("records")) {
      FoldRecord rec;
      rec.config = x.at("config").get<size_t>();
      rec.fold = x.at("fold").get<int>();
      rec.f1 = number_from(x.at("f1"));
      rec.mcc = number_from(x.at("mcc"));
      rec.iauc = number_from(x.at("iauc"));
      rec.counts = {x.at("tp").get<int64_t>(), x.at("fp").get<int64_t>(), x.at("fn").get<int64_t>(),
                    x.at("tn").get<int64_t>()};
      rec.chosen = x.at("chosen").get<Hyperparams>();
      rec.error = x.at("error").get<std::string>();
      rec.warnings = x.at("warnings").get<std::vector<std::string>>();
      r.records.push_back(std::move(rec));
    }
    for (size_t i = 0; i < r.records.size(); ++i) {
      const size_t expect_config = i / static_cast<size_t>(std::max(r.folds_per_config, 1));
      if (r.records[i].config != expect_config ||
          r.records[i].fold != static_cast<int>(i % static_cast<size_t>(std::max(r.folds_per_config, 1)))) {
        throw ParseError("report: records are not in config-major order", -1);
      }
    }
    if (j.contains("audit")) {
      AuditSummary a;
      a.fit_calls = j["audit"].at("fit_calls").get<int64_t>();
      a.violations = j["audit"].at("violations").get<int64_t>();
      a.digest = parse_hex(j["audit"].at("digest").get<std::string>());
      r.audit = a;
    }
    summarize(r);
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("report JSON: ") + e.what(), -1);
  }
}

}  // namespace pkddi
