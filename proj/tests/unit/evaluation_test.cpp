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
#include <cmath>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pkddi/error.hpp"
#include "pkddi/evaluation.hpp"
#include "pkddi/random.hpp"
#include "pkddi/synth.hpp"

namespace pkddi {
namespace {

std::vector<std::string> make_ids(size_t n) {
  std::vector<std::string> ids;
  for (size_t i = 0; i < n; ++i) ids.push_back("doc" + std::to_string(i));
  return ids;
}

std::vector<Label> alternating(size_t n, size_t every = 4) {
  std::vector<Label> y(n, Label::kIrrelevant);
  for (size_t i = 0; i < n; i += every) y[i] = Label::kRelevant;
  return y;
}

TEST(FoldPlan, Shape) {
  const auto ids = make_ids(100);
  const auto y = alternating(100);
  FoldPlan plan = make_fold_plan(ids, y, 7);
  ASSERT_EQ(plan.outer.size(), 16u);
  ASSERT_EQ(plan.inner.size(), 16u);
  for (const Fold& f : plan.outer) {
    EXPECT_EQ(f.test.size(), 25u);
    EXPECT_EQ(f.train.size(), 75u);
    std::vector<size_t> both;
    std::set_intersection(f.train.begin(), f.train.end(), f.test.begin(), f.test.end(), std::back_inserter(both));
    EXPECT_TRUE(both.empty());
  }
  for (int r = 0; r < 4; ++r) {
    std::vector<size_t> all;
    for (int p = 0; p < 4; ++p) {
      const auto& t = plan.outer[static_cast<size_t>(r * 4 + p)].test;
      all.insert(all.end(), t.begin(), t.end());
    }
    std::sort(all.begin(), all.end());
    ASSERT_EQ(all.size(), 100u);
    for (size_t i = 0; i < 100; ++i) EXPECT_EQ(all[i], i);
  }
}

TEST(FoldPlan, InnerFoldsStayInsideOuterTrain) {
  const auto ids = make_ids(64);
  const auto y = alternating(64, 3);
  FoldPlan plan = make_fold_plan(ids, y, 8);
  for (size_t o = 0; o < plan.outer.size(); ++o) {
    const std::set<size_t> train(plan.outer[o].train.begin(), plan.outer[o].train.end());
    ASSERT_EQ(plan.inner[o].size(), 16u);
    for (const Fold& f : plan.inner[o]) {
      for (size_t r : f.train) EXPECT_TRUE(train.count(r));
      for (size_t r : f.test) EXPECT_TRUE(train.count(r));
    }
  }
}

TEST(FoldPlan, Deterministic) {
  const auto ids = make_ids(40);
  const auto y = alternating(40);
  FoldPlan a = make_fold_plan(ids, y, 1);
  FoldPlan b = make_fold_plan(ids, y, 1);
  FoldPlan c = make_fold_plan(ids, y, 2);
  EXPECT_EQ(a.fingerprint(), b.fingerprint());
  EXPECT_NE(a.fingerprint(), c.fingerprint());
  for (size_t o = 0; o < a.outer.size(); ++o) EXPECT_EQ(a.outer[o].test, b.outer[o].test);
}

TEST(FoldPlan, StratifiedWithinOne) {
  const auto ids = make_ids(103);
  auto y = alternating(103, 4);  // 26 relevant
  FoldPlan plan = make_fold_plan(ids, y, 3);
  for (const Fold& f : plan.outer) {
    const auto rel = std::count_if(f.test.begin(), f.test.end(), [&](size_t r) { return y[r] == Label::kRelevant; });
    const double expected = 26.0 * static_cast<double>(f.test.size()) / 103.0;
    EXPECT_LE(std::abs(static_cast<double>(rel) - expected), 1.0);
  }
}

TEST(FoldPlan, Errors) {
  EXPECT_THROW(make_fold_plan(make_ids(7), alternating(7), 1), ConfigError);
  EXPECT_THROW(make_fold_plan(make_ids(20), std::vector<Label>(20, Label::kRelevant), 1), ConfigError);
  // one relevant document: an unstratified partition cannot keep it in every training split
  std::vector<Label> y(12, Label::kIrrelevant);
  y[0] = Label::kRelevant;
  PlanOptions po;
  po.stratified = false;
  po.max_retries = 5;
  EXPECT_THROW(make_fold_plan(make_ids(12), y, 1, po), ConfigError);
}

TEST(RunConfigs, Validation) {
  RunConfig c;
  c.classifier = ClassifierKind::kVtt;
  c.transform = TransformSpec::parse("idf");
  EXPECT_THROW(c.validate(), ConfigError);
  c.transform = TransformSpec::parse("pca100", true);
  EXPECT_THROW(c.validate(), ConfigError);
  c.transform = TransformSpec{};
  EXPECT_NO_THROW(c.validate());
  c.resources = {"i-CYPS"};
  EXPECT_EQ(c.name(), "vtt/bigram/none/+i-CYPS");
  EXPECT_EQ(c.effective_grid().size(), 6u);
  RunConfig l;
  l.grid = {{0.5}, {0.1}};
  EXPECT_THROW(l.validate(), ConfigError);
  l.grid = {{0.1}, {1.5}};
  EXPECT_THROW(l.validate(), ConfigError);
  EXPECT_EQ(l.name(), "lda/bigram/none");
}

// ---------------------------------------------------------------- permutation

TEST(Permutation, Examples) {
  std::vector<double> a{0.9, 0.8}, b{0.7, 0.6};
  EXPECT_EQ(paired_permutation_test(a, b, Tails::kOne), 0.25);
  EXPECT_EQ(paired_permutation_test(a, a, Tails::kOne), 1.0);
  EXPECT_EQ(paired_permutation_test(a, a, Tails::kTwo), 1.0);
  std::vector<double> hi(16), lo(16);
  for (int i = 0; i < 16; ++i) {
    hi[i] = 0.9 + 0.001 * i;
    lo[i] = 0.5 + 0.002 * i;
  }
  EXPECT_EQ(paired_permutation_test(hi, lo, Tails::kOne), std::ldexp(1.0, -16));
  EXPECT_EQ(paired_permutation_test(hi, lo, Tails::kTwo), std::ldexp(1.0, -15));
  EXPECT_THROW(paired_permutation_test(a, hi, Tails::kOne), ConfigError);
}

TEST(Permutation, ExactMatchesEnumeration) {
  Rng rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    const size_t n = 1 + rng.below(10);
    std::vector<double> a(n), b(n);
    for (size_t i = 0; i < n; ++i) {
      a[i] = static_cast<double>(rng.below(1024)) / 1024.0;
      b[i] = static_cast<double>(rng.below(1024)) / 1024.0;
    }
    EXPECT_EQ(paired_permutation_test(a, b, Tails::kOne), oracle::permutation_p(a, b, true));
    EXPECT_EQ(paired_permutation_test(a, b, Tails::kTwo), oracle::permutation_p(a, b, false));
  }
}

TEST(Permutation, MonteCarloNearExact) {
  std::vector<double> a{0.71, 0.74, 0.69, 0.80, 0.77, 0.73, 0.70, 0.75};
  std::vector<double> b{0.70, 0.71, 0.70, 0.74, 0.76, 0.70, 0.69, 0.72};
  const double exact = paired_permutation_test(a, b, Tails::kOne);
  PermutationOptions o;
  o.force_monte_carlo = true;
  o.draws = 20000;
  o.seed = 5;
  const double mc = paired_permutation_test(a, b, Tails::kOne, o);
  EXPECT_NEAR(mc, exact, 4 * std::sqrt(exact * (1 - exact) / 20000.0) + 1e-4);
  EXPECT_GT(mc, 0.0);
  EXPECT_EQ(mc, paired_permutation_test(a, b, Tails::kOne, o));
}

EvalReport fake_report(const std::vector<std::vector<double>>& mcc) {
  EvalReport r;
  r.folds_per_config = static_cast<int>(mcc[0].size());
  for (size_t c = 0; c < mcc.size(); ++c) {
    RunConfig rc;
    rc.classifier = kAllClassifiers[c % 6];
    r.configs.push_back(rc);
    for (int f = 0; f < r.folds_per_config; ++f) {
      FoldRecord rec;
      rec.config = c;
      rec.fold = f;
      rec.mcc = mcc[c][static_cast<size_t>(f)];
      rec.f1 = rec.mcc;
      rec.iauc = rec.mcc;
      r.records.push_back(rec);
    }
  }
  summarize(r);
  return r;
}

TEST(Significance, BestAndFlags) {
  std::vector<double> best(16), close(16), far(16);
  for (int i = 0; i < 16; ++i) {
    best[i] = 0.8 + 0.01 * (i % 3);
    close[i] = best[i] + (i % 2 ? 0.005 : -0.006);
    far[i] = 0.2 + 0.01 * (i % 4);
  }
  EvalReport r = fake_report({far, best, close});
  EXPECT_NEAR(r.summary[1].mean_mcc, 0.8 + 0.01 * (6 * 0 + 5 * 1 + 5 * 2) / 16.0, 1e-12);
  Significance s = significance(r, Metric::kMcc);
  EXPECT_EQ(s.best, 1u);
  EXPECT_EQ(s.p_vs_best[1], 1.0);
  EXPECT_TRUE(s.indistinguishable[1]);
  EXPECT_TRUE(s.indistinguishable[2]);
  EXPECT_EQ(s.p_vs_best[0], std::ldexp(1.0, -16));
  EXPECT_FALSE(s.indistinguishable[0]);
  EXPECT_EQ(s.pairwise[0][2], s.pairwise[2][0]);
  EXPECT_EQ(r.summary[1].rp3, 1);
  EXPECT_EQ(r.order().front(), 1u);
  EXPECT_EQ(r.order().back(), 0u);
}

TEST(Significance, IncompleteConfigsAreLeftOut) {
  std::vector<double> v(4, 0.5);
  EvalReport r = fake_report({v, v});
  r.records[5].error = "boom";
  summarize(r);
  EXPECT_FALSE(r.summary[1].complete);
  EXPECT_EQ(r.summary[1].rp3, 0);
  Significance s = significance(r, Metric::kF1);
  EXPECT_TRUE(std::isnan(s.p_vs_best[1]));
}

// ---------------------------------------------------------------- grid runs

struct SmallCorpus {
  Corpus corpus;
  explicit SmallCorpus(SyntheticSpec spec) {
    SyntheticCorpus s = generate_synthetic(spec);
    corpus = build_abstract_corpus(s.records, s.labels);
  }
};

SyntheticSpec separable(int docs) {
  SyntheticSpec s;
  s.documents = docs;
  s.signal_relevant = 8;
  s.signal_irrelevant = 8;
  s.noise = 30;
  s.prior = 0.5;
  s.signal_rate = 0.4;
  s.cross_rate = 0.0;
  s.noise_rate = 0.05;
  s.min_signal = 2;
  s.authors = 3;
  s.journals = 2;
  s.mesh_terms = 3;
  s.seed = 9;
  return s;
}

PlanOptions small_plan() {
  PlanOptions p;
  p.repeats = 2;
  p.partitions = 4;
  return p;
}

TEST(RunGrid, PerfectSeparation) {
  SmallCorpus sc(separable(64));
  EvalData data(sc.corpus);
  RunConfig c;
  c.classifier = ClassifierKind::kSvm;
  c.grid = {{1.0}};
  FoldPlan plan = make_fold_plan(sc.corpus.ids(), sc.corpus.labels(), 3, small_plan());
  std::vector<RunConfig> configs{c};
  EvalReport r = run_grid(data, configs, plan);
  ASSERT_EQ(r.records.size(), 8u);
  EXPECT_NEAR(r.summary[0].mean_f1, 1.0, 1e-12);
  EXPECT_NEAR(r.summary[0].mean_mcc, 1.0, 1e-12);
  EXPECT_NEAR(r.summary[0].mean_iauc, 1.0, 1e-12);
}

TEST(RunGrid, IdenticalConfigsIdenticalRecords) {
  SyntheticSpec spec = separable(48);
  spec.cross_rate = 0.1;
  spec.noise_rate = 0.2;
  SmallCorpus sc(spec);
  EvalData data(sc.corpus);
  RunConfig c;
  c.classifier = ClassifierKind::kLogreg;
  c.ngram = NgramOrder::kUnigram;
  c.grid = {{0.1}, {1.0}};
  FoldPlan plan = make_fold_plan(sc.corpus.ids(), sc.corpus.labels(), 4, small_plan());
  std::vector<RunConfig> configs{c, c};
  GridOptions go;
  go.threads = 2;
  EvalReport r = run_grid(data, configs, plan, go);
  for (int f = 0; f < r.folds_per_config; ++f) {
    const FoldRecord& a = r.record(0, f);
    const FoldRecord& b = r.record(1, f);
    EXPECT_EQ(a.f1, b.f1);
    EXPECT_EQ(a.mcc, b.mcc);
    EXPECT_EQ(a.iauc, b.iauc);
    EXPECT_EQ(a.chosen, b.chosen);
    EXPECT_EQ(a.counts.total(), static_cast<int64_t>(plan.outer[static_cast<size_t>(f)].test.size()));
  }
  // means are the average of the stored records
  double sum = 0;
  for (int f = 0; f < r.folds_per_config; ++f) sum += r.record(0, f).mcc;
  EXPECT_NEAR(r.summary[0].mean_mcc, sum / r.folds_per_config, 1e-15);

  // thread count does not change anything
  go.threads = 1;
  EvalReport one = run_grid(data, configs, plan, go);
  std::ostringstream x, y;
  write_folds_tsv(x, r);
  write_folds_tsv(y, one);
  EXPECT_EQ(x.str(), y.str());
}

TEST(RunGrid, AuditFindsNoLeakageUnlessGlobalVocabulary) {
  SyntheticSpec spec = separable(40);
  spec.cross_rate = 0.05;
  SmallCorpus sc(spec);
  EvalData data(sc.corpus);
  RunConfig a;
  a.classifier = ClassifierKind::kNaiveBayes;
  a.grid = {{1.0}, {2.0}};
  RunConfig b;
  b.classifier = ClassifierKind::kLda;
  b.transform = TransformSpec::parse("tfidf+l2");
  b.grid = {{0.5}};
  FoldPlan plan = make_fold_plan(sc.corpus.ids(), sc.corpus.labels(), 5, small_plan());
  std::vector<RunConfig> configs{a, b};
  EvalReport r = run_grid(data, configs, plan);
  ASSERT_TRUE(r.audit);
  EXPECT_GT(r.audit->fit_calls, 0);
  EXPECT_EQ(r.audit->violations, 0);

  GridOptions go;
  go.global_vocabulary = true;
  EvalReport g = run_grid(data, configs, plan, go);
  ASSERT_TRUE(g.audit);
  EXPECT_GT(g.audit->violations, 0);
}

TEST(InnerSelect, SinglePointAndTies) {
  SmallCorpus sc(separable(48));
  EvalData data(sc.corpus);
  FoldPlan plan = make_fold_plan(sc.corpus.ids(), sc.corpus.labels(), 6, small_plan());
  RunConfig c;
  c.classifier = ClassifierKind::kNaiveBayes;
  c.grid = {{2.0}};
  EXPECT_EQ(inner_select(data, c, plan, 0).chosen, Hyperparams{2.0});
  // separable data: every alpha reaches MCC 1, so the first one wins
  c.grid = {{0.5}, {1.0}, {2.0}};
  InnerSelection s = inner_select(data, c, plan, 0);
  ASSERT_EQ(s.mean_mcc.size(), 3u);
  for (double m : s.mean_mcc) EXPECT_EQ(m, 1.0);
  EXPECT_EQ(s.chosen, Hyperparams{0.5});
}

TEST(InnerSelect, PrefersTheBetterGridPoint) {
  SyntheticSpec spec;
  spec.documents = 96;
  spec.signal_relevant = 5;
  spec.signal_irrelevant = 5;
  spec.noise = 500;
  spec.prior = 0.5;
  spec.signal_rate = 0.25;
  spec.cross_rate = 0.05;
  spec.noise_rate = 0.05;
  spec.min_signal = 0;
  spec.seed = 12;
  SmallCorpus sc(spec);
  EvalData data(sc.corpus);
  PlanOptions po;
  po.repeats = 1;
  FoldPlan plan = make_fold_plan(sc.corpus.ids(), sc.corpus.labels(), 7, po);
  RunConfig c;
  c.classifier = ClassifierKind::kSvm;
  c.ngram = NgramOrder::kUnigram;
  InnerSelection s = inner_select(data, c, plan, 0);
  const auto best = std::max_element(s.mean_mcc.begin(), s.mean_mcc.end()) - s.mean_mcc.begin();
  EXPECT_EQ(s.chosen, c.effective_grid()[static_cast<size_t>(best)]);
  EXPECT_LT(s.chosen[0], 100.0);
}

TEST(Reports, JsonRoundTrip) {
  SmallCorpus sc(separable(40));
  EvalData data(sc.corpus);
  RunConfig c;
  c.classifier = ClassifierKind::kDlda;
  c.grid = {{0.0}, {1.0}};
  RunConfig v;
  v.classifier = ClassifierKind::kVtt;
  FoldPlan plan = make_fold_plan(sc.corpus.ids(), sc.corpus.labels(), 8, small_plan());
  std::vector<RunConfig> configs{c, v};
  EvalReport r = run_grid(data, configs, plan);
  std::vector<Significance> tests{significance(r, Metric::kMcc)};
  std::stringstream s;
  write_report_json(s, r, tests, R"({"created": "now"})");
  EvalReport back = read_report_json(s);
  EXPECT_EQ(back.seed, r.seed);
  EXPECT_EQ(back.plan_fingerprint, plan.fingerprint());
  EXPECT_EQ(back.config_fingerprint, r.config_fingerprint);
  // grids are stored resolved, so compare after resolution
  ASSERT_EQ(back.configs.size(), r.configs.size());
  for (size_t c = 0; c < r.configs.size(); ++c) {
    EXPECT_EQ(back.configs[c].name(), r.configs[c].name());
    EXPECT_EQ(back.configs[c].effective_grid(), r.configs[c].effective_grid());
    EXPECT_EQ(back.configs[c].transform, r.configs[c].transform);
  }
  ASSERT_EQ(back.records.size(), r.records.size());
  for (size_t i = 0; i < r.records.size(); ++i) {
    EXPECT_EQ(back.records[i].mcc, r.records[i].mcc);
    EXPECT_EQ(back.records[i].chosen, r.records[i].chosen);
  }
  std::ostringstream a, b;
  write_summary_tsv(a, r);
  write_summary_tsv(b, back);
  EXPECT_EQ(a.str(), b.str());
  std::ostringstream table;
  write_summary_table(table, r, tests);
  EXPECT_NE(table.str().find("dLDA"), std::string::npos);
  EXPECT_NE(table.str().find("VTT"), std::string::npos);
}

}  // namespace
}  // namespace pkddi
