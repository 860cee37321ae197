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

#include "pkddi/experiment.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "pkddi/dictionary_matcher.hpp"
#include "pkddi/error.hpp"
#include "pkddi/random.hpp"

namespace pkddi {
namespace {

using Json = nlohmann::json;

std::vector<std::string> string_or_list(const Json& j, const std::string& key) {
  if (j.is_string()) return {j.get<std::string>()};
  if (j.is_array() && !j.empty()) {
    std::vector<std::string> out;
    for (const Json& e : j) {
      if (!e.is_string()) throw ConfigError("configuration field '" + key + "' must hold strings");
      out.push_back(e.get<std::string>());
    }
    return out;
  }
  throw ConfigError("configuration field '" + key + "' must be a string or a non-empty list");
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::vector<RunConfig> expand_configuration(const Json& entry) {
  static const std::set<std::string> known = {"classifier", "features", "transform", "resources", "grid", "free_pca"};
  if (!entry.is_object()) throw ConfigError("each configuration must be a JSON object");
  for (const auto& [key, value] : entry.items()) {
    if (!known.count(key)) throw ConfigError("configuration: unknown key '" + key + "'");
  }
  if (!entry.contains("classifier")) throw ConfigError("configuration without 'classifier'");
  std::vector<ClassifierKind> kinds;
  for (const auto& name : string_or_list(entry["classifier"], "classifier")) {
    if (name == "all") {
      kinds.insert(kinds.end(), std::begin(kAllClassifiers), std::end(kAllClassifiers));
      continue;
    }
    auto k = parse_classifier(name);
    if (!k) throw ConfigError("unknown classifier '" + name + "' (expected vtt, nb, dlda, lda, logreg, svm or all)");
    kinds.push_back(*k);
  }
  std::vector<NgramOrder> orders;
  for (const auto& name : string_or_list(entry.value("features", Json("bigram")), "features")) {
    auto o = parse_ngram_order(name);
    if (!o) throw ConfigError("unknown feature set '" + name + "' (expected unigram or bigram)");
    orders.push_back(*o);
  }
  const bool free_pca = entry.value("free_pca", false);
  std::vector<TransformSpec> transforms;
  for (const auto& name : string_or_list(entry.value("transform", Json("none")), "transform")) {
    transforms.push_back(TransformSpec::parse(name, free_pca));
  }
  std::vector<std::string> resources = entry.value("resources", std::vector<std::string>{});
  std::vector<Hyperparams> grid = entry.value("grid", std::vector<Hyperparams>{});

  std::vector<RunConfig> out;
  for (ClassifierKind k : kinds) {
    for (NgramOrder o : orders) {
      for (const TransformSpec& t : transforms) {
        RunConfig c;
        c.classifier = k;
        c.ngram = o;
        c.transform = t;
        c.resources = resources;
        c.grid = grid;
        c.validate();
        out.push_back(std::move(c));
      }
    }
  }
  return out;
}

}  // namespace

ExperimentConfig parse_experiment_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("experiment config: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
  static const std::set<std::string> known = {"task",   "medline", "abstracts", "labels",  "sentences",         "dictionaries",
                                              "ner_counts", "seed", "output", "threads", "stratify",
                                              "strict_paper_vocab", "audit", "permutation_draws", "configurations"};
  ExperimentConfig c;
  try {
    for (const auto& [key, value] : j.items()) {
      if (!known.count(key)) throw ConfigError("experiment config: unknown key '" + key + "'");
    }
    const std::string task = j.value("task", std::string("abstract"));
    if (task == "abstract") {
      c.task = Task::kAbstract;
    } else if (task == "sentence") {
      c.task = Task::kSentence;
    } else {
      throw ConfigError("experiment config: task must be 'abstract' or 'sentence'");
    }
    if (j.contains("medline")) c.medline = resolve(base_dir, j["medline"].get<std::string>());
    if (j.contains("abstracts")) c.abstracts = resolve(base_dir, j["abstracts"].get<std::string>());
    if (j.contains("labels")) c.labels = resolve(base_dir, j["labels"].get<std::string>());
    if (j.contains("sentences")) c.sentences = resolve(base_dir, j["sentences"].get<std::string>());
    if (j.contains("dictionaries")) {
      for (const Json& d : j["dictionaries"]) {
        c.dictionaries.push_back({d.at("name").get<std::string>(), resolve(base_dir, d.at("path").get<std::string>())});
      }
    }
    if (j.contains("ner_counts")) {
      for (const Json& p : j["ner_counts"]) c.ner_counts.push_back(resolve(base_dir, p.get<std::string>()));
    }
    c.seed = j.value("seed", c.seed);
    if (j.contains("output")) c.output = resolve(base_dir, j["output"].get<std::string>());
    c.threads = j.value("threads", c.threads);
    c.stratify = j.value("stratify", c.stratify);
    c.strict_paper_vocab = j.value("strict_paper_vocab", c.strict_paper_vocab);
    c.audit = j.value("audit", c.audit);
    c.permutation_draws = j.value("permutation_draws", c.permutation_draws);
    if (!j.contains("configurations") || !j["configurations"].is_array() || j["configurations"].empty()) {
      throw ConfigError("experiment config: 'configurations' must be a non-empty list");
    }
    for (const Json& entry : j["configurations"]) {
      for (RunConfig& rc : expand_configuration(entry)) c.configurations.push_back(std::move(rc));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("experiment config: ") + e.what());
  }
  if (c.task == Task::kAbstract && (c.medline.empty() == c.abstracts.empty() || c.labels.empty())) {
    throw ConfigError("experiment config: abstract task needs 'labels' and exactly one of 'medline' or 'abstracts'");
  }
  if (c.task == Task::kSentence && c.sentences.empty()) {
    throw ConfigError("experiment config: sentence task needs 'sentences'");
  }
  if (c.threads < 0) throw ConfigError("experiment config: threads must be >= 0");
  if (c.permutation_draws < 1) throw ConfigError("experiment config: permutation_draws must be >= 1");
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_experiment_config(buf.str(), path.parent_path());
}

void apply_environment(ExperimentConfig& config) {
  if (const char* out = std::getenv("PKDDI_OUT"); out && *out) config.output = out;
  if (const char* t = std::getenv("PKDDI_THREADS"); t && *t) {
    char* end = nullptr;
    const long v = std::strtol(t, &end, 10);
    if (*end != '\0' || v < 0) throw ConfigError(std::string("PKDDI_THREADS must be a non-negative integer, got '") + t + "'");
    config.threads = static_cast<int>(v);
  }
}

void ExperimentConfig::check_paths() const {
  auto need = [](const std::filesystem::path& p, const char* what) {
    if (!p.empty() && !std::filesystem::exists(p)) {
      throw ConfigError(std::string(what) + " file not found: " + p.string());
    }
  };
  if (task == Task::kAbstract) {
    need(medline, "MEDLINE");
    need(abstracts, "abstracts");
    need(labels, "labels");
  } else {
    need(sentences, "sentences");
  }
  for (const auto& d : dictionaries) need(d.path, "dictionary");
  for (const auto& p : ner_counts) need(p, "NER count");
}

std::string ExperimentConfig::to_json() const {
  nlohmann::ordered_json j;
  j["task"] = task == Task::kAbstract ? "abstract" : "sentence";
  if (task == Task::kAbstract) {
    if (!medline.empty()) j["medline"] = medline.string();
    if (!abstracts.empty()) j["abstracts"] = abstracts.string();
    j["labels"] = labels.string();
  } else {
    j["sentences"] = sentences.string();
  }
  nlohmann::ordered_json dicts = nlohmann::ordered_json::array();
  for (const auto& d : dictionaries) dicts.push_back({{"name", d.name}, {"path", d.path.string()}});
  j["dictionaries"] = dicts;
  nlohmann::ordered_json ner = nlohmann::ordered_json::array();
  for (const auto& p : ner_counts) ner.push_back(p.string());
  j["ner_counts"] = ner;
  j["seed"] = seed;
  j["stratify"] = stratify;
  j["strict_paper_vocab"] = strict_paper_vocab;
  j["audit"] = audit;
  j["permutation_draws"] = permutation_draws;
  nlohmann::ordered_json cfgs = nlohmann::ordered_json::array();
  for (const RunConfig& rc : configurations) {
    cfgs.push_back({{"classifier", classifier_name(rc.classifier)},
                    {"features", ngram_order_name(rc.ngram)},
                    {"transform", rc.transform.name()},
                    {"free_pca", rc.transform.free_pca},
                    {"resources", rc.resources},
                    {"grid", rc.effective_grid()}});
  }
  j["configurations"] = cfgs;
  return j.dump(2);
}

uint64_t ExperimentConfig::fingerprint() const { return fnv1a(to_json(), fnv1a("experiment")); }

LoadedCorpus load_corpus(const ExperimentConfig& config, const MedlineOptions& medline_options) {
  config.check_paths();
  LoadedCorpus out;
  auto open = [](const std::filesystem::path& p) {
    auto in = std::make_unique<std::ifstream>(p);
    if (!*in) throw ConfigError("cannot open " + p.string());
    return in;
  };
  auto with_file = [](const std::filesystem::path& p, auto&& fn) {
    try {
      return fn();
    } catch (const ParseError& e) {
      throw ParseError(p.string() + ": " + e.what(), e.line(), e.byte_offset());
    }
  };
  if (config.task == Task::kAbstract) {
    std::vector<AbstractRecord> records;
    if (!config.medline.empty()) {
      auto medline = open(config.medline);
      records = with_file(config.medline, [&] { return parse_medline(*medline, medline_options); });
    } else {
      auto tsv = open(config.abstracts);
      records = with_file(config.abstracts, [&] { return parse_abstracts_tsv(*tsv); });
    }
    auto labels_in = open(config.labels);
    auto labels = with_file(config.labels, [&] { return parse_labels(*labels_in); });
    if (labels.empty()) throw ConfigError("label file " + config.labels.string() + " has no labels");
    out.corpus = build_abstract_corpus(std::move(records), labels);
  } else {
    auto in = open(config.sentences);
    auto sentences = with_file(config.sentences, [&] { return parse_sentences(*in); });
    if (sentences.empty()) throw ConfigError("sentence file " + config.sentences.string() + " is empty");
    out.corpus = build_sentence_corpus(std::move(sentences));
  }
  if (out.corpus.documents.empty()) throw ConfigError("corpus is empty after matching records to labels");
  for (const auto& d : config.dictionaries) {
    auto in = open(d.path);
    const Dictionary dict = with_file(d.path, [&] { return load_dictionary(*in, d.name); });
    out.tables.push_back(dictionary_count_table(dict, out.corpus.documents));
  }
  for (const auto& p : config.ner_counts) {
    auto in = open(p);
    for (auto& t : with_file(p, [&] { return load_ner_counts(*in); })) out.tables.push_back(std::move(t));
  }
  return out;
}

}  // namespace pkddi
