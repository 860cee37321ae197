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

#include "pkddi/synth.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "pkddi/error.hpp"
#include "pkddi/random.hpp"

namespace pkddi {

std::string pseudo_word(uint64_t index) {
  static constexpr std::string_view kConsonants = "bdfgklmnprstvz";
  static constexpr std::string_view kVowels = "aeiu";
  const uint64_t base = kConsonants.size() * kVowels.size();
  std::string word;
  uint64_t v = index;
  int digits = 0;
  do {
    const uint64_t s = v % base;
    word += kConsonants[s / kVowels.size()];
    word += kVowels[s % kVowels.size()];
    v /= base;
    ++digits;
  } while (v > 0 || digits < 2);
  word += kConsonants[index % kConsonants.size()];
  word += 'o';
  return word;
}

void SyntheticSpec::validate() const {
  if (documents <= 0 || signal_relevant <= 0 || signal_irrelevant <= 0 || noise < 0 || authors <= 0 ||
      journals <= 0 || mesh_terms <= 0) {
    throw ConfigError("synthetic spec: document and vocabulary counts must be positive");
  }
  if (!(prior > 0.0 && prior < 1.0)) throw ConfigError("synthetic spec: prior must lie in (0, 1)");
  for (double r : {signal_rate, cross_rate, noise_rate}) {
    if (!(r >= 0.0 && r < 1.0)) throw ConfigError("synthetic spec: emission rates must lie in [0, 1)");
  }
  if (min_signal < 0 || min_signal > std::min(signal_relevant, signal_irrelevant)) {
    throw ConfigError("synthetic spec: min_signal must lie in [0, smallest signal vocabulary]");
  }
}

SyntheticSpec parse_synthetic_spec(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("synthetic spec: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("synthetic spec must be a JSON object");
  SyntheticSpec s;
  static const std::set<std::string> known = {"documents", "signal_relevant", "signal_irrelevant", "noise",
                                              "prior", "signal_rate", "cross_rate", "noise_rate", "min_signal",
                                              "authors", "journals", "mesh_terms", "seed"};
  try {
    for (const auto& [key, value] : j.items()) {
      if (!known.count(key)) throw ConfigError("synthetic spec: unknown key '" + key + "'");
    }
    s.documents = j.value("documents", s.documents);
    s.signal_relevant = j.value("signal_relevant", s.signal_relevant);
    s.signal_irrelevant = j.value("signal_irrelevant", s.signal_irrelevant);
    s.noise = j.value("noise", s.noise);
    s.prior = j.value("prior", s.prior);
    s.signal_rate = j.value("signal_rate", s.signal_rate);
    s.cross_rate = j.value("cross_rate", s.cross_rate);
    s.noise_rate = j.value("noise_rate", s.noise_rate);
    s.min_signal = j.value("min_signal", s.min_signal);
    s.authors = j.value("authors", s.authors);
    s.journals = j.value("journals", s.journals);
    s.mesh_terms = j.value("mesh_terms", s.mesh_terms);
    s.seed = j.value("seed", s.seed);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("synthetic spec: ") + e.what());
  }
  s.validate();
  return s;
}

std::string synthetic_spec_json(const SyntheticSpec& s) {
  nlohmann::ordered_json j;
  j["documents"] = s.documents;
  j["signal_relevant"] = s.signal_relevant;
  j["signal_irrelevant"] = s.signal_irrelevant;
  j["noise"] = s.noise;
  j["prior"] = s.prior;
  j["signal_rate"] = s.signal_rate;
  j["cross_rate"] = s.cross_rate;
  j["noise_rate"] = s.noise_rate;
  j["min_signal"] = s.min_signal;
  j["authors"] = s.authors;
  j["journals"] = s.journals;
  j["mesh_terms"] = s.mesh_terms;
  j["seed"] = s.seed;
  return j.dump(2);
}

namespace {

std::string capitalized(std::string w) {
  w[0] = static_cast<char>(w[0] - 'a' + 'A');
  return w;
}

std::string sentence(const std::vector<std::string>& words, size_t from, size_t to) {
  std::string s;
  for (size_t i = from; i < to; ++i) s += (i > from ? " " : "") + words[i];
  if (!s.empty()) {
    s[0] = static_cast<char>(s[0] - 'a' + 'A');
    s += '.';
  }
  return s;
}

}  // namespace

SyntheticCorpus generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  const uint64_t rel0 = 0;
  const uint64_t irr0 = rel0 + static_cast<uint64_t>(spec.signal_relevant);
  const uint64_t noise0 = irr0 + static_cast<uint64_t>(spec.signal_irrelevant);
  const uint64_t meta0 = noise0 + static_cast<uint64_t>(spec.noise);

  SyntheticCorpus out;
  for (int64_t d = 0; d < spec.documents; ++d) {
    Rng rng(substream_seed(spec.seed, "synthetic-document", static_cast<uint64_t>(d)));
    const bool relevant = rng.bernoulli(spec.prior);
    const uint64_t own0 = relevant ? rel0 : irr0;
    const uint64_t own_n = static_cast<uint64_t>(relevant ? spec.signal_relevant : spec.signal_irrelevant);
    const uint64_t other0 = relevant ? irr0 : rel0;
    const uint64_t other_n = static_cast<uint64_t>(relevant ? spec.signal_irrelevant : spec.signal_relevant);

    std::vector<uint64_t> chosen;
    std::vector<bool> own_hit(own_n, false);
    int own_count = 0;
    for (uint64_t i = 0; i < own_n; ++i) {
      if (rng.bernoulli(spec.signal_rate)) {
        own_hit[i] = true;
        ++own_count;
      }
    }
    while (own_count < spec.min_signal) {
      const uint64_t i = rng.below(own_n);
      if (!own_hit[i]) {
        own_hit[i] = true;
        ++own_count;
      }
    }
    for (uint64_t i = 0; i < own_n; ++i) {
      if (own_hit[i]) chosen.push_back(own0 + i);
    }
    for (uint64_t i = 0; i < other_n; ++i) {
      if (rng.bernoulli(spec.cross_rate)) chosen.push_back(other0 + i);
    }
    for (uint64_t i = 0; i < static_cast<uint64_t>(spec.noise); ++i) {
      if (rng.bernoulli(spec.noise_rate)) chosen.push_back(noise0 + i);
    }
    rng.shuffle(std::span<uint64_t>(chosen));
    std::vector<std::string> words;
    for (uint64_t w : chosen) words.push_back(pseudo_word(w));

    AbstractRecord r;
    r.pmid = std::to_string(100000 + d);
    const size_t title_len = std::min<size_t>(5, (words.size() + 2) / 3);
    r.title = sentence(words, 0, title_len);
    for (size_t i = title_len; i < words.size(); i += 8) {
      if (!r.abstract_text.empty()) r.abstract_text += ' ';
      r.abstract_text += sentence(words, i, std::min(words.size(), i + 8));
    }
    const uint64_t a_count = 1 + rng.below(4);
    std::set<uint64_t> picked;
    while (picked.size() < std::min<uint64_t>(a_count, static_cast<uint64_t>(spec.authors))) {
      picked.insert(rng.below(static_cast<uint64_t>(spec.authors)));
    }
    for (uint64_t a : picked) {
      r.authors.push_back(capitalized(pseudo_word(meta0 + a)) + " " +
                          static_cast<char>('A' + static_cast<int>(a % 26)));
    }
    const uint64_t journal0 = meta0 + static_cast<uint64_t>(spec.authors);
    r.journal = capitalized(pseudo_word(journal0 + rng.below(static_cast<uint64_t>(spec.journals)))) + " J";
    const uint64_t mesh0 = journal0 + static_cast<uint64_t>(spec.journals);
    const uint64_t m_count = 2 + rng.below(4);
    picked.clear();
    while (picked.size() < std::min<uint64_t>(m_count, static_cast<uint64_t>(spec.mesh_terms))) {
      picked.insert(rng.below(static_cast<uint64_t>(spec.mesh_terms)));
    }
    for (uint64_t m : picked) r.mesh_terms.push_back(capitalized(pseudo_word(mesh0 + m)));
    out.labels[r.pmid] = relevant ? Label::kRelevant : Label::kIrrelevant;
    out.records.push_back(std::move(r));
  }
  return out;
}

}  // namespace pkddi
