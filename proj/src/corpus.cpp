// Copyright 2026 The clinvec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "clinvec/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "clinvec/error.hpp"

namespace clinvec {

namespace {

bool UsesSecondary(CorpusVariant v) {
  return v == CorpusVariant::kPrimDxSecDx || v == CorpusVariant::kPrimDxSecDxProc;
}

bool UsesProcedures(CorpusVariant v) {
  return v == CorpusVariant::kPrimDxProc || v == CorpusVariant::kPrimDxSecDxProc;
}

ClinicalTerm MaybeTruncate(const ClinicalTerm& term, const CorpusOptions& options) {
  if (!options.truncate_codes || term.code.size() <= 3) return term;
  return ClinicalTerm{term.system, term.code.substr(0, 3)};
}

}  // namespace

std::string_view VariantName(CorpusVariant variant) {
  switch (variant) {
    case CorpusVariant::kPrimDx:
      return "PRIMDX";
    case CorpusVariant::kPrimDxSecDx:
      return "PRIMDX-SECDX";
    case CorpusVariant::kPrimDxProc:
      return "PRIMDX-PROC";
    case CorpusVariant::kPrimDxSecDxProc:
      return "PRIMDX-SECDX-PROC";
  }
  return "?";
}

CorpusVariant ParseVariant(std::string_view name) {
  std::string norm(name);
  std::replace(norm.begin(), norm.end(), '_', '-');
  std::transform(norm.begin(), norm.end(), norm.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (auto v : kAllVariants) {
    if (VariantName(v) == norm) return v;
  }
  throw UsageError("unknown corpus variant '" + std::string(name) + "'");
}

std::vector<ClinicalTerm> TokenizeAdmissions(std::span<const Admission> admissions,
                                             CorpusVariant variant,
                                             const CorpusOptions& options) {
  std::vector<ClinicalTerm> tokens;
  for (const auto& adm : admissions) {
    if (adm.diagnoses.empty()) continue;
    tokens.push_back(MaybeTruncate(adm.diagnoses.front(), options));
    if (UsesSecondary(variant)) {
      for (std::size_t k = 1; k < adm.diagnoses.size(); ++k) {
        tokens.push_back(MaybeTruncate(adm.diagnoses[k], options));
      }
    }
    if (UsesProcedures(variant)) {
      for (const auto& t : adm.procedures) tokens.push_back(MaybeTruncate(t, options));
    }
  }
  return tokens;
}

Corpus BuildCorpus(std::span<const PatientRecord> records, CorpusVariant variant,
                   const CorpusOptions& options) {
  Corpus corpus;
  corpus.variant = variant;
  for (const auto& record : records) {
    auto tokens = TokenizeAdmissions(record.admissions, variant, options);
    if (tokens.empty()) continue;
    corpus.documents.push_back({record.patient_id, std::move(tokens)});
  }
  return corpus;
}

Vocabulary Vocabulary::Build(const Corpus& corpus, std::int64_t min_count) {
  if (min_count < 1) throw UsageError("min_count must be >= 1");
  std::map<std::string, std::pair<ClinicalTerm, std::int64_t>> counts;
  for (const auto& doc : corpus.documents) {
    for (const auto& t : doc.tokens) {
      auto [it, inserted] = counts.try_emplace(t.Token(), t, 0);
      ++it->second.second;
    }
  }
  std::vector<std::pair<std::string, std::pair<ClinicalTerm, std::int64_t>>> kept;
  for (auto& entry : counts) {
    if (entry.second.second >= min_count) kept.push_back(std::move(entry));
  }
  if (kept.empty()) {
    throw DataError("vocabulary is empty after applying min_count=" + std::to_string(min_count));
  }
  std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second.second != b.second.second) return a.second.second > b.second.second;
    return a.first < b.first;
  });
  std::vector<std::pair<ClinicalTerm, std::int64_t>> entries;
  entries.reserve(kept.size());
  for (auto& [token, tf] : kept) entries.push_back(std::move(tf));
  return FromEntries(std::move(entries), min_count);
}

Vocabulary Vocabulary::FromEntries(std::vector<std::pair<ClinicalTerm, std::int64_t>> entries,
                                   std::int64_t min_count) {
  Vocabulary v;
  v.min_count_ = min_count;
  for (auto& [term, freq] : entries) {
    const auto id = static_cast<std::uint32_t>(v.terms_.size());
    std::string token = term.Token();
    if (!v.index_.emplace(token, id).second) {
      throw DataError("duplicate vocabulary term " + token);
    }
    v.tokens_.push_back(std::move(token));
    v.terms_.push_back(std::move(term));
    v.frequencies_.push_back(freq);
  }
  return v;
}

std::optional<std::uint32_t> Vocabulary::Id(const ClinicalTerm& term) const {
  return IdOfToken(term.Token());
}

std::optional<std::uint32_t> Vocabulary::IdOfToken(std::string_view token) const {
  const auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void Vocabulary::Write(std::ostream& out) const {
  out << "#min_count=" << min_count_ << '\n';
  for (std::size_t k = 0; k < terms_.size(); ++k) {
    out << tokens_[k] << '\t' << frequencies_[k] << '\n';
  }
}

Vocabulary Vocabulary::Read(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("#min_count=", 0) != 0) {
    throw DataError(source + ": line 1: expected #min_count=N");
  }
  const std::int64_t min_count = std::stoll(line.substr(11));
  std::vector<std::pair<ClinicalTerm, std::int64_t>> entries;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw DataError(source + ": line " + std::to_string(line_no) + ": expected TERM<TAB>COUNT");
    }
    entries.emplace_back(ClinicalTerm::FromToken(line.substr(0, tab)),
                         std::stoll(line.substr(tab + 1)));
  }
  return FromEntries(std::move(entries), min_count);
}

Vocabulary Vocabulary::Read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return Read(in, path.string());
}

std::vector<std::optional<std::uint32_t>> EncodeDocument(const Document& doc,
                                                         const Vocabulary& vocab) {
  std::vector<std::optional<std::uint32_t>> ids;
  ids.reserve(doc.tokens.size());
  for (const auto& t : doc.tokens) ids.push_back(vocab.Id(t));
  return ids;
}

CorpusStats ComputeCorpusStats(const Corpus& corpus, std::size_t vocabulary_size) {
  CorpusStats stats;
  if (corpus.documents.empty()) return stats;
  std::set<ClinicalTerm> unique;
  std::vector<std::int64_t> lengths;
  lengths.reserve(corpus.documents.size());
  for (const auto& doc : corpus.documents) {
    stats.tokens_total += static_cast<std::int64_t>(doc.tokens.size());
    lengths.push_back(static_cast<std::int64_t>(doc.tokens.size()));
    unique.insert(doc.tokens.begin(), doc.tokens.end());
  }
  std::sort(lengths.begin(), lengths.end());
  stats.tokens_unique = static_cast<std::int64_t>(unique.size());
  stats.tokens_median = lengths[(lengths.size() - 1) / 2];
  stats.vocabulary_size = static_cast<std::int64_t>(vocabulary_size);
  return stats;
}

void WriteCorpusStats(std::ostream& out, CorpusVariant variant, const CorpusStats& stats) {
  out << "Corpus,Tokens (total),Tokens (unique),Tokens (median),Vocabulary size\n"
      << VariantName(variant) << ',' << stats.tokens_total << ',' << stats.tokens_unique << ','
      << stats.tokens_median << ',' << stats.vocabulary_size << '\n';
}

void WriteCorpus(std::ostream& out, const Corpus& corpus) {
  for (const auto& doc : corpus.documents) {
    out << doc.patient_id << '\t';
    for (std::size_t k = 0; k < doc.tokens.size(); ++k) {
      if (k) out << ' ';
      out << CodeSystemName(doc.tokens[k].system) << ':' << doc.tokens[k].code;
    }
    out << '\n';
  }
}

Corpus ReadCorpus(std::istream& in, CorpusVariant variant, const std::string& source) {
  Corpus corpus;
  corpus.variant = variant;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw DataError(source + ": line " + std::to_string(line_no) + ": expected ID<TAB>TOKENS");
    }
    Document doc;
    doc.patient_id = line.substr(0, tab);
    std::istringstream tokens(line.substr(tab + 1));
    std::string tok;
    while (tokens >> tok) doc.tokens.push_back(ClinicalTerm::FromToken(tok));
    if (!doc.tokens.empty()) corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

}  // namespace clinvec
