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

#ifndef CLINVEC_CORPUS_HPP_
#define CLINVEC_CORPUS_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "clinvec/ehr.hpp"

namespace clinvec {

// Which admission fields become tokens.
enum class CorpusVariant { kPrimDx, kPrimDxSecDx, kPrimDxProc, kPrimDxSecDxProc };

inline constexpr std::array<CorpusVariant, 4> kAllVariants = {
    CorpusVariant::kPrimDx, CorpusVariant::kPrimDxProc, CorpusVariant::kPrimDxSecDx,
    CorpusVariant::kPrimDxSecDxProc};

// "PRIMDX", "PRIMDX-SECDX", "PRIMDX-PROC", "PRIMDX-SECDX-PROC".
std::string_view VariantName(CorpusVariant variant);
// Accepts the names above, with '-' or '_'.
CorpusVariant ParseVariant(std::string_view name);

struct CorpusOptions {
  // Keep only the first three characters of each code (e.g. I50.0 -> I50).
  bool truncate_codes = false;
};

// Tokens of a run of admissions in canonical order: by admission, then
// primary, secondary (recorded order), procedures (recorded order), keeping
// only the fields selected by the variant.
std::vector<ClinicalTerm> TokenizeAdmissions(std::span<const Admission> admissions,
                                             CorpusVariant variant,
                                             const CorpusOptions& options = {});

struct Document {
  std::string patient_id;
  std::vector<ClinicalTerm> tokens;
};

struct Corpus {
  CorpusVariant variant = CorpusVariant::kPrimDx;
  std::vector<Document> documents;  // never empty documents
};

// One document per patient holding the patient's full chronological token
// sequence. Patients with no tokens are omitted.
Corpus BuildCorpus(std::span<const PatientRecord> records, CorpusVariant variant,
                   const CorpusOptions& options = {});

class Vocabulary {
 public:
  Vocabulary() = default;

  // Terms with frequency >= min_count, ids by descending frequency then term
  // token. Throws DataError if nothing survives the threshold.
  static Vocabulary Build(const Corpus& corpus, std::int64_t min_count);
  // Rebuild from (term, frequency) pairs already in id order.
  static Vocabulary FromEntries(std::vector<std::pair<ClinicalTerm, std::int64_t>> entries,
                                std::int64_t min_count);

  std::size_t size() const { return terms_.size(); }
  std::optional<std::uint32_t> Id(const ClinicalTerm& term) const;
  std::optional<std::uint32_t> IdOfToken(std::string_view token) const;
  const ClinicalTerm& Term(std::uint32_t id) const { return terms_[id]; }
  const std::string& Token(std::uint32_t id) const { return tokens_[id]; }
  std::int64_t Frequency(std::uint32_t id) const { return frequencies_[id]; }
  std::int64_t min_count() const { return min_count_; }
  const std::vector<std::string>& tokens() const { return tokens_; }

  // `#min_count=N` line, then `SYSTEM:CODE<TAB>frequency` in id order.
  void Write(std::ostream& out) const;
  static Vocabulary Read(std::istream& in, const std::string& source = "<vocab>");
  static Vocabulary Read(const std::filesystem::path& path);

 private:
  std::vector<ClinicalTerm> terms_;
  std::vector<std::string> tokens_;
  std::vector<std::int64_t> frequencies_;
  std::map<std::string, std::uint32_t, std::less<>> index_;
  std::int64_t min_count_ = 1;
};

// Document token ids against a vocabulary; out-of-vocabulary tokens become
// nullopt and still occupy their position.
std::vector<std::optional<std::uint32_t>> EncodeDocument(const Document& doc,
                                                         const Vocabulary& vocab);

struct CorpusStats {
  std::int64_t tokens_total = 0;
  std::int64_t tokens_unique = 0;
  std::int64_t tokens_median = 0;  // lower median of document lengths
  std::int64_t vocabulary_size = 0;
};

CorpusStats ComputeCorpusStats(const Corpus& corpus, std::size_t vocabulary_size);
inline CorpusStats ComputeCorpusStats(const Corpus& corpus, const Vocabulary& vocab) {
  return ComputeCorpusStats(corpus, vocab.size());
}

// Single-row table with the column names
// `Corpus,Tokens (total),Tokens (unique),Tokens (median),Vocabulary size`.
void WriteCorpusStats(std::ostream& out, CorpusVariant variant, const CorpusStats& stats);

// `patient_id<TAB>SYSTEM:CODE SYSTEM:CODE ...`, one document per line.
void WriteCorpus(std::ostream& out, const Corpus& corpus);
Corpus ReadCorpus(std::istream& in, CorpusVariant variant, const std::string& source = "<corpus>");

}  // namespace clinvec

#endif  // CLINVEC_CORPUS_HPP_
