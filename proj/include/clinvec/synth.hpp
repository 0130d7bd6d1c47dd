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

#ifndef CLINVEC_SYNTH_HPP_
#define CLINVEC_SYNTH_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "clinvec/config.hpp"
#include "clinvec/ehr.hpp"

namespace clinvec {

struct PlantedSignal {
  ClinicalTerm term;
  double relative_risk = 1.0;
};

struct SynthConfig {
  int n_patients = 10000;
  // Background vocabulary per system. Case-defining and planted codes are
  // reserved inside these counts.
  int icd10_vocab = 350;
  int icd9_vocab = 50;
  int opcs4_vocab = 100;
  // Admissions per patient: 1 + Poisson(admissions_mean).
  double admissions_mean = 6.0;
  double secondary_mean = 2.0;   // Poisson, capped at 15
  double procedures_mean = 1.0;  // Poisson
  double zipf_exponent = 1.0;
  double case_fraction = 0.1;
  double prevalent_fraction = 0.01;
  std::vector<ClinicalTerm> case_codes = {ClinicalTerm{CodeSystem::kIcd10, "I50"},
                                          ClinicalTerm{CodeSystem::kIcd9, "428"}};
  std::vector<PlantedSignal> planted;
  // Per-admission probability of each planted term for non-elevated
  // admissions; a future case's pre-onset admissions use
  // min(1, relative_risk * planted_base_rate).
  double planted_base_rate = 0.02;
  int start_year = 1990;
  int end_year = 2016;          // admissions fall in [start_year, end_year]
  int icd9_until_year = 1995;   // diagnoses coded in ICD9 up to this year
  int n_centres = 3;
  int birth_year_min = 1940;
  int birth_year_max = 1960;
  int recruitment_year_min = 2006;
  int recruitment_year_max = 2010;
  std::uint64_t seed = 0;

  // Throws UsageError on invalid values.
  void Validate() const;
};

// Reads `synth.*` keys; rejects unknown `synth.*` keys.
SynthConfig SynthConfigFromConfig(const Config& cfg, std::uint64_t seed);

struct TruthRow {
  std::string patient_id;
  bool future_case = false;
  bool prevalent = false;
  std::optional<Date> onset;
};

struct SynthCohort {
  std::vector<PatientRecord> records;  // sorted by patient_id
  std::vector<TruthRow> truth;         // same order
};

// Deterministic in cfg (including its seed). Throws DataError if a planted or
// case-defining code lies outside the configured vocabulary.
SynthCohort GenerateSyntheticCohort(const SynthConfig& cfg);

// The background vocabulary the generator draws from for one system,
// reserved codes first.
std::vector<ClinicalTerm> SynthVocabulary(const SynthConfig& cfg, CodeSystem system);

// `patient_id,future_case,prevalent,onset_date`.
void WriteTruth(std::ostream& out, const std::vector<TruthRow>& truth);

}  // namespace clinvec

#endif  // CLINVEC_SYNTH_HPP_
