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

#ifndef CLINVEC_EHR_HPP_
#define CLINVEC_EHR_HPP_

#include <compare>
#include <string>
#include <string_view>
#include <vector>

#include "clinvec/date.hpp"

namespace clinvec {

enum class CodeSystem { kIcd9, kIcd10, kOpcs4 };

std::string_view CodeSystemName(CodeSystem system);
// Accepts "ICD9", "ICD10", "OPCS4"; throws DataError otherwise.
CodeSystem ParseCodeSystem(std::string_view name);

// A coded term. The same code string under two systems is two distinct terms.
struct ClinicalTerm {
  CodeSystem system = CodeSystem::kIcd10;
  std::string code;

  // Validates the code (non-empty, uppercase alphanumeric, '.' allowed).
  static ClinicalTerm Make(CodeSystem system, std::string code);
  // "ICD10:I50" form used in corpus and embedding files.
  static ClinicalTerm FromToken(std::string_view token);
  std::string Token() const;

  friend auto operator<=>(const ClinicalTerm&, const ClinicalTerm&) = default;
};

bool IsValidCode(std::string_view code);

// One hospital admission: diagnoses[0] is the primary cause, diagnoses[1..15]
// the secondary causes in recorded order; procedures are OPCS-4.
struct Admission {
  std::string patient_id;
  Date admit_date;
  std::vector<ClinicalTerm> diagnoses;
  std::vector<ClinicalTerm> procedures;
};

inline constexpr std::size_t kMaxDiagnoses = 16;

enum class Sex { kFemale, kMale };
std::string_view SexName(Sex sex);
Sex ParseSex(std::string_view text);

struct PatientRecord {
  std::string patient_id;
  Sex sex = Sex::kFemale;
  int birth_year = 0;
  int recruitment_year = 0;
  std::string assessment_centre;
  // Ascending by admit_date.
  std::vector<Admission> admissions;
};

// Throws DataError if an admission breaks the diagnosis/procedure invariants.
void ValidateAdmission(const Admission& admission);

// Stable sort by admit_date.
void SortAdmissions(PatientRecord& record);

}  // namespace clinvec

#endif  // CLINVEC_EHR_HPP_
