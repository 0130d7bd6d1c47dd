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

#include "clinvec/ehr.hpp"

#include <algorithm>

#include "clinvec/error.hpp"

namespace clinvec {

std::string_view CodeSystemName(CodeSystem system) {
  switch (system) {
    case CodeSystem::kIcd9:
      return "ICD9";
    case CodeSystem::kIcd10:
      return "ICD10";
    case CodeSystem::kOpcs4:
      return "OPCS4";
  }
  return "?";
}

CodeSystem ParseCodeSystem(std::string_view name) {
  if (name == "ICD9") return CodeSystem::kIcd9;
  if (name == "ICD10") return CodeSystem::kIcd10;
  if (name == "OPCS4") return CodeSystem::kOpcs4;
  throw DataError("unknown code system '" + std::string(name) + "'");
}

bool IsValidCode(std::string_view code) {
  if (code.empty()) return false;
  return std::all_of(code.begin(), code.end(), [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.';
  });
}

ClinicalTerm ClinicalTerm::Make(CodeSystem system, std::string code) {
  if (!IsValidCode(code)) throw DataError("invalid clinical code '" + code + "'");
  return ClinicalTerm{system, std::move(code)};
}

ClinicalTerm ClinicalTerm::FromToken(std::string_view token) {
  const auto colon = token.find(':');
  if (colon == std::string_view::npos) {
    throw DataError("term token '" + std::string(token) + "' is not SYSTEM:CODE");
  }
  return Make(ParseCodeSystem(token.substr(0, colon)), std::string(token.substr(colon + 1)));
}

std::string ClinicalTerm::Token() const {
  std::string out(CodeSystemName(system));
  out += ':';
  out += code;
  return out;
}

std::string_view SexName(Sex sex) { return sex == Sex::kFemale ? "F" : "M"; }

Sex ParseSex(std::string_view text) {
  if (text == "F") return Sex::kFemale;
  if (text == "M") return Sex::kMale;
  throw DataError("unknown sex '" + std::string(text) + "' (expected F or M)");
}

void ValidateAdmission(const Admission& admission) {
  if (admission.diagnoses.empty() || admission.diagnoses.size() > kMaxDiagnoses) {
    throw DataError("admission of " + admission.patient_id + " on " +
                    admission.admit_date.ToString() + " has " +
                    std::to_string(admission.diagnoses.size()) + " diagnoses (need 1..16)");
  }
  for (const auto& term : admission.diagnoses) {
    if (term.system == CodeSystem::kOpcs4) {
      throw DataError("OPCS4 term " + term.code + " recorded as a diagnosis");
    }
  }
  for (const auto& term : admission.procedures) {
    if (term.system != CodeSystem::kOpcs4) {
      throw DataError("non-OPCS4 term " + term.Token() + " recorded as a procedure");
    }
  }
}

void SortAdmissions(PatientRecord& record) {
  std::stable_sort(record.admissions.begin(), record.admissions.end(),
                   [](const Admission& a, const Admission& b) {
                     return a.admit_date < b.admit_date;
                   });
}

}  // namespace clinvec
