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

#ifndef CLINVEC_COHORT_HPP_
#define CLINVEC_COHORT_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "clinvec/ehr.hpp"

namespace clinvec {

using CodeList = std::set<ClinicalTerm>;

struct CaseOnset {
  std::string patient_id;
  Date onset;
};

struct Exclusion {
  std::string patient_id;
  std::string reason;
};

struct CaseIdentification {
  std::vector<CaseOnset> cases;          // sorted by patient_id
  std::vector<Exclusion> prevalent;      // onset on or before baseline
};

struct AgeRange {
  int min_age = 40;
  int max_age = 85;
};

// Cohort entry: Jan 1 of the recruitment year.
Date RecruitmentBaseline(const PatientRecord& record);

// A patient is a case iff some admission carries a code-list term at any
// diagnosis position while the patient is within `ages` (age = admission year
// minus birth year). Onset is the earliest such admission. Onsets on or
// before `baseline(record)` are reported as prevalent exclusions instead.
CaseIdentification IdentifyCases(
    std::span<const PatientRecord> records, const CodeList& codes, AgeRange ages,
    const std::function<Date(const PatientRecord&)>& baseline = RecruitmentBaseline);

struct ControlAssignment {
  std::string patient_id;
  Date index_date;
  std::string matched_case_id;
};

struct CohortAssignment {
  std::vector<CaseOnset> cases;
  std::vector<ControlAssignment> controls;
  std::vector<Exclusion> exclusions;
  // Cases that received fewer than the requested number of controls.
  std::vector<std::string> under_matched;
  // Controls whose observation window turned out empty; filled by callers
  // that compute windows.
  std::size_t empty_control_windows = 0;
};

struct MatchOptions {
  int controls_per_case = 4;
  std::uint64_t seed = 0;
};

// Matches each case to controls sharing assessment centre, recruitment year,
// sex and birth year, drawn uniformly without replacement across cases.
// Eligible controls are neither cases nor excluded, and carry no code-list
// term at any position before the case's onset. Cases are processed in
// patient_id order; short strata yield fewer controls and flag the case.
CohortAssignment MatchCaseControls(std::span<const PatientRecord> records,
                                   const CaseIdentification& identified, const CodeList& codes,
                                   const MatchOptions& options);

// Admissions strictly before `index_date` shifted back `gap_months` calendar
// months (clamped to month end). Always a prefix of record.admissions.
std::span<const Admission> ObservationWindow(const PatientRecord& record, Date index_date,
                                             int gap_months = 6);

// Cohort file: `patient_id,role,matched_case_id,index_date,label`.
struct CohortMember {
  std::string patient_id;
  bool is_case = false;
  std::string matched_case_id;  // own id for cases
  Date index_date;
  int label = 0;
};

// Cases in patient_id order, each followed by its controls.
std::vector<CohortMember> CohortMembers(const CohortAssignment& assignment);
void WriteCohort(std::ostream& out, const std::vector<CohortMember>& members);
std::vector<CohortMember> ReadCohort(std::istream& in, const std::string& source = "<cohort>");
std::vector<CohortMember> ReadCohort(const std::filesystem::path& path);

}  // namespace clinvec

#endif  // CLINVEC_COHORT_HPP_
