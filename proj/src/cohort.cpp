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

#include "clinvec/cohort.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <tuple>
#include <unordered_set>

#include "clinvec/ehr_io.hpp"
#include "clinvec/error.hpp"
#include "clinvec/rng.hpp"

namespace clinvec {

namespace {

bool HasCodeAnyPosition(const Admission& adm, const CodeList& codes) {
  return std::any_of(adm.diagnoses.begin(), adm.diagnoses.end(),
                     [&](const ClinicalTerm& t) { return codes.count(t) != 0; });
}

using Stratum = std::tuple<std::string, int, Sex, int>;

Stratum StratumOf(const PatientRecord& r) {
  return {r.assessment_centre, r.recruitment_year, r.sex, r.birth_year};
}

// First admission carrying a code-list term, or nullopt.
std::optional<Date> FirstCodedDate(const PatientRecord& record, const CodeList& codes) {
  for (const auto& adm : record.admissions) {
    if (HasCodeAnyPosition(adm, codes)) return adm.admit_date;
  }
  return std::nullopt;
}

}  // namespace

Date RecruitmentBaseline(const PatientRecord& record) {
  return Date::FromYmd(record.recruitment_year, 1, 1);
}

CaseIdentification IdentifyCases(std::span<const PatientRecord> records, const CodeList& codes,
                                 AgeRange ages,
                                 const std::function<Date(const PatientRecord&)>& baseline) {
  if (codes.empty()) throw UsageError("case code list is empty");
  CaseIdentification out;
  for (const auto& record : records) {
    std::optional<Date> onset;
    for (const auto& adm : record.admissions) {
      const int age = adm.admit_date.Year() - record.birth_year;
      if (age < ages.min_age || age > ages.max_age) continue;
      if (!HasCodeAnyPosition(adm, codes)) continue;
      if (!onset || adm.admit_date < *onset) onset = adm.admit_date;
    }
    if (!onset) continue;
    const Date entry = baseline(record);
    if (*onset <= entry) {
      out.prevalent.push_back(
          {record.patient_id, "prevalent: onset " + onset->ToString() + " on or before baseline " +
                                  entry.ToString()});
    } else {
      out.cases.push_back({record.patient_id, *onset});
    }
  }
  auto by_id = [](const auto& a, const auto& b) { return a.patient_id < b.patient_id; };
  std::sort(out.cases.begin(), out.cases.end(), by_id);
  std::sort(out.prevalent.begin(), out.prevalent.end(), by_id);
  return out;
}

CohortAssignment MatchCaseControls(std::span<const PatientRecord> records,
                                   const CaseIdentification& identified, const CodeList& codes,
                                   const MatchOptions& options) {
  CohortAssignment out;
  out.cases = identified.cases;
  std::sort(out.cases.begin(), out.cases.end(),
            [](const CaseOnset& a, const CaseOnset& b) { return a.patient_id < b.patient_id; });
  out.exclusions = identified.prevalent;

  std::unordered_set<std::string> blocked;
  for (const auto& c : out.cases) blocked.insert(c.patient_id);
  for (const auto& e : out.exclusions) blocked.insert(e.patient_id);

  std::map<std::string, const PatientRecord*> by_id;
  for (const auto& r : records) by_id[r.patient_id] = &r;

  // Candidate pools per stratum, in patient_id order for determinism.
  struct Candidate {
    const PatientRecord* record;
    std::optional<Date> first_coded;
  };
  std::map<Stratum, std::vector<Candidate>> pools;
  for (const auto& [id, record] : by_id) {
    if (blocked.count(id)) continue;
    pools[StratumOf(*record)].push_back({record, FirstCodedDate(*record, codes)});
  }

  Rng rng(options.seed);
  for (const auto& c : out.cases) {
    const auto it = by_id.find(c.patient_id);
    if (it == by_id.end()) throw DataError("case '" + c.patient_id + "' has no patient record");
    auto& pool = pools[StratumOf(*it->second)];
    // Eligible: no case-defining code before the index date.
    std::vector<std::size_t> eligible;
    for (std::size_t k = 0; k < pool.size(); ++k) {
      if (!pool[k].first_coded || !(*pool[k].first_coded < c.onset)) eligible.push_back(k);
    }
    const std::size_t want = static_cast<std::size_t>(std::max(options.controls_per_case, 0));
    // Partial Fisher-Yates over the eligible indices.
    const std::size_t take = std::min(want, eligible.size());
    for (std::size_t k = 0; k < take; ++k) {
      const std::size_t j = k + static_cast<std::size_t>(rng.Below(eligible.size() - k));
      std::swap(eligible[k], eligible[j]);
    }
    std::vector<std::size_t> chosen(eligible.begin(), eligible.begin() + take);
    std::sort(chosen.begin(), chosen.end());
    for (std::size_t k : chosen) {
      out.controls.push_back({pool[k].record->patient_id, c.onset, c.patient_id});
    }
    if (take < want) out.under_matched.push_back(c.patient_id);
    // Without replacement: drop chosen candidates from the pool.
    for (auto k = chosen.rbegin(); k != chosen.rend(); ++k) {
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(*k));
    }
  }
  return out;
}

std::span<const Admission> ObservationWindow(const PatientRecord& record, Date index_date,
                                             int gap_months) {
  const Date cutoff = index_date.AddMonths(-gap_months);
  const auto end = std::partition_point(
      record.admissions.begin(), record.admissions.end(),
      [&](const Admission& a) { return a.admit_date < cutoff; });
  return {record.admissions.data(),
          static_cast<std::size_t>(end - record.admissions.begin())};
}

std::vector<CohortMember> CohortMembers(const CohortAssignment& assignment) {
  std::map<std::string, std::vector<const ControlAssignment*>> controls_of;
  for (const auto& ctl : assignment.controls) controls_of[ctl.matched_case_id].push_back(&ctl);
  std::vector<CohortMember> members;
  members.reserve(assignment.cases.size() + assignment.controls.size());
  for (const auto& c : assignment.cases) {
    members.push_back({c.patient_id, true, c.patient_id, c.onset, 1});
    for (const auto* ctl : controls_of[c.patient_id]) {
      members.push_back({ctl->patient_id, false, ctl->matched_case_id, ctl->index_date, 0});
    }
  }
  return members;
}

void WriteCohort(std::ostream& out, const std::vector<CohortMember>& members) {
  out << "patient_id,role,matched_case_id,index_date,label\n";
  for (const auto& m : members) {
    out << m.patient_id << ',' << (m.is_case ? "case" : "control") << ',' << m.matched_case_id
        << ',' << m.index_date.ToString() << ',' << m.label << '\n';
  }
}

std::vector<CohortMember> ReadCohort(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line) || line != "patient_id,role,matched_case_id,index_date,label") {
    throw DataError(source + ": line 1: bad cohort header");
  }
  std::vector<CohortMember> members;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = SplitCsvLine(line);
    const auto date = f.size() == 5 ? Date::Parse(f[3]) : std::nullopt;
    if (f.size() != 5 || (f[1] != "case" && f[1] != "control") || !date ||
        (f[4] != "0" && f[4] != "1")) {
      throw DataError(source + ": line " + std::to_string(line_no) + ": malformed cohort row");
    }
    members.push_back({f[0], f[1] == "case", f[2], *date, f[4] == "1" ? 1 : 0});
  }
  return members;
}

std::vector<CohortMember> ReadCohort(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return ReadCohort(in, path.string());
}

}  // namespace clinvec
