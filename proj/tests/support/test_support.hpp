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

#ifndef CLINVEC_TESTS_TEST_SUPPORT_HPP_
#define CLINVEC_TESTS_TEST_SUPPORT_HPP_

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "clinvec/date.hpp"
#include "clinvec/ehr.hpp"
#include "clinvec/rng.hpp"

namespace clinvec::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    Rng rng(static_cast<std::uint64_t>(
        std::chrono::steady_clock::now().time_since_epoch().count()));
    path_ = std::filesystem::temp_directory_path() / ("clinvec-test-" + std::to_string(rng()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline ClinicalTerm T(const std::string& token) { return ClinicalTerm::FromToken(token); }

inline Date D(const std::string& text) { return *Date::Parse(text); }

inline Admission Adm(const std::string& patient, const std::string& date,
                     std::initializer_list<const char*> diagnoses,
                     std::initializer_list<const char*> procedures = {}) {
  Admission a;
  a.patient_id = patient;
  a.admit_date = D(date);
  for (const char* tok : diagnoses) a.diagnoses.push_back(T(tok));
  for (const char* tok : procedures) a.procedures.push_back(T(tok));
  return a;
}

inline PatientRecord Patient(const std::string& id, Sex sex, int birth_year, int recruitment_year,
                             const std::string& centre, std::vector<Admission> admissions = {}) {
  PatientRecord r;
  r.patient_id = id;
  r.sex = sex;
  r.birth_year = birth_year;
  r.recruitment_year = recruitment_year;
  r.assessment_centre = centre;
  r.admissions = std::move(admissions);
  return r;
}

// Random but valid records over a small code space, for property tests.
inline std::vector<PatientRecord> RandomRecords(Rng& rng, int n_patients, int max_admissions = 6) {
  static const char* kDx[] = {"ICD10:I50", "ICD10:I48", "ICD10:E11", "ICD10:I10", "ICD10:J45",
                              "ICD10:N18", "ICD9:428",  "ICD9:401"};
  static const char* kProc[] = {"OPCS4:K40", "OPCS4:Y14", "OPCS4:K57", "OPCS4:L91"};
  std::vector<PatientRecord> out;
  for (int p = 0; p < n_patients; ++p) {
    char id[16];
    std::snprintf(id, sizeof id, "R%05d", p);
    PatientRecord r = Patient(id, rng.Bernoulli(0.5) ? Sex::kMale : Sex::kFemale,
                              static_cast<int>(rng.Between(1940, 1945)),
                              static_cast<int>(rng.Between(2006, 2007)),
                              rng.Bernoulli(0.5) ? "C01" : "C02");
    const int n_adm = static_cast<int>(rng.Below(static_cast<std::uint64_t>(max_admissions) + 1));
    std::int64_t day = Date::FromYmd(1995, 1, 1).DaysSinceEpoch();
    for (int a = 0; a < n_adm; ++a) {
      day += 1 + static_cast<std::int64_t>(rng.Below(900));
      Admission adm;
      adm.patient_id = r.patient_id;
      adm.admit_date = Date::FromDaysSinceEpoch(day);
      const int n_dx = 1 + static_cast<int>(rng.Below(4));
      for (int k = 0; k < n_dx; ++k) adm.diagnoses.push_back(T(kDx[rng.Below(8)]));
      const int n_proc = static_cast<int>(rng.Below(3));
      for (int k = 0; k < n_proc; ++k) adm.procedures.push_back(T(kProc[rng.Below(4)]));
      r.admissions.push_back(std::move(adm));
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace clinvec::testing

#endif  // CLINVEC_TESTS_TEST_SUPPORT_HPP_
