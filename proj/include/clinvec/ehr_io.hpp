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

#ifndef CLINVEC_EHR_IO_HPP_
#define CLINVEC_EHR_IO_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "clinvec/ehr.hpp"

namespace clinvec {

// Admissions CSV, header `patient_id,admit_date,position,system,code`.
// Position 0 is the primary diagnosis, 1..15 secondary, P a procedure.
// Returns one record per patient (sorted by patient_id) with date-sorted
// admissions and no demographics. Malformed rows reject the whole input with
// a DataError listing line-numbered diagnostics.
std::vector<PatientRecord> ParseAdmissions(std::istream& in,
                                           const std::string& source = "<admissions>");
std::vector<PatientRecord> ParseAdmissions(const std::filesystem::path& path);

// Canonical form: patients in the given order, admissions by date, then
// diagnoses by position followed by procedures in recorded order.
void WriteAdmissions(std::ostream& out, const std::vector<PatientRecord>& records);

// Patients CSV, header `patient_id,sex,birth_year,recruitment_year,assessment_centre`.
std::vector<PatientRecord> ParsePatients(std::istream& in,
                                         const std::string& source = "<patients>");
std::vector<PatientRecord> ParsePatients(const std::filesystem::path& path);
void WritePatients(std::ostream& out, const std::vector<PatientRecord>& records);

// Joins demographics with admissions. Every admissions patient must appear in
// the patients file; patients without admissions are kept with none.
std::vector<PatientRecord> JoinRecords(std::vector<PatientRecord> patients,
                                       std::vector<PatientRecord> admissions);
std::vector<PatientRecord> LoadRecords(const std::filesystem::path& patients_path,
                                       const std::filesystem::path& admissions_path);

// Splits a CSV line on commas. Fields carry no quoting.
std::vector<std::string> SplitCsvLine(const std::string& line);

}  // namespace clinvec

#endif  // CLINVEC_EHR_IO_HPP_
