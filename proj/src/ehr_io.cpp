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

#include "clinvec/ehr_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <set>

#include "clinvec/error.hpp"

namespace clinvec {

namespace {

constexpr std::size_t kMaxDiagnostics = 20;

class Diagnostics {
 public:
  explicit Diagnostics(std::string source) : source_(std::move(source)) {}

  void Add(std::size_t line, const std::string& message) {
    ++count_;
    if (messages_.size() < kMaxDiagnostics) {
      messages_.push_back(source_ + ": line " + std::to_string(line) + ": " + message);
    }
  }

  void ThrowIfAny() const {
    if (count_ == 0) return;
    std::string what = std::to_string(count_) + " invalid row(s)";
    for (const auto& m : messages_) what += "\n  " + m;
    if (count_ > messages_.size()) what += "\n  ...";
    throw DataError(what);
  }

 private:
  std::string source_;
  std::vector<std::string> messages_;
  std::size_t count_ = 0;
};

bool ParseInt(const std::string& text, int& out) {
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, out);
  return res.ec == std::errc{} && res.ptr == end && !text.empty();
}

void ExpectHeader(std::istream& in, const std::string& expected, const std::string& source) {
  std::string header;
  if (!std::getline(in, header)) throw DataError(source + ": empty file");
  if (!header.empty() && header.back() == '\r') header.pop_back();
  if (header != expected) {
    throw DataError(source + ": line 1: expected header '" + expected + "', got '" + header + "'");
  }
}

struct AdmissionBuilder {
  std::map<int, ClinicalTerm> diagnoses;
  std::vector<ClinicalTerm> procedures;
  std::size_t first_line = 0;
};

std::ifstream OpenOrThrow(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

}  // namespace

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

std::vector<PatientRecord> ParseAdmissions(std::istream& in, const std::string& source) {
  ExpectHeader(in, "patient_id,admit_date,position,system,code", source);
  Diagnostics diag(source);
  std::map<std::string, std::map<Date, AdmissionBuilder>> grouped;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = SplitCsvLine(line);
    if (fields.size() != 5) {
      diag.Add(line_no, "expected 5 fields, got " + std::to_string(fields.size()));
      continue;
    }
    const auto& [patient_id, date_text, position, system_text, code] =
        std::tie(fields[0], fields[1], fields[2], fields[3], fields[4]);
    if (patient_id.empty()) {
      diag.Add(line_no, "empty patient_id");
      continue;
    }
    const auto date = Date::Parse(date_text);
    if (!date) {
      diag.Add(line_no, "malformed date '" + date_text + "'");
      continue;
    }
    CodeSystem system;
    try {
      system = ParseCodeSystem(system_text);
    } catch (const DataError&) {
      diag.Add(line_no, "unknown code system '" + system_text + "'");
      continue;
    }
    if (!IsValidCode(code)) {
      diag.Add(line_no, "invalid code '" + code + "'");
      continue;
    }
    auto& builder = grouped[patient_id][*date];
    if (builder.first_line == 0) builder.first_line = line_no;
    if (position == "P") {
      if (system != CodeSystem::kOpcs4) {
        diag.Add(line_no, "procedure row must use OPCS4, got " + system_text);
        continue;
      }
      builder.procedures.push_back(ClinicalTerm{system, code});
      continue;
    }
    int pos = -1;
    if (!ParseInt(position, pos) || pos < 0) {
      diag.Add(line_no, "invalid position '" + position + "'");
      continue;
    }
    if (pos >= static_cast<int>(kMaxDiagnoses)) {
      diag.Add(line_no, "position " + position + " exceeds 15 (primary + up to 15 secondary)");
      continue;
    }
    if (system == CodeSystem::kOpcs4) {
      diag.Add(line_no, "diagnosis row must use ICD9 or ICD10, got OPCS4");
      continue;
    }
    if (!builder.diagnoses.emplace(pos, ClinicalTerm{system, code}).second) {
      diag.Add(line_no, "duplicate row for (" + patient_id + ", " + date_text + ", position " +
                            position + ")");
    }
  }
  for (const auto& [patient_id, by_date] : grouped) {
    for (const auto& [date, builder] : by_date) {
      if (!builder.diagnoses.empty() && builder.diagnoses.begin()->first != 0) {
        diag.Add(builder.first_line, "admission of " + patient_id + " on " + date.ToString() +
                                         " has no primary diagnosis (position 0)");
      } else if (builder.diagnoses.empty()) {
        diag.Add(builder.first_line, "admission of " + patient_id + " on " + date.ToString() +
                                         " has procedures but no diagnoses");
      }
    }
  }
  diag.ThrowIfAny();

  std::vector<PatientRecord> records;
  records.reserve(grouped.size());
  for (auto& [patient_id, by_date] : grouped) {
    PatientRecord record;
    record.patient_id = patient_id;
    for (auto& [date, builder] : by_date) {
      Admission adm;
      adm.patient_id = patient_id;
      adm.admit_date = date;
      for (auto& [pos, term] : builder.diagnoses) adm.diagnoses.push_back(std::move(term));
      adm.procedures = std::move(builder.procedures);
      record.admissions.push_back(std::move(adm));
    }
    records.push_back(std::move(record));
  }
  return records;
}

std::vector<PatientRecord> ParseAdmissions(const std::filesystem::path& path) {
  auto in = OpenOrThrow(path);
  return ParseAdmissions(in, path.string());
}

void WriteAdmissions(std::ostream& out, const std::vector<PatientRecord>& records) {
  out << "patient_id,admit_date,position,system,code\n";
  for (const auto& record : records) {
    for (const auto& adm : record.admissions) {
      const std::string date = adm.admit_date.ToString();
      for (std::size_t pos = 0; pos < adm.diagnoses.size(); ++pos) {
        const auto& t = adm.diagnoses[pos];
        out << record.patient_id << ',' << date << ',' << pos << ','
            << CodeSystemName(t.system) << ',' << t.code << '\n';
      }
      for (const auto& t : adm.procedures) {
        out << record.patient_id << ',' << date << ",P," << CodeSystemName(t.system) << ','
            << t.code << '\n';
      }
    }
  }
}

std::vector<PatientRecord> ParsePatients(std::istream& in, const std::string& source) {
  ExpectHeader(in, "patient_id,sex,birth_year,recruitment_year,assessment_centre", source);
  Diagnostics diag(source);
  std::vector<PatientRecord> records;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = SplitCsvLine(line);
    if (fields.size() != 5) {
      diag.Add(line_no, "expected 5 fields, got " + std::to_string(fields.size()));
      continue;
    }
    PatientRecord record;
    record.patient_id = fields[0];
    if (record.patient_id.empty()) {
      diag.Add(line_no, "empty patient_id");
      continue;
    }
    if (fields[1] != "F" && fields[1] != "M") {
      diag.Add(line_no, "unknown sex '" + fields[1] + "'");
      continue;
    }
    record.sex = ParseSex(fields[1]);
    if (!ParseInt(fields[2], record.birth_year) || !ParseInt(fields[3], record.recruitment_year)) {
      diag.Add(line_no, "malformed year");
      continue;
    }
    record.assessment_centre = fields[4];
    if (!seen.insert(record.patient_id).second) {
      diag.Add(line_no, "duplicate patient_id '" + record.patient_id + "'");
      continue;
    }
    records.push_back(std::move(record));
  }
  diag.ThrowIfAny();
  std::sort(records.begin(), records.end(),
            [](const PatientRecord& a, const PatientRecord& b) { return a.patient_id < b.patient_id; });
  return records;
}

std::vector<PatientRecord> ParsePatients(const std::filesystem::path& path) {
  auto in = OpenOrThrow(path);
  return ParsePatients(in, path.string());
}

void WritePatients(std::ostream& out, const std::vector<PatientRecord>& records) {
  out << "patient_id,sex,birth_year,recruitment_year,assessment_centre\n";
  for (const auto& r : records) {
    out << r.patient_id << ',' << SexName(r.sex) << ',' << r.birth_year << ','
        << r.recruitment_year << ',' << r.assessment_centre << '\n';
  }
}

std::vector<PatientRecord> JoinRecords(std::vector<PatientRecord> patients,
                                       std::vector<PatientRecord> admissions) {
  std::map<std::string, std::size_t> index;
  for (std::size_t k = 0; k < patients.size(); ++k) index[patients[k].patient_id] = k;
  for (auto& adm_record : admissions) {
    const auto it = index.find(adm_record.patient_id);
    if (it == index.end()) {
      throw DataError("admissions reference unknown patient '" + adm_record.patient_id + "'");
    }
    auto& target = patients[it->second].admissions;
    for (auto& adm : adm_record.admissions) target.push_back(std::move(adm));
    SortAdmissions(patients[it->second]);
  }
  return patients;
}

std::vector<PatientRecord> LoadRecords(const std::filesystem::path& patients_path,
                                       const std::filesystem::path& admissions_path) {
  return JoinRecords(ParsePatients(patients_path), ParseAdmissions(admissions_path));
}

}  // namespace clinvec
