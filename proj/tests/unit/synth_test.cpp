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

#include <doctest.h>

#include <map>
#include <sstream>

#include "clinvec/config.hpp"
#include "clinvec/ehr_io.hpp"
#include "clinvec/error.hpp"
#include "clinvec/synth.hpp"
#include "support/test_support.hpp"

using namespace clinvec;
using namespace clinvec::testing;

namespace {

std::string Dump(const SynthCohort& cohort) {
  std::ostringstream out;
  WritePatients(out, cohort.records);
  WriteAdmissions(out, cohort.records);
  WriteTruth(out, cohort.truth);
  return out.str();
}

std::vector<std::string> Fields(const std::string& line) {
  std::vector<std::string> out(1);
  for (char ch : line) {
    if (ch == ',') {
      out.emplace_back();
    } else {
      out.back() += ch;
    }
  }
  return out;
}

struct Tally {
  long case_adm = 0, case_hits = 0, control_adm = 0, control_hits = 0;
};

// Counts straight from the written CSV text; shares no code with the parser.
Tally CountFromText(const std::string& admissions_csv, const std::string& truth_csv,
                    const std::string& code) {
  std::map<std::string, std::pair<int, std::string>> truth;  // id -> (role, onset)
  std::istringstream tin(truth_csv);
  std::string line;
  std::getline(tin, line);
  while (std::getline(tin, line)) {
    const auto f = Fields(line);
    const int role = f[1] == "1" ? 1 : (f[2] == "1" ? 2 : 0);
    truth[f[0]] = {role, f[3]};
  }
  std::map<std::pair<std::string, std::string>, bool> admissions;
  std::istringstream ain(admissions_csv);
  std::getline(ain, line);
  while (std::getline(ain, line)) {
    const auto f = Fields(line);
    bool& hit = admissions[{f[0], f[1]}];
    if (f[2] != "P" && f[3] == "ICD10" && f[4] == code) hit = true;
  }
  Tally t;
  for (const auto& [key, hit] : admissions) {
    const auto& [role, onset] = truth.at(key.first);
    if (role == 1 && key.second < onset) {
      ++t.case_adm;
      t.case_hits += hit;
    } else if (role == 0) {
      ++t.control_adm;
      t.control_hits += hit;
    }
  }
  return t;
}

Tally CountFromRecords(const SynthCohort& cohort, const ClinicalTerm& term) {
  Tally t;
  for (std::size_t k = 0; k < cohort.records.size(); ++k) {
    const auto& truth = cohort.truth[k];
    for (const auto& a : cohort.records[k].admissions) {
      const bool hit =
          std::find(a.diagnoses.begin(), a.diagnoses.end(), term) != a.diagnoses.end();
      if (truth.future_case && a.admit_date < *truth.onset) {
        ++t.case_adm;
        t.case_hits += hit;
      } else if (!truth.future_case && !truth.prevalent) {
        ++t.control_adm;
        t.control_hits += hit;
      }
    }
  }
  return t;
}

}  // namespace

TEST_SUITE("synth") {
  TEST_CASE("zero patients gives an empty cohort") {
    SynthConfig cfg;
    cfg.n_patients = 0;
    const auto c = GenerateSyntheticCohort(cfg);
    CHECK(c.records.empty());
    CHECK(c.truth.empty());
  }

  TEST_CASE("same seed gives byte-identical output and a new seed differs") {
    SynthConfig cfg;
    cfg.n_patients = 300;
    cfg.seed = 41;
    const std::string a = Dump(GenerateSyntheticCohort(cfg));
    CHECK(a == Dump(GenerateSyntheticCohort(cfg)));
    cfg.seed = 42;
    CHECK(a != Dump(GenerateSyntheticCohort(cfg)));
  }

  TEST_CASE("generated records satisfy the admission invariants") {
    SynthConfig cfg;
    cfg.n_patients = 500;
    cfg.secondary_mean = 12.0;
    cfg.planted = {{T("ICD10:R01"), 5.0}, {T("ICD10:R02"), 5.0}};
    const auto c = GenerateSyntheticCohort(cfg);
    for (const auto& r : c.records) {
      for (std::size_t k = 0; k < r.admissions.size(); ++k) {
        CHECK_NOTHROW(ValidateAdmission(r.admissions[k]));
        if (k > 0) CHECK(r.admissions[k - 1].admit_date < r.admissions[k].admit_date);
      }
    }
  }

  TEST_CASE("planted marker is enriched before onset; counts agree with a raw text count") {
    SynthConfig cfg;
    cfg.n_patients = 10000;
    cfg.seed = 7;
    cfg.planted = {{T("ICD10:I48"), 3.0}};
    const auto cohort = GenerateSyntheticCohort(cfg);
    std::ostringstream adm, truth;
    WriteAdmissions(adm, cohort.records);
    WriteTruth(truth, cohort.truth);

    const Tally text = CountFromText(adm.str(), truth.str(), "I48");
    const Tally lib = CountFromRecords(cohort, T("ICD10:I48"));
    CHECK(text.case_adm == lib.case_adm);
    CHECK(text.case_hits == lib.case_hits);
    CHECK(text.control_adm == lib.control_adm);
    CHECK(text.control_hits == lib.control_hits);

    REQUIRE(lib.case_adm > 0);
    REQUIRE(lib.control_hits > 0);
    const double case_rate = static_cast<double>(lib.case_hits) / lib.case_adm;
    const double control_rate = static_cast<double>(lib.control_hits) / lib.control_adm;
    CHECK(case_rate > control_rate);
    CHECK(case_rate / control_rate == doctest::Approx(3.0).epsilon(0.2));
  }

  TEST_CASE("planted code outside the configured vocabulary is rejected") {
    SynthConfig cfg;
    cfg.n_patients = 10;
    cfg.planted = {{ClinicalTerm{CodeSystem::kIcd10, "I48X"}, 3.0}};
    CHECK_THROWS_AS(GenerateSyntheticCohort(cfg), DataError);
    cfg.planted = {{T("OPCS4:K40"), 3.0}};
    CHECK_THROWS_AS(GenerateSyntheticCohort(cfg), DataError);
  }

  TEST_CASE("config keys map onto the generator and unknown keys are named") {
    const auto cfg = Config::Parse(
        "synth.n_patients = 25\nsynth.planted = ICD10:R01=4, ICD10:R02=2.5\n");
    const auto s = SynthConfigFromConfig(cfg, 3);
    CHECK(s.n_patients == 25);
    CHECK(s.seed == 3);
    REQUIRE(s.planted.size() == 2);
    CHECK(s.planted[1].term == T("ICD10:R02"));
    CHECK(s.planted[1].relative_risk == 2.5);
    try {
      SynthConfigFromConfig(Config::Parse("synth.n_patient = 25\n"), 3);
      FAIL("expected UsageError");
    } catch (const UsageError& e) {
      CHECK(std::string(e.what()).find("synth.n_patient") != std::string::npos);
    }
    CHECK_THROWS_AS(SynthConfigFromConfig(Config::Parse("synth.case_fraction = 1.5\n"), 1),
                    UsageError);
  }
}
