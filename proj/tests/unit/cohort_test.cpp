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
#include <set>
#include <sstream>

#include "clinvec/cohort.hpp"
#include "clinvec/error.hpp"
#include "support/test_support.hpp"

using namespace clinvec;
using namespace clinvec::testing;

namespace {

const CodeList kHf = {T("ICD10:I50"), T("ICD9:428")};

CaseIdentification Identify(const std::vector<PatientRecord>& records,
                            const CodeList& codes = kHf) {
  return IdentifyCases(records, codes, AgeRange{});
}

// Case P0 (onset 2012-03-01) plus `pool` stratum-matched non-cases.
std::vector<PatientRecord> Stratum(int pool) {
  std::vector<PatientRecord> records;
  records.push_back(Patient("P0", Sex::kMale, 1950, 2008, "C01",
                            {Adm("P0", "2009-01-01", {"ICD10:J45"}),
                             Adm("P0", "2012-03-01", {"ICD10:I10", "ICD10:I50"})}));
  for (int k = 1; k <= pool; ++k) {
    const std::string id = "Q" + std::to_string(k);
    records.push_back(Patient(id, Sex::kMale, 1950, 2008, "C01",
                              {Adm(id, "2010-06-01", {"ICD10:E11"})}));
  }
  // Same stratum except sex; never eligible for P0.
  records.push_back(Patient("Z1", Sex::kFemale, 1950, 2008, "C01",
                            {Adm("Z1", "2010-06-01", {"ICD10:E11"})}));
  return records;
}

}  // namespace

TEST_SUITE("cohort") {
  TEST_CASE("case-defining code at any diagnosis position counts") {
    const auto records = std::vector<PatientRecord>{Patient(
        "P1", Sex::kFemale, 1950, 2008, "C01",
        {Adm("P1", "2010-05-01", {"ICD10:J45", "ICD10:E11", "ICD10:I48", "ICD10:I50"})})};
    const auto ids = Identify(records);
    REQUIRE(ids.cases.size() == 1);
    CHECK(ids.cases[0].onset == D("2010-05-01"));
  }

  TEST_CASE("age bounds are inclusive and admissions outside them do not count") {
    auto at_age = [](int age) {
      const std::string date = std::to_string(1950 + age) + "-06-01";
      return std::vector<PatientRecord>{
          Patient("P1", Sex::kFemale, 1950, 1980, "C01", {Adm("P1", date, {"ICD10:I50"})})};
    };
    CHECK(Identify(at_age(39)).cases.empty());
    CHECK(Identify(at_age(40)).cases.size() == 1);
    CHECK(Identify(at_age(85)).cases.size() == 1);
    CHECK(Identify(at_age(86)).cases.empty());
  }

  TEST_CASE("onset is the earliest eligible admission") {
    const auto records = std::vector<PatientRecord>{
        Patient("P1", Sex::kFemale, 1950, 2008, "C01",
                {Adm("P1", "2010-02-01", {"ICD10:I50"}), Adm("P1", "2012-05-01", {"ICD10:I50"})})};
    CHECK(Identify(records).cases.at(0).onset == D("2010-02-01"));
  }

  TEST_CASE("onset on or before cohort entry is a prevalent exclusion") {
    const auto records = std::vector<PatientRecord>{
        Patient("P1", Sex::kFemale, 1950, 2008, "C01", {Adm("P1", "2008-01-01", {"ICD10:I50"})}),
        Patient("P2", Sex::kFemale, 1950, 2008, "C01", {Adm("P2", "2008-01-02", {"ICD10:I50"})})};
    const auto ids = Identify(records);
    REQUIRE(ids.prevalent.size() == 1);
    CHECK(ids.prevalent[0].patient_id == "P1");
    REQUIRE(ids.cases.size() == 1);
    CHECK(ids.cases[0].patient_id == "P2");
  }

  TEST_CASE("enlarging the code list never removes a case") {
    Rng rng(17);
    for (int trial = 0; trial < 30; ++trial) {
      const auto records = RandomRecords(rng, 40);
      const auto small = Identify(records, {T("ICD10:I50")});
      const auto large = Identify(records, {T("ICD10:I50"), T("ICD10:I48")});
      std::set<std::string> in_large;
      for (const auto& c : large.cases) in_large.insert(c.patient_id);
      for (const auto& e : large.prevalent) in_large.insert(e.patient_id);
      for (const auto& c : small.cases) CHECK(in_large.count(c.patient_id) == 1);
    }
  }

  TEST_CASE("a full stratum yields four matched controls") {
    const auto records = Stratum(10);
    const auto a = MatchCaseControls(records, Identify(records), kHf, MatchOptions{4, 3});
    REQUIRE(a.controls.size() == 4);
    CHECK(a.under_matched.empty());
    for (const auto& c : a.controls) {
      CHECK(c.patient_id[0] == 'Q');
      CHECK(c.index_date == D("2012-03-01"));
      CHECK(c.matched_case_id == "P0");
    }
  }

  TEST_CASE("a short stratum keeps what exists and flags the case") {
    const auto records = Stratum(2);
    const auto a = MatchCaseControls(records, Identify(records), kHf, MatchOptions{4, 3});
    CHECK(a.controls.size() == 2);
    REQUIRE(a.under_matched.size() == 1);
    CHECK(a.under_matched[0] == "P0");
  }

  TEST_CASE("matching is deterministic per seed and uniform within the stratum") {
    const auto records = Stratum(10);
    const auto ids = Identify(records);
    auto chosen = [&](std::uint64_t seed) {
      std::vector<std::string> out;
      for (const auto& c : MatchCaseControls(records, ids, kHf, MatchOptions{4, seed}).controls) {
        out.push_back(c.patient_id);
      }
      return out;
    };
    CHECK(chosen(5) == chosen(5));
    std::map<std::string, int> hits;
    for (std::uint64_t seed = 0; seed < 2000; ++seed) {
      for (const auto& id : chosen(seed)) ++hits[id];
    }
    REQUIRE(hits.size() == 10);
    // Each candidate is drawn with probability 4/10.
    for (const auto& [id, n] : hits) CHECK(n == doctest::Approx(800).epsilon(0.12));
  }

  TEST_CASE("controls with an earlier case-defining code are ineligible") {
    auto records = Stratum(3);
    // Q1 carries I50 at age 39: not a case, but coded before P0's onset.
    records[1].admissions.push_back(Adm("Q1", "1989-06-01", {"ICD10:I50"}));
    SortAdmissions(records[1]);
    const auto a = MatchCaseControls(records, Identify(records), kHf, MatchOptions{4, 1});
    for (const auto& c : a.controls) CHECK(c.patient_id != "Q1");
    CHECK(a.controls.size() == 2);
  }

  TEST_CASE("assignment invariants hold on random cohorts") {
    Rng rng(8);
    for (int trial = 0; trial < 20; ++trial) {
      auto records = RandomRecords(rng, 120);
      const auto ids = Identify(records);
      const auto a = MatchCaseControls(records, ids, kHf, MatchOptions{4, rng()});
      std::map<std::string, const PatientRecord*> by_id;
      for (const auto& r : records) by_id[r.patient_id] = &r;
      std::map<std::string, Date> onset;
      for (const auto& c : a.cases) onset[c.patient_id] = c.onset;
      std::set<std::string> used;
      std::map<std::string, int> per_case;
      for (const auto& c : a.controls) {
        CHECK(onset.count(c.patient_id) == 0);
        CHECK(used.insert(c.patient_id).second);
        CHECK(c.index_date == onset.at(c.matched_case_id));
        ++per_case[c.matched_case_id];
        const auto& x = *by_id.at(c.patient_id);
        const auto& y = *by_id.at(c.matched_case_id);
        CHECK(x.assessment_centre == y.assessment_centre);
        CHECK(x.recruitment_year == y.recruitment_year);
        CHECK(x.sex == y.sex);
        CHECK(x.birth_year == y.birth_year);
      }
      for (const auto& [id, n] : per_case) CHECK(n <= 4);
    }
  }

  TEST_CASE("observation window boundary is strict and clamps month ends") {
    const auto r = Patient("P1", Sex::kMale, 1950, 2008, "C01",
                           {Adm("P1", "2014-06-30", {"ICD10:A01"}),
                            Adm("P1", "2014-07-01", {"ICD10:A02"})});
    const auto w = ObservationWindow(r, D("2015-01-01"));
    REQUIRE(w.size() == 1);
    CHECK(w[0].admit_date == D("2014-06-30"));

    const auto feb = Patient("P2", Sex::kMale, 1950, 2008, "C01",
                             {Adm("P2", "2015-02-27", {"ICD10:A01"}),
                              Adm("P2", "2015-02-28", {"ICD10:A02"})});
    const auto w2 = ObservationWindow(feb, D("2015-08-31"));
    REQUIRE(w2.size() == 1);
    CHECK(w2[0].admit_date == D("2015-02-27"));

    CHECK(ObservationWindow(Patient("P3", Sex::kMale, 1950, 2008, "C01"), D("2015-01-01")).empty());
  }

  TEST_CASE("observation window is always a prefix") {
    Rng rng(2);
    for (int trial = 0; trial < 50; ++trial) {
      for (const auto& r : RandomRecords(rng, 10)) {
        const Date index = Date::FromDaysSinceEpoch(D("1995-01-01").DaysSinceEpoch() +
                                                    static_cast<std::int64_t>(rng.Below(6000)));
        const auto w = ObservationWindow(r, index);
        CHECK(w.data() == r.admissions.data());
        const Date cutoff = index.AddMonths(-6);
        for (std::size_t k = 0; k < r.admissions.size(); ++k) {
          CHECK((k < w.size()) == (r.admissions[k].admit_date < cutoff));
        }
      }
    }
  }

  TEST_CASE("cohort file round-trips") {
    const auto records = Stratum(6);
    const auto members =
        CohortMembers(MatchCaseControls(records, Identify(records), kHf, MatchOptions{4, 9}));
    REQUIRE(members.size() == 5);
    CHECK(members[0].is_case);
    CHECK(members[0].label == 1);
    std::ostringstream out;
    WriteCohort(out, members);
    std::istringstream in(out.str());
    const auto back = ReadCohort(in);
    REQUIRE(back.size() == members.size());
    for (std::size_t k = 0; k < back.size(); ++k) {
      CHECK(back[k].patient_id == members[k].patient_id);
      CHECK(back[k].is_case == members[k].is_case);
      CHECK(back[k].matched_case_id == members[k].matched_case_id);
      CHECK(back[k].index_date == members[k].index_date);
      CHECK(back[k].label == members[k].label);
    }
    std::ostringstream again;
    WriteCohort(again, back);
    CHECK(again.str() == out.str());
  }
}
