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

#include "clinvec/synth.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>

#include "clinvec/error.hpp"
#include "clinvec/rng.hpp"

namespace clinvec {

namespace {

constexpr char kLetters[] = "ABCDEFGHIJKLMNOPQRSTVWXYZ";  // no U
constexpr int kLetterCount = 25;

// Size of each system's synthetic code space and a multiplier coprime to it,
// so enumeration visits the space in a scattered but fixed order.
struct CodeSpace {
  int size;
  int stride;
};

CodeSpace SpaceOf(CodeSystem system) {
  switch (system) {
    case CodeSystem::kIcd9:
      return {999, 379};
    case CodeSystem::kIcd10:
      return {kLetterCount * 100, 1021};
    case CodeSystem::kOpcs4:
      return {kLetterCount * 100, 1223};
  }
  return {0, 1};
}

std::string CodeAt(CodeSystem system, int index) {
  const CodeSpace space = SpaceOf(system);
  const int v = static_cast<int>((static_cast<long long>(index) * space.stride) % space.size);
  char buf[8];
  if (system == CodeSystem::kIcd9) {
    std::snprintf(buf, sizeof(buf), "%03d", v + 1);
  } else {
    std::snprintf(buf, sizeof(buf), "%c%02d", kLetters[v / 100], v % 100);
  }
  return buf;
}

bool InCodeSpace(const ClinicalTerm& term) {
  const auto& c = term.code;
  const bool digits2 = c.size() == 3 && std::isdigit(static_cast<unsigned char>(c[1])) &&
                       std::isdigit(static_cast<unsigned char>(c[2]));
  switch (term.system) {
    case CodeSystem::kIcd9:
      return c.size() == 3 && std::all_of(c.begin(), c.end(), ::isdigit) && c != "000";
    case CodeSystem::kIcd10:
    case CodeSystem::kOpcs4:
      return digits2 && c[0] >= 'A' && c[0] <= 'Z' && c[0] != 'U';
  }
  return false;
}

int VocabSize(const SynthConfig& cfg, CodeSystem system) {
  switch (system) {
    case CodeSystem::kIcd9:
      return cfg.icd9_vocab;
    case CodeSystem::kIcd10:
      return cfg.icd10_vocab;
    case CodeSystem::kOpcs4:
      return cfg.opcs4_vocab;
  }
  return 0;
}

std::vector<ClinicalTerm> ReservedTerms(const SynthConfig& cfg, CodeSystem system) {
  std::vector<ClinicalTerm> reserved;
  auto add = [&](const ClinicalTerm& t) {
    if (t.system == system && std::find(reserved.begin(), reserved.end(), t) == reserved.end()) {
      reserved.push_back(t);
    }
  };
  for (const auto& t : cfg.case_codes) add(t);
  for (const auto& p : cfg.planted) add(p.term);
  return reserved;
}

// Zipf sampler over ranks 0..n-1.
class ZipfTable {
 public:
  ZipfTable(std::size_t n, double exponent) : cumulative_(n) {
    double total = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      total += 1.0 / std::pow(static_cast<double>(r + 1), exponent);
      cumulative_[r] = total;
    }
    for (auto& c : cumulative_) c /= total;
  }
  std::size_t Sample(Rng& rng) const {
    const double u = rng.Uniform();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return std::min(static_cast<std::size_t>(it - cumulative_.begin()), cumulative_.size() - 1);
  }
  bool empty() const { return cumulative_.empty(); }

 private:
  std::vector<double> cumulative_;
};

struct SystemPool {
  std::vector<ClinicalTerm> filler;
  ZipfTable zipf;
};

SystemPool MakePool(const SynthConfig& cfg, CodeSystem system) {
  auto vocab = SynthVocabulary(cfg, system);
  const std::size_t reserved = ReservedTerms(cfg, system).size();
  std::vector<ClinicalTerm> filler(vocab.begin() + static_cast<std::ptrdiff_t>(reserved),
                                   vocab.end());
  ZipfTable zipf(filler.size(), cfg.zipf_exponent);
  return {std::move(filler), std::move(zipf)};
}

const ClinicalTerm& CaseCodeFor(const SynthConfig& cfg, CodeSystem system) {
  for (const auto& t : cfg.case_codes) {
    if (t.system == system) return t;
  }
  return cfg.case_codes.front();
}

Date RandomDate(Rng& rng, Date lo, Date hi) {
  return Date::FromDaysSinceEpoch(rng.Between(lo.DaysSinceEpoch(), hi.DaysSinceEpoch()));
}

}  // namespace

void SynthConfig::Validate() const {
  auto fail = [](const std::string& what) { throw UsageError("synth: " + what); };
  if (n_patients < 0) fail("n_patients must be >= 0");
  if (icd10_vocab <= 0 || icd9_vocab <= 0 || opcs4_vocab <= 0) fail("vocab sizes must be positive");
  if (icd10_vocab > SpaceOf(CodeSystem::kIcd10).size ||
      icd9_vocab > SpaceOf(CodeSystem::kIcd9).size ||
      opcs4_vocab > SpaceOf(CodeSystem::kOpcs4).size) {
    fail("vocab size exceeds the synthetic code space");
  }
  if (!(case_fraction > 0.0 && case_fraction < 1.0)) fail("case_fraction must be in (0,1)");
  if (prevalent_fraction < 0.0 || case_fraction + prevalent_fraction >= 1.0) {
    fail("prevalent_fraction must be >= 0 with case_fraction + prevalent_fraction < 1");
  }
  if (admissions_mean < 0 || secondary_mean < 0 || procedures_mean < 0) {
    fail("means must be non-negative");
  }
  if (!(planted_base_rate > 0.0 && planted_base_rate <= 1.0)) {
    fail("planted_base_rate must be in (0,1]");
  }
  for (const auto& p : planted) {
    if (!(p.relative_risk > 0.0)) fail("planted relative risk must be positive");
  }
  if (case_codes.empty()) fail("case_codes must not be empty");
  if (start_year > end_year) fail("start_year after end_year");
  if (birth_year_min > birth_year_max) fail("birth_year_min after birth_year_max");
  if (recruitment_year_min > recruitment_year_max) fail("recruitment years inverted");
  if (n_centres <= 0) fail("n_centres must be positive");
}

SynthConfig SynthConfigFromConfig(const Config& cfg, std::uint64_t seed) {
  static const std::set<std::string> kKeys = {
      "synth.n_patients",        "synth.icd10_vocab",          "synth.icd9_vocab",
      "synth.opcs4_vocab",       "synth.admissions_mean",      "synth.secondary_mean",
      "synth.procedures_mean",   "synth.zipf_exponent",        "synth.case_fraction",
      "synth.prevalent_fraction", "synth.case_codes",          "synth.planted",
      "synth.planted_base_rate", "synth.start_year",           "synth.end_year",
      "synth.icd9_until_year",   "synth.n_centres",            "synth.birth_year_min",
      "synth.birth_year_max",    "synth.recruitment_year_min", "synth.recruitment_year_max"};
  for (const auto& [key, value] : cfg.values()) {
    if (key.rfind("synth.", 0) == 0 && kKeys.count(key) == 0) {
      throw UsageError("unknown config key '" + key + "'");
    }
  }
  SynthConfig s;
  s.n_patients = static_cast<int>(cfg.GetInt("synth.n_patients", s.n_patients));
  s.icd10_vocab = static_cast<int>(cfg.GetInt("synth.icd10_vocab", s.icd10_vocab));
  s.icd9_vocab = static_cast<int>(cfg.GetInt("synth.icd9_vocab", s.icd9_vocab));
  s.opcs4_vocab = static_cast<int>(cfg.GetInt("synth.opcs4_vocab", s.opcs4_vocab));
  s.admissions_mean = cfg.GetDouble("synth.admissions_mean", s.admissions_mean);
  s.secondary_mean = cfg.GetDouble("synth.secondary_mean", s.secondary_mean);
  s.procedures_mean = cfg.GetDouble("synth.procedures_mean", s.procedures_mean);
  s.zipf_exponent = cfg.GetDouble("synth.zipf_exponent", s.zipf_exponent);
  s.case_fraction = cfg.GetDouble("synth.case_fraction", s.case_fraction);
  s.prevalent_fraction = cfg.GetDouble("synth.prevalent_fraction", s.prevalent_fraction);
  if (cfg.Has("synth.case_codes")) {
    s.case_codes.clear();
    for (const auto& tok : cfg.GetList("synth.case_codes", {})) {
      s.case_codes.push_back(ClinicalTerm::FromToken(tok));
    }
  }
  // synth.planted = ICD10:R01=4, ICD10:R02=4
  for (const auto& item : cfg.GetList("synth.planted", {})) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw UsageError("synth.planted entry '" + item + "' is not TERM=RELATIVE_RISK");
    }
    PlantedSignal p;
    p.term = ClinicalTerm::FromToken(item.substr(0, eq));
    try {
      p.relative_risk = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw UsageError("synth.planted entry '" + item + "': bad relative risk");
    }
    s.planted.push_back(p);
  }
  s.planted_base_rate = cfg.GetDouble("synth.planted_base_rate", s.planted_base_rate);
  s.start_year = static_cast<int>(cfg.GetInt("synth.start_year", s.start_year));
  s.end_year = static_cast<int>(cfg.GetInt("synth.end_year", s.end_year));
  s.icd9_until_year = static_cast<int>(cfg.GetInt("synth.icd9_until_year", s.icd9_until_year));
  s.n_centres = static_cast<int>(cfg.GetInt("synth.n_centres", s.n_centres));
  s.birth_year_min = static_cast<int>(cfg.GetInt("synth.birth_year_min", s.birth_year_min));
  s.birth_year_max = static_cast<int>(cfg.GetInt("synth.birth_year_max", s.birth_year_max));
  s.recruitment_year_min =
      static_cast<int>(cfg.GetInt("synth.recruitment_year_min", s.recruitment_year_min));
  s.recruitment_year_max =
      static_cast<int>(cfg.GetInt("synth.recruitment_year_max", s.recruitment_year_max));
  s.seed = seed;
  s.Validate();
  return s;
}

std::vector<ClinicalTerm> SynthVocabulary(const SynthConfig& cfg, CodeSystem system) {
  auto vocab = ReservedTerms(cfg, system);
  const int size = VocabSize(cfg, system);
  for (const auto& t : vocab) {
    if (!InCodeSpace(t)) {
      throw DataError("term " + t.Token() + " is outside the configured " +
                      std::string(CodeSystemName(system)) + " vocabulary");
    }
  }
  if (static_cast<int>(vocab.size()) > size) {
    throw DataError("configured " + std::string(CodeSystemName(system)) +
                    " vocabulary is smaller than its reserved terms");
  }
  std::set<std::string> taken;
  for (const auto& t : vocab) taken.insert(t.code);
  for (int k = 0; static_cast<int>(vocab.size()) < size; ++k) {
    std::string code = CodeAt(system, k);
    if (taken.insert(code).second) vocab.push_back(ClinicalTerm{system, std::move(code)});
  }
  return vocab;
}

SynthCohort GenerateSyntheticCohort(const SynthConfig& cfg) {
  cfg.Validate();
  // Validates reserved terms for every system up front.
  const SystemPool icd9 = MakePool(cfg, CodeSystem::kIcd9);
  const SystemPool icd10 = MakePool(cfg, CodeSystem::kIcd10);
  const SystemPool opcs4 = MakePool(cfg, CodeSystem::kOpcs4);
  for (const auto& p : cfg.planted) {
    if (p.term.system == CodeSystem::kOpcs4) {
      throw DataError("planted term " + p.term.Token() + " must be a diagnosis code");
    }
  }

  Rng rng(cfg.seed);
  const Date start = Date::FromYmd(cfg.start_year, 1, 1);
  const Date end = Date::FromYmd(cfg.end_year, 12, 31);

  SynthCohort out;
  out.records.reserve(static_cast<std::size_t>(cfg.n_patients));
  for (int n = 0; n < cfg.n_patients; ++n) {
    PatientRecord rec;
    char id[16];
    std::snprintf(id, sizeof(id), "P%06d", n + 1);
    rec.patient_id = id;
    rec.sex = rng.Bernoulli(0.5) ? Sex::kFemale : Sex::kMale;
    rec.birth_year = static_cast<int>(rng.Between(cfg.birth_year_min, cfg.birth_year_max));
    rec.recruitment_year =
        static_cast<int>(rng.Between(cfg.recruitment_year_min, cfg.recruitment_year_max));
    char centre[16];
    std::snprintf(centre, sizeof(centre), "C%02d",
                  static_cast<int>(rng.Below(static_cast<std::uint64_t>(cfg.n_centres))) + 1);
    rec.assessment_centre = centre;

    TruthRow truth;
    truth.patient_id = rec.patient_id;
    const double role = rng.Uniform();
    const int age_lo_year = rec.birth_year + 40;
    const int age_hi_year = rec.birth_year + 85;
    if (role < cfg.case_fraction) {
      const int lo = std::max({rec.recruitment_year + 1, age_lo_year, cfg.start_year});
      const int hi = std::min(cfg.end_year, age_hi_year);
      if (lo <= hi) {
        truth.future_case = true;
        truth.onset = RandomDate(rng, Date::FromYmd(lo, 1, 1), Date::FromYmd(hi, 12, 31));
      }
    } else if (role < cfg.case_fraction + cfg.prevalent_fraction) {
      const int lo = std::max(age_lo_year, cfg.start_year);
      const int hi = std::min({rec.recruitment_year - 1, age_hi_year, cfg.end_year});
      if (lo <= hi) {
        truth.prevalent = true;
        truth.onset = RandomDate(rng, Date::FromYmd(lo, 1, 1), Date::FromYmd(hi, 12, 31));
      }
    }

    // Distinct admission dates; one admission per patient-day.
    const int n_adm = 1 + rng.Poisson(cfg.admissions_mean);
    std::set<Date> dates;
    if (truth.onset) dates.insert(*truth.onset);
    while (static_cast<int>(dates.size()) < n_adm + (truth.onset ? 1 : 0)) {
      dates.insert(RandomDate(rng, start, end));
    }

    for (const Date& date : dates) {
      Admission adm;
      adm.patient_id = rec.patient_id;
      adm.admit_date = date;
      const bool icd9_era = date.Year() <= cfg.icd9_until_year;
      const SystemPool& dx_pool = icd9_era ? icd9 : icd10;
      const int n_dx = 1 + std::min(rng.Poisson(cfg.secondary_mean), 15);
      for (int k = 0; k < n_dx; ++k) {
        for (int attempt = 0; attempt < 20; ++attempt) {
          const ClinicalTerm& t = dx_pool.filler[dx_pool.zipf.Sample(rng)];
          if (std::find(adm.diagnoses.begin(), adm.diagnoses.end(), t) == adm.diagnoses.end()) {
            adm.diagnoses.push_back(t);
            break;
          }
        }
      }
      const int n_proc = rng.Poisson(cfg.procedures_mean);
      for (int k = 0; k < n_proc; ++k) adm.procedures.push_back(opcs4.filler[opcs4.zipf.Sample(rng)]);

      const bool elevated = truth.future_case && date < *truth.onset;
      bool placed_primary = false;
      for (const auto& p : cfg.planted) {
        const double prob =
            std::min(1.0, cfg.planted_base_rate * (elevated ? p.relative_risk : 1.0));
        if (!rng.Bernoulli(prob)) continue;
        const auto at = placed_primary ? adm.diagnoses.begin() + 1 : adm.diagnoses.begin();
        adm.diagnoses.insert(at, p.term);
        placed_primary = true;
      }
      if (truth.onset && date == *truth.onset) {
        const auto& code = CaseCodeFor(cfg, icd9_era ? CodeSystem::kIcd9 : CodeSystem::kIcd10);
        const auto pos = rng.Below(adm.diagnoses.size() + 1);
        adm.diagnoses.insert(adm.diagnoses.begin() + static_cast<std::ptrdiff_t>(pos), code);
      }
      // Trim background secondaries beyond the 16-slot limit.
      for (std::size_t k = adm.diagnoses.size(); adm.diagnoses.size() > kMaxDiagnoses && k-- > 1;) {
        const auto& t = adm.diagnoses[k];
        const bool reserved =
            std::find(cfg.case_codes.begin(), cfg.case_codes.end(), t) != cfg.case_codes.end() ||
            std::any_of(cfg.planted.begin(), cfg.planted.end(),
                        [&](const PlantedSignal& p) { return p.term == t; });
        if (!reserved) adm.diagnoses.erase(adm.diagnoses.begin() + static_cast<std::ptrdiff_t>(k));
      }
      rec.admissions.push_back(std::move(adm));
    }
    out.records.push_back(std::move(rec));
    out.truth.push_back(std::move(truth));
  }
  return out;
}

void WriteTruth(std::ostream& out, const std::vector<TruthRow>& truth) {
  out << "patient_id,future_case,prevalent,onset_date\n";
  for (const auto& t : truth) {
    out << t.patient_id << ',' << (t.future_case ? 1 : 0) << ',' << (t.prevalent ? 1 : 0) << ','
        << (t.onset ? t.onset->ToString() : std::string()) << '\n';
  }
}

}  // namespace clinvec
