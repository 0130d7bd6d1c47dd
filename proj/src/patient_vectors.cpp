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

#include "clinvec/patient_vectors.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>

#include "clinvec/ehr_io.hpp"
#include "clinvec/error.hpp"
#include "clinvec/simd/kernels.hpp"

namespace clinvec {

std::string_view RepresentationName(Representation r) {
  return r == Representation::kOneHot ? "one_hot" : "pooled";
}

Representation ParseRepresentation(std::string_view name) {
  if (name == "one_hot" || name == "one-hot" || name == "onehot") return Representation::kOneHot;
  if (name == "pooled" || name == "embedding" || name == "embeddings") {
    return Representation::kPooled;
  }
  throw UsageError("unknown representation '" + std::string(name) + "'");
}

PooledVector Pool(std::span<const ClinicalTerm> sequence, const EmbeddingSet& emb) {
  const std::size_t d = emb.dim();
  PooledVector out;
  out.features.assign(3 * d, 0.0);
  std::span<double> mean(out.features.data(), d);
  std::span<double> max(out.features.data() + d, d);
  std::span<double> min(out.features.data() + 2 * d, d);
  std::size_t seen = 0;
  for (const auto& term : sequence) {
    const auto row = emb.Find(term.Token());
    if (!row) continue;
    const auto v = emb.Row(*row);
    if (seen == 0) {
      std::copy(v.begin(), v.end(), max.begin());
      std::copy(v.begin(), v.end(), min.begin());
    } else {
      simd::MaxInplace(v, max);
      simd::MinInplace(v, min);
    }
    simd::Axpy(1.0, v, mean);
    ++seen;
  }
  if (seen == 0) {
    out.empty = true;
    return out;
  }
  for (double& m : mean) m /= static_cast<double>(seen);
  return out;
}

std::vector<double> OneHot(std::span<const ClinicalTerm> sequence, const Vocabulary& vocab) {
  std::vector<double> out(vocab.size(), 0.0);
  for (const auto& term : sequence) {
    if (const auto id = vocab.Id(term)) out[*id] = 1.0;
  }
  return out;
}

Standardizer Standardizer::Fit(const FeatureMatrix& x, std::span<const std::size_t> rows) {
  if (rows.size() < 2) throw DataError("standardizer needs at least 2 training rows");
  Standardizer s;
  s.mean_.assign(x.cols, 0.0);
  s.scale_.assign(x.cols, 0.0);
  for (std::size_t r : rows) simd::Axpy(1.0, x.Row(r), s.mean_);
  const double n = static_cast<double>(rows.size());
  for (double& m : s.mean_) m /= n;
  for (std::size_t r : rows) {
    const auto row = x.Row(r);
    for (std::size_t c = 0; c < x.cols; ++c) {
      const double dev = row[c] - s.mean_[c];
      s.scale_[c] += dev * dev;
    }
  }
  for (double& v : s.scale_) {
    v = std::sqrt(v / n);
    if (v == 0.0) v = 1.0;
  }
  return s;
}

Standardizer Standardizer::Fit(const FeatureMatrix& x) {
  std::vector<std::size_t> rows(x.rows);
  for (std::size_t r = 0; r < x.rows; ++r) rows[r] = r;
  return Fit(x, rows);
}

void Standardizer::TransformInPlace(std::span<double> row) const {
  if (row.size() != mean_.size()) throw UsageError("standardizer width mismatch");
  for (std::size_t c = 0; c < row.size(); ++c) row[c] = (row[c] - mean_[c]) / scale_[c];
}

std::vector<double> Standardizer::Transform(std::span<const double> row) const {
  std::vector<double> out(row.begin(), row.end());
  TransformInPlace(out);
  return out;
}

FeatureMatrix Standardizer::Transform(const FeatureMatrix& x) const {
  FeatureMatrix out = x;
  for (std::size_t r = 0; r < out.rows; ++r) TransformInPlace(out.Row(r));
  return out;
}

std::size_t PatientFeatures::EmptyWindowCount() const {
  std::size_t n = 0;
  for (char e : empty_window) n += e ? 1 : 0;
  return n;
}

std::vector<std::vector<ClinicalTerm>> CohortSequences(std::span<const PatientRecord> records,
                                                       const std::vector<CohortMember>& cohort,
                                                       const PatientFeatureOptions& options) {
  std::map<std::string_view, const PatientRecord*> by_id;
  for (const auto& r : records) by_id[r.patient_id] = &r;
  std::vector<std::vector<ClinicalTerm>> out;
  out.reserve(cohort.size());
  for (const auto& m : cohort) {
    const auto it = by_id.find(m.patient_id);
    if (it == by_id.end()) {
      throw DataError("cohort member '" + m.patient_id + "' has no patient record");
    }
    const auto window = ObservationWindow(*it->second, m.index_date, options.gap_months);
    out.push_back(TokenizeAdmissions(window, options.variant, options.corpus));
  }
  return out;
}

namespace {

PatientFeatures Skeleton(const std::vector<CohortMember>& cohort, Representation r,
                         const PatientFeatureOptions& options) {
  PatientFeatures f;
  f.representation = r;
  for (const auto& m : cohort) {
    f.patient_ids.push_back(m.patient_id);
    f.labels.push_back(m.label);
    f.group_ids.push_back(m.matched_case_id);
  }
  f.empty_window.assign(cohort.size(), 0);
  f.metadata["representation"] = std::string(RepresentationName(r));
  f.metadata["variant"] = std::string(VariantName(options.variant));
  f.metadata["gap_months"] = std::to_string(options.gap_months);
  return f;
}

}  // namespace

PatientFeatures PooledFeatures(std::span<const PatientRecord> records,
                               const std::vector<CohortMember>& cohort, const EmbeddingSet& emb,
                               const PatientFeatureOptions& options) {
  const auto sequences = CohortSequences(records, cohort, options);
  PatientFeatures f = Skeleton(cohort, Representation::kPooled, options);
  f.x = FeatureMatrix(cohort.size(), 3 * emb.dim());
  for (std::size_t r = 0; r < sequences.size(); ++r) {
    auto pooled = Pool(sequences[r], emb);
    std::copy(pooled.features.begin(), pooled.features.end(), f.x.Row(r).begin());
    f.empty_window[r] = pooled.empty ? 1 : 0;
  }
  const auto& prov = emb.provenance();
  f.metadata["d"] = std::to_string(emb.dim());
  f.metadata["window"] = std::to_string(prov.window);
  f.metadata["seed"] = std::to_string(prov.seed);
  f.metadata["empty_windows"] = std::to_string(f.EmptyWindowCount());
  return f;
}

PatientFeatures OneHotFeatures(std::span<const PatientRecord> records,
                               const std::vector<CohortMember>& cohort, const Vocabulary& vocab,
                               const PatientFeatureOptions& options) {
  const auto sequences = CohortSequences(records, cohort, options);
  PatientFeatures f = Skeleton(cohort, Representation::kOneHot, options);
  f.x = FeatureMatrix(cohort.size(), vocab.size());
  for (std::size_t r = 0; r < sequences.size(); ++r) {
    const auto hot = OneHot(sequences[r], vocab);
    std::copy(hot.begin(), hot.end(), f.x.Row(r).begin());
    bool any = false;
    for (double v : hot) any = any || v != 0.0;
    f.empty_window[r] = any ? 0 : 1;
  }
  f.metadata["vocabulary_size"] = std::to_string(vocab.size());
  f.metadata["empty_windows"] = std::to_string(f.EmptyWindowCount());
  return f;
}

void WriteFeatures(std::ostream& out, const PatientFeatures& features) {
  out << "patient_id,label";
  for (std::size_t c = 0; c < features.x.cols; ++c) out << ",f" << c;
  out << '\n';
  char buf[32];
  for (std::size_t r = 0; r < features.x.rows; ++r) {
    out << features.patient_ids[r] << ',' << features.labels[r];
    for (double v : features.x.Row(r)) {
      const auto res = std::to_chars(buf, buf + sizeof(buf), v);
      out << ',' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
    }
    out << '\n';
  }
}

void WriteFeatureMetadata(std::ostream& out, const PatientFeatures& features) {
  for (const auto& [key, value] : features.metadata) out << key << " = " << value << '\n';
}

PatientFeatures ReadFeatures(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("patient_id,label", 0) != 0) {
    throw DataError(source + ": line 1: expected 'patient_id,label,...' header");
  }
  const std::size_t cols = SplitCsvLine(line).size() - 2;
  PatientFeatures f;
  std::vector<double> data;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = SplitCsvLine(line);
    if (fields.size() != cols + 2 || (fields[1] != "0" && fields[1] != "1")) {
      throw DataError(source + ": line " + std::to_string(line_no) + ": malformed feature row");
    }
    f.patient_ids.push_back(fields[0]);
    f.labels.push_back(fields[1] == "1" ? 1 : 0);
    for (std::size_t c = 0; c < cols; ++c) {
      double v = 0.0;
      const auto& s = fields[c + 2];
      const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
      if (res.ec != std::errc{} || !std::isfinite(v)) {
        throw DataError(source + ": line " + std::to_string(line_no) + ": bad value '" + s + "'");
      }
      data.push_back(v);
    }
  }
  f.x.rows = f.patient_ids.size();
  f.x.cols = cols;
  f.x.data = std::move(data);
  f.empty_window.assign(f.x.rows, 0);
  f.group_ids = f.patient_ids;
  return f;
}

void AttachGroups(PatientFeatures& features, const std::vector<CohortMember>& cohort) {
  std::map<std::string_view, std::string_view> group_of;
  for (const auto& m : cohort) group_of[m.patient_id] = m.matched_case_id;
  for (std::size_t r = 0; r < features.patient_ids.size(); ++r) {
    const auto it = group_of.find(features.patient_ids[r]);
    if (it == group_of.end()) {
      throw DataError("feature row '" + features.patient_ids[r] + "' is not in the cohort");
    }
    features.group_ids[r] = std::string(it->second);
  }
}

}  // namespace clinvec
