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

#ifndef CLINVEC_PATIENT_VECTORS_HPP_
#define CLINVEC_PATIENT_VECTORS_HPP_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "clinvec/cohort.hpp"
#include "clinvec/corpus.hpp"
#include "clinvec/glove.hpp"

namespace clinvec {

enum class Representation { kOneHot, kPooled };
std::string_view RepresentationName(Representation r);  // "one_hot" / "pooled"
Representation ParseRepresentation(std::string_view name);

// Dense row-major matrix.
struct FeatureMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  FeatureMatrix() = default;
  FeatureMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  std::span<double> Row(std::size_t r) { return {data.data() + r * cols, cols}; }
  std::span<const double> Row(std::size_t r) const { return {data.data() + r * cols, cols}; }
};

struct PooledVector {
  std::vector<double> features;  // [mean | max | min], length 3d
  bool empty = false;            // no in-vocabulary term was seen
};

// Mean, max and min over the vectors of in-vocabulary terms. Repeated terms
// count once per occurrence in the mean. Empty input gives zeros.
PooledVector Pool(std::span<const ClinicalTerm> sequence, const EmbeddingSet& emb);

// Presence vector over the vocabulary: component v is 1 iff term v occurs.
std::vector<double> OneHot(std::span<const ClinicalTerm> sequence, const Vocabulary& vocab);

// Per-column mean and population standard deviation, fitted on training rows.
// Zero deviations are replaced by 1.
class Standardizer {
 public:
  static Standardizer Fit(const FeatureMatrix& x, std::span<const std::size_t> rows);
  static Standardizer Fit(const FeatureMatrix& x);

  void TransformInPlace(std::span<double> row) const;
  std::vector<double> Transform(std::span<const double> row) const;
  FeatureMatrix Transform(const FeatureMatrix& x) const;

  const std::vector<double>& mean() const { return mean_; }
  const std::vector<double>& scale() const { return scale_; }

 private:
  std::vector<double> mean_;
  std::vector<double> scale_;
};

struct PatientFeatures {
  Representation representation = Representation::kPooled;
  std::vector<std::string> patient_ids;
  std::vector<int> labels;
  std::vector<std::string> group_ids;  // matched case id
  std::vector<char> empty_window;
  FeatureMatrix x;
  // Provenance recorded next to the feature file.
  std::map<std::string, std::string> metadata;

  std::size_t EmptyWindowCount() const;
};

struct PatientFeatureOptions {
  CorpusVariant variant = CorpusVariant::kPrimDxSecDxProc;
  CorpusOptions corpus;
  int gap_months = 6;
};

// Observation-window token sequences for every cohort member.
std::vector<std::vector<ClinicalTerm>> CohortSequences(std::span<const PatientRecord> records,
                                                       const std::vector<CohortMember>& cohort,
                                                       const PatientFeatureOptions& options);

PatientFeatures PooledFeatures(std::span<const PatientRecord> records,
                               const std::vector<CohortMember>& cohort, const EmbeddingSet& emb,
                               const PatientFeatureOptions& options);
PatientFeatures OneHotFeatures(std::span<const PatientRecord> records,
                               const std::vector<CohortMember>& cohort, const Vocabulary& vocab,
                               const PatientFeatureOptions& options);

// Header `patient_id,label,f0,f1,...`; the metadata goes to a sidecar file.
void WriteFeatures(std::ostream& out, const PatientFeatures& features);
void WriteFeatureMetadata(std::ostream& out, const PatientFeatures& features);
// Group ids are not part of the file; callers attach them from the cohort.
PatientFeatures ReadFeatures(std::istream& in, const std::string& source = "<features>");

// Fills group_ids from the cohort by patient id.
void AttachGroups(PatientFeatures& features, const std::vector<CohortMember>& cohort);

}  // namespace clinvec

#endif  // CLINVEC_PATIENT_VECTORS_HPP_
