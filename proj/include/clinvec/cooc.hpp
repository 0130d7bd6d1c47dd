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

#ifndef CLINVEC_COOC_HPP_
#define CLINVEC_COOC_HPP_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "clinvec/corpus.hpp"

namespace clinvec {

enum class Weighting { kInverseDistance, kUniform };

std::string_view WeightingName(Weighting weighting);
Weighting ParseWeighting(std::string_view name);

struct CoocEntry {
  std::uint32_t i = 0;
  std::uint32_t j = 0;
  double x = 0.0;
  friend bool operator==(const CoocEntry&, const CoocEntry&) = default;
};

// Sparse symmetric term-term co-occurrence counts. Both orientations of every
// off-diagonal pair are stored, sorted by (i, j); every stored x is > 0.
class CoocMatrix {
 public:
  CoocMatrix() = default;
  CoocMatrix(std::size_t dimension, int window, Weighting weighting)
      : dimension_(dimension), window_(window), weighting_(weighting) {}

  // Validates ordering, symmetry, positivity and index bounds.
  static CoocMatrix FromEntries(std::size_t dimension, int window, Weighting weighting,
                                std::vector<CoocEntry> entries);

  std::size_t dimension() const { return dimension_; }
  int window() const { return window_; }
  Weighting weighting() const { return weighting_; }
  const std::vector<CoocEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  // 0 when the pair is absent.
  double Value(std::uint32_t i, std::uint32_t j) const;
  double TotalMass() const;

 private:
  std::size_t dimension_ = 0;
  int window_ = 1;
  Weighting weighting_ = Weighting::kInverseDistance;
  std::vector<CoocEntry> entries_;
};

struct CoocOptions {
  int window = 5;
  Weighting weighting = Weighting::kInverseDistance;
  // >1 shards documents across threads; shards merge in document order, so
  // results are deterministic for a given thread count.
  int threads = 1;
};

// For each token pair at positions p < q of one document with q - p <=
// window, adds 1/(q-p) (or 1) to x_ij and to x_ji. Out-of-vocabulary tokens
// are skipped but keep their positions. Context never crosses documents.
CoocMatrix Accumulate(std::span<const Document> documents, const Vocabulary& vocab,
                      const CoocOptions& options);
inline CoocMatrix Accumulate(const Corpus& corpus, const Vocabulary& vocab,
                             const CoocOptions& options) {
  return Accumulate(corpus.documents, vocab, options);
}

// Entrywise sum; throws UsageError on mismatched dimension, window or weighting.
CoocMatrix Merge(const CoocMatrix& a, const CoocMatrix& b);

// Little-endian records (u32 i, u32 j, f64 x) sorted by (i, j).
void WriteCoocBinary(std::ostream& out, const CoocMatrix& m);
CoocMatrix ReadCoocBinary(std::istream& in, std::size_t dimension, int window,
                          Weighting weighting);
// `i j x` lines, for debugging.
void WriteCoocText(std::ostream& out, const CoocMatrix& m);

}  // namespace clinvec

#endif  // CLINVEC_COOC_HPP_
