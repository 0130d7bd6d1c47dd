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

#ifndef CLINVEC_GLOVE_HPP_
#define CLINVEC_GLOVE_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "clinvec/cooc.hpp"

namespace clinvec {

// Main vectors w_i, context vectors w~_j and their biases, row-major.
struct GloveParams {
  std::size_t vocab_size = 0;
  std::size_t dim = 0;
  std::vector<double> main;
  std::vector<double> context;
  std::vector<double> main_bias;
  std::vector<double> context_bias;

  static GloveParams Zeros(std::size_t vocab_size, std::size_t dim);
  // Every coordinate uniform in [-0.5/dim, 0.5/dim].
  static GloveParams RandomInit(std::size_t vocab_size, std::size_t dim, std::uint64_t seed);

  std::span<double> MainRow(std::size_t i) { return {main.data() + i * dim, dim}; }
  std::span<const double> MainRow(std::size_t i) const { return {main.data() + i * dim, dim}; }
  std::span<double> ContextRow(std::size_t j) { return {context.data() + j * dim, dim}; }
  std::span<const double> ContextRow(std::size_t j) const {
    return {context.data() + j * dim, dim};
  }
};

enum class Combine { kSum, kMainOnly };
std::string_view CombineName(Combine combine);
Combine ParseCombine(std::string_view name);

struct TrainConfig {
  int dim = 50;
  int epochs = 150;
  double learning_rate = 0.05;
  double x_max = 100.0;
  double alpha = 0.75;
  std::uint64_t seed = 0;
  // 1 is the deterministic path. More threads run lock-free over disjoint
  // slices of each epoch's shuffled order and are only statistically
  // reproducible.
  int threads = 1;
  Combine combine = Combine::kSum;

  void Validate() const;
};

inline constexpr double kAdagradEps = 1e-8;

// (x / x_max)^alpha below x_max, else 1. Throws DataError for x <= 0.
double WeightFn(double x, double x_max, double alpha);

// J = sum over stored entries of f(x_ij) (w_i . w~_j + b_i + b~_j - ln x_ij)^2.
double GloveLoss(const GloveParams& params, const CoocMatrix& cooc, const TrainConfig& cfg);

// dJ with respect to every parameter, same layout as GloveParams.
GloveParams GloveLossGradient(const GloveParams& params, const CoocMatrix& cooc,
                              const TrainConfig& cfg);

struct TrainResult {
  GloveParams params;
  // J after each epoch; loss_trace[0] is after epoch 1.
  std::vector<double> loss_trace;
};

// AdaGrad over the stored entries, each epoch in a freshly shuffled order.
// Throws NumericalError naming the epoch and pair on a non-finite residual.
TrainResult TrainGlove(const CoocMatrix& cooc, const TrainConfig& cfg);

// Same, starting from caller-supplied parameters.
TrainResult TrainGlove(const CoocMatrix& cooc, const TrainConfig& cfg, GloveParams initial);

struct EmbeddingProvenance {
  std::string variant;
  int window = 0;
  int dim = 0;
  std::uint64_t seed = 0;
};

// Immutable term vectors; row k belongs to tokens[k].
class EmbeddingSet {
 public:
  EmbeddingSet() = default;
  EmbeddingSet(std::vector<std::string> tokens, std::size_t dim, std::vector<double> vectors,
               EmbeddingProvenance provenance = {});

  std::size_t size() const { return tokens_.size(); }
  std::size_t dim() const { return dim_; }
  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::vector<double>& vectors() const { return vectors_; }
  std::span<const double> Row(std::size_t k) const { return {vectors_.data() + k * dim_, dim_}; }
  std::optional<std::size_t> Find(std::string_view token) const;
  const EmbeddingProvenance& provenance() const { return provenance_; }

  friend bool operator==(const EmbeddingSet& a, const EmbeddingSet& b) {
    return a.tokens_ == b.tokens_ && a.dim_ == b.dim_ && a.vectors_ == b.vectors_;
  }

 private:
  std::vector<std::string> tokens_;
  std::size_t dim_ = 0;
  std::vector<double> vectors_;
  std::map<std::string, std::size_t, std::less<>> index_;
  EmbeddingProvenance provenance_;
};

// kSum: w_i + w~_i; kMainOnly: w_i.
EmbeddingSet Finalize(const GloveParams& params, Combine combine,
                      std::vector<std::string> tokens, EmbeddingProvenance provenance = {});

// 0 if either vector is all zeros.
double CosineSimilarity(std::span<const double> a, std::span<const double> b);

struct Neighbor {
  std::string token;
  double similarity = 0.0;
};

// Exact top-k by cosine similarity over every other term, descending, ties
// by token. Unknown tokens raise DataError listing the closest spellings;
// k >= size() raises UsageError.
std::vector<Neighbor> NearestNeighbors(const EmbeddingSet& emb, std::string_view token,
                                       std::size_t k);

// Header `|V| d`, then `SYSTEM:CODE v1 ... vd` per term. Values use the
// shortest form that reads back to the same double.
void WriteEmbeddings(std::ostream& out, const EmbeddingSet& emb);
EmbeddingSet ReadEmbeddings(std::istream& in, const std::string& source = "<embeddings>");

// `epoch,loss` rows.
void WriteLossTrace(std::ostream& out, std::span<const double> trace);

}  // namespace clinvec

#endif  // CLINVEC_GLOVE_HPP_
