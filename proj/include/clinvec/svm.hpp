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

#ifndef CLINVEC_SVM_HPP_
#define CLINVEC_SVM_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "clinvec/patient_vectors.hpp"

namespace clinvec {

struct ClassWeights {
  double negative = 1.0;
  double positive = 1.0;
};

// n / (2 n_class) over the given rows ("balanced").
ClassWeights BalancedClassWeights(std::span<const int> labels, std::span<const std::size_t> rows);

struct SvmOptions {
  double c = 1.0;
  ClassWeights class_weights;
  // Target relative duality gap.
  double tolerance = 1e-4;
  int max_iterations = 200;
};

struct LinearSvmModel {
  std::vector<double> weights;
  double bias = 0.0;
  double c = 1.0;
  ClassWeights class_weights;

  double Score(std::span<const double> x) const;
  int Predict(std::span<const double> x) const { return Score(x) > 0.0 ? 1 : 0; }
};

struct SvmFitInfo {
  double primal = 0.0;
  double dual = 0.0;           // lower bound from a feasible dual point
  double relative_gap = 0.0;   // (primal - dual) / max(1, |primal|)
  int iterations = 0;
};

// Minimises 0.5 |w|^2 + C sum_i cw(y_i) max(0, 1 - y_i (w.x_i + b)) over the
// given rows, labels 0/1 mapped to -1/+1, bias unregularised, until the
// relative duality gap is within tolerance. Solved in the dual by a
// primal-dual interior point method. Throws NumericalError if the gap
// target is not reached.
LinearSvmModel TrainSvm(const FeatureMatrix& x, std::span<const int> labels,
                        std::span<const std::size_t> rows, const SvmOptions& options,
                        SvmFitInfo* info = nullptr);
LinearSvmModel TrainSvm(const FeatureMatrix& x, std::span<const int> labels,
                        const SvmOptions& options, SvmFitInfo* info = nullptr);

// Primal objective of a model over the given rows.
double SvmObjective(const LinearSvmModel& model, const FeatureMatrix& x,
                    std::span<const int> labels, std::span<const std::size_t> rows);

}  // namespace clinvec

#endif  // CLINVEC_SVM_HPP_
