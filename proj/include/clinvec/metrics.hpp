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

#ifndef CLINVEC_METRICS_HPP_
#define CLINVEC_METRICS_HPP_

#include <span>

namespace clinvec {

// Mann-Whitney AUROC: P(score_case > score_control) + P(tie) / 2, computed
// from midrank sums. Labels are 0/1. Throws DataError if a class is absent
// or a score is NaN.
double Auroc(std::span<const int> labels, std::span<const double> scores);

// Support-weighted mean of the per-class F1 scores (each class in turn taken
// as positive). A class with 0/0 precision or recall scores 0.
double F1Weighted(std::span<const int> labels, std::span<const int> predictions);

}  // namespace clinvec

#endif  // CLINVEC_METRICS_HPP_
