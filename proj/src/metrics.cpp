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

#include "clinvec/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "clinvec/error.hpp"

namespace clinvec {

double Auroc(std::span<const int> labels, std::span<const double> scores) {
  if (labels.size() != scores.size()) throw UsageError("labels and scores differ in length");
  std::int64_t n_pos = 0;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (std::isnan(scores[k])) throw DataError("AUROC: NaN score");
    n_pos += labels[k] != 0 ? 1 : 0;
  }
  const std::int64_t n_neg = static_cast<std::int64_t>(labels.size()) - n_pos;
  if (n_pos == 0 || n_neg == 0) throw DataError("AUROC needs both classes present");

  std::vector<std::size_t> order(labels.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // Twice the midrank is an integer, so the rank sum stays exact.
  std::int64_t rank_sum_x2 = 0;
  std::size_t start = 0;
  while (start < order.size()) {
    std::size_t stop = start + 1;
    while (stop < order.size() && scores[order[stop]] == scores[order[start]]) ++stop;
    const auto midrank_x2 = static_cast<std::int64_t>(start + 1 + stop);
    for (std::size_t k = start; k < stop; ++k) {
      if (labels[order[k]] != 0) rank_sum_x2 += midrank_x2;
    }
    start = stop;
  }
  const std::int64_t u_x2 = rank_sum_x2 - n_pos * (n_pos + 1);
  return static_cast<double>(u_x2) / (2.0 * static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double F1Weighted(std::span<const int> labels, std::span<const int> predictions) {
  if (labels.size() != predictions.size()) {
    throw UsageError("labels and predictions differ in length");
  }
  if (labels.empty()) return 0.0;
  double total = 0.0;
  for (int cls : {0, 1}) {
    std::int64_t tp = 0, fp = 0, fn = 0, support = 0;
    for (std::size_t k = 0; k < labels.size(); ++k) {
      const bool is = (labels[k] != 0) == (cls == 1);
      const bool said = (predictions[k] != 0) == (cls == 1);
      support += is ? 1 : 0;
      tp += (is && said) ? 1 : 0;
      fp += (!is && said) ? 1 : 0;
      fn += (is && !said) ? 1 : 0;
    }
    const std::int64_t denom = 2 * tp + fp + fn;
    const double f1 = denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
    total += static_cast<double>(support) / static_cast<double>(labels.size()) * f1;
  }
  return total;
}

}  // namespace clinvec
