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

#ifndef CLINVEC_SPLIT_HPP_
#define CLINVEC_SPLIT_HPP_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace clinvec {

// Train/test partition plus cross-validation folds over the training part.
// Indices refer to sample rows.
struct SplitPlan {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  std::vector<std::vector<std::size_t>> folds;  // partition of train
  std::uint64_t seed = 0;
};

struct SplitOptions {
  int folds = 6;
  // Every test_period-th group goes to test: 4 gives a 3:1 split.
  int test_period = 4;
};

// Groups (matched case + controls) are kept whole. Groups are shuffled, then
// ordered by their (cases, controls) composition so that taking every fourth
// group for test, and dealing the remaining ones round-robin into folds,
// stratifies both by label. Needs >= 24 samples and both classes.
SplitPlan MakeSplit(std::span<const int> labels, std::span<const std::string> groups,
                    std::uint64_t seed, const SplitOptions& options = {});

// Throws DataError describing the first violated property: disjoint
// train/test, folds partitioning train, no group on both sides.
void CheckSplitHygiene(const SplitPlan& plan, std::span<const std::string> groups,
                       std::size_t n_samples);

// `patient_id,partition` with partition `test` or `foldK`.
void WriteSplitPlan(std::ostream& out, const SplitPlan& plan,
                    std::span<const std::string> patient_ids);
// Inverse of WriteSplitPlan; row indices follow `patient_ids`. Patients absent
// from the file are unassigned.
SplitPlan ReadSplitPlan(std::istream& in, std::span<const std::string> patient_ids,
                        const std::string& source = "<split>");

}  // namespace clinvec

#endif  // CLINVEC_SPLIT_HPP_
