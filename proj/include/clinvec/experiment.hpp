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

#ifndef CLINVEC_EXPERIMENT_HPP_
#define CLINVEC_EXPERIMENT_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "clinvec/corpus.hpp"
#include "clinvec/patient_vectors.hpp"
#include "clinvec/split.hpp"
#include "clinvec/svm.hpp"

namespace clinvec {

inline const std::vector<double> kDefaultCGrid = {0.01, 0.1, 1.0, 10.0, 100.0};

struct CvOptions {
  std::vector<double> c_grid = kDefaultCGrid;
  // Pooled embeddings are standardised per fit; presence vectors stay 0/1.
  bool standardize = true;
  double tolerance = 1e-4;
};

struct CvResult {
  std::vector<double> c_grid;
  std::vector<double> mean_auroc;  // per C, over the folds
  double best_c = 0.0;
  double best_mean_auroc = 0.0;
};

// Per-C mean validation AUROC across the plan's folds; best C is the argmax,
// ties go to the smaller C. Folds lacking a class are skipped.
CvResult CrossValidate(const PatientFeatures& features, const SplitPlan& plan,
                       const CvOptions& options);

// Fits on the rows given (standardiser included) and returns the model with
// the standardiser folded into its weights, so it scores raw features.
LinearSvmModel FitModel(const PatientFeatures& features, std::span<const std::size_t> rows,
                        double c, const CvOptions& options);

struct EvalRow {
  std::string variant;
  std::string representation;
  std::optional<int> d;       // embeddings only
  std::optional<int> window;  // embeddings only
  double best_c = 0.0;
  double auroc = 0.0;
  double f1 = 0.0;
};

// Cross-validates on the training part, refits at the best C on the whole
// training part, then scores the test part once.
// The cross-validation details go to `cv` when given.
EvalRow EvaluateFeatures(const PatientFeatures& features, const SplitPlan& plan,
                         const CvOptions& options, CvResult* cv = nullptr);

struct EvalReport {
  std::vector<EvalRow> rows;
};

// `variant,representation,d,window,best_C,auroc,f1`, NA for unset d/window.
void WriteReportCsv(std::ostream& out, const EvalReport& report);
EvalReport ReadReportCsv(std::istream& in, const std::string& source = "<report>");

// One line per variant: best one-hot and best embedding rows by test AUROC,
// with the embedding's d and window.
void RenderResultsTable(std::ostream& out, const EvalReport& report);

}  // namespace clinvec

#endif  // CLINVEC_EXPERIMENT_HPP_
