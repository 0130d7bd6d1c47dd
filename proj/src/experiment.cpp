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

#include "clinvec/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>

#include "clinvec/ehr_io.hpp"
#include "clinvec/error.hpp"
#include "clinvec/metrics.hpp"

namespace clinvec {

namespace {

// Training matrix for one fit: standardised on `rows` when requested.
struct PreparedFit {
  FeatureMatrix x;
  std::optional<Standardizer> standardizer;
};

PreparedFit Prepare(const PatientFeatures& features, std::span<const std::size_t> rows,
                    bool standardize) {
  PreparedFit fit;
  if (standardize) {
    fit.standardizer = Standardizer::Fit(features.x, rows);
    fit.x = fit.standardizer->Transform(features.x);
  } else {
    fit.x = features.x;
  }
  return fit;
}

LinearSvmModel Fold(LinearSvmModel model, const std::optional<Standardizer>& standardizer) {
  if (!standardizer) return model;
  const auto& mean = standardizer->mean();
  const auto& scale = standardizer->scale();
  for (std::size_t j = 0; j < model.weights.size(); ++j) {
    model.weights[j] /= scale[j];
    model.bias -= model.weights[j] * mean[j];
  }
  return model;
}

LinearSvmModel Train(const PreparedFit& fit, std::span<const int> labels,
                     std::span<const std::size_t> rows, double c, const CvOptions& options) {
  SvmOptions svm;
  svm.c = c;
  svm.class_weights = BalancedClassWeights(labels, rows);
  svm.tolerance = options.tolerance;
  return Fold(TrainSvm(fit.x, labels, rows, svm), fit.standardizer);
}

bool BothClasses(std::span<const int> labels, std::span<const std::size_t> rows) {
  bool pos = false;
  bool neg = false;
  for (std::size_t r : rows) (labels[r] != 0 ? pos : neg) = true;
  return pos && neg;
}

std::string FormatDouble(double v, const char* fmt) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

}  // namespace

CvResult CrossValidate(const PatientFeatures& features, const SplitPlan& plan,
                       const CvOptions& options) {
  if (options.c_grid.empty()) throw UsageError("empty C grid");
  for (double c : options.c_grid) {
    if (!(c > 0.0)) throw UsageError("C values must be positive");
  }
  CvResult result;
  result.c_grid = options.c_grid;
  result.mean_auroc.assign(options.c_grid.size(), 0.0);
  int used_folds = 0;
  for (std::size_t f = 0; f < plan.folds.size(); ++f) {
    const auto& held_out = plan.folds[f];
    std::vector<std::size_t> fit_rows;
    for (std::size_t g = 0; g < plan.folds.size(); ++g) {
      if (g != f) fit_rows.insert(fit_rows.end(), plan.folds[g].begin(), plan.folds[g].end());
    }
    std::sort(fit_rows.begin(), fit_rows.end());
    if (!BothClasses(features.labels, held_out) || !BothClasses(features.labels, fit_rows)) {
      continue;
    }
    ++used_folds;
    const PreparedFit fit = Prepare(features, fit_rows, options.standardize);
    std::vector<int> labels;
    for (std::size_t r : held_out) labels.push_back(features.labels[r]);
    for (std::size_t k = 0; k < options.c_grid.size(); ++k) {
      const LinearSvmModel model = Train(fit, features.labels, fit_rows, options.c_grid[k], options);
      std::vector<double> scores;
      for (std::size_t r : held_out) scores.push_back(model.Score(features.x.Row(r)));
      result.mean_auroc[k] += Auroc(labels, scores);
    }
  }
  if (used_folds == 0) throw DataError("no cross-validation fold holds both classes");
  for (double& a : result.mean_auroc) a /= used_folds;
  // Strict comparison over an ascending scan keeps the smaller C on ties.
  std::vector<std::size_t> order(options.c_grid.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return options.c_grid[a] < options.c_grid[b];
  });
  std::size_t best = order.front();
  for (std::size_t k : order) {
    if (result.mean_auroc[k] > result.mean_auroc[best]) best = k;
  }
  result.best_c = options.c_grid[best];
  result.best_mean_auroc = result.mean_auroc[best];
  return result;
}

LinearSvmModel FitModel(const PatientFeatures& features, std::span<const std::size_t> rows,
                        double c, const CvOptions& options) {
  const PreparedFit fit = Prepare(features, rows, options.standardize);
  return Train(fit, features.labels, rows, c, options);
}

EvalRow EvaluateFeatures(const PatientFeatures& features, const SplitPlan& plan,
                         const CvOptions& options, CvResult* cv_out) {
  const CvResult cv = CrossValidate(features, plan, options);
  if (cv_out != nullptr) *cv_out = cv;
  const LinearSvmModel model = FitModel(features, plan.train, cv.best_c, options);
  std::vector<int> labels;
  std::vector<double> scores;
  std::vector<int> predictions;
  for (std::size_t r : plan.test) {
    labels.push_back(features.labels[r]);
    scores.push_back(model.Score(features.x.Row(r)));
    predictions.push_back(scores.back() > 0.0 ? 1 : 0);
  }
  EvalRow row;
  row.representation = std::string(RepresentationName(features.representation));
  row.best_c = cv.best_c;
  row.auroc = Auroc(labels, scores);
  row.f1 = F1Weighted(labels, predictions);
  return row;
}

void WriteReportCsv(std::ostream& out, const EvalReport& report) {
  out << "variant,representation,d,window,best_C,auroc,f1\n";
  for (const EvalRow& r : report.rows) {
    out << r.variant << ',' << r.representation << ','
        << (r.d ? std::to_string(*r.d) : "NA") << ','
        << (r.window ? std::to_string(*r.window) : "NA") << ','
        << FormatDouble(r.best_c, "%g") << ',' << FormatDouble(r.auroc, "%.6f") << ','
        << FormatDouble(r.f1, "%.6f") << '\n';
  }
}

EvalReport ReadReportCsv(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line) || line != "variant,representation,d,window,best_C,auroc,f1") {
    throw DataError(source + ": missing report header");
  }
  EvalReport report;
  int line_no = 1;
  auto parse_double = [&](const std::string& s) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) {
      throw DataError(source + ": line " + std::to_string(line_no) + ": bad number '" + s + "'");
    }
    return v;
  };
  auto parse_opt = [&](const std::string& s) -> std::optional<int> {
    if (s == "NA") return std::nullopt;
    return static_cast<int>(parse_double(s));
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = SplitCsvLine(line);
    if (f.size() != 7) {
      throw DataError(source + ": line " + std::to_string(line_no) + ": expected 7 fields");
    }
    EvalRow r;
    r.variant = f[0];
    r.representation = f[1];
    r.d = parse_opt(f[2]);
    r.window = parse_opt(f[3]);
    r.best_c = parse_double(f[4]);
    r.auroc = parse_double(f[5]);
    r.f1 = parse_double(f[6]);
    report.rows.push_back(std::move(r));
  }
  return report;
}

void RenderResultsTable(std::ostream& out, const EvalReport& report) {
  struct Best {
    const EvalRow* one_hot = nullptr;
    const EvalRow* pooled = nullptr;
  };
  std::vector<std::string> order;
  std::map<std::string, Best> best;
  for (const EvalRow& r : report.rows) {
    if (!best.contains(r.variant)) order.push_back(r.variant);
    Best& b = best[r.variant];
    const EvalRow*& slot = r.representation == "one_hot" ? b.one_hot : b.pooled;
    if (slot == nullptr || r.auroc > slot->auroc) slot = &r;
  }
  auto cell = [](const EvalRow* r, bool auroc) {
    return r == nullptr ? std::string("-") : FormatDouble(auroc ? r->auroc : r->f1, "%.4f");
  };
  char line[160];
  std::snprintf(line, sizeof line, "%-20s %-17s %s\n", "", "One-hot", "Embeddings");
  out << line;
  std::snprintf(line, sizeof line, "%-20s %-8s %-8s %-8s %-8s %5s %6s\n", "Corpus", "AUROC",
                "F1", "AUROC", "F1", "d", "window");
  out << line;
  for (const std::string& variant : order) {
    const Best& b = best[variant];
    const std::string d = b.pooled && b.pooled->d ? std::to_string(*b.pooled->d) : "-";
    const std::string w = b.pooled && b.pooled->window ? std::to_string(*b.pooled->window) : "-";
    std::snprintf(line, sizeof line, "%-20s %-8s %-8s %-8s %-8s %5s %6s\n", variant.c_str(),
                  cell(b.one_hot, true).c_str(), cell(b.one_hot, false).c_str(),
                  cell(b.pooled, true).c_str(), cell(b.pooled, false).c_str(), d.c_str(),
                  w.c_str());
    out << line;
  }
}

}  // namespace clinvec
