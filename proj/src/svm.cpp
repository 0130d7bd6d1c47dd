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

#include "clinvec/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "clinvec/error.hpp"
#include "clinvec/simd/kernels.hpp"

namespace clinvec {

namespace {

// Primal-dual interior point method for the SVM dual
//   min 1/2 a'Ha - e'a  s.t.  y'a = 0, 0 <= a <= u,   H = (YX)(YX)',
// with Mehrotra's predictor-corrector. The Newton systems (D + H) are solved
// through the Woodbury identity, so each iteration costs O(n d^2 + d^3)
// regardless of C. The equality multiplier is the bias.
class InteriorPoint {
 public:
  InteriorPoint(const FeatureMatrix& x, std::span<const int> labels,
                std::span<const std::size_t> rows, const SvmOptions& options)
      : x_(x), rows_(rows.begin(), rows.end()), n_(rows.size()), d_(x.cols) {
    y_.resize(n_);
    u_.resize(n_);
    nonzero_.resize(n_);
    for (std::size_t k = 0; k < n_; ++k) {
      const auto row = Row(k);
      for (std::size_t j = 0; j < d_; ++j) {
        if (!std::isfinite(row[j])) throw DataError("SVM: non-finite feature value");
        if (row[j] != 0.0) nonzero_[k].push_back(static_cast<std::uint32_t>(j));
      }
      y_[k] = labels[rows_[k]] != 0 ? 1.0 : -1.0;
      u_[k] = options.c * (y_[k] > 0 ? options.class_weights.positive
                                     : options.class_weights.negative);
    }
    alpha_.resize(n_);
    s_.assign(n_, 1.0);
    t_.assign(n_, 1.0);
    for (std::size_t k = 0; k < n_; ++k) alpha_[k] = 0.5 * u_[k];
    w_.assign(d_, 0.0);
  }

  std::span<const double> Row(std::size_t k) const { return x_.Row(rows_[k]); }

  void UpdateW() {
    std::fill(w_.begin(), w_.end(), 0.0);
    for (std::size_t k = 0; k < n_; ++k) simd::Axpy(alpha_[k] * y_[k], Row(k), w_);
  }

  double Primal() const {
    double total = 0.5 * simd::Dot(w_, w_);
    for (std::size_t k = 0; k < n_; ++k) {
      const double margin = y_[k] * (simd::Dot(w_, Row(k)) + bias_);
      if (margin < 1.0) total += u_[k] * (1.0 - margin);
    }
    return total;
  }

  // Dual value at alpha with the heavier class scaled down so that
  // y'alpha = 0; a valid lower bound on the optimum.
  double FeasibleDual() const {
    double pos = 0.0, neg = 0.0;
    for (std::size_t k = 0; k < n_; ++k) (y_[k] > 0 ? pos : neg) += alpha_[k];
    if (pos == 0.0 || neg == 0.0) return 0.0;
    const double scale_pos = pos > neg ? neg / pos : 1.0;
    const double scale_neg = neg > pos ? pos / neg : 1.0;
    std::vector<double> w(d_, 0.0);
    double sum = 0.0;
    for (std::size_t k = 0; k < n_; ++k) {
      const double a = alpha_[k] * (y_[k] > 0 ? scale_pos : scale_neg);
      sum += a;
      simd::Axpy(a * y_[k], Row(k), w);
    }
    return sum - 0.5 * simd::Dot(w, w);
  }

  // One predictor-corrector step. Returns false when no progress is possible.
  bool Step() {
    std::vector<double> f(n_), diag(n_), gap_lo(n_), gap_hi(n_);
    double mu = 0.0;
    double re = 0.0;
    for (std::size_t k = 0; k < n_; ++k) {
      f[k] = y_[k] * simd::Dot(w_, Row(k)) - 1.0 + bias_ * y_[k] - s_[k] + t_[k];  // r_d
      gap_lo[k] = alpha_[k];
      gap_hi[k] = u_[k] - alpha_[k];
      diag[k] = s_[k] / gap_lo[k] + t_[k] / gap_hi[k];
      mu += alpha_[k] * s_[k] + gap_hi[k] * t_[k];
      re += y_[k] * alpha_[k];
    }
    mu /= static_cast<double>(2 * n_);

    // M = I + sum_k x_k x_k' / D_k, lower triangle.
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d_),
                                                   static_cast<Eigen::Index>(d_));
    for (std::size_t k = 0; k < n_; ++k) {
      const auto row = Row(k);
      const double inv = 1.0 / diag[k];
      const auto& nz = nonzero_[k];
      for (std::size_t a = 0; a < nz.size(); ++a) {
        const double va = row[nz[a]] * inv;
        for (std::size_t b = 0; b <= a; ++b) m(nz[a], nz[b]) += va * row[nz[b]];
      }
    }
    const Eigen::LLT<Eigen::MatrixXd, Eigen::Lower> llt(m);
    if (llt.info() != Eigen::Success) {
      throw NumericalError("SVM: normal matrix lost positive definiteness");
    }

    // (D + H)^{-1} z by Woodbury.
    auto solve = [&](const std::vector<double>& z) {
      std::vector<double> v(n_), q(d_, 0.0);
      for (std::size_t k = 0; k < n_; ++k) {
        v[k] = z[k] / diag[k];
        simd::Axpy(y_[k] * v[k], Row(k), q);
      }
      Eigen::Map<Eigen::VectorXd> qv(q.data(), static_cast<Eigen::Index>(d_));
      llt.solveInPlace(qv);
      for (std::size_t k = 0; k < n_; ++k) v[k] -= y_[k] * simd::Dot(q, Row(k)) / diag[k];
      return v;
    };
    const std::vector<double> sy = solve(y_);
    double y_sy = 0.0;
    for (std::size_t k = 0; k < n_; ++k) y_sy += y_[k] * sy[k];

    struct Direction {
      std::vector<double> da, ds, dt;
      double db = 0.0;
    };
    // Newton direction for complementarity targets c1 (alpha s) and c2 ((u - alpha) t).
    auto direction = [&](const std::vector<double>& c1, const std::vector<double>& c2) {
      std::vector<double> r(n_);
      for (std::size_t k = 0; k < n_; ++k) r[k] = -f[k] + c1[k] / gap_lo[k] - c2[k] / gap_hi[k];
      const std::vector<double> sr = solve(r);
      double y_sr = 0.0;
      for (std::size_t k = 0; k < n_; ++k) y_sr += y_[k] * sr[k];
      Direction dir;
      dir.db = (y_sr + re) / y_sy;
      dir.da.resize(n_);
      dir.ds.resize(n_);
      dir.dt.resize(n_);
      for (std::size_t k = 0; k < n_; ++k) {
        dir.da[k] = sr[k] - dir.db * sy[k];
        dir.ds[k] = (c1[k] - s_[k] * dir.da[k]) / gap_lo[k];
        dir.dt[k] = (c2[k] + t_[k] * dir.da[k]) / gap_hi[k];
      }
      return dir;
    };
    auto max_step = [&](const Direction& dir) {
      double step = 1.0;
      for (std::size_t k = 0; k < n_; ++k) {
        if (dir.da[k] < 0.0) step = std::min(step, -gap_lo[k] / dir.da[k]);
        if (dir.da[k] > 0.0) step = std::min(step, gap_hi[k] / dir.da[k]);
        if (dir.ds[k] < 0.0) step = std::min(step, -s_[k] / dir.ds[k]);
        if (dir.dt[k] < 0.0) step = std::min(step, -t_[k] / dir.dt[k]);
      }
      return step;
    };

    std::vector<double> c1(n_), c2(n_);
    for (std::size_t k = 0; k < n_; ++k) {
      c1[k] = -gap_lo[k] * s_[k];
      c2[k] = -gap_hi[k] * t_[k];
    }
    const Direction affine = direction(c1, c2);
    const double step_aff = max_step(affine);
    double mu_aff = 0.0;
    for (std::size_t k = 0; k < n_; ++k) {
      mu_aff += (gap_lo[k] + step_aff * affine.da[k]) * (s_[k] + step_aff * affine.ds[k]) +
                (gap_hi[k] - step_aff * affine.da[k]) * (t_[k] + step_aff * affine.dt[k]);
    }
    mu_aff /= static_cast<double>(2 * n_);
    const double sigma = std::pow(mu_aff / mu, 3.0);
    for (std::size_t k = 0; k < n_; ++k) {
      c1[k] = sigma * mu - gap_lo[k] * s_[k] - affine.da[k] * affine.ds[k];
      c2[k] = sigma * mu - gap_hi[k] * t_[k] + affine.da[k] * affine.dt[k];
    }
    const Direction dir = direction(c1, c2);
    const double step = std::min(1.0, 0.995 * max_step(dir));
    if (!(step > 0.0) || !std::isfinite(step)) return false;
    for (std::size_t k = 0; k < n_; ++k) {
      alpha_[k] += step * dir.da[k];
      s_[k] += step * dir.ds[k];
      t_[k] += step * dir.dt[k];
    }
    bias_ += step * dir.db;
    UpdateW();
    return true;
  }

  const std::vector<double>& w() const { return w_; }
  double bias() const { return bias_; }

 private:
  const FeatureMatrix& x_;
  std::vector<std::size_t> rows_;
  std::size_t n_;
  std::size_t d_;
  std::vector<double> y_, u_, alpha_, s_, t_, w_;
  std::vector<std::vector<std::uint32_t>> nonzero_;
  double bias_ = 0.0;
};

double RelativeGap(double primal, double dual) {
  return (primal - dual) / std::max(1.0, std::abs(primal));
}

}  // namespace

ClassWeights BalancedClassWeights(std::span<const int> labels, std::span<const std::size_t> rows) {
  double pos = 0.0;
  for (std::size_t r : rows) pos += labels[r] != 0 ? 1.0 : 0.0;
  const double n = static_cast<double>(rows.size());
  const double neg = n - pos;
  if (pos == 0.0 || neg == 0.0) throw DataError("class weights need both classes present");
  return {n / (2.0 * neg), n / (2.0 * pos)};
}

double LinearSvmModel::Score(std::span<const double> x) const {
  return simd::Dot(weights, x) + bias;
}

LinearSvmModel TrainSvm(const FeatureMatrix& x, std::span<const int> labels,
                        std::span<const std::size_t> rows, const SvmOptions& options,
                        SvmFitInfo* info) {
  if (!(options.c > 0.0) || !std::isfinite(options.c)) {
    throw UsageError("SVM: C must be positive and finite");
  }
  bool has_pos = false, has_neg = false;
  for (std::size_t r : rows) (labels[r] != 0 ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg) throw DataError("SVM: training rows need both classes");

  InteriorPoint ipm(x, labels, rows, options);
  ipm.UpdateW();
  double primal = 0.0, dual = 0.0;
  int iterations = 0;
  for (;; ++iterations) {
    primal = ipm.Primal();
    dual = ipm.FeasibleDual();
    if (!std::isfinite(primal) || !std::isfinite(dual)) {
      throw NumericalError("SVM: non-finite objective at iteration " + std::to_string(iterations));
    }
    if (RelativeGap(primal, dual) <= options.tolerance) break;
    if (iterations == options.max_iterations || !ipm.Step()) {
      throw NumericalError("SVM: relative duality gap " +
                           std::to_string(RelativeGap(primal, dual)) + " after " +
                           std::to_string(iterations) + " iterations");
    }
  }

  LinearSvmModel model;
  model.weights = ipm.w();
  model.bias = ipm.bias();
  model.c = options.c;
  model.class_weights = options.class_weights;
  if (info) *info = {primal, dual, RelativeGap(primal, dual), iterations};
  return model;
}

LinearSvmModel TrainSvm(const FeatureMatrix& x, std::span<const int> labels,
                        const SvmOptions& options, SvmFitInfo* info) {
  std::vector<std::size_t> rows(x.rows);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return TrainSvm(x, labels, rows, options, info);
}

double SvmObjective(const LinearSvmModel& model, const FeatureMatrix& x,
                    std::span<const int> labels, std::span<const std::size_t> rows) {
  double total = 0.5 * simd::Dot(model.weights, model.weights);
  for (std::size_t r : rows) {
    const double y = labels[r] != 0 ? 1.0 : -1.0;
    const double cw = y > 0 ? model.class_weights.positive : model.class_weights.negative;
    const double margin = y * model.Score(x.Row(r));
    if (margin < 1.0) total += model.c * cw * (1.0 - margin);
  }
  return total;
}

}  // namespace clinvec
