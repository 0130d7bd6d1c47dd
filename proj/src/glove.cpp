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

#include "clinvec/glove.hpp"

#include <cmath>
#include <numeric>
#include <thread>

#include "clinvec/error.hpp"
#include "clinvec/rng.hpp"
#include "clinvec/simd/kernels.hpp"

namespace clinvec {

namespace {

// Per-entry constants reused every epoch.
struct PreparedEntry {
  std::uint32_t i;
  std::uint32_t j;
  double log_x;
  double weight;
};

std::vector<PreparedEntry> Prepare(const CoocMatrix& cooc, const TrainConfig& cfg) {
  std::vector<PreparedEntry> out;
  out.reserve(cooc.size());
  for (const auto& e : cooc.entries()) {
    out.push_back({e.i, e.j, std::log(e.x), WeightFn(e.x, cfg.x_max, cfg.alpha)});
  }
  return out;
}

void CheckShapes(const GloveParams& params, const CoocMatrix& cooc) {
  if (params.vocab_size != cooc.dimension() || params.main.size() != params.vocab_size * params.dim ||
      params.context.size() != params.main.size() ||
      params.main_bias.size() != params.vocab_size ||
      params.context_bias.size() != params.vocab_size) {
    throw UsageError("GloVe parameter shapes do not match the co-occurrence matrix");
  }
}

struct AdagradState {
  std::vector<double> main_sq, context_sq, main_bias_sq, context_bias_sq;
  explicit AdagradState(const GloveParams& p)
      : main_sq(p.main.size(), 0.0),
        context_sq(p.context.size(), 0.0),
        main_bias_sq(p.vocab_size, 0.0),
        context_bias_sq(p.vocab_size, 0.0) {}
};

// Visits order[begin, end). Returns false (and fills `bad`) on a non-finite
// residual.
bool RunSlice(GloveParams& params, AdagradState& state, const std::vector<PreparedEntry>& entries,
              const std::vector<std::uint32_t>& order, std::size_t begin, std::size_t end,
              double lr, std::size_t* bad) {
  const std::size_t d = params.dim;
  const auto& kernels = simd::Active();
  for (std::size_t k = begin; k < end; ++k) {
    const PreparedEntry& e = entries[order[k]];
    double* w = params.main.data() + static_cast<std::size_t>(e.i) * d;
    double* c = params.context.data() + static_cast<std::size_t>(e.j) * d;
    const double diff = kernels.dot(w, c, d) + params.main_bias[e.i] +
                        params.context_bias[e.j] - e.log_x;
    if (!std::isfinite(diff)) {
      *bad = order[k];
      return false;
    }
    const double coef = 2.0 * e.weight * diff;
    kernels.adagrad_pair(w, c, state.main_sq.data() + static_cast<std::size_t>(e.i) * d,
                         state.context_sq.data() + static_cast<std::size_t>(e.j) * d, coef, lr,
                         kAdagradEps, d);
    state.main_bias_sq[e.i] += coef * coef;
    params.main_bias[e.i] -= lr * coef / std::sqrt(state.main_bias_sq[e.i] + kAdagradEps);
    state.context_bias_sq[e.j] += coef * coef;
    params.context_bias[e.j] -= lr * coef / std::sqrt(state.context_bias_sq[e.j] + kAdagradEps);
  }
  return true;
}

}  // namespace

GloveParams GloveParams::Zeros(std::size_t vocab_size, std::size_t dim) {
  GloveParams p;
  p.vocab_size = vocab_size;
  p.dim = dim;
  p.main.assign(vocab_size * dim, 0.0);
  p.context.assign(vocab_size * dim, 0.0);
  p.main_bias.assign(vocab_size, 0.0);
  p.context_bias.assign(vocab_size, 0.0);
  return p;
}

GloveParams GloveParams::RandomInit(std::size_t vocab_size, std::size_t dim, std::uint64_t seed) {
  GloveParams p = Zeros(vocab_size, dim);
  Rng rng(seed);
  const double half = 0.5 / static_cast<double>(dim);
  for (auto* block : {&p.main, &p.context, &p.main_bias, &p.context_bias}) {
    for (double& v : *block) v = rng.Uniform(-half, half);
  }
  return p;
}

std::string_view CombineName(Combine combine) {
  return combine == Combine::kSum ? "sum" : "main_only";
}

Combine ParseCombine(std::string_view name) {
  if (name == "sum") return Combine::kSum;
  if (name == "main_only") return Combine::kMainOnly;
  throw UsageError("unknown combine mode '" + std::string(name) + "' (expected sum or main_only)");
}

void TrainConfig::Validate() const {
  if (dim < 1) throw UsageError("glove: dim must be >= 1");
  if (epochs < 1) throw UsageError("glove: epochs must be >= 1");
  if (!(learning_rate > 0.0)) throw UsageError("glove: learning_rate must be positive");
  if (!(x_max > 0.0)) throw UsageError("glove: x_max must be positive");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw UsageError("glove: alpha must be in (0, 1]");
  if (threads < 1) throw UsageError("glove: threads must be >= 1");
}

double WeightFn(double x, double x_max, double alpha) {
  if (!(x > 0.0)) throw DataError("weight function needs a positive count");
  return x < x_max ? std::pow(x / x_max, alpha) : 1.0;
}

double GloveLoss(const GloveParams& params, const CoocMatrix& cooc, const TrainConfig& cfg) {
  CheckShapes(params, cooc);
  double total = 0.0;
  for (const auto& e : cooc.entries()) {
    const double diff = simd::Dot(params.MainRow(e.i), params.ContextRow(e.j)) +
                        params.main_bias[e.i] + params.context_bias[e.j] - std::log(e.x);
    total += WeightFn(e.x, cfg.x_max, cfg.alpha) * diff * diff;
  }
  return total;
}

GloveParams GloveLossGradient(const GloveParams& params, const CoocMatrix& cooc,
                              const TrainConfig& cfg) {
  CheckShapes(params, cooc);
  GloveParams grad = GloveParams::Zeros(params.vocab_size, params.dim);
  for (const auto& e : cooc.entries()) {
    const auto w = params.MainRow(e.i);
    const auto c = params.ContextRow(e.j);
    const double diff = simd::Dot(w, c) + params.main_bias[e.i] + params.context_bias[e.j] -
                        std::log(e.x);
    const double coef = 2.0 * WeightFn(e.x, cfg.x_max, cfg.alpha) * diff;
    simd::Axpy(coef, c, grad.MainRow(e.i));
    simd::Axpy(coef, w, grad.ContextRow(e.j));
    grad.main_bias[e.i] += coef;
    grad.context_bias[e.j] += coef;
  }
  return grad;
}

TrainResult TrainGlove(const CoocMatrix& cooc, const TrainConfig& cfg) {
  cfg.Validate();
  return TrainGlove(cooc, cfg,
                    GloveParams::RandomInit(cooc.dimension(), static_cast<std::size_t>(cfg.dim),
                                            DeriveSeed(cfg.seed, "glove.init")));
}

TrainResult TrainGlove(const CoocMatrix& cooc, const TrainConfig& cfg, GloveParams initial) {
  cfg.Validate();
  if (cooc.empty()) throw DataError("cannot train GloVe on an empty co-occurrence matrix");
  CheckShapes(initial, cooc);

  TrainResult result;
  result.params = std::move(initial);
  GloveParams& params = result.params;
  AdagradState state(params);
  const auto entries = Prepare(cooc, cfg);
  std::vector<std::uint32_t> order(entries.size());
  std::iota(order.begin(), order.end(), 0u);
  Rng shuffle_rng(DeriveSeed(cfg.seed, "glove.shuffle"));

  const std::size_t threads =
      std::min<std::size_t>(static_cast<std::size_t>(cfg.threads), entries.size());
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    shuffle_rng.Shuffle(std::span<std::uint32_t>(order));
    std::vector<std::size_t> bad(threads, 0);
    std::vector<char> ok(threads, 1);
    if (threads <= 1) {
      ok[0] = RunSlice(params, state, entries, order, 0, order.size(), cfg.learning_rate, &bad[0]);
    } else {
      // Lock-free across workers: racy updates to shared rows are accepted,
      // which is why this path is not bitwise reproducible.
      std::vector<std::thread> workers;
      const std::size_t per = (order.size() + threads - 1) / threads;
      for (std::size_t t = 0; t < threads; ++t) {
        const std::size_t begin = std::min(order.size(), t * per);
        const std::size_t end = std::min(order.size(), begin + per);
        workers.emplace_back([&, t, begin, end] {
          ok[t] = RunSlice(params, state, entries, order, begin, end, cfg.learning_rate, &bad[t]);
        });
      }
      for (auto& w : workers) w.join();
    }
    for (std::size_t t = 0; t < threads; ++t) {
      if (!ok[t]) {
        const auto& e = entries[bad[t]];
        throw NumericalError("GloVe training diverged: non-finite residual at epoch " +
                             std::to_string(epoch) + ", pair (" + std::to_string(e.i) + ", " +
                             std::to_string(e.j) + ")");
      }
    }
    const double loss = GloveLoss(params, cooc, cfg);
    if (!std::isfinite(loss)) {
      throw NumericalError("GloVe training diverged: non-finite loss after epoch " +
                           std::to_string(epoch));
    }
    result.loss_trace.push_back(loss);
  }
  return result;
}

EmbeddingSet Finalize(const GloveParams& params, Combine combine, std::vector<std::string> tokens,
                      EmbeddingProvenance provenance) {
  if (tokens.size() != params.vocab_size) {
    throw UsageError("token list does not match the GloVe vocabulary size");
  }
  std::vector<double> vectors = params.main;
  if (combine == Combine::kSum) {
    for (std::size_t k = 0; k < vectors.size(); ++k) vectors[k] += params.context[k];
  }
  return EmbeddingSet(std::move(tokens), params.dim, std::move(vectors), std::move(provenance));
}

}  // namespace clinvec
