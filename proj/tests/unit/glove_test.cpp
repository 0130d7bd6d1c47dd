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

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "clinvec/cooc.hpp"
#include "clinvec/error.hpp"
#include "clinvec/glove.hpp"
#include "support/oracles.hpp"
#include "support/test_support.hpp"

using namespace clinvec;
using namespace clinvec::testing;

namespace {

CoocMatrix Single(double x) {
  return CoocMatrix::FromEntries(1, 5, Weighting::kInverseDistance, {{0, 0, x}});
}

double Residual(const GloveParams& p, std::uint32_t i, std::uint32_t j, double x) {
  double dot = 0.0;
  for (std::size_t k = 0; k < p.dim; ++k) dot += p.MainRow(i)[k] * p.ContextRow(j)[k];
  return dot + p.main_bias[i] + p.context_bias[j] - std::log(x);
}

}  // namespace

TEST_SUITE("glove") {
  TEST_CASE("weighting function caps at x_max") {
    CHECK(WeightFn(100, 100, 0.75) == 1.0);
    CHECK(WeightFn(25, 100, 0.75) == doctest::Approx(0.353553).epsilon(1e-6));
    CHECK(WeightFn(200, 100, 0.75) == 1.0);
  }

  TEST_CASE("loss of one pair at x = e with zero parameters is one") {
    TrainConfig cfg;
    cfg.dim = 3;
    cfg.x_max = 1.0;
    CHECK(GloveLoss(GloveParams::Zeros(1, 3), Single(std::exp(1.0)), cfg) ==
          doctest::Approx(1.0).epsilon(1e-15));
  }

  TEST_CASE("loss is zero on an exact fit and matches a per-entry sum") {
    Rng rng(4);
    TrainConfig cfg;
    cfg.dim = 3;
    const auto cooc = RandomCooc(rng, 6, 0.6);
    auto p = RandomParams(rng, 6, 3, 0.5);
    double expected = 0.0;
    for (const auto& e : cooc.entries()) {
      const double r = Residual(p, e.i, e.j, e.x);
      const double f = e.x < cfg.x_max ? std::pow(e.x / cfg.x_max, cfg.alpha) : 1.0;
      expected += f * r * r;
    }
    CHECK(GloveLoss(p, cooc, cfg) == doctest::Approx(expected).epsilon(1e-12));

    // Rank-one fit: w = 0, b_i + b~_j = ln x_ij for a matrix of the form
    // x_ij = exp(u_i + v_j).
    std::vector<CoocEntry> entries;
    for (std::uint32_t i = 0; i < 4; ++i) {
      for (std::uint32_t j = 0; j < 4; ++j) entries.push_back({i, j, std::exp(0.3 * (i + j))});
    }
    const auto exact = CoocMatrix::FromEntries(4, 5, Weighting::kUniform, entries);
    auto q = GloveParams::Zeros(4, 3);
    for (std::uint32_t i = 0; i < 4; ++i) q.main_bias[i] = q.context_bias[i] = 0.3 * i;
    CHECK(GloveLoss(q, exact, cfg) == doctest::Approx(0.0).epsilon(1e-24));
  }

  TEST_CASE("analytic gradient agrees with central differences") {
    Rng rng(2024);
    for (int trial = 0; trial < 10; ++trial) {
      const std::size_t v = 2 + rng.Below(9);
      const std::size_t d = 1 + rng.Below(5);
      TrainConfig cfg;
      cfg.dim = static_cast<int>(d);
      const auto cooc = RandomCooc(rng, v, 0.5);
      const auto p = RandomParams(rng, v, d, 0.8);
      CHECK(GradientCheckError(p, cooc, cfg) < 1e-4);
    }
  }

  TEST_CASE("one constraint is fitted to high accuracy") {
    TrainConfig cfg;
    cfg.dim = 2;
    cfg.epochs = 500;
    cfg.learning_rate = 0.05;
    cfg.seed = 11;
    const auto r = TrainGlove(Single(10.0), cfg);
    CHECK(std::abs(Residual(r.params, 0, 0, 10.0)) < 1e-3);
    CHECK(r.loss_trace.size() == 500);

    const auto pair = CoocMatrix::FromEntries(2, 5, Weighting::kInverseDistance,
                                              {{0, 1, 7.0}, {1, 0, 7.0}});
    const auto r2 = TrainGlove(pair, cfg);
    CHECK(std::abs(Residual(r2.params, 0, 1, 7.0)) < 1e-3);
    CHECK(std::abs(Residual(r2.params, 1, 0, 7.0)) < 1e-3);
  }

  TEST_CASE("single-threaded training is bitwise reproducible") {
    Rng rng(6);
    const auto cooc = RandomCooc(rng, 10, 0.5);
    TrainConfig cfg;
    cfg.dim = 4;
    cfg.epochs = 20;
    cfg.seed = 99;
    const auto a = TrainGlove(cooc, cfg);
    const auto b = TrainGlove(cooc, cfg);
    CHECK(a.params.main == b.params.main);
    CHECK(a.params.context == b.params.context);
    CHECK(a.params.main_bias == b.params.main_bias);
    CHECK(a.params.context_bias == b.params.context_bias);
    CHECK(a.loss_trace == b.loss_trace);
    cfg.seed = 100;
    CHECK(TrainGlove(cooc, cfg).params.main != a.params.main);
  }

  TEST_CASE("initialisation range scales with the dimension") {
    const auto p = GloveParams::RandomInit(30, 8, 5);
    for (const auto* block : {&p.main, &p.context, &p.main_bias, &p.context_bias}) {
      for (double v : *block) CHECK(std::abs(v) <= 0.5 / 8);
    }
  }

  TEST_CASE("invalid configuration is rejected") {
    TrainConfig cfg;
    cfg.dim = 0;
    CHECK_THROWS_AS(cfg.Validate(), UsageError);
    cfg = TrainConfig{};
    cfg.epochs = 0;
    CHECK_THROWS_AS(cfg.Validate(), UsageError);
    cfg = TrainConfig{};
    cfg.alpha = 1.5;
    CHECK_THROWS_AS(cfg.Validate(), UsageError);
  }

  TEST_CASE("planted clusters: loss falls below a tenth of epoch one") {
    const auto corpus = PlantedClusterCorpus(3, 400);
    const auto vocab = Vocabulary::Build(corpus, 1);
    const auto cooc = Accumulate(corpus, vocab, CoocOptions{5});
    TrainConfig cfg;
    cfg.dim = 10;
    cfg.epochs = 150;
    cfg.seed = 1;
    const auto r = TrainGlove(cooc, cfg);
    CHECK(r.loss_trace.back() < 0.1 * r.loss_trace.front());
  }

  TEST_CASE("finalize combines main and context rows") {
    Rng rng(12);
    const auto p = RandomParams(rng, 3, 2, 1.0);
    const std::vector<std::string> tokens{"ICD10:A01", "ICD10:B01", "ICD10:C01"};
    const auto main = Finalize(p, Combine::kMainOnly, tokens);
    CHECK(main.vectors() == p.main);
    const auto sum = Finalize(p, Combine::kSum, tokens);
    for (std::size_t k = 0; k < p.main.size(); ++k) {
      CHECK(sum.vectors()[k] == p.main[k] + p.context[k]);
    }
    auto zero_ctx = p;
    std::fill(zero_ctx.context.begin(), zero_ctx.context.end(), 0.0);
    CHECK(Finalize(zero_ctx, Combine::kSum, tokens).vectors() == p.main);
    CHECK(ParseCombine(CombineName(Combine::kMainOnly)) == Combine::kMainOnly);
  }

  TEST_CASE("neighbors on a hand-computed 2-D example") {
    const EmbeddingSet emb({"A", "B", "C"}, 2, {1, 0, 0, 1, 1, 1});
    const auto n = NearestNeighbors(emb, "A", 2);
    REQUIRE(n.size() == 2);
    CHECK(n[0].token == "C");
    CHECK(n[0].similarity == doctest::Approx(0.7071).epsilon(1e-4));
    CHECK(n[1].token == "B");
    CHECK(n[1].similarity == 0.0);
    CHECK(CosineSimilarity(emb.Row(2), emb.Row(2)) == doctest::Approx(1.0));
    CHECK(NearestNeighbors(emb, "A", 0).empty());
    CHECK_THROWS_AS(NearestNeighbors(emb, "Q", 1), DataError);
    CHECK_THROWS_AS(NearestNeighbors(emb, "A", 3), UsageError);
  }

  TEST_CASE("neighbor lists are sorted by descending similarity") {
    Rng rng(21);
    const auto p = RandomParams(rng, 25, 4, 1.0);
    std::vector<std::string> tokens;
    for (int k = 0; k < 25; ++k) tokens.push_back("T" + std::to_string(k));
    const auto emb = Finalize(p, Combine::kSum, tokens);
    const auto n = NearestNeighbors(emb, "T3", 10);
    REQUIRE(n.size() == 10);
    for (std::size_t k = 1; k < n.size(); ++k) CHECK(n[k - 1].similarity >= n[k].similarity);
    for (const auto& x : n) CHECK(x.token != "T3");
  }

  TEST_CASE("embedding text file round-trips exactly") {
    Rng rng(13);
    const auto p = RandomParams(rng, 7, 5, 1.0);
    std::vector<std::string> tokens;
    for (int k = 0; k < 7; ++k) tokens.push_back("ICD10:A0" + std::to_string(k));
    const auto emb = Finalize(p, Combine::kSum, tokens);
    std::ostringstream out;
    WriteEmbeddings(out, emb);
    std::istringstream in(out.str());
    CHECK(ReadEmbeddings(in) == emb);
    std::istringstream bad("2 2\nA 1 2\n");
    CHECK_THROWS_AS(ReadEmbeddings(bad), DataError);
  }
}
