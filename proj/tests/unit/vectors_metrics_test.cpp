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
#include <set>
#include <sstream>

#include "clinvec/error.hpp"
#include "clinvec/metrics.hpp"
#include "clinvec/patient_vectors.hpp"
#include "support/oracles.hpp"
#include "support/test_support.hpp"

using namespace clinvec;
using namespace clinvec::testing;

TEST_SUITE("patient_vectors") {
  TEST_CASE("pooling one term repeats its vector three times") {
    const EmbeddingSet emb({"ICD10:A01"}, 2, {1, -2});
    const std::vector<ClinicalTerm> seq{T("ICD10:A01")};
    const auto p = Pool(seq, emb);
    CHECK(p.features == std::vector<double>{1, -2, 1, -2, 1, -2});
    CHECK(!p.empty);
  }

  TEST_CASE("pooling two terms gives mean, max and min") {
    const EmbeddingSet emb({"ICD10:A01", "ICD10:B01"}, 2, {1, 2, 3, 0});
    const std::vector<ClinicalTerm> seq{T("ICD10:A01"), T("ICD10:B01"), T("ICD10:Z99")};
    CHECK(Pool(seq, emb).features == std::vector<double>{2, 1, 3, 2, 1, 0});
  }

  TEST_CASE("empty or fully unknown sequences pool to zeros with a flag") {
    const EmbeddingSet emb({"ICD10:A01"}, 2, {1, 2});
    const auto p = Pool(std::vector<ClinicalTerm>{}, emb);
    CHECK(p.features == std::vector<double>(6, 0.0));
    CHECK(p.empty);
    CHECK(Pool(std::vector<ClinicalTerm>{T("ICD10:Q01")}, emb).empty);
  }

  TEST_CASE("pooled bounds: min <= mean <= max per coordinate") {
    Rng rng(10);
    const auto params = RandomParams(rng, 12, 3, 1.0);
    std::vector<std::string> tokens;
    for (int k = 0; k < 12; ++k) tokens.push_back("ICD10:A" + std::to_string(10 + k));
    const auto emb = Finalize(params, Combine::kSum, tokens);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<ClinicalTerm> seq;
      const auto len = 1 + rng.Below(10);
      for (std::uint64_t k = 0; k < len; ++k) seq.push_back(T(tokens[rng.Below(12)]));
      const auto f = Pool(seq, emb).features;
      for (std::size_t j = 0; j < 3; ++j) {
        CHECK(f[6 + j] <= f[j] + 1e-12);
        CHECK(f[j] <= f[3 + j] + 1e-12);
      }
    }
  }

  TEST_CASE("one-hot marks presence") {
    Corpus c;
    c.documents.push_back(
        Document{"P1", {T("ICD10:A01"), T("ICD10:A01"), T("ICD10:A01"), T("ICD10:B01"),
                        T("ICD10:B01"), T("ICD10:C01")}});
    const auto vocab = Vocabulary::Build(c, 1);
    const std::vector<ClinicalTerm> seq{T("ICD10:A01"), T("ICD10:C01"), T("ICD10:A01")};
    CHECK(OneHot(seq, vocab) == std::vector<double>{1, 0, 1});
    CHECK(OneHot(std::vector<ClinicalTerm>{}, vocab) == std::vector<double>{0, 0, 0});
    const std::vector<ClinicalTerm> all{T("ICD10:C01"), T("ICD10:B01"), T("ICD10:A01")};
    CHECK(OneHot(all, vocab) == std::vector<double>{1, 1, 1});
  }

  TEST_CASE("standardizer centres and scales with the population deviation") {
    FeatureMatrix x(2, 1);
    x.data = {0, 2};
    const auto s = Standardizer::Fit(x);
    CHECK(s.mean()[0] == 1.0);
    CHECK(s.scale()[0] == 1.0);
    CHECK(s.Transform(x).data == std::vector<double>{-1, 1});

    FeatureMatrix c(3, 2);
    c.data = {5, 1, 5, 2, 5, 6};
    const auto sc = Standardizer::Fit(c);
    CHECK(sc.scale()[0] == 1.0);
    const auto t = sc.Transform(c);
    for (std::size_t r = 0; r < 3; ++r) CHECK(t.Row(r)[0] == 0.0);
    const auto centred = sc.Transform(std::vector<double>{sc.mean()[0], sc.mean()[1]});
    CHECK(centred == std::vector<double>{0, 0});
  }

  TEST_CASE("standardizer fitted on a subset ignores the other rows") {
    FeatureMatrix x(4, 1);
    x.data = {0, 2, 100, -50};
    const std::vector<std::size_t> rows{0, 1};
    const auto s = Standardizer::Fit(x, rows);
    CHECK(s.mean()[0] == 1.0);
    CHECK(s.scale()[0] == 1.0);
  }

  TEST_CASE("feature files round-trip") {
    PatientFeatures f;
    f.representation = Representation::kPooled;
    f.patient_ids = {"P1", "P2", "P3"};
    f.labels = {1, 0, 0};
    f.empty_window = {0, 0, 1};
    f.x = FeatureMatrix(3, 2);
    f.x.data = {0.1, -2.5, 1e-9, 3.25, 0, 0};
    std::ostringstream out;
    WriteFeatures(out, f);
    std::istringstream in(out.str());
    const auto back = ReadFeatures(in);
    CHECK(back.patient_ids == f.patient_ids);
    CHECK(back.labels == f.labels);
    CHECK(back.x.rows == 3);
    CHECK(back.x.data == f.x.data);
    CHECK(back.x.cols == 2);
  }

  TEST_CASE("cohort features follow the observation window") {
    const std::vector<PatientRecord> records{
        Patient("P1", Sex::kMale, 1950, 2008, "C01",
                {Adm("P1", "2010-01-01", {"ICD10:A01"}, {"OPCS4:K40"}),
                 Adm("P1", "2012-06-01", {"ICD10:I50"})}),
        Patient("P2", Sex::kMale, 1950, 2008, "C01", {Adm("P2", "2012-05-01", {"ICD10:B01"})})};
    std::vector<CohortMember> cohort(2);
    cohort[0] = {"P1", true, "P1", D("2012-06-01"), 1};
    cohort[1] = {"P2", false, "P1", D("2012-06-01"), 0};
    PatientFeatureOptions opt;
    opt.variant = CorpusVariant::kPrimDxProc;
    const auto seqs = CohortSequences(records, cohort, opt);
    REQUIRE(seqs.size() == 2);
    CHECK(seqs[0] == std::vector<ClinicalTerm>{T("ICD10:A01"), T("OPCS4:K40")});
    CHECK(seqs[1].empty());

    const EmbeddingSet emb({"ICD10:A01", "OPCS4:K40"}, 1, {2, 4});
    const auto f = PooledFeatures(records, cohort, emb, opt);
    CHECK(f.x.Row(0)[0] == 3.0);
    CHECK(f.empty_window == std::vector<char>{0, 1});
    CHECK(f.EmptyWindowCount() == 1);
    CHECK(f.group_ids == std::vector<std::string>{"P1", "P1"});
  }
}

TEST_SUITE("metrics") {
  TEST_CASE("hand cases") {
    CHECK(Auroc(std::vector<int>{1, 0}, std::vector<double>{0.9, 0.1}) == 1.0);
    CHECK(Auroc(std::vector<int>{1, 0, 1, 0}, std::vector<double>{0.8, 0.8, 0.6, 0.2}) == 0.625);
    CHECK(F1Weighted(std::vector<int>{1, 0, 1, 0}, std::vector<int>{1, 0, 1, 0}) == 1.0);
  }

  TEST_CASE("AUROC equals the all-pairs count with ties") {
    Rng rng(55);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t n = 2 + rng.Below(150);
      std::vector<int> labels(n);
      std::vector<double> scores(n);
      for (std::size_t k = 0; k < n; ++k) {
        labels[k] = rng.Bernoulli(0.4) ? 1 : 0;
        scores[k] = static_cast<double>(rng.Below(12)) / 4.0;
      }
      labels[0] = 1;
      labels[1] = 0;
      CHECK(Auroc(labels, scores) == AllPairsAuroc(labels, scores));
    }
  }

  TEST_CASE("AUROC is invariant under strictly increasing transforms") {
    Rng rng(56);
    std::vector<int> labels(80);
    std::vector<double> scores(80);
    for (std::size_t k = 0; k < 80; ++k) {
      labels[k] = k % 3 == 0;
      scores[k] = rng.Uniform(-2, 2);
    }
    std::vector<double> moved(scores);
    for (double& s : moved) s = std::exp(3 * s) + 7;
    CHECK(Auroc(labels, scores) == Auroc(labels, moved));
    std::vector<double> flipped(scores);
    for (double& s : flipped) s = -s;
    CHECK(Auroc(labels, flipped) == doctest::Approx(1.0 - Auroc(labels, scores)));
  }

  TEST_CASE("AUROC rejects a single class and NaN scores") {
    CHECK_THROWS_AS(Auroc(std::vector<int>{1, 1}, std::vector<double>{0.1, 0.2}), DataError);
    CHECK_THROWS_AS(Auroc(std::vector<int>{1, 0}, std::vector<double>{NAN, 0.2}), DataError);
  }

  TEST_CASE("weighted F1 of a constant classifier") {
    // Three positives, one negative, all predicted positive: F1(pos) = 6/7,
    // F1(neg) = 0, weighted by support 3/4.
    CHECK(F1Weighted(std::vector<int>{1, 1, 1, 0}, std::vector<int>{1, 1, 1, 1}) ==
          doctest::Approx(0.75 * 6.0 / 7.0));
  }
}
