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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "clinvec/corpus.hpp"
#include "clinvec/ehr_io.hpp"
#include "clinvec/error.hpp"
#include "support/test_support.hpp"

using namespace clinvec;
using namespace clinvec::testing;

namespace {

const std::filesystem::path kHand = std::filesystem::path(CLINVEC_FIXTURE_DIR) / "hand";

}  // namespace

TEST_SUITE("corpus") {
  TEST_CASE("hand-checked fixture statistics") {
    const auto records = LoadRecords(kHand / "patients.csv", kHand / "admissions.csv");
    REQUIRE(records.size() == 5);
    CHECK(records[4].admissions.empty());

    std::ifstream in(kHand / "expected_stats.csv");
    std::string line;
    std::getline(in, line);
    int rows = 0;
    while (std::getline(in, line)) {
      std::istringstream fields(line);
      std::string variant;
      std::getline(fields, variant, ',');
      std::int64_t min_count = 0, total = 0, unique = 0, median = 0, vocab = 0;
      char comma = 0;
      fields >> min_count >> comma >> total >> comma >> unique >> comma >> median >> comma >> vocab;
      CAPTURE(variant);
      const auto corpus = BuildCorpus(records, ParseVariant(variant));
      CHECK(corpus.documents.size() == 4);
      const auto stats = ComputeCorpusStats(corpus, Vocabulary::Build(corpus, min_count));
      CHECK(stats.tokens_total == total);
      CHECK(stats.tokens_unique == unique);
      CHECK(stats.tokens_median == median);
      CHECK(stats.vocabulary_size == vocab);
      ++rows;
    }
    CHECK(rows == 4);
  }

  TEST_CASE("fixture documents keep chronological and positional order") {
    const auto records = LoadRecords(kHand / "patients.csv", kHand / "admissions.csv");
    const auto corpus = BuildCorpus(records, CorpusVariant::kPrimDxSecDx);
    std::vector<std::string> p3;
    for (const auto& t : corpus.documents[2].tokens) p3.push_back(t.code);
    CHECK(p3 == std::vector<std::string>{"J45", "I10", "E11", "I50"});
  }
}
