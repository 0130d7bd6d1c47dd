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
#include <sstream>
#include <string>
#include <vector>

#include "clinvec/cli.hpp"
#include "clinvec/content_hash.hpp"
#include "support/test_support.hpp"

using namespace clinvec;
using namespace clinvec::testing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome Run(std::vector<std::string> args) {
  args.insert(args.begin(), "clinvec");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Outcome o;
  o.code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::size_t Count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) {
    ++n;
  }
  return n;
}

const char* kSmallPipeline =
    "run.seed = 5\n"
    "synth.n_patients = 1500\n"
    "synth.planted = ICD10:R01=5, ICD10:R02=5\n"
    "corpus.variants = PRIMDX\n"
    "cooc.window = 5\n"
    "glove.d = 8\n"
    "glove.epochs = 15\n"
    "eval.c_grid = 0.1, 1\n";

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("synth writes three files and repeats byte for byte") {
    TempDir dir;
    WriteFile(dir / "c.cfg", "synth.n_patients = 50\n");
    const auto a = Run({"--config", (dir / "c.cfg").string(), "--seed", "7", "--out",
                        (dir / "a").string(), "synth"});
    REQUIRE(a.code == 0);
    const auto b = Run({"--config", (dir / "c.cfg").string(), "--seed", "7", "--out",
                        (dir / "b").string(), "synth"});
    REQUIRE(b.code == 0);
    for (const char* name : {"patients.csv", "admissions.csv", "truth.csv"}) {
      REQUIRE(fs::exists(dir / "a" / name));
      CHECK(Sha256Hex(ReadFile(dir.path() / "a" / name)) ==
            Sha256Hex(ReadFile(dir.path() / "b" / name)));
    }
  }

  TEST_CASE("an unknown key fails and is named") {
    TempDir dir;
    WriteFile(dir / "c.cfg", "synth.n_patientz = 50\n");
    const auto r = Run({"--config", (dir / "c.cfg").string(), "--out", dir.path().string(), "synth"});
    CHECK(r.code == 1);
    CHECK(r.err.find("n_patientz") != std::string::npos);
    WriteFile(dir / "d.cfg", "glove.dd = 5\n");
    const auto p = Run({"--config", (dir / "d.cfg").string(), "--out", dir.path().string(), "pipeline"});
    CHECK(p.code == 1);
    CHECK(p.err.find("glove.dd") != std::string::npos);
  }

  TEST_CASE("usage errors exit with 1") {
    CHECK(Run({}).code == 1);
    CHECK(Run({"frobnicate"}).code == 1);
    CHECK(Run({"neighbors", "--term", "X"}).code == 1);
    CHECK(Run({"--help"}).code == 0);
  }

  TEST_CASE("neighbors: table, k = 0 and unknown terms") {
    TempDir dir;
    WriteFile(dir / "e.txt", "3 2\nICD10:A01 1 0\nICD10:B01 0 1\nICD10:C01 1 1\n");
    const std::string path = (dir / "e.txt").string();
    const auto r = Run({"neighbors", "--embeddings", path, "--term", "ICD10:A01", "-k", "2"});
    CHECK(r.code == 0);
    CHECK(r.out == "ICD10:C01 0.707107\nICD10:B01 0.000000\n");
    const auto zero = Run({"neighbors", "--embeddings", path, "--term", "ICD10:A01", "-k", "0"});
    CHECK(zero.code == 0);
    CHECK(zero.out.empty());
    const auto bad = Run({"neighbors", "--embeddings", path, "--term", "ICD10:A0l"});
    CHECK(bad.code != 0);
    CHECK(bad.err.find("ICD10:A01") != std::string::npos);
    CHECK(Run({"neighbors", "--embeddings", (dir / "missing.txt").string(), "--term", "X"}).code ==
          2);
  }

  TEST_CASE("malformed input data exits with 2") {
    TempDir dir;
    WriteFile(dir / "patients.csv",
              "patient_id,sex,birth_year,recruitment_year,assessment_centre\nP1,M,1950,2008,C01\n");
    WriteFile(dir / "admissions.csv",
              "patient_id,admit_date,position,system,code\nP1,2010-13-01,0,ICD10,I50\n");
    WriteFile(dir / "c.cfg", "data.patients = " + (dir / "patients.csv").string() +
                                 "\ndata.admissions = " + (dir / "admissions.csv").string() + "\n");
    const auto r = Run({"--config", (dir / "c.cfg").string(), "--out", (dir / "o").string(), "ingest"});
    CHECK(r.code == 2);
    CHECK(r.err.find("line 2") != std::string::npos);
  }

  TEST_CASE("pipeline caches stages and re-runs only what changed") {
    TempDir dir;
    WriteFile(dir / "c.cfg", kSmallPipeline);
    const std::vector<std::string> args{"--config", (dir / "c.cfg").string(), "--threads", "1",
                                        "--out", (dir / "o").string(), "pipeline"};
    const auto first = Run(args);
    REQUIRE_MESSAGE(first.code == 0, first.err);
    CHECK(Count(first.err, "[cached]") == 0);
    CHECK(first.out.find("PRIMDX") != std::string::npos);
    const std::string report = ReadFile(dir.path() / "o" / "report.csv");
    CHECK(Count(report, "\n") == 3);

    const auto second = Run(args);
    REQUIRE(second.code == 0);
    CHECK(Count(second.err, "[ran]") == 0);
    CHECK(Count(second.err, "[cached]") == Count(first.err, "[ran]"));
    CHECK(ReadFile(dir.path() / "o" / "run_manifest.json").find("\"cache_hit\": false") ==
          std::string::npos);

    fs::remove(dir.path() / "o" / "stages" / "cooc-PRIMDX-w5" / "cooc.bin");
    const auto third = Run(args);
    REQUIRE(third.code == 0);
    CHECK(Count(third.err, "[ran]") == 1);
    CHECK(third.err.find("[ran]    cooc-PRIMDX-w5") != std::string::npos);
    CHECK(ReadFile(dir.path() / "o" / "report.csv") == report);

    const auto table = Run({"--out", (dir / "o").string(), "report"});
    CHECK(table.code == 0);
    CHECK(table.out.find("Corpus") != std::string::npos);
  }
}
