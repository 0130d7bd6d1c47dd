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

#ifndef CLINVEC_PIPELINE_HPP_
#define CLINVEC_PIPELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "clinvec/config.hpp"
#include "clinvec/corpus.hpp"
#include "clinvec/cooc.hpp"
#include "clinvec/experiment.hpp"
#include "clinvec/glove.hpp"

namespace clinvec {

// Every key the pipeline understands, `synth.*` excluded (the generator
// checks its own section).
const std::set<std::string>& PipelineConfigKeys();

struct PipelineSettings {
  Config config;
  std::optional<std::uint64_t> seed;  // overrides run.seed
  int threads = 1;
  std::filesystem::path out = "out";
  std::ostream* log = nullptr;
};

// Grids and stage parameters resolved from the config.
struct PipelinePlan {
  std::uint64_t seed = 0;
  bool synthesize = true;
  std::filesystem::path patients_path;
  std::filesystem::path admissions_path;
  std::vector<std::string> case_codes;
  int min_age = 40;
  int max_age = 85;
  int controls_per_case = 4;
  int gap_months = 6;
  std::vector<CorpusVariant> variants;
  std::int64_t min_count = 5;
  bool truncate_codes = false;
  std::vector<int> windows;
  Weighting weighting = Weighting::kInverseDistance;
  std::vector<int> dims;
  TrainConfig glove;  // dim and seed set per cell
  std::vector<Representation> representations;
  std::vector<double> c_grid;
  double svm_tolerance = 1e-4;
  int folds = 6;
};

PipelinePlan ResolvePlan(const PipelineSettings& settings);

struct StageRecord {
  std::string id;
  bool cache_hit = false;
  double seconds = 0.0;
  std::filesystem::path dir;
};

// Runs the chain synth -> ingest -> cohort -> corpus -> cooc -> train ->
// vectors -> split -> eval -> report inside `out/stages/<stage id>/`. A stage
// is skipped when its manifest records the same key (stage name, version,
// parameters and the SHA-256 of every input) and all outputs still hash to
// the recorded values.
class Pipeline {
 public:
  explicit Pipeline(PipelineSettings settings);

  std::filesystem::path Synth();  // stage dir with patients/admissions/truth
  std::filesystem::path Ingest();
  std::filesystem::path Cohort();
  std::filesystem::path Corpus(CorpusVariant variant);
  std::filesystem::path Cooc(CorpusVariant variant, int window);
  std::filesystem::path Train(CorpusVariant variant, int window, int dim);
  std::filesystem::path OneHotVectors(CorpusVariant variant);
  std::filesystem::path PooledVectors(CorpusVariant variant, int window, int dim);
  std::filesystem::path Split();
  std::filesystem::path Eval(const std::filesystem::path& vectors_dir);

  // Stages up to and including the named one for every grid cell.
  void RunCorpora();
  void RunCooc();
  void RunTrain();
  void RunVectors();
  // Every grid cell through evaluation; writes report.csv and results_table.txt
  // under `out/` and returns the report.
  EvalReport RunAll();

  const PipelinePlan& plan() const { return plan_; }
  const std::vector<StageRecord>& stages() const { return stages_; }
  const std::filesystem::path& out() const { return settings_.out; }

 private:
  struct StageSpec {
    std::string id;
    int version = 1;
    std::string params;
    std::vector<std::filesystem::path> inputs;
    std::vector<std::string> outputs;
    std::map<std::string, std::uint64_t> seeds;
  };
  std::filesystem::path RunStage(const StageSpec& spec,
                                 const std::function<void(const std::filesystem::path&)>& body);
  std::vector<std::filesystem::path> VectorDirs();

  PipelineSettings settings_;
  PipelinePlan plan_;
  std::vector<StageRecord> stages_;
  std::map<std::string, std::filesystem::path> done_;
};

}  // namespace clinvec

#endif  // CLINVEC_PIPELINE_HPP_
