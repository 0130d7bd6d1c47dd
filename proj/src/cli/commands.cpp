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

#include "clinvec/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "clinvec/content_hash.hpp"
#include "clinvec/ehr_io.hpp"
#include "clinvec/error.hpp"
#include "clinvec/pipeline.hpp"
#include "clinvec/rng.hpp"
#include "clinvec/synth.hpp"

namespace clinvec {

namespace fs = std::filesystem;

namespace {

struct GlobalOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  std::string out = "out";
};

PipelineSettings Settings(const GlobalOptions& g, std::ostream& log) {
  PipelineSettings s;
  if (!g.config_path.empty()) s.config = Config::Load(g.config_path);
  s.seed = g.seed;
  s.threads = g.threads;
  s.out = g.out;
  s.log = &log;
  return s;
}

void WriteRunManifest(const Pipeline& pipeline, const PipelineSettings& settings,
                      const std::string& command) {
  nlohmann::json stages = nlohmann::json::array();
  for (const StageRecord& r : pipeline.stages()) {
    stages.push_back({{"stage", r.id},
                      {"cache_hit", r.cache_hit},
                      {"wall_clock_seconds", r.seconds},
                      {"manifest", (r.dir / "manifest.json").generic_string()}});
  }
  const nlohmann::json manifest = {
      {"command", command},
      {"config_hash", Sha256Hex(settings.config.Canonical())},
      {"seed", pipeline.plan().seed},
      {"threads", settings.threads},
      {"stages", stages}};
  std::ofstream out(settings.out / "run_manifest.json");
  out << manifest.dump(2) << '\n';
  if (!out) throw DataError("cannot write run manifest under " + settings.out.string());
}

int RunSynth(const GlobalOptions& g, std::ostream& out) {
  Config cfg;
  if (!g.config_path.empty()) cfg = Config::Load(g.config_path);
  for (const auto& [key, value] : cfg.values()) {
    if (key.rfind("synth.", 0) != 0 && !PipelineConfigKeys().contains(key)) {
      throw UsageError("unknown config key '" + key + "'");
    }
  }
  const std::uint64_t seed = g.seed ? *g.seed : cfg.GetU64("run.seed", 0);
  const SynthCohort cohort =
      GenerateSyntheticCohort(SynthConfigFromConfig(cfg, DeriveSeed(seed, "synth")));
  const fs::path dir = g.out;
  fs::create_directories(dir);
  auto write = [&](const char* name, auto&& fn) {
    std::ofstream f(dir / name, std::ios::binary);
    fn(f);
    f.close();
    if (!f) throw DataError("cannot write " + (dir / name).string());
    out << (dir / name).string() << '\n';
  };
  write("patients.csv", [&](std::ostream& o) { WritePatients(o, cohort.records); });
  write("admissions.csv", [&](std::ostream& o) { WriteAdmissions(o, cohort.records); });
  write("truth.csv", [&](std::ostream& o) { WriteTruth(o, cohort.truth); });
  return 0;
}

int RunNeighbors(const std::string& path, const std::string& term, std::size_t k,
                 std::ostream& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path);
  const EmbeddingSet emb = ReadEmbeddings(in, path);
  if (k == 0) {
    if (!emb.Find(term)) NearestNeighbors(emb, term, 1);  // raises with suggestions
    return 0;
  }
  char buf[64];
  for (const Neighbor& n : NearestNeighbors(emb, term, k)) {
    std::snprintf(buf, sizeof buf, "%.6f", n.similarity);
    out << n.token << ' ' << buf << '\n';
  }
  return 0;
}

int RunReport(const GlobalOptions& g, const std::string& report_path, std::ostream& out) {
  const fs::path path = report_path.empty() ? fs::path(g.out) / "report.csv" : fs::path(report_path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string() + " (run `eval` first)");
  RenderResultsTable(out, ReadReportCsv(in, path.string()));
  return 0;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Clinical concept embeddings and risk prediction over coded EHR data"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions g;
  app.add_option("--config", g.config_path, "Key-value config file")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Top-level seed (overrides run.seed)");
  app.add_option("--threads", g.threads, "Worker threads; 1 is deterministic")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "Output directory");

  auto* synth = app.add_subcommand("synth", "Generate a synthetic cohort");
  auto* ingest = app.add_subcommand("ingest", "Validate and canonicalise input CSVs");
  auto* cohort = app.add_subcommand("cohort", "Identify cases and match controls");
  auto* corpus = app.add_subcommand("corpus", "Build corpora and vocabularies");
  auto* cooc = app.add_subcommand("cooc", "Accumulate co-occurrence matrices");
  auto* train = app.add_subcommand("train", "Train GloVe embeddings");
  auto* vectors = app.add_subcommand("vectors", "Build patient feature vectors");
  auto* eval = app.add_subcommand("eval", "Cross-validate and test every grid cell");
  auto* pipeline = app.add_subcommand("pipeline", "Run every stage and render the report");
  auto* neighbors = app.add_subcommand("neighbors", "Nearest terms by cosine similarity");
  std::string emb_path;
  std::string term;
  std::size_t k = 10;
  neighbors->add_option("--embeddings", emb_path, "Embedding file")->required();
  neighbors->add_option("--term", term, "Query term, e.g. ICD10:I50")->required();
  neighbors->add_option("-k,--k", k, "Number of neighbours");
  auto* report = app.add_subcommand("report", "Render the summary table of a report");
  std::string report_path;
  report->add_option("--report", report_path, "report.csv (default <out>/report.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  try {
    if (synth->parsed()) return RunSynth(g, out);
    if (neighbors->parsed()) return RunNeighbors(emb_path, term, k, out);
    if (report->parsed()) return RunReport(g, report_path, out);

    const PipelineSettings settings = Settings(g, err);
    Pipeline p(settings);
    std::string command;
    if (ingest->parsed()) {
      command = "ingest";
      out << p.Ingest().string() << '\n';
    } else if (cohort->parsed()) {
      command = "cohort";
      out << p.Cohort().string() << '\n';
    } else if (corpus->parsed()) {
      command = "corpus";
      p.RunCorpora();
    } else if (cooc->parsed()) {
      command = "cooc";
      p.RunCooc();
    } else if (train->parsed()) {
      command = "train";
      p.RunTrain();
    } else if (vectors->parsed()) {
      command = "vectors";
      p.RunVectors();
    } else if (eval->parsed() || pipeline->parsed()) {
      command = eval->parsed() ? "eval" : "pipeline";
      p.RunAll();
      if (pipeline->parsed()) {
        std::ifstream in(fs::path(g.out) / "results_table.txt");
        out << in.rdbuf();
      }
    }
    WriteRunManifest(p, settings, command);
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(e.kind());
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ErrorKind::kData);
  }
}

}  // namespace clinvec
