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

#include "clinvec/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "clinvec/cohort.hpp"
#include "clinvec/content_hash.hpp"
#include "clinvec/ehr_io.hpp"
#include "clinvec/error.hpp"
#include "clinvec/patient_vectors.hpp"
#include "clinvec/rng.hpp"
#include "clinvec/split.hpp"
#include "clinvec/synth.hpp"

namespace clinvec {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::ofstream OpenOut(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

std::ifstream OpenIn(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  return in;
}

void Close(std::ofstream& out, const fs::path& path) {
  out.close();
  if (!out) throw DataError("failed writing " + path.string());
}

template <typename Fn>
void WriteFile(const fs::path& path, Fn&& fn) {
  std::ofstream out = OpenOut(path);
  fn(out);
  Close(out, path);
}

std::string CellId(CorpusVariant variant, int window, int dim) {
  std::string id(VariantName(variant));
  if (window > 0) id += "-w" + std::to_string(window);
  if (dim > 0) id += "-d" + std::to_string(dim);
  return id;
}

Vocabulary LoadVocab(const fs::path& path) { return Vocabulary::Read(path); }

Corpus LoadCorpus(const fs::path& path, CorpusVariant variant) {
  std::ifstream in = OpenIn(path);
  return ReadCorpus(in, variant, path.string());
}

std::vector<PatientRecord> LoadIngested(const fs::path& dir) {
  return LoadRecords(dir / "patients.csv", dir / "admissions.csv");
}

std::string FormatSeconds(double s) {
  std::ostringstream os;
  os.precision(3);
  os << std::fixed << s;
  return os.str();
}

}  // namespace

const std::set<std::string>& PipelineConfigKeys() {
  static const std::set<std::string> keys = {
      "run.seed",          "data.patients",     "data.admissions",   "cohort.codes",
      "cohort.min_age",    "cohort.max_age",    "cohort.controls_per_case",
      "cohort.gap_months", "corpus.variants",   "corpus.min_count",  "corpus.truncate_codes",
      "cooc.window",       "cooc.weighting",    "glove.d",           "glove.epochs",
      "glove.learning_rate", "glove.x_max",     "glove.alpha",       "glove.combine",
      "eval.representations", "eval.c_grid",    "eval.tolerance",    "eval.folds"};
  return keys;
}

PipelinePlan ResolvePlan(const PipelineSettings& settings) {
  const Config& cfg = settings.config;
  std::set<std::string> known = PipelineConfigKeys();
  for (const auto& [key, value] : cfg.values()) {
    if (key.rfind("synth.", 0) == 0) known.insert(key);
  }
  cfg.RequireKnownKeys(known);

  PipelinePlan p;
  p.seed = settings.seed ? *settings.seed : cfg.GetU64("run.seed", 0);
  p.synthesize = !cfg.Has("data.patients") && !cfg.Has("data.admissions");
  if (!p.synthesize) {
    if (!cfg.Has("data.patients") || !cfg.Has("data.admissions")) {
      throw UsageError("data.patients and data.admissions must be given together");
    }
    p.patients_path = cfg.GetString("data.patients", "");
    p.admissions_path = cfg.GetString("data.admissions", "");
  }
  p.case_codes = cfg.GetList("cohort.codes", {"ICD10:I50", "ICD9:428"});
  for (const auto& tok : p.case_codes) ClinicalTerm::FromToken(tok);
  p.min_age = static_cast<int>(cfg.GetInt("cohort.min_age", 40));
  p.max_age = static_cast<int>(cfg.GetInt("cohort.max_age", 85));
  p.controls_per_case = static_cast<int>(cfg.GetInt("cohort.controls_per_case", 4));
  p.gap_months = static_cast<int>(cfg.GetInt("cohort.gap_months", 6));
  if (p.controls_per_case < 1) throw UsageError("cohort.controls_per_case must be >= 1");
  if (p.gap_months < 0) throw UsageError("cohort.gap_months must be >= 0");
  if (p.min_age > p.max_age) throw UsageError("cohort.min_age exceeds cohort.max_age");

  std::vector<std::string> names;
  for (CorpusVariant v : kAllVariants) names.emplace_back(VariantName(v));
  for (const auto& name : cfg.GetList("corpus.variants", names)) {
    p.variants.push_back(ParseVariant(name));
  }
  p.min_count = cfg.GetInt("corpus.min_count", 5);
  if (p.min_count < 1) throw UsageError("corpus.min_count must be >= 1");
  p.truncate_codes = cfg.GetBool("corpus.truncate_codes", false);

  p.windows = cfg.GetIntList("cooc.window", {5, 10, 20});
  for (int w : p.windows) {
    if (w < 1) throw UsageError("cooc.window values must be >= 1");
  }
  p.weighting = ParseWeighting(cfg.GetString("cooc.weighting", "inverse_distance"));

  p.dims = cfg.GetIntList("glove.d", {50});
  for (int d : p.dims) {
    if (d < 1) throw UsageError("glove.d values must be >= 1");
  }
  p.glove.epochs = static_cast<int>(cfg.GetInt("glove.epochs", p.glove.epochs));
  p.glove.learning_rate = cfg.GetDouble("glove.learning_rate", p.glove.learning_rate);
  p.glove.x_max = cfg.GetDouble("glove.x_max", p.glove.x_max);
  p.glove.alpha = cfg.GetDouble("glove.alpha", p.glove.alpha);
  p.glove.combine = ParseCombine(cfg.GetString("glove.combine", "sum"));
  p.glove.threads = settings.threads;
  p.glove.dim = p.dims.empty() ? 1 : p.dims.front();
  p.glove.Validate();

  for (const auto& name : cfg.GetList("eval.representations", {"one_hot", "pooled"})) {
    p.representations.push_back(ParseRepresentation(name));
  }
  p.c_grid = cfg.GetDoubleList("eval.c_grid", kDefaultCGrid);
  for (double c : p.c_grid) {
    if (!(c > 0.0)) throw UsageError("eval.c_grid values must be positive");
  }
  p.svm_tolerance = cfg.GetDouble("eval.tolerance", 1e-4);
  p.folds = static_cast<int>(cfg.GetInt("eval.folds", 6));
  if (p.folds < 2) throw UsageError("eval.folds must be >= 2");
  if (p.variants.empty() || p.representations.empty() || p.c_grid.empty()) {
    throw UsageError("empty variant, representation or C grid");
  }
  if (p.synthesize) SynthConfigFromConfig(cfg, p.seed).Validate();
  return p;
}

Pipeline::Pipeline(PipelineSettings settings)
    : settings_(std::move(settings)), plan_(ResolvePlan(settings_)) {
  if (settings_.threads < 1) throw UsageError("--threads must be >= 1");
}

fs::path Pipeline::RunStage(const StageSpec& spec,
                            const std::function<void(const fs::path&)>& body) {
  if (auto it = done_.find(spec.id); it != done_.end()) return it->second;
  const fs::path dir = settings_.out / "stages" / spec.id;
  const auto start = std::chrono::steady_clock::now();

  json inputs = json::object();
  std::string key_material = spec.id + "\n" + std::to_string(spec.version) + "\n" + spec.params;
  for (const fs::path& input : spec.inputs) {
    const std::string hash = Sha256File(input);
    inputs[input.generic_string()] = hash;
    key_material += "\n" + hash;
  }
  const std::string key = Sha256Hex(key_material);

  bool hit = false;
  const fs::path manifest_path = dir / "manifest.json";
  if (fs::exists(manifest_path)) {
    try {
      std::ifstream in(manifest_path);
      const json manifest = json::parse(in);
      hit = manifest.value("key", "") == key && manifest.value("status", "") == "ok";
      for (const std::string& name : spec.outputs) {
        if (!hit) break;
        const fs::path p = dir / name;
        hit = fs::exists(p) && manifest["outputs"].value(name, "") == Sha256File(p);
      }
    } catch (const json::exception&) {
      hit = false;
    }
  }

  StageRecord record{spec.id, hit, 0.0, dir};
  if (!hit) {
    fs::remove_all(dir);
    fs::create_directories(dir);
    json manifest = {{"stage", spec.id},      {"version", spec.version}, {"key", key},
                     {"params", spec.params}, {"inputs", inputs},        {"seeds", spec.seeds}};
    try {
      body(dir);
    } catch (const Error& e) {
      manifest["status"] = "failed";
      manifest["error"] = e.what();
      WriteFile(manifest_path, [&](std::ostream& out) { out << manifest.dump(2) << '\n'; });
      const std::string what =
          "stage " + spec.id + ": " + e.what() + " (manifest " + manifest_path.string() + ")";
      throw Error(e.kind(), what);
    }
    json outputs = json::object();
    for (const std::string& name : spec.outputs) {
      const fs::path p = dir / name;
      if (!fs::exists(p)) throw DataError("stage " + spec.id + " did not produce " + name);
      outputs[name] = Sha256File(p);
    }
    manifest["outputs"] = outputs;
    manifest["status"] = "ok";
    manifest["wall_clock_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    WriteFile(manifest_path, [&](std::ostream& out) { out << manifest.dump(2) << '\n'; });
  }
  record.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (settings_.log != nullptr) {
    *settings_.log << (hit ? "[cached] " : "[ran]    ") << spec.id << " ("
                   << FormatSeconds(record.seconds) << " s)\n";
  }
  stages_.push_back(record);
  done_[spec.id] = dir;
  return dir;
}

fs::path Pipeline::Synth() {
  StageSpec spec;
  spec.id = "synth";
  const std::uint64_t seed = DeriveSeed(plan_.seed, "synth");
  spec.params = settings_.config.Canonical("synth.") + "seed=" + std::to_string(seed) + "\n";
  spec.outputs = {"patients.csv", "admissions.csv", "truth.csv"};
  spec.seeds = {{"synth", seed}};
  return RunStage(spec, [&](const fs::path& dir) {
    const SynthCohort cohort = GenerateSyntheticCohort(SynthConfigFromConfig(settings_.config, seed));
    WriteFile(dir / "patients.csv", [&](std::ostream& o) { WritePatients(o, cohort.records); });
    WriteFile(dir / "admissions.csv", [&](std::ostream& o) { WriteAdmissions(o, cohort.records); });
    WriteFile(dir / "truth.csv", [&](std::ostream& o) { WriteTruth(o, cohort.truth); });
  });
}

fs::path Pipeline::Ingest() {
  fs::path patients = plan_.patients_path;
  fs::path admissions = plan_.admissions_path;
  if (plan_.synthesize) {
    const fs::path synth = Synth();
    patients = synth / "patients.csv";
    admissions = synth / "admissions.csv";
  }
  StageSpec spec;
  spec.id = "ingest";
  spec.inputs = {patients, admissions};
  spec.outputs = {"patients.csv", "admissions.csv"};
  return RunStage(spec, [&](const fs::path& dir) {
    const auto records = LoadRecords(patients, admissions);
    WriteFile(dir / "patients.csv", [&](std::ostream& o) { WritePatients(o, records); });
    WriteFile(dir / "admissions.csv", [&](std::ostream& o) { WriteAdmissions(o, records); });
  });
}

fs::path Pipeline::Cohort() {
  const fs::path ingest = Ingest();
  StageSpec spec;
  spec.id = "cohort";
  const std::uint64_t seed = DeriveSeed(plan_.seed, "cohort.match");
  std::ostringstream params;
  params << "codes=";
  for (const auto& c : plan_.case_codes) params << c << ';';
  params << "\nages=" << plan_.min_age << '-' << plan_.max_age
         << "\ncontrols=" << plan_.controls_per_case << "\ngap=" << plan_.gap_months
         << "\nseed=" << seed << '\n';
  spec.params = params.str();
  spec.inputs = {ingest / "patients.csv", ingest / "admissions.csv"};
  spec.outputs = {"cohort.csv", "exclusions.csv", "summary.txt"};
  spec.seeds = {{"match", seed}};
  return RunStage(spec, [&](const fs::path& dir) {
    const auto records = LoadIngested(ingest);
    CodeList codes;
    for (const auto& tok : plan_.case_codes) codes.insert(ClinicalTerm::FromToken(tok));
    const auto identified = IdentifyCases(records, codes, AgeRange{plan_.min_age, plan_.max_age});
    CohortAssignment assignment =
        MatchCaseControls(records, identified, codes, MatchOptions{plan_.controls_per_case, seed});
    const auto members = CohortMembers(assignment);
    std::map<std::string_view, const PatientRecord*> by_id;
    for (const auto& r : records) by_id.emplace(r.patient_id, &r);
    for (const auto& m : members) {
      if (!m.is_case && ObservationWindow(*by_id.at(m.patient_id), m.index_date, plan_.gap_months)
                            .empty()) {
        ++assignment.empty_control_windows;
      }
    }
    WriteFile(dir / "cohort.csv", [&](std::ostream& o) { WriteCohort(o, members); });
    WriteFile(dir / "exclusions.csv", [&](std::ostream& o) {
      o << "patient_id,reason\n";
      for (const auto& e : assignment.exclusions) o << e.patient_id << ',' << e.reason << '\n';
    });
    WriteFile(dir / "summary.txt", [&](std::ostream& o) {
      o << "cases = " << assignment.cases.size() << '\n'
        << "controls = " << assignment.controls.size() << '\n'
        << "excluded = " << assignment.exclusions.size() << '\n'
        << "under_matched_cases = " << assignment.under_matched.size() << '\n'
        << "empty_control_windows = " << assignment.empty_control_windows << '\n';
    });
  });
}

fs::path Pipeline::Corpus(CorpusVariant variant) {
  const fs::path ingest = Ingest();
  StageSpec spec;
  spec.id = "corpus-" + CellId(variant, 0, 0);
  spec.params = "min_count=" + std::to_string(plan_.min_count) +
                "\ntruncate=" + std::to_string(plan_.truncate_codes) + "\n";
  spec.inputs = {ingest / "patients.csv", ingest / "admissions.csv"};
  spec.outputs = {"corpus.tsv", "vocab.tsv", "stats.csv"};
  return RunStage(spec, [&](const fs::path& dir) {
    const auto records = LoadIngested(ingest);
    const clinvec::Corpus corpus =
        BuildCorpus(records, variant, CorpusOptions{plan_.truncate_codes});
    const Vocabulary vocab = Vocabulary::Build(corpus, plan_.min_count);
    WriteFile(dir / "corpus.tsv", [&](std::ostream& o) { WriteCorpus(o, corpus); });
    WriteFile(dir / "vocab.tsv", [&](std::ostream& o) { vocab.Write(o); });
    WriteFile(dir / "stats.csv", [&](std::ostream& o) {
      WriteCorpusStats(o, variant, ComputeCorpusStats(corpus, vocab));
    });
  });
}

fs::path Pipeline::Cooc(CorpusVariant variant, int window) {
  const fs::path corpus_dir = Corpus(variant);
  StageSpec spec;
  spec.id = "cooc-" + CellId(variant, window, 0);
  spec.params = "window=" + std::to_string(window) + "\nweighting=" +
                std::string(WeightingName(plan_.weighting)) + "\n";
  spec.inputs = {corpus_dir / "corpus.tsv", corpus_dir / "vocab.tsv"};
  spec.outputs = {"cooc.bin"};
  return RunStage(spec, [&](const fs::path& dir) {
    const Vocabulary vocab = LoadVocab(corpus_dir / "vocab.tsv");
    const clinvec::Corpus corpus = LoadCorpus(corpus_dir / "corpus.tsv", variant);
    const CoocMatrix m =
        Accumulate(corpus, vocab, CoocOptions{window, plan_.weighting, settings_.threads});
    WriteFile(dir / "cooc.bin", [&](std::ostream& o) { WriteCoocBinary(o, m); });
  });
}

fs::path Pipeline::Train(CorpusVariant variant, int window, int dim) {
  const fs::path corpus_dir = Corpus(variant);
  const fs::path cooc_dir = Cooc(variant, window);
  TrainConfig cfg = plan_.glove;
  cfg.dim = dim;
  cfg.seed = DeriveSeed(plan_.seed, "glove." + CellId(variant, window, dim));
  StageSpec spec;
  spec.id = "train-" + CellId(variant, window, dim);
  std::ostringstream params;
  params.precision(17);
  params << "dim=" << cfg.dim << "\nepochs=" << cfg.epochs << "\nlr=" << cfg.learning_rate
         << "\nx_max=" << cfg.x_max << "\nalpha=" << cfg.alpha
         << "\ncombine=" << CombineName(cfg.combine) << "\nseed=" << cfg.seed
         << "\nthreads=" << cfg.threads << "\nwindow=" << window
         << "\nweighting=" << WeightingName(plan_.weighting) << '\n';
  spec.params = params.str();
  spec.inputs = {cooc_dir / "cooc.bin", corpus_dir / "vocab.tsv"};
  spec.outputs = {"embeddings.txt", "loss.csv"};
  spec.seeds = {{"glove", cfg.seed}};
  return RunStage(spec, [&](const fs::path& dir) {
    const Vocabulary vocab = LoadVocab(corpus_dir / "vocab.tsv");
    std::ifstream in = OpenIn(cooc_dir / "cooc.bin");
    const CoocMatrix m = ReadCoocBinary(in, vocab.size(), window, plan_.weighting);
    const TrainResult result = TrainGlove(m, cfg);
    const EmbeddingSet emb =
        Finalize(result.params, cfg.combine, vocab.tokens(),
                 EmbeddingProvenance{std::string(VariantName(variant)), window, dim, cfg.seed});
    WriteFile(dir / "embeddings.txt", [&](std::ostream& o) { WriteEmbeddings(o, emb); });
    WriteFile(dir / "loss.csv", [&](std::ostream& o) { WriteLossTrace(o, result.loss_trace); });
  });
}

fs::path Pipeline::OneHotVectors(CorpusVariant variant) {
  const fs::path ingest = Ingest();
  const fs::path cohort = Cohort();
  const fs::path corpus_dir = Corpus(variant);
  StageSpec spec;
  spec.id = "vectors-one_hot-" + CellId(variant, 0, 0);
  spec.params = "gap=" + std::to_string(plan_.gap_months) +
                "\ntruncate=" + std::to_string(plan_.truncate_codes) + "\n";
  spec.inputs = {ingest / "patients.csv", ingest / "admissions.csv", cohort / "cohort.csv",
                 corpus_dir / "vocab.tsv"};
  spec.outputs = {"features.csv", "features.meta"};
  return RunStage(spec, [&](const fs::path& dir) {
    const auto records = LoadIngested(ingest);
    const auto members = ReadCohort(cohort / "cohort.csv");
    const Vocabulary vocab = LoadVocab(corpus_dir / "vocab.tsv");
    const PatientFeatures f = OneHotFeatures(
        records, members, vocab,
        PatientFeatureOptions{variant, CorpusOptions{plan_.truncate_codes}, plan_.gap_months});
    WriteFile(dir / "features.csv", [&](std::ostream& o) { WriteFeatures(o, f); });
    WriteFile(dir / "features.meta", [&](std::ostream& o) { WriteFeatureMetadata(o, f); });
  });
}

fs::path Pipeline::PooledVectors(CorpusVariant variant, int window, int dim) {
  const fs::path ingest = Ingest();
  const fs::path cohort = Cohort();
  const fs::path train = Train(variant, window, dim);
  StageSpec spec;
  spec.id = "vectors-pooled-" + CellId(variant, window, dim);
  spec.params = "gap=" + std::to_string(plan_.gap_months) +
                "\ntruncate=" + std::to_string(plan_.truncate_codes) +
                "\nwindow=" + std::to_string(window) + "\n";
  spec.inputs = {ingest / "patients.csv", ingest / "admissions.csv", cohort / "cohort.csv",
                 train / "embeddings.txt"};
  spec.outputs = {"features.csv", "features.meta"};
  return RunStage(spec, [&](const fs::path& dir) {
    const auto records = LoadIngested(ingest);
    const auto members = ReadCohort(cohort / "cohort.csv");
    std::ifstream in = OpenIn(train / "embeddings.txt");
    const EmbeddingSet raw = ReadEmbeddings(in, (train / "embeddings.txt").string());
    const EmbeddingSet emb(raw.tokens(), raw.dim(), raw.vectors(),
                           EmbeddingProvenance{std::string(VariantName(variant)), window, dim,
                                               DeriveSeed(plan_.seed, "glove." +
                                                          CellId(variant, window, dim))});
    const PatientFeatures f = PooledFeatures(
        records, members, emb,
        PatientFeatureOptions{variant, CorpusOptions{plan_.truncate_codes}, plan_.gap_months});
    WriteFile(dir / "features.csv", [&](std::ostream& o) { WriteFeatures(o, f); });
    WriteFile(dir / "features.meta", [&](std::ostream& o) { WriteFeatureMetadata(o, f); });
  });
}

fs::path Pipeline::Split() {
  const fs::path cohort = Cohort();
  StageSpec spec;
  spec.id = "split";
  const std::uint64_t seed = DeriveSeed(plan_.seed, "split");
  spec.params = "folds=" + std::to_string(plan_.folds) + "\nseed=" + std::to_string(seed) + "\n";
  spec.inputs = {cohort / "cohort.csv"};
  spec.outputs = {"split.csv"};
  spec.seeds = {{"split", seed}};
  return RunStage(spec, [&](const fs::path& dir) {
    const auto members = ReadCohort(cohort / "cohort.csv");
    std::vector<int> labels;
    std::vector<std::string> groups;
    std::vector<std::string> ids;
    for (const auto& m : members) {
      labels.push_back(m.label);
      groups.push_back(m.matched_case_id);
      ids.push_back(m.patient_id);
    }
    const SplitPlan plan = MakeSplit(labels, groups, seed, SplitOptions{plan_.folds, 4});
    CheckSplitHygiene(plan, groups, members.size());
    WriteFile(dir / "split.csv", [&](std::ostream& o) { WriteSplitPlan(o, plan, ids); });
  });
}

fs::path Pipeline::Eval(const fs::path& vectors_dir) {
  const fs::path cohort = Cohort();
  const fs::path split = Split();
  StageSpec spec;
  spec.id = "eval-" + vectors_dir.filename().string().substr(std::string("vectors-").size());
  std::ostringstream params;
  params.precision(17);
  params << "c_grid=";
  for (double c : plan_.c_grid) params << c << ';';
  params << "\ntolerance=" << plan_.svm_tolerance << '\n';
  spec.params = params.str();
  spec.inputs = {vectors_dir / "features.csv", vectors_dir / "features.meta",
                 cohort / "cohort.csv", split / "split.csv"};
  spec.outputs = {"row.csv", "cv.csv"};
  return RunStage(spec, [&](const fs::path& dir) {
    std::ifstream in = OpenIn(vectors_dir / "features.csv");
    PatientFeatures f = ReadFeatures(in, (vectors_dir / "features.csv").string());
    const Config meta = Config::Load(vectors_dir / "features.meta");
    f.representation = ParseRepresentation(meta.GetString("representation", ""));
    const auto members = ReadCohort(cohort / "cohort.csv");
    AttachGroups(f, members);
    std::ifstream split_in = OpenIn(split / "split.csv");
    SplitPlan plan = ReadSplitPlan(split_in, f.patient_ids, (split / "split.csv").string());
    plan.seed = DeriveSeed(plan_.seed, "split");
    CheckSplitHygiene(plan, f.group_ids, f.patient_ids.size());

    CvOptions options;
    options.c_grid = plan_.c_grid;
    options.standardize = f.representation == Representation::kPooled;
    options.tolerance = plan_.svm_tolerance;
    CvResult cv;
    EvalRow row = EvaluateFeatures(f, plan, options, &cv);
    row.variant = meta.GetString("variant", "");
    if (f.representation == Representation::kPooled) {
      row.d = static_cast<int>(meta.GetInt("d", 0));
      row.window = static_cast<int>(meta.GetInt("window", 0));
    }
    WriteFile(dir / "row.csv", [&](std::ostream& o) { WriteReportCsv(o, EvalReport{{row}}); });
    WriteFile(dir / "cv.csv", [&](std::ostream& o) {
      o << "C,mean_auroc\n";
      char buf[96];
      for (std::size_t k = 0; k < cv.c_grid.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%g,%.6f\n", cv.c_grid[k], cv.mean_auroc[k]);
        o << buf;
      }
    });
  });
}

void Pipeline::RunCorpora() {
  for (CorpusVariant v : plan_.variants) Corpus(v);
}

void Pipeline::RunCooc() {
  for (CorpusVariant v : plan_.variants) {
    for (int w : plan_.windows) Cooc(v, w);
  }
}

void Pipeline::RunTrain() {
  for (CorpusVariant v : plan_.variants) {
    for (int w : plan_.windows) {
      for (int d : plan_.dims) Train(v, w, d);
    }
  }
}

std::vector<fs::path> Pipeline::VectorDirs() {
  std::vector<fs::path> dirs;
  for (CorpusVariant v : plan_.variants) {
    for (Representation r : plan_.representations) {
      if (r == Representation::kOneHot) {
        dirs.push_back(OneHotVectors(v));
        continue;
      }
      for (int w : plan_.windows) {
        for (int d : plan_.dims) dirs.push_back(PooledVectors(v, w, d));
      }
    }
  }
  return dirs;
}

void Pipeline::RunVectors() { VectorDirs(); }

EvalReport Pipeline::RunAll() {
  const std::vector<fs::path> vector_dirs = VectorDirs();
  std::vector<fs::path> rows;
  for (const fs::path& dir : vector_dirs) rows.push_back(Eval(dir) / "row.csv");

  StageSpec spec;
  spec.id = "report";
  spec.inputs = rows;
  spec.outputs = {"report.csv", "results_table.txt"};
  EvalReport report;
  const fs::path dir = RunStage(spec, [&](const fs::path& stage_dir) {
    EvalReport merged;
    for (const fs::path& row : rows) {
      std::ifstream in = OpenIn(row);
      for (auto& r : ReadReportCsv(in, row.string()).rows) merged.rows.push_back(std::move(r));
    }
    WriteFile(stage_dir / "report.csv", [&](std::ostream& o) { WriteReportCsv(o, merged); });
    WriteFile(stage_dir / "results_table.txt",
              [&](std::ostream& o) { RenderResultsTable(o, merged); });
  });
  std::ifstream in = OpenIn(dir / "report.csv");
  report = ReadReportCsv(in, (dir / "report.csv").string());
  fs::copy_file(dir / "report.csv", settings_.out / "report.csv",
                fs::copy_options::overwrite_existing);
  fs::copy_file(dir / "results_table.txt", settings_.out / "results_table.txt",
                fs::copy_options::overwrite_existing);
  return report;
}

}  // namespace clinvec
