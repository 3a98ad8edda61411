// Copyright 2026 The SecAgg Audit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <map>
#include <random>
#include <system_error>

#include "absl/strings/cord.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "secagg_audit/audit_report_io.h"
#include "secagg_audit/csv.h"
#include "secagg_audit/curves.h"
#include "secagg_audit/gaussian_mechanism.h"
#include "secagg_audit/linalg_stats.h"
#include "secagg_audit/status_macros.h"
#include "secagg_audit/update_io.h"

namespace secagg_audit::cli {
namespace {

using nlohmann::json;

constexpr char kModulePayload[] = "type.secagg-audit/module";

enum class ValueType { kInt, kUint, kDouble, kDoubleOrInf, kString, kDoubleList };

constexpr unsigned kCurvesBit = 1u << 0;
constexpr unsigned kAuditBit = 1u << 1;
constexpr unsigned kSimulateBit = 1u << 2;
constexpr unsigned kDiagnosticsBit = 1u << 3;
constexpr unsigned kAllBits = kCurvesBit | kAuditBit | kSimulateBit | kDiagnosticsBit;
constexpr unsigned kScenarioBits = kAuditBit | kSimulateBit | kDiagnosticsBit;

struct KeySpec {
  const char* name;
  ValueType type;
  unsigned commands;
};

constexpr KeySpec kKeys[] = {
    {"command", ValueType::kString, kAllBits},
    {"seed", ValueType::kUint, kAllBits},
    {"out", ValueType::kString, kAllBits},
    // Reference curves.
    {"case", ValueType::kString, kCurvesBit},
    {"n", ValueType::kInt, kCurvesBit | kDiagnosticsBit},
    {"d", ValueType::kInt, kCurvesBit | kDiagnosticsBit},
    {"eps_max", ValueType::kDouble, kCurvesBit},
    {"eps_points", ValueType::kInt, kCurvesBit},
    {"loss_max", ValueType::kDouble, kCurvesBit},
    {"buckets", ValueType::kInt, kCurvesBit},
    // Data and federated round.
    {"data_source", ValueType::kString, kScenarioBits},
    {"data_path", ValueType::kString, kScenarioBits},
    {"label_column", ValueType::kString, kScenarioBits},
    {"normalization", ValueType::kString, kScenarioBits},
    {"classes", ValueType::kInt, kScenarioBits},
    {"features", ValueType::kInt, kScenarioBits},
    {"per_class", ValueType::kInt, kScenarioBits},
    {"separation", ValueType::kDouble, kScenarioBits},
    {"data_seed", ValueType::kUint, kScenarioBits},
    {"clients", ValueType::kInt, kScenarioBits},
    {"concentration", ValueType::kDoubleOrInf, kScenarioBits},
    {"learning_rate", ValueType::kDouble, kScenarioBits},
    {"batch_size", ValueType::kInt, kScenarioBits},
    {"epochs", ValueType::kInt, kScenarioBits},
    {"init_stddev", ValueType::kDouble, kScenarioBits},
    // Audit.
    {"initial_models", ValueType::kInt, kAuditBit},
    {"trials", ValueType::kInt, kAuditBit},
    {"gamma", ValueType::kDouble, kAuditBit},
    {"deltas", ValueType::kDoubleList, kAuditBit},
    {"threshold_levels", ValueType::kInt, kAuditBit},
    {"pilot_trials", ValueType::kInt, kAuditBit},
    {"population_samples", ValueType::kInt, kAuditBit},
    {"pair_search_samples", ValueType::kInt, kAuditBit},
    {"trial_split", ValueType::kString, kAuditBit},
    // Simulate.
    {"samples", ValueType::kInt, kSimulateBit},
    {"format", ValueType::kString, kSimulateBit},
    // Diagnostics.
    {"source", ValueType::kString, kDiagnosticsBit},
    {"replicas", ValueType::kInt, kDiagnosticsBit},
    {"max_abs_skewness", ValueType::kDouble, kDiagnosticsBit},
    {"max_abs_excess_kurtosis", ValueType::kDouble, kDiagnosticsBit},
    {"max_ks_distance", ValueType::kDouble, kDiagnosticsBit},
};

unsigned CommandBit(Command command) {
  switch (command) {
    case Command::kCurves:
      return kCurvesBit;
    case Command::kAudit:
      return kAuditBit;
    case Command::kSimulate:
      return kSimulateBit;
    case Command::kDiagnostics:
      return kDiagnosticsBit;
  }
  return 0;
}

const KeySpec* FindKey(const std::string& name) {
  for (const KeySpec& spec : kKeys) {
    if (name == spec.name) return &spec;
  }
  return nullptr;
}

absl::Status KeyError(const std::string& key, const std::string& what) {
  return absl::InvalidArgumentError(
      absl::StrCat("config key '", key, "': ", what));
}

absl::Status CheckType(const std::string& key, ValueType type,
                       const json& value) {
  bool ok = false;
  switch (type) {
    case ValueType::kInt:
      ok = value.is_number_integer() &&
           value.get<int64_t>() >= std::numeric_limits<int>::min() &&
           value.get<int64_t>() <= std::numeric_limits<int>::max();
      break;
    case ValueType::kUint:
      ok = value.is_number_unsigned() ||
           (value.is_number_integer() && value.get<int64_t>() >= 0);
      break;
    case ValueType::kDouble:
      ok = value.is_number();
      break;
    case ValueType::kDoubleOrInf:
      ok = value.is_number() ||
           (value.is_string() && value.get<std::string>() == "inf");
      break;
    case ValueType::kString:
      ok = value.is_string();
      break;
    case ValueType::kDoubleList:
      ok = value.is_array() &&
           std::all_of(value.begin(), value.end(),
                       [](const json& v) { return v.is_number(); });
      break;
  }
  if (ok) return absl::OkStatus();
  static const std::map<ValueType, const char*> kTypeNames = {
      {ValueType::kInt, "an integer"},
      {ValueType::kUint, "a nonnegative integer"},
      {ValueType::kDouble, "a number"},
      {ValueType::kDoubleOrInf, "a number or \"inf\""},
      {ValueType::kString, "a string"},
      {ValueType::kDoubleList, "a list of numbers"},
  };
  return KeyError(key, absl::StrCat("expected ", kTypeNames.at(type),
                                    ", got ", value.dump()));
}

// Typed accessors for an already type-checked object.
class Values {
 public:
  explicit Values(const json& obj) : obj_(obj) {}

  bool Has(const char* key) const { return obj_.contains(key); }

  void Get(const char* key, int* out) const {
    if (Has(key)) *out = obj_.at(key).get<int>();
  }
  void Get(const char* key, int64_t* out) const {
    if (Has(key)) *out = obj_.at(key).get<int64_t>();
  }
  void Get(const char* key, uint64_t* out) const {
    if (Has(key)) *out = obj_.at(key).get<uint64_t>();
  }
  void Get(const char* key, double* out) const {
    if (!Has(key)) return;
    const json& v = obj_.at(key);
    *out = v.is_string() ? std::numeric_limits<double>::infinity()
                         : v.get<double>();
  }
  void Get(const char* key, std::string* out) const {
    if (Has(key)) *out = obj_.at(key).get<std::string>();
  }
  void Get(const char* key, std::vector<double>* out) const {
    if (Has(key)) *out = obj_.at(key).get<std::vector<double>>();
  }

 private:
  const json& obj_;
};

absl::Status RequirePositive(const std::string& key, double value) {
  if (value > 0) return absl::OkStatus();
  return KeyError(key, absl::StrCat("must be positive, got ", value));
}

absl::Status FillScenario(const Values& v, uint64_t seed, ScenarioParams* s) {
  s->data.data_seed = seed;
  v.Get("data_source", &s->data.source);
  v.Get("data_path", &s->data.path);
  v.Get("label_column", &s->data.label_column);
  if (v.Has("normalization")) {
    std::string name;
    v.Get("normalization", &name);
    absl::StatusOr<Normalization> norm = ParseNormalization(name);
    if (!norm.ok()) return KeyError("normalization", std::string(norm.status().message()));
    s->data.normalization = *norm;
  }
  v.Get("classes", &s->data.classes);
  v.Get("features", &s->data.features);
  v.Get("per_class", &s->data.per_class);
  v.Get("separation", &s->data.separation);
  v.Get("data_seed", &s->data.data_seed);
  v.Get("clients", &s->round.partition.clients);
  v.Get("concentration", &s->round.partition.concentration);
  v.Get("learning_rate", &s->round.train.learning_rate);
  v.Get("batch_size", &s->round.train.batch_size);
  v.Get("epochs", &s->round.train.epochs);
  v.Get("init_stddev", &s->init_stddev);

  if (s->data.source != "synthetic" && s->data.source != "csv") {
    return KeyError("data_source", absl::StrCat("expected \"synthetic\" or "
                                                "\"csv\", got \"",
                                                s->data.source, "\""));
  }
  if (s->data.source == "csv" && s->data.path.empty()) {
    return KeyError("data_path", "required when data_source is \"csv\"");
  }
  if (s->data.source == "synthetic") {
    if (s->data.classes < 2) return KeyError("classes", "must be >= 2");
    if (s->data.features < s->data.classes) {
      return KeyError("features", "must be >= classes");
    }
    if (s->data.per_class < 1) return KeyError("per_class", "must be >= 1");
    if (!(s->data.separation >= 0)) {
      return KeyError("separation", "must be nonnegative");
    }
  }
  if (!(s->init_stddev >= 0)) {
    return KeyError("init_stddev", "must be nonnegative");
  }
  if (absl::Status st = ValidatePartitionConfig(s->round.partition); !st.ok()) {
    return KeyError("clients/concentration", std::string(st.message()));
  }
  if (absl::Status st = ValidateTrainConfig(s->round.train); !st.ok()) {
    return KeyError("learning_rate/batch_size/epochs",
                    std::string(st.message()));
  }
  return absl::OkStatus();
}

absl::Status FillCurves(const Values& v, CurvesParams* c) {
  for (const char* key : {"case", "n", "d"}) {
    if (!v.Has(key)) {
      return KeyError(key, "missing required key for command 'curves'");
    }
  }
  std::string name;
  v.Get("case", &name);
  absl::StatusOr<ReferenceCase> which = ParseReferenceCase(name);
  if (!which.ok()) return KeyError("case", std::string(which.status().message()));
  c->which = *which;
  v.Get("n", &c->n);
  v.Get("d", &c->d);
  v.Get("eps_max", &c->eps_max);
  v.Get("eps_points", &c->eps_points);
  v.Get("loss_max", &c->grid.loss_max);
  v.Get("buckets", &c->grid.buckets);
  if (c->n < 1) return KeyError("n", "must be >= 1");
  if (c->d < 1) return KeyError("d", "must be >= 1");
  RETURN_IF_ERROR(RequirePositive("eps_max", c->eps_max));
  if (c->eps_points < 2) return KeyError("eps_points", "must be >= 2");
  if (absl::Status st = ValidateGridSpec(c->grid); !st.ok()) {
    return KeyError("loss_max/buckets", std::string(st.message()));
  }
  return absl::OkStatus();
}

absl::Status FillAudit(const Values& v, uint64_t seed, AuditConfig* a,
                       int* initial_models) {
  a->seed = seed;
  v.Get("trials", &a->trials);
  v.Get("gamma", &a->gamma);
  v.Get("deltas", &a->deltas);
  v.Get("threshold_levels", &a->threshold_levels);
  v.Get("pilot_trials", &a->pilot_trials);
  v.Get("population_samples", &a->population_samples);
  v.Get("pair_search_samples", &a->pair_search_samples);
  v.Get("initial_models", initial_models);
  if (v.Has("trial_split")) {
    std::string split;
    v.Get("trial_split", &split);
    if (split == "half") {
      a->split = TrialSplit::kHalfPerHypothesis;
    } else if (split == "full") {
      a->split = TrialSplit::kFullPerHypothesis;
    } else {
      return KeyError("trial_split", absl::StrCat("expected \"half\" or "
                                                  "\"full\", got \"",
                                                  split, "\""));
    }
  }
  if (*initial_models < 1) return KeyError("initial_models", "must be >= 1");
  if (absl::Status st = ValidateAuditConfig(*a); !st.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat("audit config: ", std::string(st.message())));
  }
  return absl::OkStatus();
}

absl::Status FillDiagnostics(const Values& v, DiagnosticsParams* p) {
  v.Get("source", &p->source);
  v.Get("n", &p->n);
  v.Get("d", &p->d);
  v.Get("replicas", &p->replicas);
  v.Get("max_abs_skewness", &p->max_abs_skewness);
  v.Get("max_abs_excess_kurtosis", &p->max_abs_excess_kurtosis);
  v.Get("max_ks_distance", &p->max_ks_distance);
  if (p->source != "uniform" && p->source != "population") {
    return KeyError("source", absl::StrCat("expected \"uniform\" or "
                                           "\"population\", got \"",
                                           p->source, "\""));
  }
  if (p->n < 1) return KeyError("n", "must be >= 1");
  if (p->d < 1) return KeyError("d", "must be >= 1");
  if (p->replicas < kMinDiagnosticSamples) {
    return KeyError("replicas",
                    absl::StrCat("must be >= ", kMinDiagnosticSamples));
  }
  return absl::OkStatus();
}

// Tags a failing status with the module that produced it.
absl::Status InModule(const char* module, absl::Status status) {
  if (!status.ok() && !status.GetPayload(kModulePayload).has_value()) {
    status.SetPayload(kModulePayload, absl::Cord(module));
  }
  return status;
}

template <typename T>
absl::StatusOr<T> InModule(const char* module, absl::StatusOr<T> value) {
  if (value.ok()) return value;
  return InModule(module, value.status());
}

std::string ResolveDirectory(const std::string& configured) {
  const char* env = std::getenv(kOutputDirEnv);
  if (env != nullptr && *env != '\0') return env;
  return configured.empty() ? std::string(".") : configured;
}

std::string ResolveFile(const std::string& configured,
                        const std::string& format) {
  const std::string path =
      !configured.empty() ? configured
                          : (format == "csv" ? "updates.csv" : "updates.saud");
  const char* env = std::getenv(kOutputDirEnv);
  if (env == nullptr || *env == '\0') return path;
  return (std::filesystem::path(env) / std::filesystem::path(path).filename())
      .string();
}

absl::Status EnsureDirectory(const std::filesystem::path& dir) {
  if (dir.empty()) return absl::OkStatus();
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    return absl::UnavailableError(absl::StrCat(
        "cannot create directory ", dir.string(), ": ", ec.message()));
  }
  return absl::OkStatus();
}

absl::StatusOr<Dataset> LoadScenarioData(const DataParams& data) {
  if (data.source == "csv") {
    CsvSchema schema;
    schema.label_column = data.label_column;
    schema.normalization = data.normalization;
    return LoadCsvDataset(data.path, schema);
  }
  return SynthDataset(data.classes, data.features, data.per_class,
                      data.separation, data.data_seed);
}

GlobalModel InitialModel(const Dataset& ds, const ScenarioParams& s,
                         uint64_t seed, uint64_t index) {
  if (s.init_stddev == 0.0) {
    return GlobalModel::Zeros(ds.num_classes, ds.num_features());
  }
  return GlobalModel::RandomNormal(ds.num_classes, ds.num_features(),
                                   s.init_stddev, seed, index);
}

absl::Status RunCurves(const RunConfig& cfg, std::vector<std::string>* files) {
  const CurvesParams& c = cfg.curves;
  const std::filesystem::path dir = ResolveDirectory(cfg.output);
  ASSIGN_OR_RETURN(const std::vector<double> grid,
                   InModule("plrv-accounting",
                            UniformEpsilonGrid(c.eps_max, c.eps_points)));
  ASSIGN_OR_RETURN(const LdpCurve exact,
                   InModule("plrv-accounting",
                            ReferenceCaseCurve(c.which, c.n, c.d, grid, c.grid)));
  ASSIGN_OR_RETURN(const double sensitivity,
                   InModule("plrv-accounting",
                            ReferenceCaseGaussianSensitivity(c.which, c.n, c.d)));
  ASSIGN_OR_RETURN(const LdpCurve gaussian,
                   InModule("gaussian-mechanism",
                            GaussianLdpCurve(sensitivity, grid)));
  RETURN_IF_ERROR(InModule("cli", EnsureDirectory(dir)));
  const std::string prefix = absl::StrCat(ReferenceCaseName(c.which), "_n",
                                          c.n, "_d", c.d);
  const std::string exact_path = (dir / (prefix + "_plrv.csv")).string();
  const std::string gaussian_path = (dir / (prefix + "_gaussian.csv")).string();
  RETURN_IF_ERROR(InModule("cli", WriteLdpCurveCsv(exact, exact_path)));
  RETURN_IF_ERROR(InModule("cli", WriteLdpCurveCsv(gaussian, gaussian_path)));
  files->push_back(exact_path);
  files->push_back(gaussian_path);
  return absl::OkStatus();
}

absl::Status RunAuditCommand(const RunConfig& cfg,
                             std::vector<std::string>* files) {
  const std::string dir = ResolveDirectory(cfg.output);
  ASSIGN_OR_RETURN(const Dataset ds,
                   InModule("fl-sim", LoadScenarioData(cfg.scenario.data)));
  std::vector<AuditReport> reports;
  for (int m = 0; m < cfg.scenario.initial_models; ++m) {
    const GlobalModel model = InitialModel(ds, cfg.scenario, cfg.seed, m);
    AuditConfig audit = cfg.audit;
    // Each initial model gets its own trial randomness.
    audit.seed = cfg.seed + static_cast<uint64_t>(m);
    ASSIGN_OR_RETURN(AuditReport report,
                     InModule("auditor",
                              FullAudit(ds, model, cfg.scenario.round, audit)));
    reports.push_back(std::move(report));
  }
  ASSIGN_OR_RETURN(const AuditReport report,
                   InModule("auditor", AverageReports(reports)));
  RETURN_IF_ERROR(InModule("cli", WriteReportFiles(report, dir)));
  for (const char* name : {kReportJsonName, kTradeoffCsvName, kEpsilonCsvName}) {
    files->push_back((std::filesystem::path(dir) / name).string());
  }
  return absl::OkStatus();
}

absl::Status RunSimulate(const RunConfig& cfg,
                         std::vector<std::string>* files) {
  const std::string path = ResolveFile(cfg.output, cfg.simulate_format);
  ASSIGN_OR_RETURN(const Dataset ds,
                   InModule("fl-sim", LoadScenarioData(cfg.scenario.data)));
  const GlobalModel model = InitialModel(ds, cfg.scenario, cfg.seed, 0);
  ASSIGN_OR_RETURN(const UpdateMatrix updates,
                   InModule("fl-sim",
                            SampleUpdatePopulation(ds, model,
                                                   cfg.scenario.round,
                                                   cfg.simulate_samples,
                                                   cfg.seed)));
  RETURN_IF_ERROR(InModule(
      "cli", EnsureDirectory(std::filesystem::path(path).parent_path())));
  if (cfg.simulate_format == "csv") {
    RETURN_IF_ERROR(InModule("fl-sim", WriteUpdateMatrixCsv(path, updates)));
  } else {
    RETURN_IF_ERROR(InModule("fl-sim", WriteUpdateMatrix(path, updates)));
  }
  files->push_back(path);
  return absl::OkStatus();
}

absl::StatusOr<UpdateMatrix> UniformSums(const DiagnosticsParams& p,
                                         uint64_t seed) {
  UpdateMatrix sums(p.replicas, p.d);
  std::uniform_real_distribution<double> uniform(-0.5, 0.5);
  for (int64_t r = 0; r < p.replicas; ++r) {
    Rng rng = MakeRng(seed, Stream::kDiagnostics, static_cast<uint64_t>(r));
    for (int j = 0; j < p.d; ++j) {
      double total = 0.0;
      for (int i = 0; i < p.n; ++i) total += uniform(rng);
      sums(r, j) = total;
    }
  }
  return sums;
}

absl::StatusOr<UpdateMatrix> PopulationSums(const RunConfig& cfg) {
  ASSIGN_OR_RETURN(const Dataset ds,
                   InModule("fl-sim", LoadScenarioData(cfg.scenario.data)));
  const GlobalModel model = InitialModel(ds, cfg.scenario, cfg.seed, 0);
  UpdateMatrix sums(cfg.diagnostics.replicas, model.dim());
  for (int64_t r = 0; r < cfg.diagnostics.replicas; ++r) {
    ASSIGN_OR_RETURN(const UpdateVector sum,
                     InModule("fl-sim",
                              SampleOthersSum(ds, model, cfg.scenario.round,
                                              cfg.seed, Stream::kDiagnostics,
                                              static_cast<uint64_t>(r))));
    sums.row(r) = sum.transpose();
  }
  return sums;
}

absl::Status RunDiagnostics(const RunConfig& cfg,
                            std::vector<std::string>* files) {
  const DiagnosticsParams& p = cfg.diagnostics;
  const std::filesystem::path dir = ResolveDirectory(cfg.output);
  UpdateMatrix samples;
  if (p.source == "uniform") {
    ASSIGN_OR_RETURN(samples, UniformSums(p, cfg.seed));
  } else {
    ASSIGN_OR_RETURN(samples, PopulationSums(cfg));
  }
  ASSIGN_OR_RETURN(const GaussianityReport report,
                   InModule("linalg-stats", GaussianityDiagnostic(samples)));

  json doc;
  doc["source"] = p.source;
  doc["seed"] = cfg.seed;
  doc["sample_count"] = report.sample_count;
  doc["dimension"] = static_cast<int64_t>(report.coordinates.size());
  doc["any_degenerate"] = report.any_degenerate;
  doc["max_abs_skewness"] = report.max_abs_skewness;
  doc["max_abs_excess_kurtosis"] = report.max_abs_excess_kurtosis;
  doc["max_ks_distance"] = report.max_ks_distance;
  doc["bands"] = {{"max_abs_skewness", p.max_abs_skewness},
                  {"max_abs_excess_kurtosis", p.max_abs_excess_kurtosis},
                  {"max_ks_distance", p.max_ks_distance}};
  doc["within_bands"] =
      !report.any_degenerate &&
      report.max_abs_skewness < p.max_abs_skewness &&
      report.max_abs_excess_kurtosis < p.max_abs_excess_kurtosis &&
      report.max_ks_distance < p.max_ks_distance;
  std::vector<std::vector<double>> rows;
  for (size_t j = 0; j < report.coordinates.size(); ++j) {
    const CoordinateDiagnostic& c = report.coordinates[j];
    rows.push_back({static_cast<double>(j), c.mean, c.stddev, c.skewness,
                    c.excess_kurtosis, c.ks_distance});
  }
  RETURN_IF_ERROR(InModule("cli", EnsureDirectory(dir)));
  const std::string json_path = (dir / "diagnostics.json").string();
  const std::string csv_path = (dir / "diagnostics.csv").string();
  RETURN_IF_ERROR(InModule("cli", WriteStringToFile(json_path,
                                                    doc.dump(2) + "\n")));
  RETURN_IF_ERROR(InModule(
      "cli", WriteNumericCsv(csv_path,
                             {"coordinate", "mean", "stddev", "skewness",
                              "excess_kurtosis", "ks_distance"},
                             rows)));
  files->push_back(json_path);
  files->push_back(csv_path);
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<Command> ParseCommand(const std::string& name) {
  if (name == "curves") return Command::kCurves;
  if (name == "audit") return Command::kAudit;
  if (name == "simulate") return Command::kSimulate;
  if (name == "diagnostics") return Command::kDiagnostics;
  return KeyError("command", absl::StrCat("unknown command \"", name, "\""));
}

std::string CommandName(Command command) {
  switch (command) {
    case Command::kCurves:
      return "curves";
    case Command::kAudit:
      return "audit";
    case Command::kSimulate:
      return "simulate";
    case Command::kDiagnostics:
      return "diagnostics";
  }
  return "unknown";
}

std::vector<std::string> ConfigKeys(Command command) {
  std::vector<std::string> keys;
  for (const KeySpec& spec : kKeys) {
    if (spec.commands & CommandBit(command)) keys.push_back(spec.name);
  }
  return keys;
}

absl::StatusOr<json> FlagValue(const std::string& key,
                               const std::string& text) {
  const KeySpec* spec = FindKey(key);
  if (spec == nullptr) return KeyError(key, "unknown key");
  switch (spec->type) {
    case ValueType::kString:
      return json(text);
    case ValueType::kDoubleOrInf:
      if (text == "inf") return json(text);
      break;
    case ValueType::kDoubleList: {
      json list = json::array();
      for (absl::string_view part : absl::StrSplit(text, ',')) {
        const json item = json::parse(std::string(part), nullptr, false);
        if (item.is_discarded() || !item.is_number()) {
          return KeyError(key, absl::StrCat("cannot parse \"", text,
                                            "\" as a list of numbers"));
        }
        list.push_back(item);
      }
      return list;
    }
    default:
      break;
  }
  const json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) {
    return KeyError(key, absl::StrCat("cannot parse \"", text, "\""));
  }
  return value;
}

absl::StatusOr<RunConfig> ParseConfig(const json& file_values,
                                      const json& flag_values) {
  for (const json* obj : {&file_values, &flag_values}) {
    if (!obj->is_null() && !obj->is_object()) {
      return absl::InvalidArgumentError("config must be a JSON object");
    }
  }
  if (file_values.is_object() && flag_values.is_object() &&
      file_values.contains("command") && flag_values.contains("command") &&
      file_values.at("command") != flag_values.at("command")) {
    return KeyError("command",
                    absl::StrCat("config file is for ",
                                 file_values.at("command").dump(),
                                 " but ", flag_values.at("command").dump(),
                                 " was requested"));
  }
  json merged = json::object();
  if (file_values.is_object()) merged.update(file_values);
  if (flag_values.is_object()) merged.update(flag_values);

  // Every key must be known and well typed before anything else.
  for (const auto& [key, value] : merged.items()) {
    const KeySpec* spec = FindKey(key);
    if (spec == nullptr) return KeyError(key, "unknown key");
    RETURN_IF_ERROR(CheckType(key, spec->type, value));
  }
  if (!merged.contains("command")) {
    return KeyError("command", "missing required key");
  }
  RunConfig cfg;
  ASSIGN_OR_RETURN(cfg.command,
                   ParseCommand(merged.at("command").get<std::string>()));
  for (const auto& [key, value] : merged.items()) {
    if (!(FindKey(key)->commands & CommandBit(cfg.command))) {
      return KeyError(key, absl::StrCat("not accepted by command '",
                                        CommandName(cfg.command), "'"));
    }
  }
  const Values v(merged);
  v.Get("seed", &cfg.seed);
  v.Get("out", &cfg.output);
  switch (cfg.command) {
    case Command::kCurves:
      RETURN_IF_ERROR(FillCurves(v, &cfg.curves));
      break;
    case Command::kAudit:
      RETURN_IF_ERROR(FillScenario(v, cfg.seed, &cfg.scenario));
      RETURN_IF_ERROR(FillAudit(v, cfg.seed, &cfg.audit,
                                &cfg.scenario.initial_models));
      break;
    case Command::kSimulate:
      RETURN_IF_ERROR(FillScenario(v, cfg.seed, &cfg.scenario));
      v.Get("samples", &cfg.simulate_samples);
      v.Get("format", &cfg.simulate_format);
      if (cfg.simulate_samples < 1) return KeyError("samples", "must be >= 1");
      if (cfg.simulate_format != "binary" && cfg.simulate_format != "csv") {
        return KeyError("format",
                        absl::StrCat("expected \"binary\" or \"csv\", got \"",
                                     cfg.simulate_format, "\""));
      }
      break;
    case Command::kDiagnostics:
      RETURN_IF_ERROR(FillScenario(v, cfg.seed, &cfg.scenario));
      RETURN_IF_ERROR(FillDiagnostics(v, &cfg.diagnostics));
      break;
  }
  return cfg;
}

absl::StatusOr<RunConfig> ParseConfigFile(const std::string& path,
                                          const json& flag_values) {
  json file_values = json::object();
  if (!path.empty()) {
    absl::StatusOr<std::string> text = ReadFileToString(path);
    if (!text.ok()) return text.status();
    file_values = json::parse(*text, nullptr, /*allow_exceptions=*/false);
    if (file_values.is_discarded()) {
      return absl::InvalidArgumentError(
          absl::StrCat("config file ", path, " is not valid JSON"));
    }
    if (!file_values.is_object()) {
      return absl::InvalidArgumentError(
          absl::StrCat("config file ", path, " must hold a JSON object"));
    }
  }
  return ParseConfig(file_values, flag_values);
}

int ExitCodeFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return kExitOk;
    case absl::StatusCode::kInvalidArgument:
      return kExitConfig;
    case absl::StatusCode::kNotFound:
    case absl::StatusCode::kUnavailable:
    case absl::StatusCode::kPermissionDenied:
    case absl::StatusCode::kDataLoss:
      return kExitIo;
    default:
      return kExitNumerical;
  }
}

Outcome Execute(const RunConfig& cfg) {
  Outcome outcome;
  switch (cfg.command) {
    case Command::kCurves:
      outcome.status = RunCurves(cfg, &outcome.files);
      break;
    case Command::kAudit:
      outcome.status = RunAuditCommand(cfg, &outcome.files);
      break;
    case Command::kSimulate:
      outcome.status = RunSimulate(cfg, &outcome.files);
      break;
    case Command::kDiagnostics:
      outcome.status = RunDiagnostics(cfg, &outcome.files);
      break;
  }
  outcome.exit_code = ExitCodeFor(outcome.status);
  if (!outcome.status.ok()) {
    const auto module =
        outcome.status.GetPayload(kModulePayload);
    outcome.module = module.has_value() ? std::string(*module) : "cli";
  }
  return outcome;
}

std::string ErrorRecord(const Outcome& outcome) {
  json record;
  record["error"] = {
      {"exit_code", outcome.exit_code},
      {"module", outcome.module.empty() ? "cli" : outcome.module},
      {"code", absl::StatusCodeToString(outcome.status.code())},
      {"message", std::string(outcome.status.message())},
  };
  return record.dump();
}

}  // namespace secagg_audit::cli
