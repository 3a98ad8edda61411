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

#ifndef SECAGG_AUDIT_TOOLS_CLI_H_
#define SECAGG_AUDIT_TOOLS_CLI_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "json.hpp"
#include "secagg_audit/auditor.h"
#include "secagg_audit/dataset.h"
#include "secagg_audit/fl_sim.h"
#include "secagg_audit/plrv_accounting.h"

namespace secagg_audit::cli {

enum class Command { kCurves, kAudit, kSimulate, kDiagnostics };

absl::StatusOr<Command> ParseCommand(const std::string& name);
std::string CommandName(Command command);

// Seed used when neither the config file nor a flag sets one.
inline constexpr uint64_t kDefaultSeed = 1;

// Overrides the output directory of every command when set.
inline constexpr char kOutputDirEnv[] = "SECAGG_AUDIT_OUTPUT_DIR";

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitNumerical = 3,
  kExitIo = 4,
};

struct DataParams {
  // "synthetic" (Gaussian blobs) or "csv".
  std::string source = "synthetic";
  std::string path;
  std::string label_column = "label";
  Normalization normalization = Normalization::kZScore;
  int classes = 2;
  int features = 104;
  int per_class = 15000;
  double separation = 1.0;
  uint64_t data_seed = kDefaultSeed;
};

struct ScenarioParams {
  DataParams data;
  RoundConfig round;
  // Initial models are N(0, init_stddev^2) draws; reports are averaged over
  // `initial_models` of them.
  double init_stddev = 0.01;
  int initial_models = 1;
};

struct CurvesParams {
  ReferenceCase which = ReferenceCase::kUniform;
  int n = 0;
  int d = 0;
  double eps_max = 10.0;
  int eps_points = 201;
  PlrvGridSpec grid;
};

struct DiagnosticsParams {
  // "uniform": sums of n iid Uniform[-1/2, 1/2]^d vectors.
  // "population": aggregates of the other clients in simulated rounds.
  std::string source = "uniform";
  int n = 2000;
  int d = 3;
  int64_t replicas = 10000;
  double max_abs_skewness = 0.1;
  double max_abs_excess_kurtosis = 0.2;
  double max_ks_distance = 0.02;
};

struct RunConfig {
  Command command = Command::kCurves;
  uint64_t seed = kDefaultSeed;
  // Directory for curves/audit/diagnostics, file path for simulate.
  std::string output;
  CurvesParams curves;
  ScenarioParams scenario;
  AuditConfig audit;
  int64_t simulate_samples = 2000;
  // "binary" (SAUD) or "csv".
  std::string simulate_format = "binary";
  DiagnosticsParams diagnostics;
};

// Builds a config from the values of a config file and from command-line
// flags (both JSON objects keyed by config name). Flags win. Unknown keys,
// keys that do not apply to the command and ill-typed values are rejected
// with an error naming the key.
absl::StatusOr<RunConfig> ParseConfig(const nlohmann::json& file_values,
                                      const nlohmann::json& flag_values);

// Reads `path` as a JSON object (an empty path means no file) and forwards
// to ParseConfig.
absl::StatusOr<RunConfig> ParseConfigFile(const std::string& path,
                                          const nlohmann::json& flag_values);

// Converts the text of a command-line flag into the JSON value ParseConfig
// expects for `key` (numbers, "inf", comma-separated lists).
absl::StatusOr<nlohmann::json> FlagValue(const std::string& key,
                                         const std::string& text);

// Names of the keys accepted for `command`, including "command", "seed" and
// "out".
std::vector<std::string> ConfigKeys(Command command);

struct Outcome {
  int exit_code = kExitOk;
  // Module that produced the failure ("cli", "plrv-accounting", ...).
  std::string module;
  absl::Status status;
  std::vector<std::string> files;
};

Outcome Execute(const RunConfig& cfg);

// Exit code for a status raised outside parsing.
int ExitCodeFor(const absl::Status& status);

// One-line JSON record describing a failed outcome.
std::string ErrorRecord(const Outcome& outcome);

}  // namespace secagg_audit::cli

#endif  // SECAGG_AUDIT_TOOLS_CLI_H_
