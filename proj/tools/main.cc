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

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "cli.h"
#include "json.hpp"

namespace {

using secagg_audit::cli::Command;
using secagg_audit::cli::Outcome;

std::string FlagName(const std::string& key) {
  std::string name = key;
  for (char& c : name) {
    if (c == '_') c = '-';
  }
  return "--" + name;
}

int Fail(int exit_code, const std::string& module, absl::Status status) {
  Outcome outcome;
  outcome.exit_code = exit_code;
  outcome.module = module;
  outcome.status = std::move(status);
  std::cerr << secagg_audit::cli::ErrorRecord(outcome) << "\n";
  return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local differential privacy accounting and auditing of "
               "secure aggregation"};
  app.require_subcommand(1);

  struct Sub {
    CLI::App* app = nullptr;
    std::string config_path;
    std::map<std::string, std::string> values;
  };
  std::map<Command, Sub> subs;
  const std::map<Command, std::string> descriptions = {
      {Command::kCurves, "Exact and Gaussian LDP curves of a reference case"},
      {Command::kAudit, "Membership-inference audit of a federated round"},
      {Command::kSimulate, "Sample client updates into a matrix file"},
      {Command::kDiagnostics, "Normality diagnostics of aggregated updates"},
  };
  for (const auto& [command, description] : descriptions) {
    Sub& sub = subs[command];
    sub.app = app.add_subcommand(secagg_audit::cli::CommandName(command),
                                 description);
    sub.app->add_option("--config", sub.config_path, "JSON config file");
    for (const std::string& key : secagg_audit::cli::ConfigKeys(command)) {
      if (key == "command") continue;
      sub.app->add_option(FlagName(key), sub.values[key],
                          "Overrides config key '" + key + "'");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return Fail(secagg_audit::cli::kExitConfig, "cli",
                absl::InvalidArgumentError(e.what()));
  }

  for (auto& [command, sub] : subs) {
    if (!sub.app->parsed()) continue;
    nlohmann::json flags = nlohmann::json::object();
    flags["command"] = secagg_audit::cli::CommandName(command);
    for (const auto& [key, text] : sub.values) {
      if (sub.app->get_option(FlagName(key))->count() == 0) continue;
      absl::StatusOr<nlohmann::json> value =
          secagg_audit::cli::FlagValue(key, text);
      if (!value.ok()) {
        return Fail(secagg_audit::cli::kExitConfig, "cli", value.status());
      }
      flags[key] = *value;
    }
    absl::StatusOr<secagg_audit::cli::RunConfig> cfg =
        secagg_audit::cli::ParseConfigFile(sub.config_path, flags);
    if (!cfg.ok()) {
      const int code =
          cfg.status().code() == absl::StatusCode::kInvalidArgument
              ? secagg_audit::cli::kExitConfig
              : secagg_audit::cli::ExitCodeFor(cfg.status());
      return Fail(code, "cli", cfg.status());
    }
    const Outcome outcome = secagg_audit::cli::Execute(*cfg);
    if (outcome.exit_code != secagg_audit::cli::kExitOk) {
      std::cerr << secagg_audit::cli::ErrorRecord(outcome) << "\n";
      return outcome.exit_code;
    }
    for (const std::string& file : outcome.files) std::cout << file << "\n";
    return 0;
  }
  return secagg_audit::cli::kExitConfig;
}
