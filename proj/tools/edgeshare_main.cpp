// Copyright 2026 The edgeshare Authors.
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

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "edgeshare/cli.hpp"

namespace {

using edgeshare::cli::RunConfig;

struct Flags {
  std::string utility = "linear";
  std::string weights = "1:1";
  std::string method = "both";
};

void AddScenarioFlags(CLI::App* cmd, RunConfig& c, Flags& f, bool sweep) {
  cmd->add_option("--players", c.players, "Number of providers N");
  cmd->add_option("--apps", c.apps, sweep ? "Applications per provider (list)"
                                          : "Applications per provider M_n");
  cmd->add_option("--resources", c.resources, "Resource types K");
  cmd->add_option("--utility", f.utility, "linear or sigmoid");
  cmd->add_option("--mu", c.mu, sweep ? "Sigmoid steepness (list)" : "Sigmoid steepness");
  cmd->add_option("--weights", f.weights, "Weights w:zeta for every provider");
  cmd->add_option("--seed", c.seed, "Generator seed");
}

bool AnyGeneratorFlag(CLI::App* cmd) {
  for (const char* name : {"--players", "--apps", "--resources", "--utility", "--mu", "--weights",
                           "--seed"}) {
    if (cmd->count(name) > 0) return true;
  }
  return false;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cooperative resource sharing among edge clouds: coalition values, Shapley "
               "payoffs, linear-time core allocation and verification."};
  app.require_subcommand(1);

  RunConfig c;
  Flags f;
  double tol = 0.0;

  auto* gen = app.add_subcommand("gen", "Generate a random scenario file");
  AddScenarioFlags(gen, c, f, false);
  gen->add_option("--out", c.out_dir, "Output directory");

  auto* run = app.add_subcommand("run", "Compute coalition values and payoffs");
  auto* verify = app.add_subcommand("verify", "Check core membership and superadditivity");
  for (auto* cmd : {run, verify}) {
    cmd->add_option("--scenario", c.scenario_path, "Scenario JSON file");
    AddScenarioFlags(cmd, c, f, false);
    cmd->add_option("--method", f.method, "shapley, fast or both");
    cmd->add_option("--restarts", c.restarts, "Multi-start count for sigmoid solves");
    cmd->add_option("--out", c.out_dir, "Output directory");
  }
  run->add_option("--repetitions", c.repetitions, "Timing repetitions");
  verify->add_option("--tol", tol, "Tolerance (default 1e-6 linear, 1e-3 sigmoid)");
  verify->add_option("--payoffs", c.payoffs_path, "Payoffs CSV to verify instead of computing");

  auto* bench = app.add_subcommand("bench", "Timing and plot-data sweep");
  AddScenarioFlags(bench, c, f, true);
  bench->add_option("--method", f.method, "shapley, fast or both");
  bench->add_option("--restarts", c.restarts, "Multi-start count for sigmoid solves");
  bench->add_option("--repetitions", c.repetitions, "Timing repetitions (median reported)");
  bench->add_option("--out", c.out_dir, "Output directory");
  bench->add_option("--scenario", c.scenario_path, "Not accepted; bench generates scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : edgeshare::cli::kUsage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  c.subcommand = chosen->get_name();
  try {
    if (c.subcommand == "bench" && chosen->count("--apps") == 0) c.apps = {3, 20, 100};
    if (c.subcommand == "bench" && chosen->count("--mu") == 0) c.mu = {0.01, 10.0};
    if (c.subcommand == "bench" && chosen->count("--repetitions") == 0) c.repetitions = 5;
    c.generator_flags_given = AnyGeneratorFlag(chosen);
    c.utility = edgeshare::cli::ParseUtility(f.utility);
    c.weights = edgeshare::cli::ParseWeights(f.weights);
    c.method = edgeshare::cli::ParseMethod(f.method);
    if (chosen == verify && verify->count("--tol") > 0) c.tol = tol;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return edgeshare::cli::kUsage;
  }
  return edgeshare::cli::Dispatch(c, std::cout, std::cerr);
}
