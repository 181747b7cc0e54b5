// Copyright 2026 The LieSpoof Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// liespoof: spoofing-attack transfer analysis on matrix Lie groups.
//
//   liespoof analyze-centralizer --config configs/curved_victim.json
//   liespoof simulate --config configs/zero_attack.json --out out/
//   liespoof transfer --config configs/curved_victim.json --seed 7
//   liespoof reproduce-paper

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "liespoof/scenario.h"

int main(int argc, char** argv) {
  CLI::App app{"Spoofing-attack transfer analysis on matrix Lie groups"};
  app.require_subcommand(1);

  std::string config;
  std::uint64_t seed = 0;
  std::string out;
  const auto add_flags = [&](CLI::App* cmd, bool needs_config) {
    CLI::Option* c = cmd->add_option("--config", config, "Scenario JSON file");
    if (needs_config) c->required();
    cmd->add_option("--seed", seed, "Override the scenario seed");
    cmd->add_option("--out", out, "Output directory");
  };
  CLI::App* analyze = app.add_subcommand(
      "analyze-centralizer", "Commuting subspace of every input segment");
  CLI::App* simulate =
      app.add_subcommand("simulate", "Victim trajectory and observer trace");
  CLI::App* transfer = app.add_subcommand(
      "transfer", "Learn on the nominal, deploy on the victim, judge stealth");
  CLI::App* reproduce = app.add_subcommand(
      "reproduce-paper", "Case-study quantities vs computed values");
  add_flags(analyze, true);
  add_flags(simulate, true);
  add_flags(transfer, true);
  add_flags(reproduce, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : liespoof::kExitConfig;
  }

  liespoof::CommandOptions options;
  CLI::App* cmd = app.get_subcommands().front();
  if (!config.empty()) options.config = config;
  if (cmd->count("--seed") > 0) options.seed = seed;
  if (!out.empty()) options.out = out;

  if (cmd == analyze) {
    return liespoof::CmdAnalyzeCentralizer(options, std::cout, std::cerr);
  }
  if (cmd == simulate) {
    return liespoof::CmdSimulate(options, std::cout, std::cerr);
  }
  if (cmd == transfer) {
    return liespoof::CmdTransfer(options, std::cout, std::cerr);
  }
  return liespoof::CmdReproducePaper(options, std::cout, std::cerr);
}
