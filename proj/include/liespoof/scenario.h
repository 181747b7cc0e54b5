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

// Scenario files and the command implementations behind the CLI. Commands
// return process exit codes and never call exit() themselves.
//
// Exit codes: 0 success (transfer: stealthy), 1 alarm or reproduction
// mismatch, 2 configuration error, 3 runtime fault.

#ifndef LIESPOOF_SCENARIO_H_
#define LIESPOOF_SCENARIO_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "liespoof/attack.h"
#include "liespoof/dynamics.h"
#include "liespoof/lie_core.h"
#include "liespoof/observer.h"

namespace liespoof {

inline constexpr int kExitOk = 0;
inline constexpr int kExitAlarm = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

// Piecewise-constant input: `generator` is held from t_s until the next
// segment starts.
struct InputSegment {
  double t_s = 0.0;
  AlgebraVector generator;
};

enum class SignalType { kConstant, kAlongTrack };

struct AttackSettings {
  double onset_time_s = 0.0;
  double ramp_s = 0.0;  // linear ramp from zero to full strength
  SignalType signal = SignalType::kConstant;
  AlgebraVector xi;       // kConstant
  double alpha_s = 0.0;   // kAlongTrack: xi_k = alpha_s * f_e(k)
  double epsilon_residual = 0.0;
  AlgebraVector residual_direction;  // normalized on load
  double transfer_onset_time_s = 0.0;
  DeployMode deploy = DeployMode::kReplay;
  HeadingSource heading = HeadingSource::kStream;
  int experiments = 1;
  double noise_std_m = 0.0;
};

struct ScenarioConfig {
  std::string name;
  GroupSpecPtr group;
  std::string suite = "se2_mixed";
  double dt_s = 0.0;
  double duration_s = 0.0;
  Pose2 nominal_x0;
  Pose2 victim_x0;
  std::vector<InputSegment> nominal_inputs;
  std::vector<InputSegment> victim_inputs;
  AttackSettings attack;
  DetectorConfig detector;
  bool explicit_chart_tolerance = false;
  // simulate only; the observer switches to lenient chart inversion unless
  // the detector pins chart_tolerance.
  double sensor_noise_std_m = 0.0;
  std::uint64_t seed = 0;
  std::string output_dir = "out";

  std::size_t steps() const;
  std::size_t StepIndex(double t_s) const;  // nearest step, clamped
};

// Throws Error(kConfig) on malformed or invalid content. Relative group
// spec paths resolve against `base_dir`.
ScenarioConfig ParseScenario(const std::string& json_text,
                             const std::filesystem::path& base_dir = ".");
ScenarioConfig LoadScenario(const std::filesystem::path& path);

// The generator in force at each of `steps` steps of length dt.
std::vector<AlgebraVector> GeneratorSchedule(
    const std::vector<InputSegment>& segments, int dim, double dt,
    std::size_t steps);

GroupElement InitialState(const ScenarioConfig& config, const Pose2& pose);
Trajectory NominalTrajectory(const ScenarioConfig& config);
Trajectory VictimTrajectory(const ScenarioConfig& config);

// Per-state displacement the attacker injects on the nominal trajectory.
std::vector<AlgebraVector> AttackSignal(const ScenarioConfig& config,
                                        const Trajectory& nominal);

struct TransferOutcome {
  LearnedAttack learned;
  ImpactReport training;
  ImpactReport transfer;
  RichnessReport richness;
  SubspaceBasis subspace;
  std::size_t victim_onset = 0;
};

// generate -> learn -> replay on the nominal -> deploy on the victim.
TransferOutcome RunTransferPipeline(const ScenarioConfig& config);

struct CommandOptions {
  std::optional<std::filesystem::path> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> out;
};

int CmdAnalyzeCentralizer(const CommandOptions& options, std::ostream& out,
                          std::ostream& err);
int CmdSimulate(const CommandOptions& options, std::ostream& out,
                std::ostream& err);
int CmdTransfer(const CommandOptions& options, std::ostream& out,
                std::ostream& err);
int CmdReproducePaper(const CommandOptions& options, std::ostream& out,
                      std::ostream& err);

struct ReproductionRow {
  std::string quantity;
  Vector reference;
  Vector computed;
  double tolerance = 0.0;

  double MaxAbsDiff() const;
  bool ok() const { return MaxAbsDiff() < tolerance; }
};

// The built-in case-study fixture, pinned to the reported step parameters.
std::vector<ReproductionRow> ReproductionTable();

}  // namespace liespoof

#endif  // LIESPOOF_SCENARIO_H_
