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

#include "liespoof/scenario.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include <json.hpp>

#include "liespoof/centralizer.h"

namespace liespoof {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void ConfigError(const std::string& what) {
  throw Error(ErrorKind::kConfig, what);
}

double RequirePositive(const json& j, const char* key) {
  const double v = j.at(key).get<double>();
  if (!(v > 0.0) || !std::isfinite(v)) {
    ConfigError(std::string(key) + " must be positive");
  }
  return v;
}

AlgebraVector ReadVector(const json& j, int dim, const char* what) {
  const auto values = j.get<std::vector<double>>();
  if (static_cast<int>(values.size()) != dim) {
    std::ostringstream os;
    os << what << " needs " << dim << " entries, got " << values.size();
    ConfigError(os.str());
  }
  AlgebraVector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = values[static_cast<std::size_t>(i)];
  if (!v.allFinite()) ConfigError(std::string(what) + " is not finite");
  return v;
}

Pose2 ReadPose(const json& j) {
  return Pose2{j.value("x_m", 0.0), j.value("y_m", 0.0),
               j.value("theta_rad", 0.0)};
}

std::vector<InputSegment> ReadSegments(const json& j, const LieGroupSpec& spec,
                                       const char* what) {
  if (!j.is_array() || j.empty()) {
    ConfigError(std::string(what) + " must be a non-empty array");
  }
  std::vector<InputSegment> segments;
  for (const json& s : j) {
    InputSegment seg;
    seg.t_s = s.at("t_s").get<double>();
    if (s.contains("generator")) {
      seg.generator = ReadVector(s.at("generator"), spec.dim_algebra(), what);
    } else {
      if (!spec.is_se2()) {
        ConfigError(std::string(what) +
                    ": v/omega inputs need the SE2 group; use 'generator'");
      }
      seg.generator = Generator(
          {s.at("v_mps").get<double>(), s.at("omega_radps").get<double>()});
    }
    if (!segments.empty() && seg.t_s <= segments.back().t_s) {
      ConfigError(std::string(what) + " must have increasing t_s");
    }
    segments.push_back(std::move(seg));
  }
  return segments;
}

AttackSettings ReadAttack(const json& j, int dim, double duration) {
  AttackSettings a;
  a.onset_time_s = j.value("onset_time_s", 0.0);
  if (a.onset_time_s < 0.0 || a.onset_time_s > duration) {
    ConfigError("attack onset_time_s must lie within the duration");
  }
  a.ramp_s = j.value("ramp_s", 0.0);
  if (a.ramp_s < 0.0) ConfigError("attack ramp_s must be >= 0");
  a.xi = AlgebraVector::Zero(dim);
  if (j.contains("signal")) {
    const json& s = j.at("signal");
    const std::string type = s.at("type").get<std::string>();
    if (type == "constant") {
      a.signal = SignalType::kConstant;
      a.xi = ReadVector(s.at("xi"), dim, "signal xi");
    } else if (type == "along_track") {
      a.signal = SignalType::kAlongTrack;
      a.alpha_s = s.at("alpha_s").get<double>();
    } else {
      ConfigError("unknown attack signal type '" + type + "'");
    }
  }
  a.epsilon_residual = j.value("epsilon_residual", 0.0);
  if (a.epsilon_residual < 0.0) ConfigError("epsilon_residual must be >= 0");
  a.residual_direction = AlgebraVector::Zero(dim);
  if (j.contains("residual_direction")) {
    a.residual_direction =
        ReadVector(j.at("residual_direction"), dim, "residual_direction");
  }
  const double dir_norm = a.residual_direction.norm();
  if (a.epsilon_residual > 0.0) {
    if (dir_norm == 0.0) ConfigError("residual_direction must be nonzero");
    a.residual_direction /= dir_norm;
  }
  a.transfer_onset_time_s = j.value("transfer_onset_time_s", a.onset_time_s);
  if (a.transfer_onset_time_s < 0.0 || a.transfer_onset_time_s > duration) {
    ConfigError("transfer_onset_time_s must lie within the duration");
  }
  const std::string deploy = j.value("deploy", std::string("replay"));
  if (deploy == "replay") {
    a.deploy = DeployMode::kReplay;
  } else if (deploy == "steady") {
    a.deploy = DeployMode::kSteady;
  } else {
    ConfigError("deploy must be 'replay' or 'steady'");
  }
  const std::string heading = j.value("heading_source", std::string("stream"));
  if (heading == "stream") {
    a.heading = HeadingSource::kStream;
  } else if (heading == "truth") {
    a.heading = HeadingSource::kTruth;
  } else {
    ConfigError("heading_source must be 'stream' or 'truth'");
  }
  a.experiments = j.value("experiments", 1);
  if (a.experiments < 1) ConfigError("experiments must be >= 1");
  a.noise_std_m = j.value("noise_std_m", 0.0);
  if (!(a.noise_std_m >= 0.0)) ConfigError("noise_std_m must be >= 0");
  return a;
}

DetectorConfig ReadDetector(const json& j) {
  DetectorConfig d;
  d.tau = j.value("tau_m", d.tau);
  d.kappa = j.value("kappa", d.kappa);
  const std::string gain = j.value("gain", std::string("chart"));
  if (gain == "chart") {
    d.gain = GainModel::kChartInverse;
  } else if (gain == "linear") {
    d.gain = GainModel::kLinear;
  } else {
    ConfigError("detector gain must be 'chart' or 'linear'");
  }
  if (j.contains("chart_tolerance")) {
    const json& t = j.at("chart_tolerance");
    d.chart_tolerance = t.is_string() && t.get<std::string>() == "lenient"
                            ? kLenientChart
                            : t.get<double>();
  }
  try {
    d.Validate();
  } catch (const Error& e) {
    ConfigError(std::string("detector: ") + e.what());
  }
  return d;
}

ScenarioConfig ApplyOverrides(ScenarioConfig config,
                              const CommandOptions& options) {
  if (options.seed) config.seed = *options.seed;
  if (options.out) config.output_dir = options.out->string();
  return config;
}

std::filesystem::path PrepareOutput(const ScenarioConfig& config) {
  const std::filesystem::path dir(config.output_dir);
  std::filesystem::create_directories(dir);
  return dir;
}

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw Error(ErrorKind::kInvalidArgument,
                "cannot write " + path.string());
  }
  f << text;
}

template <typename Writer>
void WriteCsv(const std::filesystem::path& path, Writer&& writer) {
  std::ostringstream os;
  writer(os);
  WriteFile(path, os.str());
}

std::vector<double> ToStd(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

// Maps the failure class of a command body to an exit code; stderr gets
// exactly one line.
template <typename Body>
int Guard(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error (" << ToString(e.kind()) << "): " << e.what() << '\n';
    return e.kind() == ErrorKind::kConfig ? kExitConfig : kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

ScenarioConfig RequireConfig(const CommandOptions& options) {
  if (!options.config) ConfigError("--config is required");
  return ApplyOverrides(LoadScenario(*options.config), options);
}

}  // namespace

std::size_t ScenarioConfig::steps() const {
  return static_cast<std::size_t>(std::llround(duration_s / dt_s));
}

std::size_t ScenarioConfig::StepIndex(double t_s) const {
  const long long k = std::llround(t_s / dt_s);
  return static_cast<std::size_t>(
      std::clamp<long long>(k, 0, static_cast<long long>(steps())));
}

ScenarioConfig ParseScenario(const std::string& json_text,
                             const std::filesystem::path& base_dir) {
  ScenarioConfig c;
  try {
    const json j = json::parse(json_text);
    c.name = j.value("name", std::string("scenario"));
    const std::string group = j.value("group", std::string("SE2"));
    if (group == "SE2") {
      c.group = LieGroupSpec::SE2();
    } else {
      std::filesystem::path p(group);
      if (p.is_relative()) p = base_dir / p;
      try {
        c.group = LieGroupSpec::Load(p.string());
      } catch (const Error& e) {
        ConfigError("group spec " + p.string() + ": " + e.what());
      }
    }
    const int dim = c.group->dim_algebra();
    c.suite = j.value("suite", std::string("se2_mixed"));
    c.dt_s = RequirePositive(j, "dt_s");
    c.duration_s = RequirePositive(j, "duration_s");
    if (c.steps() < 1) ConfigError("duration_s must cover at least one step");
    if (j.contains("nominal_x0")) c.nominal_x0 = ReadPose(j.at("nominal_x0"));
    if (j.contains("victim_x0")) c.victim_x0 = ReadPose(j.at("victim_x0"));
    c.nominal_inputs =
        ReadSegments(j.at("nominal_inputs"), *c.group, "nominal_inputs");
    c.victim_inputs = j.contains("victim_inputs")
                          ? ReadSegments(j.at("victim_inputs"), *c.group,
                                         "victim_inputs")
                          : c.nominal_inputs;
    c.attack = ReadAttack(j.value("attack", json::object()), dim,
                          c.duration_s);
    const json detector = j.value("detector", json::object());
    c.detector = ReadDetector(detector);
    c.explicit_chart_tolerance = detector.contains("chart_tolerance");
    c.sensor_noise_std_m = j.value("sensor_noise_std_m", 0.0);
    if (!(c.sensor_noise_std_m >= 0.0)) {
      ConfigError("sensor_noise_std_m must be >= 0");
    }
    c.seed = j.value("seed", std::uint64_t{0});
    c.output_dir = j.value("output_dir", std::string("out"));
  } catch (const json::exception& e) {
    ConfigError(std::string("malformed scenario: ") + e.what());
  }
  return c;
}

ScenarioConfig LoadScenario(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) ConfigError("cannot read config " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return ParseScenario(ss.str(), path.parent_path());
}

std::vector<AlgebraVector> GeneratorSchedule(
    const std::vector<InputSegment>& segments, int dim, double dt,
    std::size_t steps) {
  std::vector<AlgebraVector> out;
  out.reserve(steps);
  std::size_t next = 0;
  AlgebraVector current = AlgebraVector::Zero(dim);
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = dt * static_cast<double>(k);
    while (next < segments.size() && segments[next].t_s <= t + 1e-9 * dt) {
      current = segments[next].generator;
      ++next;
    }
    out.push_back(current);
  }
  return out;
}

GroupElement InitialState(const ScenarioConfig& config, const Pose2& pose) {
  if (config.group->is_se2()) return Se2FromPose(pose);
  return GroupElement::Identity(config.group);
}

Trajectory NominalTrajectory(const ScenarioConfig& config) {
  const auto schedule =
      GeneratorSchedule(config.nominal_inputs, config.group->dim_algebra(),
                        config.dt_s, config.steps());
  return Simulate(InitialState(config, config.nominal_x0), schedule,
                  config.dt_s);
}

Trajectory VictimTrajectory(const ScenarioConfig& config) {
  const auto schedule =
      GeneratorSchedule(config.victim_inputs, config.group->dim_algebra(),
                        config.dt_s, config.steps());
  return Simulate(InitialState(config, config.victim_x0), schedule,
                  config.dt_s);
}

std::vector<AlgebraVector> AttackSignal(const ScenarioConfig& config,
                                        const Trajectory& nominal) {
  const AttackSettings& a = config.attack;
  const int dim = config.group->dim_algebra();
  std::vector<AlgebraVector> out;
  out.reserve(nominal.states.size());
  for (std::size_t k = 0; k < nominal.states.size(); ++k) {
    const double t = nominal.time(k);
    double strength = 0.0;
    if (t >= a.onset_time_s - 1e-9 * config.dt_s) {
      strength = a.ramp_s > 0.0
                     ? std::clamp((t - a.onset_time_s) / a.ramp_s, 0.0, 1.0)
                     : 1.0;
    }
    AlgebraVector base = AlgebraVector::Zero(dim);
    if (a.signal == SignalType::kConstant) {
      base = a.xi;
    } else if (!nominal.generators.empty()) {
      base = a.alpha_s *
             nominal.generators[std::min(k, nominal.generators.size() - 1)];
    }
    out.push_back(strength *
                  (base + a.epsilon_residual * a.residual_direction));
  }
  return out;
}

TransferOutcome RunTransferPipeline(const ScenarioConfig& config) {
  const std::unique_ptr<ObservationSuite> suite = MakeSuite(config.suite);
  if (suite->group()->dim_algebra() != config.group->dim_algebra()) {
    ConfigError("suite " + suite->name() + " does not observe group " +
                config.group->name());
  }
  const Trajectory nominal = NominalTrajectory(config);
  const Trajectory victim = VictimTrajectory(config);

  TransferOutcome outcome;
  outcome.victim_onset = config.StepIndex(config.attack.transfer_onset_time_s);
  const std::size_t learned_onset =
      config.StepIndex(config.attack.onset_time_s);
  const AlgebraVector& victim_input = victim.generators.at(
      std::min(outcome.victim_onset, victim.generators.size() - 1));
  outcome.subspace = CommutingSubspace(*config.group, victim_input);

  const std::vector<AlgebraVector> signal = AttackSignal(config, nominal);
  const std::vector<std::vector<AlgebraVector>> signals(
      static_cast<std::size_t>(config.attack.experiments), signal);
  const AttackDataset dataset =
      GenerateDataset(nominal, signals, *suite, config.attack.noise_std_m,
                      config.seed, "nominal_x0");
  outcome.learned = LearnDisplacements(dataset, *suite, outcome.subspace);
  outcome.richness = EpsilonRichness(outcome.learned, outcome.subspace,
                                     outcome.learned.residual_bound);

  TransferConfig training;
  training.detector = config.detector;
  training.heading = config.attack.heading;
  training.mode = DeployMode::kReplay;
  outcome.training = RunTransfer(nominal, outcome.learned, *suite, training);

  TransferConfig transfer = training;
  transfer.mode = config.attack.deploy;
  transfer.victim_onset = outcome.victim_onset;
  transfer.learned_onset = learned_onset;
  outcome.transfer = RunTransfer(victim, outcome.learned, *suite, transfer);
  return outcome;
}

// ---------------------------------------------------------------------------
// Commands

int CmdAnalyzeCentralizer(const CommandOptions& options, std::ostream& out,
                          std::ostream& err) {
  return Guard(err, [&] {
    const ScenarioConfig config = RequireConfig(options);
    std::ostringstream lines;
    const auto report = [&](const char* source,
                            const std::vector<InputSegment>& segments) {
      for (std::size_t i = 0; i < segments.size(); ++i) {
        const SubspaceBasis s =
            CommutingSubspace(*config.group, segments[i].generator);
        ordered_json j;
        j["source"] = source;
        j["segment"] = i;
        j["t_s"] = segments[i].t_s;
        j["generator"] = ToStd(segments[i].generator);
        j["dim"] = s.dim();
        ordered_json basis = ordered_json::array();
        for (int c = 0; c < s.dim(); ++c) basis.push_back(ToStd(s.basis.col(c)));
        j["basis"] = std::move(basis);
        j["singular_values"] = ToStd(s.singular_values);
        j["closed"] = JacobiClosureCheck(*config.group, s);
        lines << j.dump() << '\n';
        out << source << " segment " << i << " (t=" << segments[i].t_s
            << " s): dim " << s.dim() << '\n';
      }
    };
    report("nominal", config.nominal_inputs);
    report("victim", config.victim_inputs);
    const std::filesystem::path dir = PrepareOutput(config);
    WriteFile(dir / "centralizer.jsonl", lines.str());
    return kExitOk;
  });
}

int CmdSimulate(const CommandOptions& options, std::ostream& out,
                std::ostream& err) {
  return Guard(err, [&] {
    const ScenarioConfig config = RequireConfig(options);
    const std::unique_ptr<ObservationSuite> suite = MakeSuite(config.suite);
    const Trajectory victim = VictimTrajectory(config);

    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    DetectorConfig detector = config.detector;
    if (config.sensor_noise_std_m > 0.0 && !config.explicit_chart_tolerance) {
      detector.chart_tolerance = kLenientChart;
    }
    ObserverState state = ObserverState::Start(victim.states.front());
    std::vector<ObserverRecord> records;
    bool any_alarm = false;
    for (std::size_t k = 1; k < victim.states.size(); ++k) {
      Vector z = suite->Measure(victim.states[k]);
      if (config.sensor_noise_std_m > 0.0) {
        for (int i = 0; i < z.size(); ++i) {
          z(i) += config.sensor_noise_std_m * noise(rng);
        }
      }
      ObserverStepResult step = [&] {
        try {
          return ObserverStep(state, victim.generators[k - 1], victim.dt, z,
                              *suite, detector);
        } catch (const Error& e) {
          std::ostringstream os;
          os << "step " << k << ": " << e.what();
          throw Error(e.kind(), os.str());
        }
      }();
      any_alarm = any_alarm || step.alarm;
      records.push_back({victim.time(k), step.state.drift,
                         step.innovation_norm, step.alarm});
      state = std::move(step.state);
    }

    const std::filesystem::path dir = PrepareOutput(config);
    WriteCsv(dir / "trajectory.csv",
             [&](std::ostream& os) { WriteTrajectoryCsv(os, victim); });
    WriteCsv(dir / "observer.csv",
             [&](std::ostream& os) { WriteObserverCsv(os, records); });
    out << config.name << ": simulated " << victim.steps() << " steps"
        << (any_alarm ? ", alarm raised" : ", no alarm") << '\n';
    return kExitOk;
  });
}

int CmdTransfer(const CommandOptions& options, std::ostream& out,
                std::ostream& err) {
  return Guard(err, [&] {
    const ScenarioConfig config = RequireConfig(options);
    const TransferOutcome r = RunTransferPipeline(config);
    const Trajectory victim = VictimTrajectory(config);

    const std::filesystem::path dir = PrepareOutput(config);
    WriteCsv(dir / "impact.csv",
             [&](std::ostream& os) { WriteImpactCsv(os, r.transfer); });
    WriteCsv(dir / "training_impact.csv",
             [&](std::ostream& os) { WriteImpactCsv(os, r.training); });
    WriteCsv(dir / "observer.csv", [&](std::ostream& os) {
      WriteObserverCsv(os, r.transfer.ObserverTrace());
    });
    WriteCsv(dir / "trajectory.csv",
             [&](std::ostream& os) { WriteTrajectoryCsv(os, victim); });
    WriteFile(dir / "learned.json", LearnedAttackToJson(r.learned) + "\n");

    int alarms = 0;
    std::optional<double> first_alarm;
    for (const ImpactRecord& s : r.transfer.steps) {
      if (!s.alarm) continue;
      ++alarms;
      if (!first_alarm) first_alarm = s.t;
    }
    ordered_json v;
    v["name"] = config.name;
    v["stealthy"] = r.transfer.stealthy;
    v["max_innovation"] = r.transfer.MaxInnovation();
    v["max_bound"] = r.transfer.MaxTotalBound();
    v["max_impact"] = r.transfer.MaxImpact();
    v["max_deviation"] = r.transfer.MaxDeviation();
    v["epsilon"] = r.learned.residual_bound;
    v["tau_m"] = config.detector.tau;
    v["alarm_steps"] = alarms;
    v["first_alarm_t_s"] =
        first_alarm ? ordered_json(*first_alarm) : ordered_json(nullptr);
    v["training_max_innovation"] = r.training.MaxInnovation();
    v["training_max_impact"] = r.training.MaxImpact();
    v["subspace_dim"] = r.subspace.dim();
    v["richness_rank"] = r.richness.rank;
    v["seed"] = config.seed;
    WriteFile(dir / "verdict.json", v.dump(2) + "\n");

    out << std::setprecision(4) << config.name << ": "
        << (r.transfer.stealthy ? "stealthy" : "ALARM")
        << ", max innovation " << r.transfer.MaxInnovation() << " m (tau "
        << config.detector.tau << "), max bound " << r.transfer.MaxTotalBound()
        << ", epsilon " << r.learned.residual_bound << '\n';
    return r.transfer.stealthy ? kExitOk : kExitAlarm;
  });
}

double ReproductionRow::MaxAbsDiff() const {
  return (reference - computed).cwiseAbs().maxCoeff();
}

std::vector<ReproductionRow> ReproductionTable() {
  const GroupElement g = Se2FromPose({3.316, -0.408, -0.245});
  const AlgebraVector rho = (AlgebraVector(3) << 0.0, 0.44, 0.0).finished();
  const AlgebraVector ideal =
      (AlgebraVector(3) << 3.350, 0.0, -0.245).finished();
  const ImpactBound b = ComputeImpactBound(rho, g);
  const auto scalar = [](double x) { return (Vector(1) << x).finished(); };

  std::vector<ReproductionRow> rows;
  rows.push_back({"adjoint_norm", scalar(3.618),
                  scalar(AdjointOperatorNorm(g)), 1e-3});
  rows.push_back({"deviation", (Vector(3) << 0.107, 0.427, 0.0).finished(),
                  b.deviation, 1e-3});
  rows.push_back(
      {"deviation_norm", scalar(0.44), scalar(b.deviation.norm()), 1e-12});
  rows.push_back({"bound", scalar(1.59), scalar(b.bound), 5e-3});
  rows.push_back({"xi_eff", (Vector(3) << 3.457, 0.427, -0.245).finished(),
                  ideal + b.deviation, 2e-3});
  return rows;
}

int CmdReproducePaper(const CommandOptions& options, std::ostream& out,
                      std::ostream& err) {
  return Guard(err, [&] {
    const std::vector<ReproductionRow> rows = ReproductionTable();
    const auto format = [](const Vector& v) {
      std::ostringstream os;
      os << std::fixed << std::setprecision(4);
      if (v.size() == 1) {
        os << v(0);
        return os.str();
      }
      os << '[';
      for (int i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v(i);
      os << ']';
      return os.str();
    };
    bool all_ok = true;
    std::ostringstream csv;
    csv << "quantity,reference,computed,abs_diff,tolerance,ok\n"
        << std::setprecision(12);
    out << std::left << std::setw(16) << "quantity" << std::setw(28)
        << "reference" << std::setw(28) << "computed" << std::setw(12)
        << "abs diff" << "ok\n";
    for (const ReproductionRow& row : rows) {
      all_ok = all_ok && row.ok();
      std::ostringstream diff;
      diff << std::scientific << std::setprecision(2) << row.MaxAbsDiff();
      out << std::left << std::setw(16) << row.quantity << std::setw(28)
          << format(row.reference) << std::setw(28) << format(row.computed)
          << std::setw(12) << diff.str() << (row.ok() ? "PASS" : "FAIL")
          << '\n';
      csv << row.quantity << ",\"" << format(row.reference) << "\",\""
          << format(row.computed) << "\"," << row.MaxAbsDiff() << ','
          << row.tolerance << ',' << (row.ok() ? 1 : 0) << '\n';
    }
    if (options.out) {
      std::filesystem::create_directories(*options.out);
      WriteFile(*options.out / "reproduce.csv", csv.str());
    }
    return all_ok ? kExitOk : kExitAlarm;
  });
}

}  // namespace liespoof
