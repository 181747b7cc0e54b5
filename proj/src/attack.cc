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

#include "liespoof/attack.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

#include <json.hpp>

namespace liespoof {

namespace {

bool IsLateral(const AlgebraVector& xi) {
  return xi.size() == 3 && xi(0) == 0.0 && xi(2) == 0.0;
}

GroupElement HeadingHint(const GroupSpecPtr& group, double heading) {
  if (group->is_se2()) return Se2FromPose({0.0, 0.0, heading});
  return GroupElement::Identity(group);
}

double NoiseTolerance(double noise_std) {
  return noise_std > 0.0 ? kLenientChart : kChartTolerance;
}

}  // namespace

AttackDataset GenerateDataset(
    const Trajectory& nominal,
    std::span<const std::vector<AlgebraVector>> signals,
    const ObservationSuite& suite, double noise_std, std::uint64_t seed,
    std::string x0_label) {
  if (!(noise_std >= 0.0) || !std::isfinite(noise_std)) {
    throw Error(ErrorKind::kInvalidArgument, "noise std must be >= 0");
  }
  if (signals.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "dataset needs an experiment");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);

  AttackDataset dataset;
  dataset.x0_label = std::move(x0_label);
  dataset.dt = nominal.dt;
  dataset.noise_std = noise_std;
  const GroupSpecPtr& spec = nominal.states.front().spec();
  for (const std::vector<AlgebraVector>& signal : signals) {
    if (signal.size() != nominal.states.size()) {
      throw Error(ErrorKind::kDimensionMismatch,
                  "attack signal needs one displacement per state");
    }
    std::vector<DatasetPair> pairs;
    pairs.reserve(signal.size());
    for (std::size_t k = 0; k < signal.size(); ++k) {
      const GroupElement& x = nominal.states[k];
      Vector attacked = suite.Measure(Compose(x, Exp(spec, signal[k])));
      if (noise_std > 0.0) {
        for (int i = 0; i < attacked.size(); ++i) {
          attacked(i) += noise_std * noise(rng);
        }
      }
      pairs.push_back({suite.Measure(x), std::move(attacked)});
    }
    dataset.experiments.push_back(std::move(pairs));
  }
  return dataset;
}

LearnedAttack LearnDisplacements(const AttackDataset& dataset,
                                 const ObservationSuite& suite,
                                 const SubspaceBasis& subspace) {
  if (dataset.experiments.empty() || dataset.experiments.front().empty()) {
    throw Error(ErrorKind::kInvalidArgument, "attack dataset is empty");
  }
  const GroupSpecPtr group = suite.group();
  const int n = group->dim_algebra();
  if (subspace.ambient_dim() != n) {
    throw Error(ErrorKind::kDimensionMismatch,
                "subspace does not live in the suite's algebra");
  }
  const std::size_t steps = dataset.experiments.front().size();
  const double tolerance = NoiseTolerance(dataset.noise_std);

  LearnedAttack learned;
  learned.subspace = subspace;
  learned.dt = dataset.dt;
  learned.displacements.assign(steps, AlgebraVector::Zero(n));
  for (const std::vector<DatasetPair>& experiment : dataset.experiments) {
    if (experiment.size() != steps) {
      throw Error(ErrorKind::kDimensionMismatch,
                  "experiments have different lengths");
    }
    GroupElement hint = GroupElement::Identity(group);
    for (std::size_t k = 0; k < steps; ++k) {
      const GroupElement nominal =
          suite.Invert(experiment[k].nominal, hint, tolerance);
      const GroupElement attacked =
          suite.Invert(experiment[k].attacked, nominal, tolerance);
      AlgebraVector xi = Log(Compose(Inverse(nominal), attacked));
      learned.residual_bound = std::max(
          learned.residual_bound, Decompose(xi, subspace).residual.norm());
      learned.displacements[k] += xi;
      learned.samples.push_back(std::move(xi));
      hint = nominal;
    }
  }
  for (AlgebraVector& xi : learned.displacements) {
    xi /= static_cast<double>(dataset.experiments.size());
  }
  return learned;
}

RichnessReport EpsilonRichness(const LearnedAttack& learned,
                               const SubspaceBasis& subspace, double epsilon) {
  RichnessReport report;
  report.dim = subspace.dim();
  Matrix coords(subspace.dim(), static_cast<Eigen::Index>(learned.samples.size()));
  for (std::size_t i = 0; i < learned.samples.size(); ++i) {
    const Decomposition d = Decompose(learned.samples[i], subspace);
    report.max_residual = std::max(report.max_residual, d.residual.norm());
    coords.col(static_cast<Eigen::Index>(i)) =
        subspace.basis.transpose() * d.ideal;
  }
  if (coords.size() > 0) {
    const Eigen::JacobiSVD<Matrix> svd(coords);
    const Vector& sv = svd.singularValues();
    const double threshold =
        sv.size() > 0 ? std::max(1e-12, kDefaultRankTolerance * sv(0)) : 0.0;
    report.rank = static_cast<int>((sv.array() > threshold).count());
  }
  report.spans = report.rank == report.dim;
  report.bounded = report.max_residual <= epsilon;
  report.rich = report.spans && report.bounded;
  if (!report.spans) {
    std::ostringstream os;
    os << "ideal components span rank " << report.rank << " of "
       << report.dim;
    report.failure = os.str();
  } else if (!report.bounded) {
    std::ostringstream os;
    os << "residual " << report.max_residual << " exceeds epsilon "
       << epsilon;
    report.failure = os.str();
  }
  return report;
}

Vector RealizeObservationAction(const Vector& true_measurement,
                                const AlgebraVector& xi,
                                const GroupElement& hint,
                                const ObservationSuite& suite) {
  const GroupElement x = suite.Invert(true_measurement, hint, kLenientChart);
  return suite.Measure(Compose(x, Exp(suite.group(), xi)));
}

Vector SpoofMeasurement(const Vector& true_measurement, const AlgebraVector& xi,
                        double heading_estimate,
                        const ObservationSuite& suite) {
  const GroupSpecPtr group = suite.group();
  if (xi.size() != group->dim_algebra()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "displacement does not match the suite's algebra");
  }
  if (suite.name() == "se2_mixed" && IsLateral(xi)) {
    const double c = xi(1);
    Vector offset(4);
    offset << -c * std::sin(heading_estimate), c * std::cos(heading_estimate),
        0.0, c;
    return true_measurement + offset;
  }
  return RealizeObservationAction(true_measurement, xi,
                                  HeadingHint(group, heading_estimate), suite);
}

GroupElement DynamicalImpact(const AlgebraVector& xi, const GroupElement& g) {
  return Compose(Compose(g, Exp(g.spec(), xi)), Inverse(g));
}

ImpactBound ComputeImpactBound(const AlgebraVector& rho,
                               const GroupElement& g) {
  return ImpactBound{AdjointRight(g) * rho,
                     rho.norm() * AdjointOperatorNorm(g)};
}

GroupElement RealizedError(const AlgebraVector& eta,
                           const AlgebraVector& rho_eta,
                           const AlgebraVector& xi,
                           const AlgebraVector& rho_xi, const GroupElement& g) {
  const GroupSpecPtr& spec = g.spec();
  const AlgebraVector predicted = eta + AdjointRight(g) * rho_eta;
  return Compose(Exp(spec, -predicted), Exp(spec, xi + rho_xi));
}

double ImpactReport::MaxInnovation() const {
  double m = 0.0;
  for (const ImpactRecord& r : steps) m = std::max(m, r.innovation_norm);
  return m;
}

double ImpactReport::MaxImpact() const {
  double m = 0.0;
  for (const ImpactRecord& r : steps) m = std::max(m, r.impact_norm);
  return m;
}

double ImpactReport::MaxTotalBound() const {
  double m = 0.0;
  for (const ImpactRecord& r : steps) m = std::max(m, r.total_bound);
  return m;
}

double ImpactReport::MaxDeviation() const {
  double m = 0.0;
  for (const ImpactRecord& r : steps) m = std::max(m, r.deviation_norm);
  return m;
}

std::vector<ObserverRecord> ImpactReport::ObserverTrace() const {
  std::vector<ObserverRecord> trace;
  trace.reserve(steps.size());
  for (const ImpactRecord& r : steps) {
    trace.push_back({r.t, r.drift, r.innovation_norm, r.alarm});
  }
  return trace;
}

ImpactReport RunAttack(const Trajectory& victim,
                       std::span<const AlgebraVector> displacements,
                       const SubspaceBasis& subspace, double epsilon,
                       const ObservationSuite& suite,
                       const TransferConfig& config) {
  config.detector.Validate();
  if (victim.states.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "victim trajectory is empty");
  }
  if (displacements.size() != victim.states.size()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "need one displacement per victim state");
  }
  const GroupSpecPtr& spec = victim.states.front().spec();
  const bool se2 = spec->is_se2();

  ImpactReport report;
  report.epsilon = epsilon;
  ObserverState state = ObserverState::Start(victim.states.front());
  double heading = se2 ? Se2Pose(victim.states.front()).theta : 0.0;
  for (std::size_t k = 1; k < victim.states.size(); ++k) {
    try {
      const GroupElement& x = victim.states[k];
      const Vector z = suite.Measure(x);
      if (se2) {
        heading = config.heading == HeadingSource::kTruth
                      ? Se2Pose(x).theta
                      : Se2Pose(suite.Invert(z, HeadingHint(spec, heading),
                                             kLenientChart))
                            .theta;
      }
      const AlgebraVector& xi = displacements[k];
      const bool active = !xi.isZero(0.0);
      const Vector spoofed =
          active ? SpoofMeasurement(z, xi, heading, suite) : z;
      ObserverStepResult step =
          ObserverStep(state, victim.generators[k - 1], victim.dt, spoofed,
                       suite, config.detector);

      const GroupElement conjugator = Inverse(victim.flow(k - 1));
      const Decomposition split = Decompose(xi, subspace);
      const ImpactBound bound = ComputeImpactBound(split.residual, conjugator);

      const double impact_norm = (AdjointRight(conjugator) * xi).norm();
      const double bound_value =
          active ? epsilon * AdjointOperatorNorm(conjugator) : 0.0;
      ImpactRecord record{
          .t = victim.time(k),
          .displacement = xi,
          .impact = DynamicalImpact(xi, conjugator),
          .impact_norm = impact_norm,
          .deviation = bound.deviation,
          .deviation_norm = bound.deviation.norm(),
          .bound = bound_value,
          .ideal_norm = split.ideal.norm(),
          .total_bound = split.ideal.norm() + bound_value,
          .realized_error = step.error,
          .innovation_norm = step.innovation_norm,
          .alarm = step.alarm,
          .drift = step.state.drift,
      };
      report.stealthy = report.stealthy && !step.alarm;
      report.steps.push_back(std::move(record));
      state = std::move(step.state);
    } catch (const Error& e) {
      std::ostringstream os;
      os << "step " << k << ": " << e.what();
      throw Error(e.kind(), os.str());
    }
  }
  return report;
}

std::vector<AlgebraVector> DeployedDisplacements(const LearnedAttack& learned,
                                                 std::size_t victim_states,
                                                 const TransferConfig& config) {
  if (learned.displacements.empty()) {
    throw Error(ErrorKind::kPrecondition, "no learned displacements");
  }
  const std::size_t last = learned.displacements.size() - 1;
  const int n = static_cast<int>(learned.displacements.front().size());
  std::vector<AlgebraVector> out(victim_states, AlgebraVector::Zero(n));
  for (std::size_t k = config.victim_onset; k < victim_states; ++k) {
    if (config.mode == DeployMode::kSteady) {
      out[k] = learned.displacements[last];
    } else {
      const std::size_t index =
          std::min(last, config.learned_onset + (k - config.victim_onset));
      out[k] = learned.displacements[index];
    }
  }
  return out;
}

ImpactReport RunTransfer(const Trajectory& victim, const LearnedAttack& learned,
                         const ObservationSuite& suite,
                         const TransferConfig& config) {
  if (learned.dt > 0.0 && std::abs(learned.dt - victim.dt) > 1e-12) {
    throw Error(ErrorKind::kPrecondition,
                "victim step length differs from the learned one");
  }
  const std::vector<AlgebraVector> displacements =
      DeployedDisplacements(learned, victim.states.size(), config);
  return RunAttack(victim, displacements, learned.subspace,
                   learned.residual_bound, suite, config);
}

void WriteImpactCsv(std::ostream& out, const ImpactReport& report) {
  out << "t,impact_norm,deviation_norm,bound,innov_norm,alarm\n";
  out << std::setprecision(12);
  for (const ImpactRecord& r : report.steps) {
    out << r.t << ',' << r.impact_norm << ',' << r.deviation_norm << ','
        << r.bound << ',' << r.innovation_norm << ',' << (r.alarm ? 1 : 0)
        << '\n';
  }
}

std::string LearnedAttackToJson(const LearnedAttack& learned) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const AlgebraVector& xi : learned.displacements) {
    rows.push_back(std::vector<double>(xi.data(), xi.data() + xi.size()));
  }
  j["displacements"] = std::move(rows);
  j["epsilon"] = learned.residual_bound;
  j["dt_s"] = learned.dt;
  return j.dump(2);
}

LearnedAttack LearnedAttackFromJson(const std::string& text,
                                    const SubspaceBasis& subspace) {
  LearnedAttack learned;
  learned.subspace = subspace;
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    for (const auto& row : j.at("displacements")) {
      const auto values = row.get<std::vector<double>>();
      if (static_cast<int>(values.size()) != subspace.ambient_dim()) {
        throw Error(ErrorKind::kDimensionMismatch,
                    "learned displacement has the wrong dimension");
      }
      learned.displacements.push_back(
          Eigen::Map<const AlgebraVector>(values.data(),
                                          static_cast<Eigen::Index>(values.size())));
    }
    learned.residual_bound = j.at("epsilon").get<double>();
    learned.dt = j.value("dt_s", 0.0);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kConfig,
                std::string("malformed learned attack: ") + e.what());
  }
  return learned;
}

}  // namespace liespoof
