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

// Attack-side pipeline: collect an attack dataset on a nominal trajectory,
// learn per-step algebra displacements from it, and replay them against a
// victim while recording dynamical impact, the adjoint deviation bound and
// the detector's innovation.
//
// The g argument of DynamicalImpact, ImpactBound and RealizedError is the
// conjugator passed to AdjointRight. For a flow step G of right-translation
// dynamics the physically realized conjugator is Inverse(G); RunAttack uses
// that.

#ifndef LIESPOOF_ATTACK_H_
#define LIESPOOF_ATTACK_H_

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "liespoof/centralizer.h"
#include "liespoof/dynamics.h"
#include "liespoof/lie_core.h"
#include "liespoof/observer.h"

namespace liespoof {

struct DatasetPair {
  Vector nominal;
  Vector attacked;
};

struct AttackDataset {
  // experiments[i][k] pairs h(x_k) with h(x_k exp(xi_k^(i))) + noise.
  std::vector<std::vector<DatasetPair>> experiments;
  std::string x0_label;
  double dt = 0.0;
  double noise_std = 0.0;
};

// One signal per experiment, each with one displacement per trajectory
// state. Noise is i.i.d. gaussian on every sensor channel of the attacked
// tuple, drawn from a generator seeded with `seed`.
AttackDataset GenerateDataset(const Trajectory& nominal,
                              std::span<const std::vector<AlgebraVector>> signals,
                              const ObservationSuite& suite, double noise_std,
                              std::uint64_t seed,
                              std::string x0_label = "x0");

struct LearnedAttack {
  std::vector<AlgebraVector> displacements;  // mean over experiments, per step
  std::vector<AlgebraVector> samples;        // every (experiment, step) log
  double residual_bound = 0.0;               // max residual norm over samples
  SubspaceBasis subspace;
  double dt = 0.0;
};

// Chart-inverts both tuples of every pair, takes xi = log(x_D^-1 x_a), and
// averages over experiments in the algebra. Noisy datasets are inverted in
// the least-squares sense; noiseless ones must be consistent to 1e-6.
LearnedAttack LearnDisplacements(const AttackDataset& dataset,
                                 const ObservationSuite& suite,
                                 const SubspaceBasis& subspace);

struct RichnessReport {
  bool rich = false;
  bool spans = false;
  bool bounded = false;
  int rank = 0;
  int dim = 0;
  double max_residual = 0.0;
  std::string failure;  // empty when rich
};

RichnessReport EpsilonRichness(const LearnedAttack& learned,
                               const SubspaceBasis& subspace, double epsilon);

// Realizes the observation action of exp(xi) on a sensor tuple. A purely
// lateral SE(2) displacement [0, c, 0] uses the heading-coordinated additive
// form true + [-c sin th, c cos th, 0, c]; anything else chart-inverts,
// right-multiplies by exp(xi) and re-measures.
Vector SpoofMeasurement(const Vector& true_measurement, const AlgebraVector& xi,
                        double heading_estimate, const ObservationSuite& suite);

// The general chart path of SpoofMeasurement, for any displacement.
Vector RealizeObservationAction(const Vector& true_measurement,
                                const AlgebraVector& xi,
                                const GroupElement& hint,
                                const ObservationSuite& suite);

// g exp(xi) g^-1, which equals exp(AdjointRight(g) xi).
GroupElement DynamicalImpact(const AlgebraVector& xi, const GroupElement& g);

struct ImpactBound {
  AlgebraVector deviation;  // AdjointRight(g) rho
  double bound = 0.0;       // |rho| * |AdjointRight(g)|_2
};

ImpactBound ComputeImpactBound(const AlgebraVector& rho, const GroupElement& g);

// exp(-(eta + Ad_g rho_eta)) exp(xi + rho_xi).
GroupElement RealizedError(const AlgebraVector& eta,
                           const AlgebraVector& rho_eta,
                           const AlgebraVector& xi,
                           const AlgebraVector& rho_xi, const GroupElement& g);

enum class HeadingSource {
  kStream,  // heading chart-inverted from the unspoofed sensor stream
  kTruth,
};

enum class DeployMode {
  kReplay,  // replay the learned sequence from learned_onset on
  kSteady,  // hold the final learned displacement
};

struct TransferConfig {
  DetectorConfig detector;
  HeadingSource heading = HeadingSource::kStream;
  DeployMode mode = DeployMode::kReplay;
  std::size_t victim_onset = 0;   // first victim state index attacked
  std::size_t learned_onset = 0;  // learned index deployed at victim_onset
};

struct ImpactRecord {
  double t = 0.0;
  AlgebraVector displacement;  // deployed xi_hat_k
  GroupElement impact;         // d_k
  double impact_norm = 0.0;
  AlgebraVector deviation;     // Ad rho_k
  double deviation_norm = 0.0;
  double bound = 0.0;          // epsilon |Ad|, zero while no attack is applied
  double ideal_norm = 0.0;     // |xi_k|
  double total_bound = 0.0;    // |xi_k| + bound
  GroupElement realized_error;  // E_k
  double innovation_norm = 0.0;
  bool alarm = false;
  AlgebraVector drift;
};

struct ImpactReport {
  std::vector<ImpactRecord> steps;  // one per trajectory step
  double epsilon = 0.0;
  bool stealthy = true;

  double MaxInnovation() const;
  double MaxImpact() const;
  double MaxTotalBound() const;
  double MaxDeviation() const;
  std::vector<ObserverRecord> ObserverTrace() const;
};

// Feeds the victim's sensor stream, spoofed with displacements[k] at state
// k, into an observer started on the victim's initial state. `displacements`
// has one entry per trajectory state; entry 0 is never used.
ImpactReport RunAttack(const Trajectory& victim,
                       std::span<const AlgebraVector> displacements,
                       const SubspaceBasis& subspace, double epsilon,
                       const ObservationSuite& suite,
                       const TransferConfig& config);

// Per-state displacements the deployment in `config` applies to a victim
// with `victim_states` states.
std::vector<AlgebraVector> DeployedDisplacements(const LearnedAttack& learned,
                                                 std::size_t victim_states,
                                                 const TransferConfig& config);

ImpactReport RunTransfer(const Trajectory& victim, const LearnedAttack& learned,
                         const ObservationSuite& suite,
                         const TransferConfig& config);

// CSV with header t,impact_norm,deviation_norm,bound,innov_norm,alarm.
void WriteImpactCsv(std::ostream& out, const ImpactReport& report);

// {"displacements": [[f, l, theta], ...], "epsilon": e}
std::string LearnedAttackToJson(const LearnedAttack& learned);
LearnedAttack LearnedAttackFromJson(const std::string& text,
                                    const SubspaceBasis& subspace);

}  // namespace liespoof

#endif  // LIESPOOF_ATTACK_H_
