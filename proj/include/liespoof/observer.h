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

// Equivariant detector. The estimate is carried on the group; the innovation
// is evaluated on the invariant error E = xhat_pred^-1 x_meas, so a common
// left translation of truth and estimate leaves every innovation unchanged.
//
// Displacements are right translations: xhat_k = x_k exp(eta_k).

#ifndef LIESPOOF_OBSERVER_H_
#define LIESPOOF_OBSERVER_H_

#include <limits>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "liespoof/dynamics.h"
#include "liespoof/lie_core.h"

namespace liespoof {

inline constexpr double kChartTolerance = 1e-6;
inline constexpr double kLenientChart = std::numeric_limits<double>::infinity();

class ObservationSuite {
 public:
  virtual ~ObservationSuite() = default;

  virtual std::string name() const = 0;
  virtual GroupSpecPtr group() const = 0;
  virtual int dim() const = 0;
  virtual Vector Measure(const GroupElement& x) const = 0;

  // Recovers the group element whose measurement is closest to z. `hint`
  // resolves directions z does not determine. Throws kChartInversion if the
  // best fit misses z by more than tolerance * max(1, |z|).
  virtual GroupElement Invert(const Vector& z, const GroupElement& hint,
                              double tolerance = kChartTolerance) const = 0;

  // d/ds Measure(exp(s e_j)) at s = 0, one column per generator.
  virtual Matrix DifferentialAtIdentity() const = 0;

  Vector Reference() const { return Measure(GroupElement::Identity(group())); }
};

// GPS-like position plus LIDAR-like body-frame position on SE(2):
// h(x, y, theta) = [x, y, f_s, l_s] with (f_s, l_s) = R(theta)^T (x, y).
class Se2MixedSuite final : public ObservationSuite {
 public:
  std::string name() const override { return "se2_mixed"; }
  GroupSpecPtr group() const override { return LieGroupSpec::SE2(); }
  int dim() const override { return 4; }
  Vector Measure(const GroupElement& x) const override;
  GroupElement Invert(const Vector& z, const GroupElement& hint,
                      double tolerance = kChartTolerance) const override;
  Matrix DifferentialAtIdentity() const override;
};

Vector ObserveSe2Mixed(const GroupElement& x);

// Looks up a suite by name; throws kConfig for unknown names.
std::unique_ptr<ObservationSuite> MakeSuite(const std::string& name);

enum class GainModel {
  // K(I) = kappa * log(chart^-1(h(e) + I)); corrects every observable
  // direction, heading included.
  kChartInverse,
  // K(I) = kappa * pinv(Dh(e)) I; first-order only.
  kLinear,
};

struct DetectorConfig {
  double tau = 5.0;     // alarm threshold on |I|, same units as the sensors
  double kappa = 0.35;  // gain in (0, 1]
  GainModel gain = GainModel::kChartInverse;
  // Chart-inversion tolerance for incoming measurements; noisy streams need
  // kLenientChart.
  double chart_tolerance = kChartTolerance;

  // Throws kInvalidArgument unless tau > 0, 0 < kappa <= 1 and
  // chart_tolerance > 0.
  void Validate() const;
};

struct ObserverState {
  AlgebraVector drift;     // eta_k
  GroupElement estimate;   // xhat_k
  std::optional<GroupElement> predicted;  // xhat_{k|k-1} of the last step

  static ObserverState Start(const GroupElement& estimate);
};

struct ObserverStepResult {
  ObserverState state;
  GroupElement error;       // E_k
  Vector innovation;        // I_k
  double innovation_norm = 0.0;
  bool alarm = false;
  AlgebraVector correction;  // K(I_k)
};

GroupElement InvariantError(const GroupElement& predicted,
                            const GroupElement& attacked_state);

Vector Innovation(const GroupElement& error, const ObservationSuite& suite);

// Alarm iff |I| > tau; the boundary |I| == tau is still stealthy.
bool Detect(const Vector& innovation, const DetectorConfig& config);

AlgebraVector Gain(const Vector& innovation, const ObservationSuite& suite,
                   const DetectorConfig& config);

// One predict/correct cycle against a (possibly spoofed) measurement. The
// drift is carried through the flow by the conjugation with the step's
// inverse, then composed with the correction: exp(eta_k) =
// exp(Ad eta_{k-1}) exp(K(I_k)). Chart-inversion failures surface as
// kChartInversion errors (data faults), never as alarms.
ObserverStepResult ObserverStep(const ObserverState& state,
                                const AlgebraVector& generator, double dt,
                                const Vector& measurement,
                                const ObservationSuite& suite,
                                const DetectorConfig& config);

struct ObserverRecord {
  double t = 0.0;
  AlgebraVector drift;
  double innovation_norm = 0.0;
  bool alarm = false;
};

// CSV with header t,eta_f,eta_l,eta_theta,innov_norm,alarm.
void WriteObserverCsv(std::ostream& out,
                      std::span<const ObserverRecord> records);

}  // namespace liespoof

#endif  // LIESPOOF_OBSERVER_H_
