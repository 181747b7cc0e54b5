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

#include "liespoof/observer.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace liespoof {

namespace {
// Below this radius the body-frame pair no longer fixes the heading.
constexpr double kDegenerateRadius = 1e-9;
}  // namespace

// ---------------------------------------------------------------------------
// Se2MixedSuite

Vector ObserveSe2Mixed(const GroupElement& x) {
  const Pose2 p = Se2Pose(x);
  const double c = std::cos(p.theta);
  const double s = std::sin(p.theta);
  Vector z(4);
  z << p.x, p.y, c * p.x + s * p.y, -s * p.x + c * p.y;
  return z;
}

Vector Se2MixedSuite::Measure(const GroupElement& x) const {
  return ObserveSe2Mixed(x);
}

// Least squares over (x, y, theta): for a fixed heading the best position is
// the mean of the GPS fix and the rotated body fix, and the heading that
// maximizes their alignment is the angle between the two fixes.
GroupElement Se2MixedSuite::Invert(const Vector& z, const GroupElement& hint,
                                   double tolerance) const {
  if (z.size() != 4) {
    throw Error(ErrorKind::kDimensionMismatch,
                "se2_mixed measurements have 4 channels");
  }
  if (!z.allFinite()) {
    throw Error(ErrorKind::kChartInversion, "measurement is not finite");
  }
  const Eigen::Vector2d gps(z(0), z(1));
  const Eigen::Vector2d body(z(2), z(3));
  double theta = 0.0;
  if (gps.norm() < kDegenerateRadius && body.norm() < kDegenerateRadius) {
    theta = Se2Pose(hint).theta;
  } else {
    theta = WrapAngle(std::atan2(gps.y(), gps.x()) -
                      std::atan2(body.y(), body.x()));
  }
  const Eigen::Rotation2Dd rotation(theta);
  const Eigen::Vector2d rotated_body = rotation * body;
  const double residual = (gps - rotated_body).norm();
  if (residual > tolerance * std::max(1.0, z.norm())) {
    std::ostringstream os;
    os << "sensor tuple is inconsistent: GPS and body fixes differ by "
       << residual;
    throw Error(ErrorKind::kChartInversion, os.str());
  }
  const Eigen::Vector2d position = 0.5 * (gps + rotated_body);
  return Se2FromPose({position.x(), position.y(), theta});
}

Matrix Se2MixedSuite::DifferentialAtIdentity() const {
  Matrix d = Matrix::Zero(4, 3);
  d(0, 0) = 1.0;
  d(1, 1) = 1.0;
  d(2, 0) = 1.0;
  d(3, 1) = 1.0;
  return d;
}

std::unique_ptr<ObservationSuite> MakeSuite(const std::string& name) {
  if (name == "se2_mixed") return std::make_unique<Se2MixedSuite>();
  throw Error(ErrorKind::kConfig, "unknown sensor suite '" + name + "'");
}

// ---------------------------------------------------------------------------
// Detector

void DetectorConfig::Validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw Error(ErrorKind::kInvalidArgument, "tau must be positive");
  }
  if (!(kappa > 0.0 && kappa <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "kappa must be in (0, 1]");
  }
  if (!(chart_tolerance > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                "chart tolerance must be positive");
  }
}

ObserverState ObserverState::Start(const GroupElement& estimate) {
  return ObserverState{AlgebraVector::Zero(estimate.spec()->dim_algebra()),
                       estimate, std::nullopt};
}

GroupElement InvariantError(const GroupElement& predicted,
                            const GroupElement& attacked_state) {
  return Compose(Inverse(predicted), attacked_state);
}

Vector Innovation(const GroupElement& error, const ObservationSuite& suite) {
  return suite.Measure(error) - suite.Reference();
}

bool Detect(const Vector& innovation, const DetectorConfig& config) {
  return innovation.norm() > config.tau;
}

AlgebraVector Gain(const Vector& innovation, const ObservationSuite& suite,
                   const DetectorConfig& config) {
  switch (config.gain) {
    case GainModel::kChartInverse: {
      const GroupElement identity = GroupElement::Identity(suite.group());
      const GroupElement error =
          suite.Invert(suite.Reference() + innovation, identity);
      return config.kappa * Log(error);
    }
    case GainModel::kLinear: {
      const Matrix pinv = suite.DifferentialAtIdentity()
                              .completeOrthogonalDecomposition()
                              .pseudoInverse();
      return config.kappa * pinv * innovation;
    }
  }
  throw Error(ErrorKind::kInvalidArgument, "unknown gain model");
}

ObserverStepResult ObserverStep(const ObserverState& state,
                                const AlgebraVector& generator, double dt,
                                const Vector& measurement,
                                const ObservationSuite& suite,
                                const DetectorConfig& config) {
  config.Validate();
  const GroupSpecPtr& spec = state.estimate.spec();
  const GroupElement flow = Exp(spec, generator * dt);
  const GroupElement predicted = ZohStep(state.estimate, generator, dt);
  const GroupElement measured =
      suite.Invert(measurement, predicted, config.chart_tolerance);
  const GroupElement error = InvariantError(predicted, measured);
  Vector innovation = Innovation(error, suite);
  const double norm = innovation.norm();
  const AlgebraVector correction = Gain(innovation, suite, config);

  const AlgebraVector propagated = AdjointRight(Inverse(flow)) * state.drift;
  const AlgebraVector drift =
      Log(Compose(Exp(spec, propagated), Exp(spec, correction)));

  return ObserverStepResult{
      ObserverState{drift, Compose(predicted, Exp(spec, correction)),
                    predicted},
      error,
      std::move(innovation),
      norm,
      norm > config.tau,
      correction,
  };
}

void WriteObserverCsv(std::ostream& out,
                      std::span<const ObserverRecord> records) {
  const int n = records.empty() ? 3 : static_cast<int>(records[0].drift.size());
  out << 't';
  if (n == 3) {
    out << ",eta_f,eta_l,eta_theta";
  } else {
    for (int i = 0; i < n; ++i) out << ",eta_" << i;
  }
  out << ",innov_norm,alarm\n";
  out << std::setprecision(12);
  for (const ObserverRecord& r : records) {
    out << r.t;
    for (int i = 0; i < r.drift.size(); ++i) out << ',' << r.drift(i);
    out << ',' << r.innovation_norm << ',' << (r.alarm ? 1 : 0) << '\n';
  }
}

}  // namespace liespoof
