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

#include "liespoof/dynamics.h"

#include <algorithm>
#include <cmath>
#include <iomanip>

namespace liespoof {

namespace {

void CheckStep(double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorKind::kInvalidArgument, "step length must be positive");
  }
}

}  // namespace

AlgebraVector Generator(const ControlInput& u) {
  if (!std::isfinite(u.v) || !std::isfinite(u.omega)) {
    throw Error(ErrorKind::kInvalidArgument, "control input is not finite");
  }
  AlgebraVector f(3);
  f << u.v, 0.0, u.omega;
  return f;
}

GroupElement Trajectory::flow(std::size_t k) const {
  return Exp(states.front().spec(), generators.at(k) * dt);
}

GroupElement ZohStep(const GroupElement& x, const AlgebraVector& generator,
                     double dt) {
  CheckStep(dt);
  return Compose(x, Exp(x.spec(), generator * dt));
}

GroupElement ZohStep(const GroupElement& x, const ControlInput& u, double dt) {
  return ZohStep(x, Generator(u), dt);
}

Trajectory Simulate(const GroupElement& x0,
                    std::span<const AlgebraVector> generators, double dt,
                    double t0) {
  CheckStep(dt);
  Trajectory traj;
  traj.dt = dt;
  traj.t0 = t0;
  traj.states.reserve(generators.size() + 1);
  traj.states.push_back(x0);
  for (const AlgebraVector& f : generators) {
    traj.states.push_back(ZohStep(traj.states.back(), f, dt));
    traj.generators.push_back(f);
  }
  return traj;
}

Trajectory Simulate(const GroupElement& x0,
                    std::span<const ControlInput> inputs, double dt,
                    double t0) {
  std::vector<AlgebraVector> generators;
  generators.reserve(inputs.size());
  for (const ControlInput& u : inputs) generators.push_back(Generator(u));
  return Simulate(x0, generators, dt, t0);
}

void WriteTrajectoryCsv(std::ostream& out, const Trajectory& trajectory) {
  out << "t,x,y,theta,v,omega\n";
  out << std::setprecision(12);
  for (std::size_t k = 0; k < trajectory.states.size(); ++k) {
    const Pose2 pose = Se2Pose(trajectory.states[k]);
    double v = 0.0;
    double omega = 0.0;
    if (!trajectory.generators.empty()) {
      const AlgebraVector& f =
          trajectory.generators[std::min(k, trajectory.generators.size() - 1)];
      v = f(0);
      omega = f(2);
    }
    out << trajectory.time(k) << ',' << pose.x << ',' << pose.y << ','
        << pose.theta << ',' << v << ',' << omega << '\n';
  }
}

}  // namespace liespoof
