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

// Left-invariant dynamics under zero-order hold. With the input held over a
// step of length dt the flow is exact: x_{k+1} = x_k exp(f_e dt).

#ifndef LIESPOOF_DYNAMICS_H_
#define LIESPOOF_DYNAMICS_H_

#include <ostream>
#include <span>
#include <vector>

#include "liespoof/lie_core.h"

namespace liespoof {

// Dubins unicycle input: forward speed (m/s) and turn rate (rad/s).
struct ControlInput {
  double v = 0.0;
  double omega = 0.0;
};

// [v, 0, omega] in (forward, lateral, heading) coordinates.
AlgebraVector Generator(const ControlInput& u);

struct Trajectory {
  std::vector<GroupElement> states;     // inputs.size() + 1 entries
  std::vector<AlgebraVector> generators;  // f_e held over [t_k, t_k + dt)
  double dt = 0.0;
  double t0 = 0.0;

  std::size_t steps() const { return generators.size(); }
  double time(std::size_t k) const { return t0 + dt * static_cast<double>(k); }
  // exp(f_e dt) for step k, i.e. states[k + 1] = states[k] * flow(k).
  GroupElement flow(std::size_t k) const;
};

GroupElement ZohStep(const GroupElement& x, const AlgebraVector& generator,
                     double dt);
GroupElement ZohStep(const GroupElement& x, const ControlInput& u, double dt);

Trajectory Simulate(const GroupElement& x0,
                    std::span<const AlgebraVector> generators, double dt,
                    double t0 = 0.0);
Trajectory Simulate(const GroupElement& x0,
                    std::span<const ControlInput> inputs, double dt,
                    double t0 = 0.0);

// CSV with header t,x,y,theta,v,omega; one row per state. The last state
// repeats the last held input (zeros for an empty trajectory). SE(2) only.
void WriteTrajectoryCsv(std::ostream& out, const Trajectory& trajectory);

}  // namespace liespoof

#endif  // LIESPOOF_DYNAMICS_H_
