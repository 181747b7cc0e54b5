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

#include "liespoof/centralizer.h"

#include <algorithm>
#include <cmath>

namespace liespoof {

namespace {
constexpr double kZeroFloor = 1e-12;
constexpr double kClosureTolerance = 1e-9;
}  // namespace

SubspaceBasis CommutingSubspace(const LieGroupSpec& spec,
                                const AlgebraVector& generator, double tol) {
  if (!(tol > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "rank tolerance must be positive");
  }
  if (!generator.allFinite()) {
    throw Error(ErrorKind::kInvalidArgument, "generator is not finite");
  }
  const int n = spec.dim_algebra();
  const LinearOperator ad = AdMatrix(spec, generator);
  Eigen::JacobiSVD<Matrix> svd(ad, Eigen::ComputeFullV);
  const Vector& sigma = svd.singularValues();
  const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
  const double threshold = sigma_max > 0.0 ? tol * sigma_max : kZeroFloor;
  int rank = 0;
  for (int i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > threshold) ++rank;
  }

  SubspaceBasis out;
  out.basis = svd.matrixV().rightCols(n - rank);
  out.singular_values = sigma;
  out.rank_tolerance = tol;
  out.generator = generator;
  return out;
}

TransferCheck IsTransferable(const LieGroupSpec& spec, const AlgebraVector& xi,
                             const AlgebraVector& generator, double tol) {
  TransferCheck check;
  check.bracket_norm = Bracket(spec, generator, xi).norm();
  check.transferable =
      check.bracket_norm <= tol * std::max(1.0, generator.norm() * xi.norm());
  return check;
}

Decomposition Decompose(const AlgebraVector& xi,
                        const SubspaceBasis& subspace) {
  if (xi.size() != subspace.ambient_dim()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "displacement and subspace dimensions differ");
  }
  Decomposition d;
  d.ideal = subspace.basis * (subspace.basis.transpose() * xi);
  d.residual = xi - d.ideal;
  return d;
}

bool InSubspace(const AlgebraVector& xi, const SubspaceBasis& subspace,
                double tol) {
  return Decompose(xi, subspace).residual.norm() <=
         tol * std::max(1.0, xi.norm());
}

bool JacobiClosureCheck(const LieGroupSpec& spec,
                        const SubspaceBasis& subspace) {
  const int d = subspace.dim();
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      const AlgebraVector b = Bracket(spec, subspace.basis.col(i),
                                      subspace.basis.col(j));
      if (Decompose(b, subspace).residual.norm() > kClosureTolerance) {
        return false;
      }
    }
  }
  return true;
}

bool LeafConfinementCheck(const GroupElement& x, const AlgebraVector& xi,
                          const SubspaceBasis& subspace) {
  if (!InSubspace(xi, subspace)) {
    throw Error(ErrorKind::kPrecondition,
                "displacement is not in the commuting subspace");
  }
  const GroupElement attacked = Compose(x, Exp(x.spec(), xi));
  const AlgebraVector step = Log(Compose(Inverse(x), attacked));
  return InSubspace(step, subspace);
}

std::vector<RankedInput> RankDefenseInputs(
    const LieGroupSpec& spec, std::span<const AlgebraVector> generators,
    double tol) {
  if (generators.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "no candidate inputs to rank");
  }
  std::vector<RankedInput> ranked;
  ranked.reserve(generators.size());
  for (std::size_t i = 0; i < generators.size(); ++i) {
    ranked.push_back({i, generators[i],
                      CommutingSubspace(spec, generators[i], tol)});
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const RankedInput& a, const RankedInput& b) {
                     return a.subspace.dim() < b.subspace.dim();
                   });
  return ranked;
}

}  // namespace liespoof
