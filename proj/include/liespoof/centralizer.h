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

// The commuting subspace ker([f_e, .]) of a flow generator f_e: the algebra
// directions whose displacements are unchanged by conjugation with the flow.

#ifndef LIESPOOF_CENTRALIZER_H_
#define LIESPOOF_CENTRALIZER_H_

#include <span>
#include <vector>

#include "liespoof/lie_core.h"

namespace liespoof {

inline constexpr double kDefaultRankTolerance = 1e-9;

struct SubspaceBasis {
  Matrix basis;                // n x d, orthonormal columns
  Vector singular_values;      // of AdMatrix(generator), descending
  double rank_tolerance = kDefaultRankTolerance;
  AlgebraVector generator;

  int dim() const { return static_cast<int>(basis.cols()); }
  int ambient_dim() const { return static_cast<int>(basis.rows()); }
};

// Split of a displacement into its component inside the subspace and the
// orthogonal (bracket-violating) remainder.
struct Decomposition {
  AlgebraVector ideal;
  AlgebraVector residual;
};

struct TransferCheck {
  bool transferable = false;
  double bracket_norm = 0.0;
};

// Orthonormal basis of ker(ad_{f_e}) from the SVD of AdMatrix(f_e). Singular
// values at or below tol * sigma_max count as zero (absolute floor 1e-12 when
// sigma_max is 0). f_e = 0 yields the whole algebra.
SubspaceBasis CommutingSubspace(const LieGroupSpec& spec,
                                const AlgebraVector& generator,
                                double tol = kDefaultRankTolerance);

// True iff |[f_e, xi]| <= tol * max(1, |f_e| |xi|).
TransferCheck IsTransferable(const LieGroupSpec& spec, const AlgebraVector& xi,
                             const AlgebraVector& generator,
                             double tol = kDefaultRankTolerance);

// Orthogonal projection onto span(basis) and its complement.
Decomposition Decompose(const AlgebraVector& xi, const SubspaceBasis& subspace);

bool InSubspace(const AlgebraVector& xi, const SubspaceBasis& subspace,
                double tol = 1e-9);

// Checks that brackets of basis pairs stay inside the span (Lie subalgebra).
bool JacobiClosureCheck(const LieGroupSpec& spec,
                        const SubspaceBasis& subspace);

// True iff the displacement from x to x exp(xi) stays in the coset direction
// span(basis). Throws kPrecondition if xi itself is not in the subspace.
bool LeafConfinementCheck(const GroupElement& x, const AlgebraVector& xi,
                          const SubspaceBasis& subspace);

struct RankedInput {
  std::size_t index = 0;  // position in the candidate list
  AlgebraVector generator;
  SubspaceBasis subspace;
};

// Orders candidate flow generators by the dimension of their commuting
// subspace, smallest first; the stable sort keeps ties in input order.
// Throws kInvalidArgument for an empty list.
std::vector<RankedInput> RankDefenseInputs(
    const LieGroupSpec& spec, std::span<const AlgebraVector> generators,
    double tol = kDefaultRankTolerance);

}  // namespace liespoof

#endif  // LIESPOOF_CENTRALIZER_H_
