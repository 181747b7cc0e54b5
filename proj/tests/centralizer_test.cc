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

#include <vector>

#include <gtest/gtest.h>

#include "test_util.h"

namespace liespoof {
namespace {

using testing::Heisenberg;
using testing::MaxPrincipalAngleSine;
using testing::Orthonormalize;
using testing::Rng;
using testing::So3;
using testing::Vec3;

const LieGroupSpec& Se2() { return *LieGroupSpec::SE2(); }

// Kernel of [v e_f + w e_theta, .] worked out by hand from
// [f, a e_f + b e_l + c e_theta] = [-w b, w a - v c, 0].
Matrix AnalyticKernel(double v, double w) {
  if (w == 0.0 && v == 0.0) return Matrix::Identity(3, 3);
  if (w == 0.0) {
    Matrix k(3, 2);
    k << 1, 0, 0, 1, 0, 0;
    return k;
  }
  return Orthonormalize(Vec3(v / w, 0.0, 1.0));
}

TEST(CommutingSubspaceTest, StraightIsTranslations) {
  const SubspaceBasis s = CommutingSubspace(Se2(), Vec3(10, 0, 0));
  EXPECT_EQ(s.dim(), 2);
  EXPECT_EQ(s.ambient_dim(), 3);
  EXPECT_LT(MaxPrincipalAngleSine(s.basis, AnalyticKernel(10, 0)), 1e-12);
}

TEST(CommutingSubspaceTest, CurvedIsOneDimensional) {
  const SubspaceBasis s = CommutingSubspace(Se2(), Vec3(10, 0, 0.5));
  ASSERT_EQ(s.dim(), 1);
  // Direction proportional to (v / w, 0, 1) = (20, 0, 1).
  const AlgebraVector d = s.basis.col(0) / s.basis(2, 0);
  EXPECT_NEAR(d(0), 20.0, 1e-9);
  EXPECT_NEAR(d(1), 0.0, 1e-12);
}

TEST(CommutingSubspaceTest, ZeroGeneratorIsWholeAlgebra) {
  const SubspaceBasis s = CommutingSubspace(Se2(), Vec3(0, 0, 0));
  EXPECT_EQ(s.dim(), 3);
  EXPECT_NEAR((s.basis.transpose() * s.basis - Matrix::Identity(3, 3)).norm(),
              0.0, 1e-12);
}

TEST(CommutingSubspaceTest, PureRotationKeepsOnlyHeading) {
  const SubspaceBasis s = CommutingSubspace(Se2(), Vec3(0, 0, 0.8));
  ASSERT_EQ(s.dim(), 1);
  EXPECT_NEAR(std::abs(s.basis(2, 0)), 1.0, 1e-12);
}

TEST(CommutingSubspaceTest, RandomInputsMatchAnalyticKernel) {
  Rng rng(101);
  for (int i = 0; i < 100; ++i) {
    const double v = rng.Uniform(-30, 30);
    const double w = rng.Uniform(-2, 2);
    const SubspaceBasis s = CommutingSubspace(Se2(), Vec3(v, 0, w));
    ASSERT_EQ(s.dim(), 1);
    EXPECT_LT(MaxPrincipalAngleSine(s.basis, AnalyticKernel(v, w)), 1e-9)
        << "v=" << v << " w=" << w;
  }
}

TEST(CommutingSubspaceTest, BasisIsOrthonormalAndAnnihilated) {
  Rng rng(102);
  for (const auto& spec : {LieGroupSpec::SE2(), So3(), Heisenberg()}) {
    for (int i = 0; i < 200; ++i) {
      const AlgebraVector f = rng.UniformVector(3, -5, 5);
      const SubspaceBasis s = CommutingSubspace(*spec, f);
      const int d = s.dim();
      EXPECT_NEAR(
          (s.basis.transpose() * s.basis - Matrix::Identity(d, d)).norm(), 0.0,
          1e-12);
      for (int c = 0; c < d; ++c) {
        EXPECT_LT(Bracket(*spec, f, s.basis.col(c)).norm(), 1e-9 * f.norm());
      }
      // f always commutes with itself.
      EXPECT_LT(Decompose(f, s).residual.norm(), 1e-9 * f.norm());
    }
  }
}

TEST(CommutingSubspaceTest, OtherGroups) {
  // so(3): only the rotation axis itself.
  EXPECT_EQ(CommutingSubspace(*So3(), Vec3(0.3, -1, 2)).dim(), 1);
  // Heisenberg: X commutes with X and the central Z; Z commutes with all.
  const SubspaceBasis x = CommutingSubspace(*Heisenberg(), Vec3(1, 0, 0));
  ASSERT_EQ(x.dim(), 2);
  Matrix expected(3, 2);
  expected << 1, 0, 0, 0, 0, 1;
  EXPECT_LT(MaxPrincipalAngleSine(x.basis, expected), 1e-12);
  EXPECT_EQ(CommutingSubspace(*Heisenberg(), Vec3(0, 0, 1)).dim(), 3);
}

TEST(CommutingSubspaceTest, RankToleranceIsRelative) {
  // A turn rate 1e-12 of the speed is numerically straight.
  EXPECT_EQ(CommutingSubspace(Se2(), Vec3(10, 0, 1e-11)).dim(), 2);
  EXPECT_EQ(CommutingSubspace(Se2(), Vec3(10, 0, 1e-6)).dim(), 1);
  EXPECT_EQ(CommutingSubspace(Se2(), Vec3(10, 0, 1e-11), 1e-13).dim(), 1);
}

TEST(CommutingSubspaceTest, RejectsBadArguments) {
  EXPECT_THROW(CommutingSubspace(Se2(), Vec3(1, 0, 0), 0.0), Error);
  EXPECT_THROW(CommutingSubspace(Se2(), Vec3(NAN, 0, 0)), Error);
}

TEST(IsTransferableTest, Examples) {
  const AlgebraVector curved = Vec3(10, 0, 0.5);
  const TransferCheck along = IsTransferable(Se2(), Vec3(20, 0, 1), curved);
  EXPECT_TRUE(along.transferable);
  EXPECT_LT(along.bracket_norm, 1e-12);

  // [v e_f + w e_theta, e_l] = -w e_f.
  const TransferCheck lateral = IsTransferable(Se2(), Vec3(0, 1, 0), curved);
  EXPECT_FALSE(lateral.transferable);
  EXPECT_NEAR(lateral.bracket_norm, 0.5, 1e-12);

  EXPECT_TRUE(IsTransferable(Se2(), Vec3(0, 3, 0), Vec3(10, 0, 0)).transferable);
  EXPECT_TRUE(IsTransferable(Se2(), Vec3(0, 0, 0), curved).transferable);
}

TEST(IsTransferableTest, AgreesWithSubspaceMembership) {
  Rng rng(103);
  for (int i = 0; i < 500; ++i) {
    const AlgebraVector f = Vec3(rng.Uniform(-20, 20), 0, rng.Uniform(-2, 2));
    const SubspaceBasis s = CommutingSubspace(Se2(), f);
    const AlgebraVector inside =
        s.basis * rng.UniformVector(s.dim(), -3, 3);
    EXPECT_TRUE(IsTransferable(Se2(), inside, f).transferable);
    EXPECT_TRUE(InSubspace(inside, s));
    const AlgebraVector generic = rng.UniformVector(3, -3, 3);
    EXPECT_EQ(IsTransferable(Se2(), generic, f).transferable,
              InSubspace(generic, s, 1e-6));
  }
}

TEST(DecomposeTest, OrthogonalSplit) {
  Rng rng(104);
  for (int i = 0; i < 500; ++i) {
    const AlgebraVector f = rng.UniformVector(3, -5, 5);
    const SubspaceBasis s = CommutingSubspace(Se2(), f);
    const AlgebraVector xi = rng.UniformVector(3, -4, 4);
    const Decomposition d = Decompose(xi, s);
    EXPECT_NEAR((d.ideal + d.residual - xi).norm(), 0.0, 1e-12);
    EXPECT_NEAR(d.ideal.dot(d.residual), 0.0, 1e-10);
    EXPECT_TRUE(InSubspace(d.ideal, s));
    // Projection is idempotent.
    EXPECT_NEAR((Decompose(d.ideal, s).ideal - d.ideal).norm(), 0.0, 1e-12);
    EXPECT_NEAR(Decompose(d.residual, s).ideal.norm(), 0.0, 1e-10);
  }
}

TEST(DecomposeTest, LateralResidualOnCurve) {
  const SubspaceBasis s = CommutingSubspace(Se2(), Vec3(13.96, 0, -1.02));
  const AlgebraVector ideal = 0.24 * Vec3(13.96, 0, -1.02);
  const Decomposition d = Decompose(ideal + Vec3(0, 0.44, 0), s);
  EXPECT_NEAR((d.ideal - ideal).norm(), 0.0, 1e-12);
  EXPECT_NEAR((d.residual - Vec3(0, 0.44, 0)).norm(), 0.0, 1e-12);
}

TEST(DecomposeTest, DimensionMismatchThrows) {
  const SubspaceBasis s = CommutingSubspace(Se2(), Vec3(1, 0, 0));
  try {
    Decompose(AlgebraVector::Zero(2), s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDimensionMismatch);
  }
}

TEST(JacobiClosureCheckTest, CentralizersAreSubalgebras) {
  Rng rng(105);
  for (const auto& spec : {LieGroupSpec::SE2(), So3(), Heisenberg()}) {
    for (int i = 0; i < 100; ++i) {
      const SubspaceBasis s =
          CommutingSubspace(*spec, rng.UniformVector(3, -5, 5));
      EXPECT_TRUE(JacobiClosureCheck(*spec, s));
    }
  }
}

TEST(JacobiClosureCheckTest, DetectsNonClosedSpan) {
  // [e_theta, e_f] = e_l leaves span{e_f, e_theta}.
  SubspaceBasis s;
  s.basis = Matrix(3, 2);
  s.basis << 1, 0, 0, 0, 0, 1;
  EXPECT_FALSE(JacobiClosureCheck(Se2(), s));
  s.basis << 1, 0, 0, 1, 0, 0;
  EXPECT_TRUE(JacobiClosureCheck(Se2(), s));
}

TEST(LeafConfinementCheckTest, InSubspaceDisplacementsStayOnLeaf) {
  Rng rng(106);
  const auto spec = LieGroupSpec::SE2();
  for (int i = 0; i < 200; ++i) {
    const AlgebraVector f = Vec3(rng.Uniform(-20, 20), 0, rng.Uniform(-2, 2));
    const SubspaceBasis s = CommutingSubspace(*spec, f);
    const AlgebraVector xi = s.basis * rng.UniformVector(s.dim(), -1, 1);
    EXPECT_TRUE(LeafConfinementCheck(rng.Se2Element(), xi, s));
  }
}

TEST(LeafConfinementCheckTest, OffSubspaceIsPreconditionError) {
  const SubspaceBasis s = CommutingSubspace(Se2(), Vec3(10, 0, 0.5));
  try {
    LeafConfinementCheck(GroupElement::Identity(LieGroupSpec::SE2()),
                         Vec3(0, 1, 0), s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kPrecondition);
  }
}

TEST(RankDefenseInputsTest, SmallestSubspaceFirstStable) {
  const std::vector<AlgebraVector> inputs = {
      Vec3(10, 0, 0), Vec3(10, 0, 0.5), Vec3(0, 0, 0), Vec3(5, 0, 0),
      Vec3(3, 0, -1)};
  const auto ranked = RankDefenseInputs(Se2(), inputs);
  ASSERT_EQ(ranked.size(), inputs.size());
  const std::vector<std::size_t> order = {1, 4, 0, 3, 2};
  for (std::size_t i = 0; i < order.size(); ++i) {
    EXPECT_EQ(ranked[i].index, order[i]);
    EXPECT_EQ(ranked[i].generator, inputs[order[i]]);
  }
  EXPECT_EQ(ranked.front().subspace.dim(), 1);
  EXPECT_EQ(ranked.back().subspace.dim(), 3);
}

TEST(RankDefenseInputsTest, EmptyThrows) {
  EXPECT_THROW(RankDefenseInputs(Se2(), std::vector<AlgebraVector>{}), Error);
}

}  // namespace
}  // namespace liespoof
