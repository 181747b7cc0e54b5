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

#include "liespoof/lie_core.h"

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "test_util.h"

namespace liespoof {
namespace {

using testing::OracleExpm;
using testing::OracleSpectralNorm;
using testing::Heisenberg;
using testing::Rng;
using testing::So3;
using testing::Vec3;

constexpr double kPi = std::numbers::pi;

GroupSpecPtr Se2() { return LieGroupSpec::SE2(); }

// SE(2) generators loaded through JSON under a different name, which forces
// the dense generic code paths.
GroupSpecPtr GenericSe2() {
  return LieGroupSpec::FromJsonText(R"({
    "name": "se2_generic", "dim_algebra": 3, "dim_matrix": 3,
    "generators": [[0,0,1, 0,0,0, 0,0,0],
                   [0,0,0, 0,0,1, 0,0,0],
                   [0,-1,0, 1,0,0, 0,0,0]]})");
}

TEST(LieGroupSpecTest, Se2StructureConstantsMatchCommutators) {
  const auto spec = Se2();
  ASSERT_TRUE(spec->is_se2());
  const int n = spec->dim_algebra();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Matrix& ei = spec->generators()[i];
      const Matrix& ej = spec->generators()[j];
      Matrix expected = ei * ej - ej * ei;
      Matrix from_constants = Matrix::Zero(3, 3);
      for (int k = 0; k < n; ++k) {
        EXPECT_DOUBLE_EQ(spec->structure_constant(i, j, k),
                         -spec->structure_constant(j, i, k));
        from_constants += spec->structure_constant(i, j, k) *
                          spec->generators()[k];
      }
      EXPECT_LT((expected - from_constants).norm(), 1e-12);
    }
  }
}

TEST(LieGroupSpecTest, StructureConstantsSatisfyJacobi) {
  for (const auto& spec : {Se2(), So3(), Heisenberg()}) {
    const int n = spec->dim_algebra();
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          for (int out = 0; out < n; ++out) {
            double sum = 0.0;
            for (int l = 0; l < n; ++l) {
              sum += spec->structure_constant(j, k, l) *
                         spec->structure_constant(i, l, out) +
                     spec->structure_constant(k, i, l) *
                         spec->structure_constant(j, l, out) +
                     spec->structure_constant(i, j, l) *
                         spec->structure_constant(k, l, out);
            }
            EXPECT_NEAR(sum, 0.0, 1e-12) << spec->name();
          }
        }
      }
    }
  }
}

TEST(LieGroupSpecTest, RejectsBadGenerators) {
  EXPECT_THROW(LieGroupSpec::FromGenerators("x", {}), Error);
  Matrix a = Matrix::Zero(2, 2);
  a(0, 1) = 1.0;
  try {
    LieGroupSpec::FromGenerators("dup", {a, 2.0 * a});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidArgument);
  }
  // span{E01, E10} is not closed: [E01, E10] = diag(1, -1).
  Matrix b = Matrix::Zero(2, 2);
  b(1, 0) = 1.0;
  try {
    LieGroupSpec::FromGenerators("open", {a, b});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kOffSpan);
  }
  EXPECT_THROW(LieGroupSpec::FromJsonText("{not json"), Error);
  EXPECT_THROW(LieGroupSpec::FromJsonText(
                   R"({"dim_algebra": 1, "dim_matrix": 2,
                       "generators": [[1, 2, 3]]})"),
               Error);
  EXPECT_THROW(LieGroupSpec::Load("/nonexistent/group.json"), Error);
}

TEST(LieGroupSpecTest, JsonSe2EnablesClosedForm) {
  const auto spec = LieGroupSpec::FromJsonText(R"({
    "name": "SE2", "dim_algebra": 3, "dim_matrix": 3,
    "generators": [[0,0,1, 0,0,0, 0,0,0],
                   [0,0,0, 0,0,1, 0,0,0],
                   [0,-1,0, 1,0,0, 0,0,0]]})");
  EXPECT_TRUE(spec->is_se2());
  EXPECT_FALSE(GenericSe2()->is_se2());
}

TEST(HatVeeTest, Examples) {
  const auto spec = Se2();
  EXPECT_TRUE(Hat(*spec, Vec3(0, 0, 0)).isZero());
  EXPECT_EQ(Hat(*spec, Vec3(1, 0, 0)), spec->generators()[0]);
  const double v = 13.96;
  const double w = -1.02;
  EXPECT_EQ(Hat(*spec, Vec3(v, 0, w)),
            v * spec->generators()[0] + w * spec->generators()[2]);

  EXPECT_TRUE(Vee(*spec, Matrix::Zero(3, 3)).isZero());
  EXPECT_TRUE(Vee(*spec, Hat(*spec, Vec3(1, 2, 3))).isApprox(Vec3(1, 2, 3)));
  EXPECT_TRUE(Vee(*spec, spec->generators()[2]).isApprox(Vec3(0, 0, 1)));
}

TEST(HatVeeTest, Errors) {
  const auto spec = Se2();
  EXPECT_THROW(Hat(*spec, AlgebraVector::Zero(2)), Error);
  Matrix off = Matrix::Zero(3, 3);
  off(2, 2) = 1.0;
  try {
    Vee(*spec, off);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kOffSpan);
  }
  EXPECT_THROW(Vee(*spec, Matrix::Zero(2, 2)), Error);
}

TEST(ExpLogTest, Examples) {
  const auto spec = Se2();
  EXPECT_TRUE(Exp(spec, Vec3(0, 0, 0)).matrix().isIdentity());

  const Pose2 shifted = Se2Pose(Exp(spec, Vec3(2.5, -1.5, 0)));
  EXPECT_DOUBLE_EQ(shifted.x, 2.5);
  EXPECT_DOUBLE_EQ(shifted.y, -1.5);
  EXPECT_DOUBLE_EQ(shifted.theta, 0.0);

  const AlgebraVector step = Vec3(13.96 * 0.5, 0, -1.02 * 0.5);
  EXPECT_LT((Log(Exp(spec, step)) - step).norm(), 1e-9);

  EXPECT_TRUE(Log(GroupElement::Identity(spec)).isZero());
  EXPECT_LT((Log(Exp(spec, Vec3(1, 2, 0.5))) - Vec3(1, 2, 0.5)).norm(), 1e-9);
}

TEST(ExpLogTest, RoundTripProperty) {
  const auto spec = Se2();
  Rng rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const AlgebraVector xi = rng.UniformVector(3, -1.0, 1.0);
    EXPECT_LT((Log(Exp(spec, xi)) - xi).norm(), 1e-9);
  }
  // Tiny headings exercise the Taylor branch.
  for (double theta : {0.0, 1e-12, -3e-7, 9e-7, 2e-6}) {
    const AlgebraVector xi = Vec3(4.0, -2.0, theta);
    EXPECT_LT((Log(Exp(spec, xi)) - xi).norm(), 1e-12) << theta;
  }
}

TEST(ExpLogTest, ClosedFormMatchesSeriesExponential) {
  const auto spec = Se2();
  Rng rng(12);
  for (int trial = 0; trial < 1000; ++trial) {
    const AlgebraVector xi = rng.UniformVector(3, -3.0, 3.0);
    const Matrix oracle = OracleExpm(Hat(*spec, xi));
    EXPECT_LT((Exp(spec, xi).matrix() - oracle).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(ExpLogTest, LogRejectsCutLocus) {
  const auto spec = Se2();
  const GroupElement half_turn = Se2FromPose({1.0, 2.0, kPi});
  try {
    Log(half_turn);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kCutLocus);
  }
  EXPECT_NO_THROW(Log(Se2FromPose({1.0, 2.0, kPi - 1e-6})));
}

TEST(ExpLogTest, GenericPathsAgreeWithClosedForm) {
  const auto generic = GenericSe2();
  const auto se2 = Se2();
  Rng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const AlgebraVector xi = rng.UniformVector(3, -2.0, 2.0);
    const GroupElement g_generic = Exp(generic, xi);
    const GroupElement g_closed = Exp(se2, xi);
    EXPECT_LT((g_generic.matrix() - g_closed.matrix()).cwiseAbs().maxCoeff(),
              1e-12);
    EXPECT_LT((Log(g_generic) - xi).norm(), 1e-9);
    EXPECT_LT((AdjointRight(g_generic) - AdjointRight(g_closed))
                  .cwiseAbs()
                  .maxCoeff(),
              1e-10);
    EXPECT_NEAR(AdjointOperatorNorm(g_generic), AdjointOperatorNorm(g_closed),
                1e-9);
  }
}

TEST(ExpLogTest, GenericSo3AndHeisenberg) {
  Rng rng(14);
  for (const auto& spec : {So3(), Heisenberg()}) {
    for (int trial = 0; trial < 100; ++trial) {
      const AlgebraVector xi = rng.UniformVector(3, -1.5, 1.5);
      const GroupElement g = Exp(spec, xi);
      EXPECT_LT((g.matrix() - OracleExpm(Hat(*spec, xi))).norm(), 1e-11);
      EXPECT_LT((Log(g) - xi).norm(), 1e-9) << spec->name();
    }
  }
}

TEST(ComposeInverseTest, Examples) {
  const auto spec = Se2();
  Rng rng(15);
  const GroupElement g = rng.Se2Element();
  EXPECT_TRUE(Compose(g, Inverse(g)).matrix().isIdentity(1e-12));
  EXPECT_EQ(Compose(GroupElement::Identity(spec), g).matrix(), g.matrix());

  // Direct matrices: translation by (1, 0) and rotation by pi/2.
  Matrix translate = Matrix::Identity(3, 3);
  translate(0, 2) = 1.0;
  Matrix rotate = Matrix::Identity(3, 3);
  rotate.topLeftCorner(2, 2) << 0, -1, 1, 0;
  const GroupElement ab =
      Compose(Exp(spec, Vec3(1, 0, 0)), Exp(spec, Vec3(0, 0, kPi / 2)));
  const GroupElement ba =
      Compose(Exp(spec, Vec3(0, 0, kPi / 2)), Exp(spec, Vec3(1, 0, 0)));
  EXPECT_TRUE(ab.matrix().isApprox(translate * rotate, 1e-12));
  EXPECT_TRUE(ba.matrix().isApprox(rotate * translate, 1e-12));
  EXPECT_GT((ab.matrix() - ba.matrix()).norm(), 0.5);
}

TEST(GroupElementTest, RejectsNonMembers) {
  const auto spec = Se2();
  Matrix sheared = Matrix::Identity(3, 3);
  sheared(0, 1) = 0.1;
  EXPECT_THROW(GroupElement(spec, sheared), Error);
  Matrix bad_row = Matrix::Identity(3, 3);
  bad_row(2, 0) = 1e-6;
  EXPECT_THROW(GroupElement(spec, bad_row), Error);
  Matrix reflection = Matrix::Identity(3, 3);
  reflection(1, 1) = -1.0;
  EXPECT_THROW(GroupElement(spec, reflection), Error);
  EXPECT_THROW(GroupElement(spec, Matrix::Identity(2, 2)), Error);
}

TEST(BracketTest, Examples) {
  const auto spec = Se2();
  Rng rng(16);
  const AlgebraVector xi = rng.UniformVector(3, -5, 5);
  EXPECT_LT(Bracket(*spec, xi, xi).norm(), 1e-15);
  // Example 3: [v e_f + w e_theta, a e_f + b e_l + c e_theta]
  //          = -w b e_f + (w a - v c) e_l.
  for (int trial = 0; trial < 50; ++trial) {
    const double v = rng.Uniform(-20, 20);
    const double w = rng.Uniform(-2, 2);
    const AlgebraVector eta = rng.UniformVector(3, -5, 5);
    const AlgebraVector expected =
        Vec3(-w * eta(1), w * eta(0) - v * eta(2), 0.0);
    EXPECT_LT((Bracket(*spec, Vec3(v, 0, w), eta) - expected).norm(), 1e-12);
  }
  EXPECT_TRUE(Bracket(*spec, Vec3(1, 0, 0), Vec3(0, 1, 0)).isZero());
}

TEST(BracketTest, AlgebraProperties) {
  Rng rng(17);
  for (const auto& spec : {Se2(), So3(), Heisenberg()}) {
    for (int trial = 0; trial < 1000; ++trial) {
      const AlgebraVector x = rng.UniformVector(3, -3, 3);
      const AlgebraVector y = rng.UniformVector(3, -3, 3);
      const AlgebraVector z = rng.UniformVector(3, -3, 3);
      const double a = rng.Uniform(-2, 2);
      const AlgebraVector jacobi =
          Bracket(*spec, x, Bracket(*spec, y, z)) +
          Bracket(*spec, y, Bracket(*spec, z, x)) +
          Bracket(*spec, z, Bracket(*spec, x, y));
      EXPECT_LT(jacobi.norm(), 1e-10);
      EXPECT_LT((Bracket(*spec, x, y) + Bracket(*spec, y, x)).norm(), 1e-10);
      EXPECT_LT((Bracket(*spec, a * x + y, z) -
                 (a * Bracket(*spec, x, z) + Bracket(*spec, y, z)))
                    .norm(),
                1e-10);
      const Matrix hx = Hat(*spec, x);
      const Matrix hy = Hat(*spec, y);
      EXPECT_LT((Vee(*spec, hx * hy - hy * hx) - Bracket(*spec, x, y)).norm(),
                1e-12);
    }
  }
}

TEST(AdMatrixTest, Examples) {
  const auto spec = Se2();
  EXPECT_TRUE(AdMatrix(*spec, Vec3(0, 0, 0)).isZero());
  const double v = 13.96;
  const double w = -1.02;
  const LinearOperator ad = AdMatrix(*spec, Vec3(v, 0, w));
  EXPECT_TRUE(ad.col(1).isApprox(Vec3(-w, 0, 0)));
  EXPECT_TRUE(ad.col(0).isApprox(Vec3(0, w, 0)));
  EXPECT_TRUE(ad.col(2).isApprox(Vec3(0, -v, 0)));
  Rng rng(18);
  for (int trial = 0; trial < 1000; ++trial) {
    const AlgebraVector x = rng.UniformVector(3, -5, 5);
    const AlgebraVector y = rng.UniformVector(3, -5, 5);
    EXPECT_LT((AdMatrix(*spec, x) * y - Bracket(*spec, x, y)).norm(), 1e-12);
  }
}

TEST(AdjointRightTest, Examples) {
  const auto spec = Se2();
  EXPECT_TRUE(AdjointRight(GroupElement::Identity(spec)).isIdentity());
  const GroupElement g = Se2FromPose({3.316, -0.408, -0.245});
  const AlgebraVector rotated = AdjointRight(g) * Vec3(0, 0.44, 0);
  EXPECT_NEAR(rotated(0), 0.107, 1e-3);
  EXPECT_NEAR(rotated(1), 0.427, 1e-3);
  EXPECT_NEAR(rotated(2), 0.0, 1e-12);
}

TEST(AdjointRightTest, MatchesMatrixConjugation) {
  const auto spec = Se2();
  Rng rng(19);
  for (int trial = 0; trial < 1000; ++trial) {
    const GroupElement g = rng.Se2Element();
    const AlgebraVector xi = rng.UniformVector(3, -1.5, 1.5);
    const Matrix conjugated =
        g.matrix() * OracleExpm(Hat(*spec, xi)) * g.matrix().inverse();
    EXPECT_LT((Exp(spec, AdjointRight(g) * xi).matrix() - conjugated)
                  .cwiseAbs()
                  .maxCoeff(),
              1e-9);
  }
}

TEST(AdjointRightTest, Homomorphism) {
  Rng rng(20);
  for (int trial = 0; trial < 1000; ++trial) {
    const GroupElement g = rng.Se2Element();
    const GroupElement h = rng.Se2Element();
    EXPECT_LT((AdjointRight(Compose(g, h)) - AdjointRight(g) * AdjointRight(h))
                  .cwiseAbs()
                  .maxCoeff(),
              1e-9);
  }
}

TEST(AdjointNormTest, Examples) {
  const auto spec = Se2();
  EXPECT_DOUBLE_EQ(AdjointOperatorNorm(GroupElement::Identity(spec)), 1.0);
  EXPECT_NEAR(AdjointOperatorNorm(Se2FromPose({3.316, -0.408, -0.245})), 3.618,
              1e-3);
  const GroupElement rotation = Se2FromPose({0, 0, 1.3});
  EXPECT_NEAR(AdjointOperatorNorm(rotation), 1.0, 1e-15);
  EXPECT_NEAR(OracleSpectralNorm(AdjointRight(rotation)), 1.0, 1e-12);
}

TEST(AdjointNormTest, ClosedFormMatchesSvd) {
  Rng rng(21);
  for (int trial = 0; trial < 1000; ++trial) {
    const GroupElement g = rng.Se2Element(20.0);
    const double closed = AdjointOperatorNorm(g);
    EXPECT_NEAR(closed, OracleSpectralNorm(AdjointRight(g)), 1e-9);
    EXPECT_NEAR(closed, AdjointOperatorNorm(Inverse(g)), 1e-9);
  }
}

TEST(Se2Test, PoseHelpers) {
  const Pose2 p = Se2Pose(Se2FromPose({1.5, -2.0, 0.3}));
  EXPECT_DOUBLE_EQ(p.x, 1.5);
  EXPECT_DOUBLE_EQ(p.y, -2.0);
  EXPECT_NEAR(p.theta, 0.3, 1e-15);
  EXPECT_NEAR(WrapAngle(3 * kPi), kPi, 1e-12);
  EXPECT_NEAR(WrapAngle(-kPi), kPi, 1e-12);
  EXPECT_NEAR(WrapAngle(0.5), 0.5, 1e-15);
  EXPECT_THROW(Se2Pose(GroupElement::Identity(So3())), Error);
}

}  // namespace
}  // namespace liespoof
