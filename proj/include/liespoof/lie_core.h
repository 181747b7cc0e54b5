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

// Matrix Lie group and Lie algebra arithmetic.
//
// A group is described by a LieGroupSpec: a basis of m x m generator matrices
// spanning the algebra. Structure constants are derived from the generators'
// matrix commutators, never supplied by hand. SE(2) ships with closed forms
// for exp, log, the adjoint and its operator norm; any other matrix group
// falls back to dense scaling-and-squaring routines.
//
// SE(2) algebra coordinates are (forward, lateral, heading):
//
//   hat([a, b, c]) = | 0  -c  a |
//                    | c   0  b |
//                    | 0   0  0 |
//
// Adjoint convention: AdjointRight(g) is the matrix of xi -> vee(g hat(xi)
// g^-1). On SE(2) with g = (p_f, p_l, p_theta) this is
//
//   | cos p_theta  -sin p_theta   p_l |
//   | sin p_theta   cos p_theta  -p_f |
//   |      0             0         1  |
//
// Under right-translation dynamics x_k = x_{k-1} G the conjugation that moves
// a displacement across one flow step G is the one by G^-1, so callers that
// propagate through a step pass Inverse(G) as the conjugator.

#ifndef LIESPOOF_LIE_CORE_H_
#define LIESPOOF_LIE_CORE_H_

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "liespoof/error.h"

namespace liespoof {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Coordinates of an algebra element in the spec's generator basis. The
// algebra norm is the Euclidean norm of these coordinates.
using AlgebraVector = Eigen::VectorXd;

// Matrix acting on AlgebraVector coordinates (Ad_g, ad_xi).
using LinearOperator = Eigen::MatrixXd;

class LieGroupSpec;
using GroupSpecPtr = std::shared_ptr<const LieGroupSpec>;

class LieGroupSpec {
 public:
  enum class Closedform { kNone, kSE2 };

  // Builds a spec from a basis of the algebra. Throws kInvalidArgument if the
  // generators are not square, not the same size, or linearly dependent, and
  // kOffSpan if the span is not closed under the commutator.
  static GroupSpecPtr FromGenerators(std::string name,
                                     std::vector<Matrix> generators);

  // The special Euclidean group of the plane with closed forms enabled.
  static GroupSpecPtr SE2();

  // {"name": ..., "dim_algebra": n, "dim_matrix": m,
  //  "generators": [[row-major m*m numbers], ...]}
  // Generator entries may also be given as nested rows. A name of "SE2" whose
  // generators match the built-in basis enables the closed forms.
  static GroupSpecPtr FromJsonText(const std::string& text);
  static GroupSpecPtr Load(const std::string& path);

  const std::string& name() const { return name_; }
  int dim_algebra() const { return static_cast<int>(generators_.size()); }
  int dim_matrix() const { return dim_matrix_; }
  const std::vector<Matrix>& generators() const { return generators_; }
  Closedform closed_form() const { return closed_form_; }
  bool is_se2() const { return closed_form_ == Closedform::kSE2; }

  // c[i][j][k] with [e_i, e_j] = sum_k c[i][j][k] e_k.
  double structure_constant(int i, int j, int k) const {
    const int n = dim_algebra();
    return structure_[(i * n + j) * n + k];
  }

  // Least-squares coordinates of X in the generator basis together with the
  // Frobenius norm of the part of X outside the span.
  AlgebraVector Coordinates(const Matrix& x, double* off_span) const;

 private:
  LieGroupSpec(std::string name, std::vector<Matrix> generators,
               Closedform closed_form);

  std::string name_;
  int dim_matrix_ = 0;
  std::vector<Matrix> generators_;
  Closedform closed_form_ = Closedform::kNone;
  // Column j is the vectorized generator j; used for vee.
  Matrix stacked_;
  Eigen::ColPivHouseholderQR<Matrix> stacked_qr_;
  std::vector<double> structure_;
};

// An element of a matrix Lie group. Construction validates membership in the
// group's matrix variety (for SE(2): orthonormal rotation block with
// determinant 1 within 1e-9 and bottom row [0 0 1]).
class GroupElement {
 public:
  GroupElement(GroupSpecPtr spec, Matrix matrix);

  static GroupElement Identity(GroupSpecPtr spec);

  const Matrix& matrix() const { return matrix_; }
  const GroupSpecPtr& spec() const { return spec_; }

 private:
  struct Unchecked {};
  GroupElement(GroupSpecPtr spec, Matrix matrix, Unchecked);

  friend GroupElement Compose(const GroupElement& g, const GroupElement& h);
  friend GroupElement Inverse(const GroupElement& g);
  friend GroupElement Exp(const GroupSpecPtr& spec, const AlgebraVector& xi);

  GroupSpecPtr spec_;
  Matrix matrix_;
};

Matrix Hat(const LieGroupSpec& spec, const AlgebraVector& xi);

// Inverse of Hat. Throws kOffSpan if X is more than 1e-9 (relative to
// max(1, |X|)) away from the span of the generators.
AlgebraVector Vee(const LieGroupSpec& spec, const Matrix& x);

GroupElement Exp(const GroupSpecPtr& spec, const AlgebraVector& xi);

// Throws kCutLocus for SE(2) elements with |theta| >= pi - 1e-9, and for
// generic groups when the principal logarithm does not exist.
AlgebraVector Log(const GroupElement& g);

GroupElement Compose(const GroupElement& g, const GroupElement& h);
GroupElement Inverse(const GroupElement& g);

AlgebraVector Bracket(const LieGroupSpec& spec, const AlgebraVector& xi,
                      const AlgebraVector& eta);

// Matrix of eta -> [xi, eta].
LinearOperator AdMatrix(const LieGroupSpec& spec, const AlgebraVector& xi);

// Matrix of xi -> vee(g hat(xi) g^-1); see the file comment for the convention.
LinearOperator AdjointRight(const GroupElement& g);

// Largest singular value of AdjointRight(g). On SE(2) this is the closed form
// (r + sqrt(r^2 + 4)) / 2 with r the translation magnitude.
double AdjointOperatorNorm(const GroupElement& g);

// Dense fallbacks, exposed for generic groups and as test oracles.
Matrix ExpmScalingSquaring(const Matrix& x);
Matrix LogmInverseScalingSquaring(const Matrix& a);

// SE(2) conveniences.
struct Pose2 {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;
};

GroupElement Se2FromPose(const Pose2& pose);
Pose2 Se2Pose(const GroupElement& g);

// Wraps an angle into (-pi, pi].
double WrapAngle(double angle);

}  // namespace liespoof

#endif  // LIESPOOF_LIE_CORE_H_
