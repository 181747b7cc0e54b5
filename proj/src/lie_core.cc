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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <utility>

#include <json.hpp>

namespace liespoof {

const char* ToString(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDimensionMismatch:
      return "dimension mismatch";
    case ErrorKind::kOffSpan:
      return "off span";
    case ErrorKind::kCutLocus:
      return "cut locus";
    case ErrorKind::kInvalidElement:
      return "invalid group element";
    case ErrorKind::kChartInversion:
      return "chart inversion";
    case ErrorKind::kPrecondition:
      return "precondition";
    case ErrorKind::kInvalidArgument:
      return "invalid argument";
    case ErrorKind::kConfig:
      return "config";
  }
  return "unknown";
}

namespace {

constexpr double kVeeTolerance = 1e-9;
constexpr double kMembershipTolerance = 1e-9;
constexpr double kSmallAngle = 1e-6;
constexpr double kCutLocusMargin = 1e-9;
constexpr int kLogSeriesOrder = 7;

std::vector<Matrix> Se2Generators() {
  Matrix e_f = Matrix::Zero(3, 3);
  e_f(0, 2) = 1.0;
  Matrix e_l = Matrix::Zero(3, 3);
  e_l(1, 2) = 1.0;
  Matrix e_theta = Matrix::Zero(3, 3);
  e_theta(0, 1) = -1.0;
  e_theta(1, 0) = 1.0;
  return {e_f, e_l, e_theta};
}

bool MatchesSe2(const std::vector<Matrix>& generators) {
  const auto reference = Se2Generators();
  if (generators.size() != reference.size()) return false;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    if (generators[i].rows() != 3 || generators[i].cols() != 3) return false;
    if ((generators[i] - reference[i]).cwiseAbs().maxCoeff() > 1e-12) {
      return false;
    }
  }
  return true;
}

void CheckDim(const LieGroupSpec& spec, const AlgebraVector& xi,
              const char* what) {
  if (xi.size() != spec.dim_algebra()) {
    std::ostringstream os;
    os << what << ": expected " << spec.dim_algebra()
       << " algebra coordinates, got " << xi.size();
    throw Error(ErrorKind::kDimensionMismatch, os.str());
  }
}

void CheckSameGroup(const GroupElement& g, const GroupElement& h) {
  if (g.spec() != h.spec() &&
      (g.spec()->name() != h.spec()->name() ||
       g.matrix().rows() != h.matrix().rows())) {
    throw Error(ErrorKind::kDimensionMismatch,
                "group elements belong to different groups");
  }
}

double OneNorm(const Matrix& x) {
  return x.cwiseAbs().colwise().sum().maxCoeff();
}

// V(theta) = [[a, -b], [b, a]] with a = sin(t)/t, b = (1 - cos(t))/t.
void Se2VCoefficients(double theta, double* a, double* b) {
  if (std::abs(theta) < kSmallAngle) {
    const double t2 = theta * theta;
    *a = 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
    *b = theta / 2.0 - theta * t2 / 24.0 + theta * t2 * t2 / 720.0;
  } else {
    *a = std::sin(theta) / theta;
    *b = (1.0 - std::cos(theta)) / theta;
  }
}

Matrix Se2Exp(const AlgebraVector& xi) {
  const double theta = xi(2);
  double a = 0.0;
  double b = 0.0;
  Se2VCoefficients(theta, &a, &b);
  Matrix m = Matrix::Identity(3, 3);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  m(0, 0) = c;
  m(0, 1) = -s;
  m(1, 0) = s;
  m(1, 1) = c;
  m(0, 2) = a * xi(0) - b * xi(1);
  m(1, 2) = b * xi(0) + a * xi(1);
  return m;
}

AlgebraVector Se2Log(const Matrix& m) {
  const double theta = std::atan2(m(1, 0), m(0, 0));
  if (std::abs(theta) >= std::numbers::pi - kCutLocusMargin) {
    std::ostringstream os;
    os << "SE2 log at heading " << theta << " is on the cut locus";
    throw Error(ErrorKind::kCutLocus, os.str());
  }
  double a = 0.0;
  double b = 0.0;
  Se2VCoefficients(theta, &a, &b);
  const double det = a * a + b * b;
  AlgebraVector xi(3);
  xi(0) = (a * m(0, 2) + b * m(1, 2)) / det;
  xi(1) = (-b * m(0, 2) + a * m(1, 2)) / det;
  xi(2) = theta;
  return xi;
}

// Denman-Beavers square root. Returns false if the iteration does not settle,
// which happens when the matrix has eigenvalues on the closed negative axis.
bool SqrtDenmanBeavers(const Matrix& a, Matrix* root) {
  const auto n = a.rows();
  Matrix y = a;
  Matrix z = Matrix::Identity(n, n);
  for (int it = 0; it < 100; ++it) {
    Eigen::PartialPivLU<Matrix> y_lu(y);
    Eigen::PartialPivLU<Matrix> z_lu(z);
    Matrix y_next = 0.5 * (y + z_lu.inverse());
    Matrix z_next = 0.5 * (z + y_lu.inverse());
    if (!y_next.allFinite() || !z_next.allFinite()) return false;
    const double change = OneNorm(y_next - y);
    y = std::move(y_next);
    z = std::move(z_next);
    if (change <= 1e-15 * std::max(1.0, OneNorm(y))) {
      *root = y;
      return true;
    }
  }
  return false;
}

}  // namespace

// ---------------------------------------------------------------------------
// LieGroupSpec

LieGroupSpec::LieGroupSpec(std::string name, std::vector<Matrix> generators,
                           Closedform closed_form)
    : name_(std::move(name)),
      generators_(std::move(generators)),
      closed_form_(closed_form) {
  if (generators_.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "a group needs generators");
  }
  dim_matrix_ = static_cast<int>(generators_.front().rows());
  const int n = dim_algebra();
  const int m = dim_matrix_;
  stacked_.resize(static_cast<Eigen::Index>(m) * m, n);
  for (int i = 0; i < n; ++i) {
    const Matrix& g = generators_[i];
    if (g.rows() != m || g.cols() != m) {
      throw Error(ErrorKind::kInvalidArgument,
                  "generators must all be square of the same size");
    }
    if (!g.allFinite()) {
      throw Error(ErrorKind::kInvalidArgument, "generator is not finite");
    }
    stacked_.col(i) = g.reshaped();
  }
  stacked_qr_.compute(stacked_);
  if (stacked_qr_.rank() != n) {
    throw Error(ErrorKind::kInvalidArgument,
                "generators are linearly dependent");
  }

  structure_.assign(static_cast<std::size_t>(n) * n * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Matrix commutator = generators_[i] * generators_[j] -
                                generators_[j] * generators_[i];
      double off_span = 0.0;
      const AlgebraVector c = Coordinates(commutator, &off_span);
      if (off_span > kVeeTolerance * std::max(1.0, commutator.norm())) {
        throw Error(ErrorKind::kOffSpan,
                    "generator span is not closed under the commutator");
      }
      for (int k = 0; k < n; ++k) {
        structure_[(i * n + j) * n + k] = c(k);
      }
    }
  }
}

GroupSpecPtr LieGroupSpec::FromGenerators(std::string name,
                                          std::vector<Matrix> generators) {
  const Closedform closed =
      (name == "SE2" && MatchesSe2(generators)) ? Closedform::kSE2
                                                : Closedform::kNone;
  return GroupSpecPtr(
      new LieGroupSpec(std::move(name), std::move(generators), closed));
}

GroupSpecPtr LieGroupSpec::SE2() {
  static const GroupSpecPtr kSe2 = FromGenerators("SE2", Se2Generators());
  return kSe2;
}

GroupSpecPtr LieGroupSpec::FromJsonText(const std::string& text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kConfig,
                std::string("group spec is not valid JSON: ") + e.what());
  }
  try {
    const std::string name = doc.value("name", std::string("custom"));
    const int m = doc.at("dim_matrix").get<int>();
    const int n = doc.at("dim_algebra").get<int>();
    if (m <= 0 || n <= 0) {
      throw Error(ErrorKind::kConfig, "group dimensions must be positive");
    }
    const auto& gens = doc.at("generators");
    if (!gens.is_array() || static_cast<int>(gens.size()) != n) {
      throw Error(ErrorKind::kConfig,
                  "generators must be an array of dim_algebra matrices");
    }
    std::vector<Matrix> generators;
    for (const auto& g : gens) {
      std::vector<double> flat;
      for (const auto& entry : g) {
        if (entry.is_array()) {
          for (const auto& v : entry) flat.push_back(v.get<double>());
        } else {
          flat.push_back(entry.get<double>());
        }
      }
      if (static_cast<int>(flat.size()) != m * m) {
        throw Error(ErrorKind::kConfig,
                    "generator does not have dim_matrix^2 entries");
      }
      Matrix mat(m, m);
      for (int r = 0; r < m; ++r) {
        for (int c = 0; c < m; ++c) mat(r, c) = flat[r * m + c];
      }
      generators.push_back(std::move(mat));
    }
    return FromGenerators(name, std::move(generators));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kConfig,
                std::string("malformed group spec: ") + e.what());
  }
}

GroupSpecPtr LieGroupSpec::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::kConfig, "cannot open group spec file " + path);
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return FromJsonText(buffer.str());
}

AlgebraVector LieGroupSpec::Coordinates(const Matrix& x,
                                        double* off_span) const {
  if (x.rows() != dim_matrix_ || x.cols() != dim_matrix_) {
    throw Error(ErrorKind::kDimensionMismatch,
                "matrix size does not match the group representation");
  }
  const Vector flat = x.reshaped();
  AlgebraVector coords = stacked_qr_.solve(flat);
  if (off_span != nullptr) *off_span = (stacked_ * coords - flat).norm();
  return coords;
}

// ---------------------------------------------------------------------------
// GroupElement

GroupElement::GroupElement(GroupSpecPtr spec, Matrix matrix)
    : spec_(std::move(spec)), matrix_(std::move(matrix)) {
  const int m = spec_->dim_matrix();
  if (matrix_.rows() != m || matrix_.cols() != m) {
    throw Error(ErrorKind::kDimensionMismatch,
                "group element has the wrong matrix size");
  }
  if (!matrix_.allFinite()) {
    throw Error(ErrorKind::kInvalidElement, "group element is not finite");
  }
  if (spec_->is_se2()) {
    const Eigen::Matrix2d r = matrix_.topLeftCorner<2, 2>();
    const double orth =
        (r.transpose() * r - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff();
    const double bottom = std::max({std::abs(matrix_(2, 0)),
                                    std::abs(matrix_(2, 1)),
                                    std::abs(matrix_(2, 2) - 1.0)});
    if (orth > kMembershipTolerance || bottom > kMembershipTolerance ||
        std::abs(r.determinant() - 1.0) > kMembershipTolerance) {
      throw Error(ErrorKind::kInvalidElement, "matrix is not in SE(2)");
    }
  } else if (std::abs(matrix_.determinant()) < 1e-300) {
    throw Error(ErrorKind::kInvalidElement, "group element is singular");
  }
}

GroupElement::GroupElement(GroupSpecPtr spec, Matrix matrix, Unchecked)
    : spec_(std::move(spec)), matrix_(std::move(matrix)) {}

GroupElement GroupElement::Identity(GroupSpecPtr spec) {
  const int m = spec->dim_matrix();
  return GroupElement(std::move(spec), Matrix::Identity(m, m), Unchecked{});
}

// ---------------------------------------------------------------------------
// Algebra

Matrix Hat(const LieGroupSpec& spec, const AlgebraVector& xi) {
  CheckDim(spec, xi, "hat");
  const int m = spec.dim_matrix();
  Matrix out = Matrix::Zero(m, m);
  for (int i = 0; i < spec.dim_algebra(); ++i) {
    out += xi(i) * spec.generators()[i];
  }
  return out;
}

AlgebraVector Vee(const LieGroupSpec& spec, const Matrix& x) {
  double off_span = 0.0;
  AlgebraVector coords = spec.Coordinates(x, &off_span);
  if (off_span > kVeeTolerance * std::max(1.0, x.norm())) {
    std::ostringstream os;
    os << "matrix is " << off_span << " away from the algebra of "
       << spec.name();
    throw Error(ErrorKind::kOffSpan, os.str());
  }
  return coords;
}

AlgebraVector Bracket(const LieGroupSpec& spec, const AlgebraVector& xi,
                      const AlgebraVector& eta) {
  CheckDim(spec, xi, "bracket");
  CheckDim(spec, eta, "bracket");
  const int n = spec.dim_algebra();
  AlgebraVector out = AlgebraVector::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (xi(i) == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      const double w = xi(i) * eta(j);
      if (w == 0.0) continue;
      for (int k = 0; k < n; ++k) out(k) += w * spec.structure_constant(i, j, k);
    }
  }
  return out;
}

LinearOperator AdMatrix(const LieGroupSpec& spec, const AlgebraVector& xi) {
  const int n = spec.dim_algebra();
  LinearOperator ad(n, n);
  for (int j = 0; j < n; ++j) {
    ad.col(j) = Bracket(spec, xi, AlgebraVector::Unit(n, j));
  }
  return ad;
}

// ---------------------------------------------------------------------------
// Group operations

Matrix ExpmScalingSquaring(const Matrix& x) {
  const auto m = x.rows();
  const double norm = OneNorm(x);
  int squarings = 0;
  if (norm > 0.5) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  }
  const Matrix scaled = x / std::ldexp(1.0, squarings);
  Matrix result = Matrix::Identity(m, m);
  Matrix term = Matrix::Identity(m, m);
  for (int k = 1; k <= 30; ++k) {
    term = term * scaled / static_cast<double>(k);
    result += term;
    if (OneNorm(term) < 1e-18 * OneNorm(result)) break;
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

Matrix LogmInverseScalingSquaring(const Matrix& a) {
  const auto m = a.rows();
  const Matrix identity = Matrix::Identity(m, m);
  Matrix current = a;
  int roots = 0;
  while (OneNorm(current - identity) > 1e-2) {
    if (roots >= 64) {
      throw Error(ErrorKind::kCutLocus, "matrix logarithm did not converge");
    }
    Matrix root;
    if (!SqrtDenmanBeavers(current, &root)) {
      throw Error(ErrorKind::kCutLocus,
                  "matrix has no principal logarithm (negative eigenvalue)");
    }
    current = std::move(root);
    ++roots;
  }
  const Matrix y = current - identity;
  Matrix power = y;
  Matrix result = Matrix::Zero(m, m);
  for (int k = 1; k <= kLogSeriesOrder; ++k) {
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    result += sign * power / static_cast<double>(k);
    power = power * y;
  }
  return std::ldexp(1.0, roots) * result;
}

GroupElement Exp(const GroupSpecPtr& spec, const AlgebraVector& xi) {
  CheckDim(*spec, xi, "exp");
  if (!xi.allFinite()) {
    throw Error(ErrorKind::kInvalidArgument, "exp of a non-finite vector");
  }
  if (spec->is_se2()) {
    return GroupElement(spec, Se2Exp(xi), GroupElement::Unchecked{});
  }
  return GroupElement(spec, ExpmScalingSquaring(Hat(*spec, xi)),
                      GroupElement::Unchecked{});
}

AlgebraVector Log(const GroupElement& g) {
  const LieGroupSpec& spec = *g.spec();
  if (spec.is_se2()) return Se2Log(g.matrix());
  return Vee(spec, LogmInverseScalingSquaring(g.matrix()));
}

GroupElement Compose(const GroupElement& g, const GroupElement& h) {
  CheckSameGroup(g, h);
  return GroupElement(g.spec(), g.matrix() * h.matrix(),
                      GroupElement::Unchecked{});
}

GroupElement Inverse(const GroupElement& g) {
  if (g.spec()->is_se2()) {
    const Matrix& m = g.matrix();
    Matrix inv = Matrix::Identity(3, 3);
    inv.topLeftCorner(2, 2) = m.topLeftCorner(2, 2).transpose();
    inv.topRightCorner(2, 1) =
        -m.topLeftCorner(2, 2).transpose() * m.topRightCorner(2, 1);
    return GroupElement(g.spec(), std::move(inv), GroupElement::Unchecked{});
  }
  return GroupElement(g.spec(), g.matrix().inverse(),
                      GroupElement::Unchecked{});
}

LinearOperator AdjointRight(const GroupElement& g) {
  const LieGroupSpec& spec = *g.spec();
  const Matrix& m = g.matrix();
  if (spec.is_se2()) {
    LinearOperator ad = LinearOperator::Identity(3, 3);
    ad.topLeftCorner(2, 2) = m.topLeftCorner(2, 2);
    ad(0, 2) = m(1, 2);
    ad(1, 2) = -m(0, 2);
    return ad;
  }
  const int n = spec.dim_algebra();
  const Matrix inv = Inverse(g).matrix();
  LinearOperator ad(n, n);
  for (int j = 0; j < n; ++j) {
    ad.col(j) = Vee(spec, m * spec.generators()[j] * inv);
  }
  return ad;
}

double AdjointOperatorNorm(const GroupElement& g) {
  if (g.spec()->is_se2()) {
    const double r = std::hypot(g.matrix()(0, 2), g.matrix()(1, 2));
    return 0.5 * (r + std::sqrt(r * r + 4.0));
  }
  Eigen::JacobiSVD<Matrix> svd(AdjointRight(g));
  return svd.singularValues()(0);
}

// ---------------------------------------------------------------------------
// SE(2)

double WrapAngle(double angle) {
  double wrapped = std::remainder(angle, 2.0 * std::numbers::pi);
  if (wrapped <= -std::numbers::pi) wrapped += 2.0 * std::numbers::pi;
  return wrapped;
}

GroupElement Se2FromPose(const Pose2& pose) {
  Matrix m = Matrix::Identity(3, 3);
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  m(0, 0) = c;
  m(0, 1) = -s;
  m(1, 0) = s;
  m(1, 1) = c;
  m(0, 2) = pose.x;
  m(1, 2) = pose.y;
  return GroupElement(LieGroupSpec::SE2(), std::move(m));
}

Pose2 Se2Pose(const GroupElement& g) {
  if (!g.spec()->is_se2()) {
    throw Error(ErrorKind::kInvalidArgument, "element is not an SE(2) pose");
  }
  const Matrix& m = g.matrix();
  return Pose2{m(0, 2), m(1, 2), std::atan2(m(1, 0), m(0, 0))};
}

}  // namespace liespoof
