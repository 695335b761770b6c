#pragma once

// Unitary and symplectic linear algebra on phase space R^{2n}, coordinates
// ordered (x_1..x_n, xi_1..xi_n), with J = [[0, I], [-I, 0]].

#include <Eigen/Dense>

#include <cmath>
#include <sstream>
#include <vector>

#include "tfrotor/grid.hpp"

namespace tfrotor {

using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;

inline constexpr double kUnitaryTolerance = 1e-10;
inline constexpr double kFreeThreshold = 1e-8;

class UnitaryMatrix {
 public:
  explicit UnitaryMatrix(CMatrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() < 1) throw InvalidArgument("unitary matrix must be square");
    if (!m_.allFinite()) throw InvalidArgument("unitary matrix has non-finite entries");
    const double defect = defect_of(m_);
    if (defect > kUnitaryTolerance) {
      std::ostringstream os;
      os << "matrix is not unitary: max |U U* - I| = " << defect;
      throw InvalidArgument(os.str());
    }
  }

  static UnitaryMatrix identity(int n) { return UnitaryMatrix(CMatrix::Identity(n, n)); }

  /// diag(e^{i angle_1}, ..., e^{i angle_n})
  static UnitaryMatrix diagonal(const std::vector<double>& angles) {
    const auto n = static_cast<Eigen::Index>(angles.size());
    CMatrix d = CMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) d(i, i) = std::polar(1.0, angles[static_cast<std::size_t>(i)]);
    return UnitaryMatrix(d);
  }

  int dim() const { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const { return m_; }
  cplx operator()(int i, int j) const { return m_(i, j); }

  UnitaryMatrix inverse() const { return UnitaryMatrix(m_.adjoint()); }

  friend UnitaryMatrix operator*(const UnitaryMatrix& a, const UnitaryMatrix& b) {
    if (a.dim() != b.dim()) throw InvalidArgument("unitary dimension mismatch");
    CMatrix p = a.m_ * b.m_;
    return UnitaryMatrix(std::move(p));
  }

  static double defect_of(const CMatrix& m) {
    return (m * m.adjoint() - CMatrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
  }

 private:
  CMatrix m_;
};

/// Element of U(2n, R) = Sp(n, R) ∩ O(2n, R), stored by its blocks: [[A, -B], [B, A]].
class SymplecticRotation {
 public:
  SymplecticRotation(RMatrix a, RMatrix b) : a_(std::move(a)), b_(std::move(b)) {
    const auto n = a_.rows();
    if (a_.cols() != n || b_.rows() != n || b_.cols() != n) throw InvalidArgument("block shape mismatch");
    const RMatrix I = RMatrix::Identity(n, n);
    const double orth = (a_ * a_.transpose() + b_ * b_.transpose() - I).cwiseAbs().maxCoeff();
    const double sym = (a_ * b_.transpose() - b_ * a_.transpose()).cwiseAbs().maxCoeff();
    if (orth > kUnitaryTolerance || sym > kUnitaryTolerance) {
      std::ostringstream os;
      os << "blocks do not define a symplectic rotation (defects " << orth << ", " << sym << ")";
      throw InvalidArgument(os.str());
    }
  }

  int dim() const { return static_cast<int>(a_.rows()); }
  const RMatrix& a() const { return a_; }
  const RMatrix& b() const { return b_; }

  RMatrix matrix() const {
    const auto n = a_.rows();
    RMatrix s(2 * n, 2 * n);
    s << a_, -b_, b_, a_;
    return s;
  }

 private:
  RMatrix a_;
  RMatrix b_;
};

/// Angles (theta_1..theta_n), each reduced to [0, 2 pi).
class TorusElement {
 public:
  explicit TorusElement(std::vector<double> angles) : angles_(std::move(angles)) {
    if (angles_.empty()) throw InvalidArgument("torus element needs at least one angle");
    for (double& t : angles_) {
      if (!std::isfinite(t)) throw InvalidArgument("torus angle must be finite");
      t = std::fmod(t, 2.0 * kPi);
      if (t < 0.0) t += 2.0 * kPi;
      if (t >= 2.0 * kPi) t = 0.0;
    }
  }

  int dim() const { return static_cast<int>(angles_.size()); }
  const std::vector<double>& angles() const { return angles_; }
  double operator[](std::size_t i) const { return angles_[i]; }

  UnitaryMatrix as_unitary() const { return UnitaryMatrix::diagonal(angles_); }

 private:
  std::vector<double> angles_;
};

/// W(x, x') = 1/2 P x.x - L x.x' + 1/2 Q x'.x', with Maslov index m (mod 4).
struct GeneratingFunction {
  RMatrix P;
  RMatrix Q;
  RMatrix L;
  int m = 0;

  int dim() const { return static_cast<int>(L.rows()); }

  void validate() const {
    const auto n = L.rows();
    if (L.cols() != n || P.rows() != n || P.cols() != n || Q.rows() != n || Q.cols() != n) {
      throw InvalidArgument("generating function blocks have inconsistent shapes");
    }
    if ((P - P.transpose()).cwiseAbs().maxCoeff() > 1e-12 || (Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
      throw InvalidArgument("P and Q must be symmetric");
    }
    if (std::abs(L.determinant()) <= 1e-10) throw SingularBlock("L is singular");
  }

  double operator()(const Eigen::VectorXd& x, const Eigen::VectorXd& xp) const {
    return 0.5 * x.dot(P * x) - (L * x).dot(xp) + 0.5 * xp.dot(Q * xp);
  }
};

inline RMatrix symplectic_j(int n) {
  RMatrix j = RMatrix::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = RMatrix::Identity(n, n);
  j.bottomLeftCorner(n, n) = -RMatrix::Identity(n, n);
  return j;
}

/// max |S J S^T - J|
inline double symplectic_defect(const RMatrix& s) {
  if (s.rows() != s.cols() || s.rows() % 2 != 0) throw InvalidArgument("symplectic matrix must be 2n x 2n");
  const RMatrix j = symplectic_j(static_cast<int>(s.rows() / 2));
  return (s * j * s.transpose() - j).cwiseAbs().maxCoeff();
}

/// iota(A + iB) = [[A, -B], [B, A]].
inline SymplecticRotation iota(const UnitaryMatrix& u) {
  return SymplecticRotation(u.matrix().real(), u.matrix().imag());
}

/// A = diag(cos theta_i), B = diag(sin theta_i).
inline SymplecticRotation torus_to_rotation(const TorusElement& t) { return iota(t.as_unitary()); }

/// Inverse of iota.
inline UnitaryMatrix unitary_of(const SymplecticRotation& s) {
  CMatrix u(s.dim(), s.dim());
  u.real() = s.a();
  u.imag() = s.b();
  return UnitaryMatrix(u);
}

/// Generating function of a free symplectic matrix S = [[A, B], [C, D]]:
/// P = D B^{-1}, L = B^{-1}, Q = B^{-1} A, m = 0 if det L > 0 else 1.
inline GeneratingFunction generating_function_of(const RMatrix& s) {
  if (s.rows() != s.cols() || s.rows() % 2 != 0) throw InvalidArgument("symplectic matrix must be 2n x 2n");
  const auto n = s.rows() / 2;
  const RMatrix A = s.topLeftCorner(n, n);
  const RMatrix B = s.topRightCorner(n, n);
  const RMatrix D = s.bottomRightCorner(n, n);
  const double detb = B.determinant();
  if (!(std::abs(detb) > kFreeThreshold)) {
    std::ostringstream os;
    os << "upper-right block is singular (|det B| = " << std::abs(detb) << ")";
    throw SingularBlock(os.str());
  }
  const RMatrix binv = B.inverse();
  GeneratingFunction w;
  w.L = binv;
  w.P = D * binv;
  w.Q = binv * A;
  // Exact symmetry holds for symplectic input; remove rounding asymmetry.
  w.P = 0.5 * (w.P + w.P.transpose()).eval();
  w.Q = 0.5 * (w.Q + w.Q.transpose()).eval();
  w.m = w.L.determinant() > 0.0 ? 0 : 1;
  return w;
}

inline GeneratingFunction generating_function_of(const SymplecticRotation& s) {
  return generating_function_of(s.matrix());
}

/// S_W = [[L^{-1} Q, L^{-1}], [P L^{-1} Q - L^T, P L^{-1}]].
inline RMatrix free_matrix_from_W(const GeneratingFunction& w) {
  w.validate();
  const auto n = w.L.rows();
  const RMatrix linv = w.L.inverse();
  RMatrix s(2 * n, 2 * n);
  s.topLeftCorner(n, n) = linv * w.Q;
  s.topRightCorner(n, n) = linv;
  s.bottomLeftCorner(n, n) = w.P * linv * w.Q - w.L.transpose();
  s.bottomRightCorner(n, n) = w.P * linv;
  return s;
}

}  // namespace tfrotor
