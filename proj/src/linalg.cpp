#include "parsefit/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace parsefit {

namespace {

Matrix rectangular_diagonal(const RealVector& values, Index rows, Index cols) {
  Matrix d = Matrix::Zero(rows, cols);
  const Index n = std::min<Index>({values.size(), rows, cols});
  for (Index i = 0; i < n; ++i) d(i, i) = values(i);
  return d;
}

std::vector<std::vector<Index>> cluster_sigma(const RealVector& sigma, double tol) {
  std::vector<std::vector<Index>> groups;
  for (Index i = 0; i < sigma.size(); ++i) {
    if (!groups.empty() && sigma(groups.back().back()) - sigma(i) <= tol) {
      groups.back().push_back(i);
    } else {
      groups.push_back({i});
    }
  }
  return groups;
}

}  // namespace

Matrix SvdFactorization::reconstruct() const {
  return left * rectangular_diagonal(sigma, left.rows(), right.rows()) *
         right.adjoint();
}

Matrix identity(Index n) { return Matrix::Identity(n, n); }

SvdFactorization svd(const Matrix& m, double group_tol, const Tolerances& tol) {
  require_finite(m, "svd");
  SvdFactorization out;
  if (m.rows() == 0 || m.cols() == 0) {
    out.left = identity(m.rows());
    out.right = identity(m.cols());
    out.sigma = RealVector(0);
    out.group_tol = std::max(group_tol, 0.0);
    out.rank_tol = tol.rank_for(0.0);
    return out;
  }

  Eigen::JacobiSVD<Matrix> solver(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (solver.info() != Eigen::Success)
    throw NumericError("svd: eigen solver did not converge");

  out.left = solver.matrixU();
  out.right = solver.matrixV();
  out.sigma = solver.singularValues();
  const double s_max = out.sigma.size() > 0 ? out.sigma(0) : 0.0;
  out.group_tol = group_tol >= 0.0 ? group_tol : tol.group_for(s_max);
  out.rank_tol = tol.rank_for(s_max);
  out.groups = cluster_sigma(out.sigma, out.group_tol);
  out.rank = (out.sigma.array() > out.rank_tol).count();
  return out;
}

Index matrix_rank(const Matrix& m, const Tolerances& tol) {
  return svd(m, -1.0, tol).rank;
}

PolarParts polar_decompose(const Matrix& m, const Tolerances& tol) {
  const SvdFactorization f = svd(m, -1.0, tol);
  RealVector ones = RealVector::Zero(f.sigma.size());
  for (Index i = 0; i < f.rank; ++i) ones(i) = 1.0;
  PolarParts out;
  out.isometric = f.left * rectangular_diagonal(ones, m.rows(), m.cols()) *
                  f.right.adjoint();
  RealVector padded = RealVector::Zero(m.cols());
  padded.head(f.sigma.size()) = f.sigma;
  out.modulus = f.right * padded.asDiagonal() * f.right.adjoint();
  return out;
}

double hs_distance(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "hs_distance");
  return (a - b).norm();
}

double partial_isometry_defect(const Matrix& m) {
  const Matrix g = m.adjoint() * m;
  return (g * g - g).norm();
}

bool is_partial_isometry(const Matrix& m, double tol) {
  return partial_isometry_defect(m) <= tol;
}

Matrix unitary_log(const Matrix& w, const Tolerances& tol) {
  if (w.rows() != w.cols()) throw DomainError("unitary_log: matrix not square");
  require_finite(w, "unitary_log");
  const Index n = w.rows();
  if (n == 0) return Matrix(0, 0);
  if ((w.adjoint() * w - identity(n)).norm() > tol.unitary)
    throw DomainError("unitary_log: input not unitary within tolerance");

  // A unitary matrix is normal, so its Schur form is diagonal up to roundoff.
  Eigen::ComplexSchur<Matrix> schur(w);
  if (schur.info() != Eigen::Success)
    throw NumericError("unitary_log: schur decomposition failed");
  const Matrix& q = schur.matrixU();
  Matrix log_diag = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    const Scalar lambda = schur.matrixT()(i, i);
    const double mag = std::abs(lambda);
    const Scalar unit = mag > 0 ? lambda / mag : Scalar(1.0, 0.0);
    log_diag(i, i) = Scalar(0.0, std::arg(unit));
  }
  Matrix a = q * log_diag * q.adjoint();
  return 0.5 * (a - a.adjoint());
}

Matrix matrix_exp(const Matrix& a) {
  if (a.rows() != a.cols()) throw DomainError("matrix_exp: matrix not square");
  require_finite(a, "matrix_exp");
  const Index n = a.rows();
  if (n == 0) return Matrix(0, 0);

  // Skew-Hermitian generators get an exact unitary exponential through the
  // eigendecomposition of the Hermitian matrix iA.
  if ((a + a.adjoint()).norm() <= 1e-12 * (a.norm() + 1.0)) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(Scalar(0.0, 1.0) * a);
    if (eig.info() == Eigen::Success) {
      const RealVector& phases = eig.eigenvalues();
      Matrix d = Matrix::Zero(n, n);
      for (Index i = 0; i < n; ++i)
        d(i, i) = std::exp(Scalar(0.0, -phases(i)));
      return eig.eigenvectors() * d * eig.eigenvectors().adjoint();
    }
  }
  return a.exp();
}

SimultaneousSvd simultaneous_svd(const Matrix& f, const Matrix& y,
                                 const Tolerances& tol) {
  require_same_shape(f, y, "simultaneous_svd");
  require_finite(f, "simultaneous_svd");
  require_finite(y, "simultaneous_svd");
  if (!is_partial_isometry(y, tol.unitary))
    throw DomainError("simultaneous_svd: Y is not a partial isometry");
  const double commute_tol = tol.commute_for(f.norm());
  if ((y.adjoint() * f - f.adjoint() * y).norm() > commute_tol ||
      (y * f.adjoint() - f * y.adjoint()).norm() > commute_tol)
    throw DomainError("simultaneous_svd: commutation residual above tolerance");

  const Index d = f.rows();
  const Index n = f.cols();
  const SvdFactorization fs = svd(f, -1.0, tol);
  const Index rho = fs.rank;

  // In F's singular bases the difference A = F - Y is block diagonal: a
  // Hermitian block coupled to the nonzero singular values plus a free corner
  // acting from ker(F) to ran(F)^perp.
  const Matrix a_tilde = fs.left.adjoint() * (f - y) * fs.right;

  Matrix left_rot = identity(d);
  Matrix right_rot = identity(n);

  Matrix b = a_tilde.topLeftCorner(rho, rho);
  b = 0.5 * (b + b.adjoint()).eval();
  for (const auto& group : fs.groups) {
    std::vector<Index> idx;
    for (Index i : group)
      if (i < rho) idx.push_back(i);
    if (idx.size() < 2) continue;
    const Index g = static_cast<Index>(idx.size());
    Matrix block(g, g);
    for (Index r = 0; r < g; ++r)
      for (Index c = 0; c < g; ++c) block(r, c) = b(idx[r], idx[c]);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(block);
    if (eig.info() != Eigen::Success)
      throw NumericError("simultaneous_svd: block eigensolver failed");
    for (Index r = 0; r < g; ++r)
      for (Index c = 0; c < g; ++c) {
        left_rot(idx[r], idx[c]) = eig.eigenvectors()(r, c);
        right_rot(idx[r], idx[c]) = eig.eigenvectors()(r, c);
      }
  }

  if (rho < std::min(d, n)) {
    const Matrix corner = a_tilde.bottomRightCorner(d - rho, n - rho);
    Eigen::JacobiSVD<Matrix> corner_svd(corner,
                                        Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (corner_svd.info() != Eigen::Success)
      throw NumericError("simultaneous_svd: corner svd failed");
    left_rot.bottomRightCorner(d - rho, d - rho) = corner_svd.matrixU();
    right_rot.bottomRightCorner(n - rho, n - rho) = corner_svd.matrixV();
  }

  SimultaneousSvd out;
  out.left_basis = fs.left * left_rot;
  out.right_basis = fs.right * right_rot;

  const Index m = std::min(d, n);
  out.f_diag = RealVector::Zero(m);
  out.f_diag.head(rho) = fs.sigma.head(rho);
  out.y_diag = Eigen::VectorXi::Zero(m);
  const Matrix y_in_basis = out.left_basis.adjoint() * y * out.right_basis;
  for (Index i = 0; i < m; ++i) {
    const double v = y_in_basis(i, i).real();
    const int snapped = v > 0.5 ? 1 : (v < -0.5 ? -1 : 0);
    if (std::abs(v - snapped) > 1e-4)
      throw NumericError("simultaneous_svd: diagonal entry of Y not near {-1,0,1}");
    out.y_diag(i) = snapped;
  }
  return out;
}

bool submajorization_holds(std::span<const double> x, std::span<const double> y,
                           double tol) {
  if (x.size() != y.size())
    throw DimensionError("submajorization_holds: length mismatch");
  std::vector<double> xs(x.begin(), x.end());
  std::vector<double> ys(y.begin(), y.end());
  std::sort(xs.begin(), xs.end(), std::greater<>());
  std::sort(ys.begin(), ys.end(), std::greater<>());
  double px = 0.0;
  double py = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    px += xs[i];
    py += ys[i];
    if (px > py + tol) return false;
  }
  return true;
}

}  // namespace parsefit
