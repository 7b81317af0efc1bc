#pragma once

#include <span>
#include <vector>

#include "parsefit/core.hpp"

namespace parsefit {

/// Full singular value decomposition M = left * diag(sigma) * right^* with
/// unitary factors and nonincreasing singular values. `groups` partitions the
/// sigma indices into clusters of equal value under `group_tol`; `rank` counts
/// the values above `rank_tol`.
struct SvdFactorization {
  Matrix left;   // rows x rows unitary
  Matrix right;  // cols x cols unitary
  RealVector sigma;
  std::vector<std::vector<Index>> groups;
  double group_tol = 0.0;
  double rank_tol = 0.0;
  Index rank = 0;

  Matrix reconstruct() const;
};

/// Polar decomposition M = isometric * modulus with `isometric` the partial
/// isometry sharing M's kernel and `modulus` positive semidefinite.
struct PolarParts {
  Matrix isometric;
  Matrix modulus;
};

/// Joint diagonalization of a pair (F, Y) with Y a partial isometry commuting
/// with F in the sense Y^*F = F^*Y and YF^* = FY^*. In the returned bases both
/// operators are real diagonal; Y's diagonal is reported snapped to {-1,0,1}.
struct SimultaneousSvd {
  Matrix left_basis;   // rows x rows unitary
  Matrix right_basis;  // cols x cols unitary
  RealVector f_diag;   // min(rows, cols)
  Eigen::VectorXi y_diag;
};

SvdFactorization svd(const Matrix& m, double group_tol = -1.0,
                     const Tolerances& tol = {});

PolarParts polar_decompose(const Matrix& m, const Tolerances& tol = {});

double hs_distance(const Matrix& a, const Matrix& b);

/// Residual of the projection identity (M^*M)^2 = M^*M; zero iff M is a
/// partial isometry.
double partial_isometry_defect(const Matrix& m);

bool is_partial_isometry(const Matrix& m, double tol);

/// Principal logarithm of a unitary: skew-Hermitian A with exp(A) = W and
/// eigenphases in (-pi, pi].
Matrix unitary_log(const Matrix& w, const Tolerances& tol = {});

Matrix matrix_exp(const Matrix& a);

SimultaneousSvd simultaneous_svd(const Matrix& f, const Matrix& y,
                                 const Tolerances& tol = {});

/// Weak (sub)majorization: every descending partial sum of x is bounded by
/// the matching partial sum of y, up to tol.
bool submajorization_holds(std::span<const double> x, std::span<const double> y,
                           double tol);

/// Count of singular values above the relative rank tolerance.
Index matrix_rank(const Matrix& m, const Tolerances& tol = {});

Matrix identity(Index n);

}  // namespace parsefit
