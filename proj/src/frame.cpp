#include "parsefit/frame.hpp"

#include <cmath>

namespace parsefit {

namespace {

void require_projection(const Matrix& p, double tol, const char* what) {
  if (p.rows() != p.cols())
    throw DimensionError(std::string(what) + ": projection must be square");
  require_finite(p, what);
  if ((p - p.adjoint()).norm() > tol || (p * p - p).norm() > tol)
    throw DomainError(std::string(what) + ": matrix is not an orthogonal projection");
}

/// dim(S1 ∩ S2) for S1 = ran(a), S2 = ran(b) via
/// dim S1 + dim S2 - dim(S1 + S2).
Index intersection_dim(const Matrix& a, const Matrix& b, const Tolerances& tol) {
  Matrix joined(a.rows(), a.cols() + b.cols());
  joined << a, b;
  return matrix_rank(a, tol) + matrix_rank(b, tol) - matrix_rank(joined, tol);
}

/// Rank of a matrix whose singular values are known to cluster near {0, 1}.
Index partial_isometry_rank(const Matrix& m, const Tolerances& tol) {
  const SvdFactorization f = svd(m, -1.0, tol);
  return (f.sigma.array() > 0.5).count();
}

}  // namespace

void validate_frame(const Frame& f, const Tolerances& tol) {
  if (f.synthesis.cols() < 1)
    throw DomainError("frame: needs at least one frame vector");
  require_finite(f.synthesis, "frame");
  if (matrix_rank(f.synthesis, tol) == 0)
    throw DegenerateFrameError("frame: synthesis operator is zero, no positive lower frame bound");
}

std::pair<double, double> frame_bounds(const Frame& f, const Tolerances& tol) {
  validate_frame(f, tol);
  const SvdFactorization s = svd(f.synthesis, -1.0, tol);
  const double smallest = s.sigma(s.rank - 1);
  const double largest = s.sigma(0);
  return {smallest * smallest, largest * largest};
}

bool is_parseval(const Frame& f, double tol) {
  return is_partial_isometry(f.synthesis, tol);
}

ParsevalFrame canonical_parseval(const Frame& f, const Tolerances& tol) {
  validate_frame(f, tol);
  return ParsevalFrame{polar_decompose(f.synthesis, tol).isometric};
}

int index_pair(const ProjectionPair& pair, const Tolerances& tol) {
  require_projection(pair.p, tol.unitary, "index_pair(p)");
  require_projection(pair.q, tol.unitary, "index_pair(q)");
  require_same_shape(pair.p, pair.q, "index_pair");
  const Index n = pair.p.rows();
  const Matrix ip = identity(n) - pair.p;
  const Matrix iq = identity(n) - pair.q;

  const Index ker_q_ran_p = intersection_dim(pair.p, iq, tol);
  const Index ran_q_ker_p = intersection_dim(pair.q, ip, tol);
  const Index by_intersections = ker_q_ran_p - ran_q_ker_p;
  const Index by_ranks = matrix_rank(pair.p, tol) - matrix_rank(pair.q, tol);
  if (by_intersections != by_ranks)
    throw NumericError("index_pair: intersection and rank computations disagree (" +
                       std::to_string(by_intersections) + " vs " +
                       std::to_string(by_ranks) + ")");
  return static_cast<int>(by_intersections);
}

bool index_additivity_check(const Matrix& p, const Matrix& q, const Matrix& r,
                            const Tolerances& tol) {
  const int pq = index_pair({p, q}, tol);
  const int qr = index_pair({q, r}, tol);
  const int pr = index_pair({p, r}, tol);
  return pr == pq + qr;
}

bool weakly_similar(const Frame& f, const Frame& g, const Tolerances& tol) {
  if (f.synthesis.cols() != g.synthesis.cols())
    throw DimensionError("weakly_similar: frames have different lengths");
  // ker F = ker G iff the row spaces coincide.
  Matrix stacked(f.synthesis.rows() + g.synthesis.rows(), f.synthesis.cols());
  stacked << f.synthesis, g.synthesis;
  const Index rf = matrix_rank(f.synthesis, tol);
  const Index rg = matrix_rank(g.synthesis, tol);
  return rf == rg && matrix_rank(stacked, tol) == rf;
}

double quadratic_distance(const Frame& f, const Frame& g) {
  const double d = hs_distance(f.synthesis, g.synthesis);
  return d * d;
}

int component_of(const ParsevalFrame& x, const Frame& f, const Tolerances& tol) {
  require_same_shape(x.synthesis, f.synthesis, "component_of");
  validate_frame(f, tol);
  const Matrix u = canonical_parseval(f, tol).synthesis;
  const Matrix& xm = x.synthesis;

  const int by_initial = index_pair({u.adjoint() * u, xm.adjoint() * xm}, tol);
  const int by_final = index_pair({u * u.adjoint(), xm * xm.adjoint()}, tol);

  // Third characterization: Fredholm index of X U^* restricted to ran(U).
  const Index rank_u = partial_isometry_rank(u, tol);
  const Index rank_x = partial_isometry_rank(xm, tol);
  const Index rank_xu = matrix_rank(xm * u.adjoint(), tol);
  const int by_operator =
      static_cast<int>((rank_u - rank_xu) - (rank_x - rank_xu));

  if (by_initial != by_final || by_initial != by_operator)
    throw NumericError("component_of: characterizations disagree (" +
                       std::to_string(by_initial) + ", " + std::to_string(by_final) +
                       ", " + std::to_string(by_operator) + ")");
  return by_initial;
}

}  // namespace parsefit
