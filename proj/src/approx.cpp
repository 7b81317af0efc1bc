#include "parsefit/approx.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "parsefit/sampling.hpp"

namespace parsefit {

namespace {

Matrix rectangular_ones(Index rows, Index cols, Index rank) {
  Matrix j = Matrix::Zero(rows, cols);
  for (Index i = 0; i < rank; ++i) j(i, i) = 1.0;
  return j;
}

double sorted_terms_sum(std::vector<double>& terms) {
  std::sort(terms.begin(), terms.end());
  return std::accumulate(terms.begin(), terms.end(), 0.0);
}

/// Squared distance to component k from the nonzero singular values, summed
/// in sorted order so diagonal cases match the sequence oracle bit for bit.
double distance_formula(const RealVector& sigma, Index rank, int k) {
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(rank) + (k < 0 ? -k : 0));
  const Index zero_from = k > 0 ? rank - k : rank;
  for (Index j = 0; j < rank; ++j) {
    if (j >= zero_from) {
      terms.push_back(sigma(j) * sigma(j));
    } else {
      const double d = sigma(j) - 1.0;
      terms.push_back(d * d);
    }
  }
  for (int j = 0; j < -k; ++j) terms.push_back(1.0);
  return sorted_terms_sum(terms);
}

struct TieStructure {
  Index below = 0;    // #A: values strictly below the threshold group
  Index at = 0;       // #B: size of the threshold group (within the rank)
  Index choose = 0;   // rank of E1
  Index group_begin = 0;
  bool marginal = false;
};

/// Tie sets of the k > 0 construction: the threshold group is the
/// multiplicity group of the k-th smallest nonzero singular value.
TieStructure tie_structure(const SvdFactorization& f, int k) {
  TieStructure t;
  const Index cut = f.rank - k;  // first zeroed index
  for (const auto& group : f.groups) {
    if (group.front() <= cut && cut <= group.back()) {
      t.group_begin = group.front();
      const Index end = std::min<Index>(group.back() + 1, f.rank);
      t.at = end - group.front();
      t.below = f.rank - end;
      break;
    }
  }
  t.choose = k - t.below;
  if (cut > 0) {
    const double gap = f.sigma(cut - 1) - f.sigma(cut);
    t.marginal = gap > f.group_tol && gap < 10.0 * f.group_tol;
  }
  return t;
}

}  // namespace

std::string uniqueness_name(Uniqueness u) {
  switch (u) {
    case Uniqueness::unique: return "unique";
    case Uniqueness::finitely_many: return "finitelyMany";
    case Uniqueness::infinitely_many: return "infinitelyMany";
    case Uniqueness::none: return "none";
  }
  return "none";
}

ComponentReport component_report(const Frame& f, const Tolerances& tol) {
  validate_frame(f, tol);
  const Index rank = matrix_rank(f.synthesis, tol);
  ComponentReport r;
  r.n1 = ExtendedNat(static_cast<std::uint64_t>(f.synthesis.cols() - rank));
  r.n2 = ExtendedNat(static_cast<std::uint64_t>(rank));
  r.n3 = ExtendedNat(static_cast<std::uint64_t>(f.synthesis.rows() - rank));
  const ExtendedNat lo = min(r.n1, r.n3);
  r.lower = ExtendedInt(-static_cast<std::int64_t>(lo.value()));
  r.upper = ExtendedInt(static_cast<std::int64_t>(rank));
  return r;
}

ComponentReport component_report(const DiagonalModel& m) {
  validate_model(m);
  ComponentReport r;
  r.n1 = model_zero_count(m);
  r.n2 = model_positive_count(m);
  r.n3 = m.cokernel_dim;
  const ExtendedNat lo = min(r.n1, r.n3);
  r.lower = lo.is_inf() ? ExtendedInt::neg_inf()
                        : ExtendedInt(-static_cast<std::int64_t>(lo.value()));
  r.upper = r.n2.is_inf() ? ExtendedInt::pos_inf()
                          : ExtendedInt(static_cast<std::int64_t>(r.n2.value()));
  r.quadratically_close_nonempty = m.tail_converges;
  return r;
}

double distance_to_component(const Frame& f, int k, const Tolerances& tol) {
  const ComponentReport report = component_report(f, tol);
  if (!report.contains(k))
    throw InfeasibleComponentError(k, "index set is [" + report.lower.str() +
                                          ", " + report.upper.str() + "]");
  const SvdFactorization s = svd(f.synthesis, -1.0, tol);
  return distance_formula(s.sigma, s.rank, k);
}

ApproximationResult approx_in_component(const Frame& f, int k,
                                        const Tolerances& tol) {
  const ComponentReport report = component_report(f, tol);
  if (!report.contains(k))
    throw InfeasibleComponentError(k, "index set is [" + report.lower.str() +
                                          ", " + report.upper.str() + "]");
  const SvdFactorization s = svd(f.synthesis, -1.0, tol);
  const Index d = f.synthesis.rows();
  const Index n = f.synthesis.cols();
  const Index rank = s.rank;

  ApproximationResult out;
  out.k = k;
  out.squared_distance = distance_formula(s.sigma, rank, k);

  if (k == 0) {
    out.minimizer.synthesis =
        s.left * rectangular_ones(d, n, rank) * s.right.adjoint();
    out.uniqueness = Uniqueness::unique;
    out.count = 1;
    return out;
  }

  if (k < 0) {
    const Index take = -k;
    const Matrix u = s.left * rectangular_ones(d, n, rank) * s.right.adjoint();
    KernelFamilyDescriptor family;
    family.kernel_basis = s.right.rightCols(n - rank);
    family.cokernel_basis = s.left.rightCols(d - rank);
    family.rank = static_cast<int>(take);
    // Sign patterns of the paired diagonal problem; the full family over
    // complex scalars is a continuum.
    const std::uint64_t pairs = std::min<std::uint64_t>(
        static_cast<std::uint64_t>(n - rank), static_cast<std::uint64_t>(d - rank));
    constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max() - 1;
    unsigned __int128 patterns = 1;
    for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(take); ++i) {
      patterns = patterns * (pairs - i) / (i + 1) * 2;
      if (patterns > kMax) {
        patterns = kMax;  // saturate; the exact huge count is immaterial
        break;
      }
    }
    family.diagonal_count = ExtendedNat(static_cast<std::uint64_t>(patterns));

    Matrix shift = Matrix::Zero(d, n);
    for (Index j = 0; j < take; ++j)
      shift += family.cokernel_basis.col(j) * family.kernel_basis.col(j).adjoint();
    out.minimizer.synthesis = u + shift;
    out.uniqueness = Uniqueness::infinitely_many;
    out.count = ExtendedNat::inf();
    out.kernel_family = std::move(family);
    return out;
  }

  // k > 0: zero the k smallest nonzero singular directions. The minimizer
  // keeps the first rank - k singular triplets; E0 covers the eigenspaces
  // strictly below the threshold group, E1 the zeroed part of that group.
  const TieStructure t = tie_structure(s, k);
  out.minimizer.synthesis =
      s.left * rectangular_ones(d, n, rank - k) * s.right.adjoint();
  out.grouping_marginal = t.marginal;

  EigenFamilyDescriptor family;
  family.e0 = Matrix::Zero(n, n);
  for (Index j = rank - k + t.choose; j < rank; ++j)
    family.e0 += s.right.col(j) * s.right.col(j).adjoint();
  family.eigenspace_basis =
      s.right.middleCols(t.group_begin, t.at);
  family.e1_rank = static_cast<int>(t.choose);
  out.eigen_family = std::move(family);

  if (t.at == t.choose) {
    out.uniqueness = Uniqueness::unique;
    out.count = 1;
  } else {
    out.uniqueness = Uniqueness::infinitely_many;
    out.count = ExtendedNat::inf();
  }
  return out;
}

ApproximationResult global_approx(const Frame& f, const Tolerances& tol) {
  const ComponentReport report = component_report(f, tol);
  const SvdFactorization s = svd(f.synthesis, -1.0, tol);

  // Count singular values at or below 1/2, snapping values within the half
  // tolerance onto the threshold so a borderline value is surfaced as a tie
  // rather than silently decided.
  int r = 0;
  bool boundary = false;
  for (Index j = 0; j < s.rank; ++j) {
    double v = s.sigma(j);
    if (std::abs(v - 0.5) <= tol.half) {
      v = 0.5;
      boundary = true;
    }
    if (v <= 0.5) ++r;
  }

  ApproximationResult out = approx_in_component(f, r, tol);
  out.boundary = boundary;

  const std::int64_t lo = report.lower.value();
  const std::int64_t hi = report.upper.value();
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::pair<int, double>> distances;
  for (std::int64_t k = lo; k <= hi; ++k) {
    const double dk = distance_formula(s.sigma, s.rank, static_cast<int>(k));
    distances.emplace_back(static_cast<int>(k), dk);
    best = std::min(best, dk);
  }
  out.squared_distance = best;

  // Uniqueness is classified by enumeration over the tied components, since
  // ties adjacent to the threshold carry their own minimizer families.
  bool infinite = false;
  std::uint64_t total = 0;
  for (const auto& [k, dk] : distances) {
    if (dk > best + tol.tie) continue;
    out.tied_components.push_back(k);
    if (k < 0) {
      infinite = true;
    } else if (k == 0) {
      total += 1;
    } else {
      const TieStructure t = tie_structure(s, k);
      if (t.at == t.choose)
        total += 1;
      else
        infinite = true;
    }
  }
  if (infinite) {
    out.uniqueness = Uniqueness::infinitely_many;
    out.count = ExtendedNat::inf();
  } else if (total <= 1) {
    out.uniqueness = Uniqueness::unique;
    out.count = 1;
  } else {
    out.uniqueness = Uniqueness::finitely_many;
    out.count = ExtendedNat(total);
  }
  return out;
}

ConnectionCertificate connect(const ParsevalFrame& x, const ParsevalFrame& y,
                              const Frame& f, int samples,
                              const Tolerances& tol) {
  require_same_shape(x.synthesis, y.synthesis, "connect");
  if (!is_partial_isometry(x.synthesis, tol.unitary) ||
      !is_partial_isometry(y.synthesis, tol.unitary))
    throw DomainError("connect: inputs must be partial isometries");
  const int kx = component_of(x, f, tol);
  const int ky = component_of(y, f, tol);
  if (kx != ky) throw ComponentMismatchError(kx, ky);

  const Index d = x.synthesis.rows();
  const Index n = x.synthesis.cols();
  ConnectionCertificate cert;
  if (x.synthesis == y.synthesis) {
    cert.v = identity(d);
    cert.w = identity(n);
  } else {
    // Align the singular bases: both isometries share the rectangular 0/1
    // singular pattern, so V = Lx Ly^*, W = Rx Ry^* carries Y onto X.
    const SvdFactorization sx = svd(x.synthesis, -1.0, tol);
    const SvdFactorization sy = svd(y.synthesis, -1.0, tol);
    cert.v = sx.left * sy.left.adjoint();
    cert.w = sx.right * sy.right.adjoint();
  }
  cert.reconstruction_residual =
      (x.synthesis - cert.v * y.synthesis * cert.w.adjoint()).norm();

  cert.generator_a = -unitary_log(cert.v, tol);
  cert.generator_b = -unitary_log(cert.w, tol);

  const int count = std::max(samples, 2);
  for (int i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / (count - 1);
    const Matrix point = matrix_exp(t * cert.generator_a) * x.synthesis *
                         matrix_exp(-t * cert.generator_b);
    cert.max_path_defect =
        std::max(cert.max_path_defect, partial_isometry_defect(point));
    cert.samples.emplace_back(t, point);
  }
  return cert;
}

double verify_critical_point(const Frame& f, const ParsevalFrame& y) {
  require_same_shape(f.synthesis, y.synthesis, "verify_critical_point");
  const Matrix& fm = f.synthesis;
  const Matrix& ym = y.synthesis;
  const double left = (ym.adjoint() * fm - fm.adjoint() * ym).norm();
  const double right = (ym * fm.adjoint() - fm * ym.adjoint()).norm();
  return std::max(left, right);
}

double gap_check(const Frame& f, int trials, std::uint64_t seed,
                 const Tolerances& tol) {
  const ComponentReport report = component_report(f, tol);
  const std::int64_t lo = report.lower.value();
  const std::int64_t hi = report.upper.value();
  if (hi - lo < 1) throw DomainError("gap_check: needs at least two components");

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> pick(lo, hi);
  double min_distance = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    std::int64_t k1 = pick(rng);
    std::int64_t k2 = pick(rng);
    while (k2 == k1) k2 = pick(rng);
    const ParsevalFrame a =
        sample_parseval_in_component(f, static_cast<int>(k1), rng, tol);
    const ParsevalFrame b =
        sample_parseval_in_component(f, static_cast<int>(k2), rng, tol);
    min_distance = std::min(min_distance, hs_distance(a.synthesis, b.synthesis));
  }
  return min_distance;
}

}  // namespace parsefit
