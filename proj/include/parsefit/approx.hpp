#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "parsefit/core.hpp"
#include "parsefit/diagonal.hpp"
#include "parsefit/frame.hpp"
#include "parsefit/linalg.hpp"

namespace parsefit {

/// Kernel/rank/cokernel bookkeeping and the admissible component index set
/// [-min(n1, n3), n2].
struct ComponentReport {
  ExtendedNat n1;  // dim ker
  ExtendedNat n2;  // rank
  ExtendedNat n3;  // codim of the range
  ExtendedInt lower;
  ExtendedInt upper;
  /// False only for diagonal models whose tail fails to converge; then no
  /// Parseval frame is quadratically close and the index set is vacuous.
  bool quadratically_close_nonempty = true;

  bool contains(int k) const { return lower.contains_as_lower(k, upper); }
};

ComponentReport component_report(const Frame& f, const Tolerances& tol = {});
ComponentReport component_report(const DiagonalModel& m);

enum class Uniqueness { unique, finitely_many, infinitely_many, none };

std::string uniqueness_name(Uniqueness u);

/// Family of minimizers for a negative component: X = U + S with S any rank
/// (-k) partial isometry from ker F to ran(F)^perp. The bases span those two
/// spaces; `diagonal_count` counts the sign patterns of the associated
/// diagonal sequence problem.
struct KernelFamilyDescriptor {
  Matrix kernel_basis;
  Matrix cokernel_basis;
  int rank = 0;
  ExtendedNat diagonal_count;
};

/// Family of minimizers for a positive component: X = U (I - E0 - E1) with E0
/// fixed and E1 any rank `e1_rank` projection inside the span of
/// `eigenspace_basis`.
struct EigenFamilyDescriptor {
  Matrix e0;
  Matrix eigenspace_basis;
  int e1_rank = 0;
};

struct ApproximationResult {
  int k = 0;
  ParsevalFrame minimizer;
  double squared_distance = 0.0;
  Uniqueness uniqueness = Uniqueness::unique;
  /// Exact minimizer count when finite (1 for unique).
  ExtendedNat count = 1;
  std::optional<KernelFamilyDescriptor> kernel_family;
  std::optional<EigenFamilyDescriptor> eigen_family;
  /// Set when a singular value sits close to a multiplicity-group boundary,
  /// making the tie sets of the k > 0 construction tolerance-sensitive.
  bool grouping_marginal = false;

  // global_approx only:
  /// Components whose distance ties with the optimum within the tie tolerance.
  std::vector<int> tied_components;
  /// Set when a singular value was snapped to the 1/2 threshold.
  bool boundary = false;
};

/// Best Parseval frame within the connected component of index k
/// (closed forms per the component sign).
ApproximationResult approx_in_component(const Frame& f, int k,
                                        const Tolerances& tol = {});

/// Squared distance from the frame to component k, by formula on the
/// singular values.
double distance_to_component(const Frame& f, int k, const Tolerances& tol = {});

/// Global best Parseval frame: selects the component from the count of
/// singular values <= 1/2, then scans all components for ties and classifies
/// uniqueness by enumeration over the tied ones.
ApproximationResult global_approx(const Frame& f, const Tolerances& tol = {});

/// Constructive same-component connectivity: unitaries v, w with
/// X = v Y w^* and a sampled unitary path gamma(t) = exp(-tA) X exp(tB)
/// from X to Y through partial isometries.
struct ConnectionCertificate {
  Matrix v;
  Matrix w;
  Matrix generator_a;
  Matrix generator_b;
  std::vector<std::pair<double, Matrix>> samples;
  double reconstruction_residual = 0.0;
  double max_path_defect = 0.0;
};

ConnectionCertificate connect(const ParsevalFrame& x, const ParsevalFrame& y,
                              const Frame& f, int samples,
                              const Tolerances& tol = {});

/// Residual of the critical-point condition: max of |Y*F - F*Y| and
/// |YF* - FY*| in Hilbert-Schmidt norm. Every returned minimizer satisfies
/// this within the commutation tolerance.
double verify_critical_point(const Frame& f, const ParsevalFrame& y);

/// Minimum observed distance between sampled Parseval frames from distinct
/// components; the components are at pairwise distance >= 1.
double gap_check(const Frame& f, int trials, std::uint64_t seed = 0,
                 const Tolerances& tol = {});

}  // namespace parsefit
