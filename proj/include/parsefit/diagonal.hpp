#pragma once

#include <span>
#include <string>
#include <vector>

#include "parsefit/core.hpp"

namespace parsefit {

/// Sequence model for a (possibly infinite) diagonal frame. The sequence
/// consists of the explicit `exceptional` entries, followed by `tail_ones`
/// positions equal to 1 and enough zero positions to bring the total count of
/// zeros up to `kernel_dim` (explicit zeros included).
///
/// `kernel_dim` is the kernel dimension n1 of the diagonal operator;
/// `cokernel_dim` is n3 of the ambient space. `tail_converges` asserts
/// sum over nonzero entries of (a_i - 1)^2 < infinity; it can only be false
/// for models standing in for sequences that are not explicitly representable
/// here, and such models admit no quadratically close sign sequence at all.
struct DiagonalModel {
  std::vector<double> exceptional;
  ExtendedNat tail_ones = 0;
  ExtendedNat kernel_dim = 0;
  ExtendedNat cokernel_dim = 0;
  bool tail_converges = true;
};

/// A sign pattern over a diagonal model with entries in {-1, 0, +1}.
/// `values` aligns with the model's explicit positions. Beyond them the
/// pattern follows the tail rule (+1 on the ones tail, 0 on kernel padding)
/// except where the override lists say otherwise; override i applies to the
/// i-th position of its region.
struct SignSequence {
  std::vector<int> values;
  std::vector<int> tail_overrides;
  std::vector<int> kernel_overrides;

  friend bool operator==(const SignSequence&, const SignSequence&) = default;
};

bool sign_sequence_less(const SignSequence& a, const SignSequence& b);

enum class FamilyKind { unique, finite, infinite, none };

/// Solution set of a constrained sign-sequence minimization. When the set is
/// finite, `representatives` enumerates it completely up to the requested cap
/// and `count` is exact (saturating at 2^64-1); when infinite, a small sample
/// is returned together with a generating `description`.
struct MinimizerFamily {
  FamilyKind kind = FamilyKind::none;
  std::vector<SignSequence> representatives;
  ExtendedNat count = 0;
  double value = 0.0;
  std::string description;
};

void validate_model(const DiagonalModel& m);

ExtendedNat model_zero_count(const DiagonalModel& m);      // n1
ExtendedNat model_positive_count(const DiagonalModel& m);  // n2

/// #{i : b_i = 0, a_i > 0} - #{i : b_i != 0, a_i = 0}.
int seq_index(const DiagonalModel& a, const SignSequence& b);

/// Sum of (a_i - b_i)^2. Terms are accumulated in sorted order so that
/// mathematically equal patterns produce bit-identical values.
double sequence_objective(std::span<const double> a, std::span<const int> b);

double objective_value(const DiagonalModel& a, const SignSequence& b);

/// Closed-form minimizers of sum (a_i - b_i)^2 over sign sequences with a
/// fixed index k.
MinimizerFamily minimize_k(const DiagonalModel& a, int k,
                           std::size_t max_representatives = 200000);

/// Exhaustive enumeration over {-1,0,1}^n, n <= 12. The independent oracle
/// for minimize_k; returns kind = none with an empty set when no sequence of
/// index k exists.
MinimizerFamily brute_force_oracle(std::span<const double> a, int k);

/// Admissible index range of the sequence model: (-n_zero, +n_positive).
std::pair<ExtendedInt, ExtendedInt> model_index_bounds(const DiagonalModel& a);

/// Model with every position explicit (no tail, kernel = explicit zeros).
DiagonalModel dense_model(std::vector<double> a);

/// Explicit sequence of a fully finite model: exceptional entries, then the
/// ones tail, then kernel padding. Throws ResourceError when any region is
/// infinite or the total length exceeds `cap`.
std::vector<double> flatten_model(const DiagonalModel& m, std::size_t cap = 12);

/// Dense expansion of a sign sequence over a fully finite model, ordered like
/// flatten_model.
std::vector<int> flatten_sequence(const DiagonalModel& m, const SignSequence& b);

}  // namespace parsefit
