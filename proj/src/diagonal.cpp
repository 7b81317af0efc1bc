#include "parsefit/diagonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

namespace parsefit {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max() - 1;

std::uint64_t mul_saturating(std::uint64_t a, std::uint64_t b) {
  const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  return p > kSaturated ? kSaturated : static_cast<std::uint64_t>(p);
}

ExtendedNat pow2_saturating(std::uint64_t e) {
  if (e >= 64) return ExtendedNat(kSaturated);
  return ExtendedNat(std::uint64_t{1} << e);
}

ExtendedNat binomial_saturating(ExtendedNat n, std::uint64_t r) {
  if (r == 0) return 1;
  if (n.is_inf()) return ExtendedNat::inf();
  const std::uint64_t nv = n.value();
  if (r > nv) return 0;
  std::uint64_t acc = 1;
  for (std::uint64_t i = 0; i < r; ++i) {
    acc = mul_saturating(acc, nv - i);
    acc /= (i + 1);  // product of i+1 consecutive integers divides evenly
    if (acc == kSaturated) return ExtendedNat(kSaturated);
  }
  return ExtendedNat(acc);
}

std::size_t count_zeros(const std::vector<double>& a) {
  return static_cast<std::size_t>(std::count(a.begin(), a.end(), 0.0));
}

void validate_sequence(const DiagonalModel& m, const SignSequence& b) {
  if (b.values.size() != m.exceptional.size())
    throw DimensionError("sign sequence: explicit length mismatch");
  auto check_entries = [](const std::vector<int>& v, const char* what) {
    for (int x : v)
      if (x < -1 || x > 1)
        throw DomainError(std::string("sign sequence: ") + what +
                          " entry outside {-1,0,1}");
  };
  check_entries(b.values, "explicit");
  check_entries(b.tail_overrides, "tail");
  check_entries(b.kernel_overrides, "kernel");
  if (!m.tail_ones.is_inf() && b.tail_overrides.size() > m.tail_ones.value())
    throw DomainError("sign sequence: tail overrides exceed tail length");
  const ExtendedNat padding =
      m.kernel_dim.is_inf()
          ? ExtendedNat::inf()
          : ExtendedNat(m.kernel_dim.value() - count_zeros(m.exceptional));
  if (!padding.is_inf() && b.kernel_overrides.size() > padding.value())
    throw DomainError("sign sequence: kernel overrides exceed kernel padding");
}

void require_convergent(const DiagonalModel& m, const char* what) {
  if (!m.tail_converges)
    throw DomainError(std::string(what) +
                      ": model tail does not converge, no sign sequence is "
                      "quadratically close");
}

double sorted_sum(std::vector<double>& terms) {
  std::sort(terms.begin(), terms.end());
  return std::accumulate(terms.begin(), terms.end(), 0.0);
}

// Position pools used by minimize_k. Explicit positions are identified by
// their index in `exceptional`; implicit positions by region + slot.
struct ZeroPool {
  std::vector<std::size_t> explicit_positions;
  ExtendedNat padding;  // implicit kernel slots
  ExtendedNat total() const { return ExtendedNat(explicit_positions.size()) + padding; }
};

struct PositivePool {
  // explicit nonzero entries sorted ascending by (value, position)
  std::vector<std::pair<double, std::size_t>> explicit_sorted;
  ExtendedNat tail;  // implicit slots of value exactly 1
};

ZeroPool zero_pool(const DiagonalModel& m) {
  ZeroPool pool;
  for (std::size_t i = 0; i < m.exceptional.size(); ++i)
    if (m.exceptional[i] == 0.0) pool.explicit_positions.push_back(i);
  pool.padding = m.kernel_dim.is_inf()
                     ? ExtendedNat::inf()
                     : ExtendedNat(m.kernel_dim.value() - pool.explicit_positions.size());
  return pool;
}

PositivePool positive_pool(const DiagonalModel& m) {
  PositivePool pool;
  for (std::size_t i = 0; i < m.exceptional.size(); ++i)
    if (m.exceptional[i] > 0.0) pool.explicit_sorted.emplace_back(m.exceptional[i], i);
  std::sort(pool.explicit_sorted.begin(), pool.explicit_sorted.end());
  pool.tail = m.tail_ones;
  return pool;
}

SignSequence baseline_sequence(const DiagonalModel& m) {
  SignSequence b;
  b.values.reserve(m.exceptional.size());
  for (double a : m.exceptional) b.values.push_back(a > 0.0 ? 1 : 0);
  return b;
}

/// Enumerates r-subsets of {0..n-1} in lexicographic order until the visitor
/// returns false.
template <typename Visit>
void for_each_combination(std::size_t n, std::size_t r, Visit visit) {
  if (r > n) return;
  if (r == 0) {
    visit(std::vector<std::size_t>{});
    return;
  }
  std::vector<std::size_t> idx(r);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    if (!visit(idx)) return;
    // advance
    std::size_t i = r;
    while (i > 0) {
      --i;
      if (idx[i] != i + n - r) break;
      if (i == 0) return;
    }
    if (idx[i] == i + n - r) return;
    ++idx[i];
    for (std::size_t j = i + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

bool sign_sequence_less(const SignSequence& a, const SignSequence& b) {
  return std::tie(a.values, a.tail_overrides, a.kernel_overrides) <
         std::tie(b.values, b.tail_overrides, b.kernel_overrides);
}

void validate_model(const DiagonalModel& m) {
  for (double a : m.exceptional)
    if (!(a >= 0.0) || !std::isfinite(a))
      throw DomainError("diagonal model: exceptional entries must be finite and >= 0");
  const std::size_t zeros = count_zeros(m.exceptional);
  if (!m.kernel_dim.is_inf() && m.kernel_dim.value() < zeros)
    throw DomainError("diagonal model: kernel_dim below the explicit zero count");
}

ExtendedNat model_zero_count(const DiagonalModel& m) {
  validate_model(m);
  return m.kernel_dim;
}

ExtendedNat model_positive_count(const DiagonalModel& m) {
  validate_model(m);
  const std::size_t pos = m.exceptional.size() - count_zeros(m.exceptional);
  return ExtendedNat(pos) + m.tail_ones;
}

int seq_index(const DiagonalModel& a, const SignSequence& b) {
  validate_model(a);
  validate_sequence(a, b);
  require_convergent(a, "seq_index");
  long idx = 0;
  for (std::size_t i = 0; i < a.exceptional.size(); ++i) {
    if (b.values[i] == 0 && a.exceptional[i] > 0.0) ++idx;
    if (b.values[i] != 0 && a.exceptional[i] == 0.0) --idx;
  }
  for (int v : b.tail_overrides)
    if (v == 0) ++idx;
  for (int v : b.kernel_overrides)
    if (v != 0) --idx;
  return static_cast<int>(idx);
}

double sequence_objective(std::span<const double> a, std::span<const int> b) {
  if (a.size() != b.size())
    throw DimensionError("sequence_objective: length mismatch");
  std::vector<double> terms(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - static_cast<double>(b[i]);
    terms[i] = d * d;
  }
  return sorted_sum(terms);
}

double objective_value(const DiagonalModel& a, const SignSequence& b) {
  validate_model(a);
  validate_sequence(a, b);
  require_convergent(a, "objective_value");
  std::vector<double> terms;
  terms.reserve(a.exceptional.size() + b.tail_overrides.size() +
                b.kernel_overrides.size());
  for (std::size_t i = 0; i < a.exceptional.size(); ++i) {
    const double d = a.exceptional[i] - static_cast<double>(b.values[i]);
    terms.push_back(d * d);
  }
  for (int v : b.tail_overrides) {
    const double d = 1.0 - static_cast<double>(v);
    terms.push_back(d * d);
  }
  for (int v : b.kernel_overrides) {
    const double d = static_cast<double>(v);
    terms.push_back(d * d);
  }
  return sorted_sum(terms);
}

std::pair<ExtendedInt, ExtendedInt> model_index_bounds(const DiagonalModel& a) {
  validate_model(a);
  const ExtendedNat zeros = model_zero_count(a);
  const ExtendedNat positives = model_positive_count(a);
  const ExtendedInt lower = zeros.is_inf()
                                ? ExtendedInt::neg_inf()
                                : ExtendedInt(-static_cast<std::int64_t>(zeros.value()));
  const ExtendedInt upper = positives.is_inf()
                                ? ExtendedInt::pos_inf()
                                : ExtendedInt(static_cast<std::int64_t>(positives.value()));
  return {lower, upper};
}

MinimizerFamily minimize_k(const DiagonalModel& a, int k,
                           std::size_t max_representatives) {
  validate_model(a);
  require_convergent(a, "minimize_k");
  const auto [lower, upper] = model_index_bounds(a);
  if (!lower.contains_as_lower(k, upper))
    throw InfeasibleComponentError(
        k, "index must lie in [" + lower.str() + ", " + upper.str() + "]");

  MinimizerFamily family;
  const SignSequence baseline = baseline_sequence(a);

  if (k == 0) {
    family.kind = FamilyKind::unique;
    family.count = 1;
    family.representatives = {baseline};
    family.value = objective_value(a, baseline);
    return family;
  }

  if (k < 0) {
    const std::size_t need = static_cast<std::size_t>(-k);
    const ZeroPool pool = zero_pool(a);
    family.count = [&] {
      const ExtendedNat combos = binomial_saturating(pool.total(), need);
      if (combos.is_inf()) return ExtendedNat::inf();
      const ExtendedNat signs = pow2_saturating(need);
      return ExtendedNat(mul_saturating(combos.value(), signs.value()));
    }();
    family.kind = family.count.is_inf() ? FamilyKind::infinite : FamilyKind::finite;
    family.description =
        "signs +-1 at any " + std::to_string(need) + " of the " +
        pool.total().str() + " zero positions, 0 at the remaining zeros";

    // Enumerate over the first `window` zero positions: all of them when the
    // pool is finite, a sample otherwise.
    const std::size_t explicit_count = pool.explicit_positions.size();
    std::size_t window;
    std::size_t rep_cap = max_representatives;
    if (pool.total().is_inf()) {
      window = std::max<std::size_t>(explicit_count, need) + 1;
      rep_cap = std::min<std::size_t>(rep_cap, 8);
    } else {
      window = static_cast<std::size_t>(pool.total().value());
    }
    bool capped = false;
    for_each_combination(window, need, [&](const std::vector<std::size_t>& combo) {
      const std::size_t patterns = std::size_t{1} << need;
      for (std::size_t mask = 0; mask < patterns; ++mask) {
        if (family.representatives.size() >= rep_cap) {
          capped = true;
          return false;
        }
        SignSequence rep = baseline;
        for (std::size_t j = 0; j < need; ++j) {
          const int sign = (mask >> j) & 1 ? -1 : 1;
          const std::size_t slot = combo[j];
          if (slot < explicit_count) {
            rep.values[pool.explicit_positions[slot]] = sign;
          } else {
            const std::size_t pad = slot - explicit_count;
            if (rep.kernel_overrides.size() <= pad)
              rep.kernel_overrides.resize(pad + 1, 0);
            rep.kernel_overrides[pad] = sign;
          }
        }
        family.representatives.push_back(std::move(rep));
      }
      return true;
    });
    if (capped && family.kind == FamilyKind::finite)
      family.description += " (representatives truncated)";
    family.value = objective_value(a, family.representatives.front());
    std::sort(family.representatives.begin(), family.representatives.end(),
              sign_sequence_less);
    return family;
  }

  // k > 0: zero out the k lowest positive values. The threshold is the k-th
  // smallest positive value; everything strictly below it is forced, ties at
  // the threshold are free choices.
  const std::size_t need = static_cast<std::size_t>(k);
  const PositivePool pool = positive_pool(a);
  double threshold = 1.0;
  {
    // walk the merged ascending sequence of explicit values and tail ones
    std::size_t taken = 0, i = 0;
    std::uint64_t tail_taken = 0;
    while (taken < need) {
      const bool tail_available =
          pool.tail.is_inf() || tail_taken < pool.tail.value();
      const bool expl_available = i < pool.explicit_sorted.size();
      if (expl_available && (!tail_available || pool.explicit_sorted[i].first <= 1.0)) {
        threshold = pool.explicit_sorted[i].first;
        ++i;
      } else {
        threshold = 1.0;
        ++tail_taken;
      }
      ++taken;
    }
  }

  // Everything strictly below the threshold is forced to zero; a threshold
  // above 1 forces the whole (necessarily finite) ones tail as well.
  std::size_t below = 0;
  for (const auto& [v, pos] : pool.explicit_sorted)
    if (v < threshold) ++below;
  const std::size_t forced_tail = threshold > 1.0 ? pool.tail.value() : 0;
  below += forced_tail;

  std::vector<std::size_t> tie_explicit;  // explicit positions at the threshold
  for (const auto& [v, pos] : pool.explicit_sorted)
    if (v == threshold) tie_explicit.push_back(pos);
  std::sort(tie_explicit.begin(), tie_explicit.end());
  const ExtendedNat tie_tail = threshold == 1.0 ? pool.tail : ExtendedNat(0);
  const ExtendedNat tie_total = ExtendedNat(tie_explicit.size()) + tie_tail;
  const std::size_t choose = need - below;

  family.count = binomial_saturating(tie_total, choose);
  family.kind = family.count.is_inf()
                    ? FamilyKind::infinite
                    : (family.count == ExtendedNat(1) ? FamilyKind::unique
                                                      : FamilyKind::finite);
  if (family.kind != FamilyKind::unique)
    family.description = "zero any " + std::to_string(choose) + " of the " +
                         tie_total.str() + " positions with value " +
                         std::to_string(threshold);

  SignSequence forced = baseline;
  for (const auto& [v, pos] : pool.explicit_sorted)
    if (v < threshold) forced.values[pos] = 0;
  if (forced_tail > 0) forced.tail_overrides.assign(forced_tail, 0);

  std::size_t window;
  std::size_t rep_cap = max_representatives;
  if (tie_total.is_inf()) {
    window = tie_explicit.size() + choose + 1;
    rep_cap = std::min<std::size_t>(rep_cap, 8);
  } else {
    window = static_cast<std::size_t>(tie_total.value());
  }
  bool capped = false;
  for_each_combination(window, choose, [&](const std::vector<std::size_t>& combo) {
    if (family.representatives.size() >= rep_cap) {
      capped = true;
      return false;
    }
    SignSequence rep = forced;
    for (std::size_t slot : combo) {
      if (slot < tie_explicit.size()) {
        rep.values[tie_explicit[slot]] = 0;
      } else {
        const std::size_t t = slot - tie_explicit.size();
        if (rep.tail_overrides.size() <= t) rep.tail_overrides.resize(t + 1, 1);
        rep.tail_overrides[t] = 0;
      }
    }
    family.representatives.push_back(std::move(rep));
    return true;
  });
  if (capped && family.kind == FamilyKind::finite)
    family.description += " (representatives truncated)";
  family.value = objective_value(a, family.representatives.front());
  std::sort(family.representatives.begin(), family.representatives.end(),
            sign_sequence_less);
  return family;
}

MinimizerFamily brute_force_oracle(std::span<const double> a, int k) {
  if (a.size() > 12)
    throw ResourceError("brute_force_oracle: sequence longer than 12 entries");
  for (double v : a)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw DomainError("brute_force_oracle: entries must be finite and >= 0");

  const std::size_t n = a.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= 3;

  MinimizerFamily family;
  family.kind = FamilyKind::none;
  family.count = 0;
  family.value = std::numeric_limits<double>::infinity();

  std::vector<int> b(n, 0);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t rest = code;
    long idx = 0;
    for (std::size_t i = 0; i < n; ++i) {
      b[i] = static_cast<int>(rest % 3) - 1;  // digits map to -1, 0, +1
      rest /= 3;
      if (b[i] == 0 && a[i] > 0.0) ++idx;
      if (b[i] != 0 && a[i] == 0.0) --idx;
    }
    if (idx != k) continue;
    const double value = sequence_objective(a, b);
    if (value < family.value) {
      family.value = value;
      family.representatives.clear();
    }
    if (value == family.value)
      family.representatives.push_back(SignSequence{b, {}, {}});
  }

  if (!family.representatives.empty()) {
    family.count = ExtendedNat(family.representatives.size());
    family.kind = family.representatives.size() == 1 ? FamilyKind::unique
                                                     : FamilyKind::finite;
    std::sort(family.representatives.begin(), family.representatives.end(),
              sign_sequence_less);
  }
  return family;
}

DiagonalModel dense_model(std::vector<double> a) {
  DiagonalModel m;
  m.kernel_dim = ExtendedNat(count_zeros(a));
  m.exceptional = std::move(a);
  m.tail_ones = 0;
  m.cokernel_dim = m.kernel_dim;
  return m;
}

std::vector<double> flatten_model(const DiagonalModel& m, std::size_t cap) {
  validate_model(m);
  if (m.tail_ones.is_inf() || m.kernel_dim.is_inf())
    throw ResourceError("flatten_model: model has an infinite region");
  const std::size_t padding = m.kernel_dim.value() - count_zeros(m.exceptional);
  const std::size_t len = m.exceptional.size() + m.tail_ones.value() + padding;
  if (len > cap)
    throw ResourceError("flatten_model: length " + std::to_string(len) +
                        " exceeds cap " + std::to_string(cap));
  std::vector<double> out = m.exceptional;
  out.insert(out.end(), m.tail_ones.value(), 1.0);
  out.insert(out.end(), padding, 0.0);
  return out;
}

std::vector<int> flatten_sequence(const DiagonalModel& m, const SignSequence& b) {
  validate_model(m);
  validate_sequence(m, b);
  if (m.tail_ones.is_inf() || m.kernel_dim.is_inf())
    throw ResourceError("flatten_sequence: model has an infinite region");
  const std::size_t padding = m.kernel_dim.value() - count_zeros(m.exceptional);
  std::vector<int> out = b.values;
  for (std::size_t i = 0; i < m.tail_ones.value(); ++i)
    out.push_back(i < b.tail_overrides.size() ? b.tail_overrides[i] : 1);
  for (std::size_t i = 0; i < padding; ++i)
    out.push_back(i < b.kernel_overrides.size() ? b.kernel_overrides[i] : 0);
  return out;
}

}  // namespace parsefit
