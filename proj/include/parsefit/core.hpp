#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace parsefit {

using Scalar = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape mismatch between operands.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Input outside an operation's domain (non-unitary where unitary is required,
/// invalid model fields, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numeric routine failed or two independent computations of the same
/// integer disagreed.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Frame whose synthesis operator is zero: no positive lower frame bound.
class DegenerateFrameError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Component index outside the admissible interval.
class InfeasibleComponentError : public DomainError {
 public:
  InfeasibleComponentError(int k, const std::string& bound)
      : DomainError("component index " + std::to_string(k) +
                    " infeasible: " + bound),
        k_(k) {}
  int component() const { return k_; }

 private:
  int k_;
};

/// Enumeration size cap exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Two Parseval frames lie in different connected components.
class ComponentMismatchError : public Error {
 public:
  ComponentMismatchError(int kx, int ky)
      : Error("frames lie in different connected components: index " +
              std::to_string(kx) + " vs " + std::to_string(ky)),
        kx_(kx),
        ky_(ky) {}
  int first() const { return kx_; }
  int second() const { return ky_; }

 private:
  int kx_;
  int ky_;
};

// ---------------------------------------------------------------------------
// Tolerances
// ---------------------------------------------------------------------------

/// Numeric tolerance policy. The rank/group/commute entries are relative
/// coefficients, scaled by the data (see the *_for helpers); the rest are
/// absolute.
struct Tolerances {
  double rank_rel = 1e-10;
  double group_rel = 1e-8;
  double unitary = 1e-8;
  double recon = 1e-8;
  double commute_rel = 1e-8;
  double half = 1e-9;  // snap window around the 1/2 threshold
  double tie = 1e-9;   // cross-component tie detection

  double rank_for(double s_max) const { return rank_rel * std::max(1.0, s_max); }
  double group_for(double s_max) const { return group_rel * std::max(1.0, s_max); }
  double commute_for(double f_norm) const { return commute_rel * (f_norm + 1.0); }
};

// ---------------------------------------------------------------------------
// Extended naturals / integers (value or infinity)
// ---------------------------------------------------------------------------

/// Natural number or +infinity. Arithmetic saturates at infinity.
class ExtendedNat {
 public:
  constexpr ExtendedNat() = default;
  constexpr ExtendedNat(std::uint64_t v) : v_(v) {}  // NOLINT: implicit by design
  static constexpr ExtendedNat inf() { return ExtendedNat(kInf, true); }

  constexpr bool is_inf() const { return v_ == kInf; }
  std::uint64_t value() const {
    if (is_inf()) throw DomainError("extended natural is infinite");
    return v_;
  }

  friend constexpr bool operator==(ExtendedNat a, ExtendedNat b) { return a.v_ == b.v_; }
  friend constexpr bool operator!=(ExtendedNat a, ExtendedNat b) { return !(a == b); }
  friend constexpr bool operator<(ExtendedNat a, ExtendedNat b) { return a.v_ < b.v_; }
  friend constexpr bool operator<=(ExtendedNat a, ExtendedNat b) { return a.v_ <= b.v_; }
  friend constexpr bool operator>=(ExtendedNat a, ExtendedNat b) { return b <= a; }

  friend constexpr ExtendedNat operator+(ExtendedNat a, ExtendedNat b) {
    if (a.is_inf() || b.is_inf()) return inf();
    return ExtendedNat(a.v_ + b.v_);
  }
  friend constexpr ExtendedNat min(ExtendedNat a, ExtendedNat b) { return a < b ? a : b; }

  std::string str() const { return is_inf() ? "inf" : std::to_string(v_); }

 private:
  static constexpr std::uint64_t kInf = std::numeric_limits<std::uint64_t>::max();
  constexpr ExtendedNat(std::uint64_t v, bool) : v_(v) {}
  std::uint64_t v_ = 0;
};

/// Integer or one of the two infinities.
class ExtendedInt {
 public:
  constexpr ExtendedInt() = default;
  constexpr ExtendedInt(std::int64_t v) : kind_(Kind::finite), v_(v) {}  // NOLINT
  static constexpr ExtendedInt neg_inf() { return ExtendedInt(Kind::neg_infinite); }
  static constexpr ExtendedInt pos_inf() { return ExtendedInt(Kind::pos_infinite); }

  constexpr bool is_finite() const { return kind_ == Kind::finite; }
  constexpr bool is_neg_inf() const { return kind_ == Kind::neg_infinite; }
  constexpr bool is_pos_inf() const { return kind_ == Kind::pos_infinite; }
  std::int64_t value() const {
    if (!is_finite()) throw DomainError("extended integer is infinite");
    return v_;
  }

  friend constexpr bool operator==(ExtendedInt a, ExtendedInt b) {
    return a.kind_ == b.kind_ && (a.kind_ != Kind::finite || a.v_ == b.v_);
  }
  friend constexpr bool operator!=(ExtendedInt a, ExtendedInt b) { return !(a == b); }
  /// a <= b in the extended order.
  friend constexpr bool operator<=(ExtendedInt a, ExtendedInt b) {
    if (a.is_neg_inf() || b.is_pos_inf()) return true;
    if (a.is_pos_inf()) return b.is_pos_inf();
    if (b.is_neg_inf()) return false;
    return a.v_ <= b.v_;
  }

  /// True when the finite integer k lies in [*this, hi].
  bool contains_as_lower(std::int64_t k, ExtendedInt hi) const {
    return *this <= ExtendedInt(k) && ExtendedInt(k) <= hi;
  }

  std::string str() const {
    if (is_neg_inf()) return "-inf";
    if (is_pos_inf()) return "inf";
    return std::to_string(v_);
  }

 private:
  enum class Kind : std::uint8_t { neg_infinite, finite, pos_infinite };
  constexpr explicit ExtendedInt(Kind k) : kind_(k) {}
  Kind kind_ = Kind::finite;
  std::int64_t v_ = 0;
};

// ---------------------------------------------------------------------------
// Small matrix helpers
// ---------------------------------------------------------------------------

inline bool all_finite(const Matrix& m) {
  return m.allFinite();
}

inline void require_finite(const Matrix& m, const char* what) {
  if (!all_finite(m)) throw DomainError(std::string(what) + ": non-finite entries");
}

inline void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError(std::string(what) + ": shape mismatch (" +
                         std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                         " vs " + std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()) + ")");
}

}  // namespace parsefit
