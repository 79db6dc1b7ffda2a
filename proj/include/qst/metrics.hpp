#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "qst/state.hpp"

namespace qst {

/// A real number or +infinity, kept as an explicit tag.
class ExtendedReal {
 public:
  static ExtendedReal finite(double v) { return ExtendedReal(v, false); }
  static ExtendedReal infinite() { return ExtendedReal(0.0, true); }

  bool is_infinite() const noexcept { return infinite_; }
  bool is_finite() const noexcept { return !infinite_; }
  /// The finite value; throws ArgumentError when infinite.
  double value() const;
  /// The value, or IEEE infinity.
  double as_double() const noexcept;
  /// "inf" or the value with 17 significant digits.
  std::string to_string() const;

  friend ExtendedReal operator+(ExtendedReal a, ExtendedReal b) {
    if (a.infinite_ || b.infinite_) return infinite();
    return finite(a.value_ + b.value_);
  }
  friend bool operator==(const ExtendedReal&, const ExtendedReal&) = default;

 private:
  ExtendedReal(double v, bool inf) : value_(v), infinite_(inf) {}
  double value_;
  bool infinite_;
};

/// Eigenvalues of S2 below this count as zero in the KL support test.
inline constexpr double kKlSupportFloor = 1e-14;
/// S1 mass above this on S2's kernel makes the divergence infinite.
inline constexpr double kKlMassTolerance = 1e-12;

/// ||S1 - S2||_q, q in [1, inf].
double schatten_distance(const DensityMatrix& s1, const DensityMatrix& s2, double q);

/// 2 - 2 tr sqrt(S1^1/2 S2 S1^1/2), clamped to [0, 2].
double bures_hellinger_sq(const DensityMatrix& s1, const DensityMatrix& s2);

/// <S1, log S1 - log S2>, natural log. With `symmetrized`, K(S1||S2) + K(S2||S1).
ExtendedReal quantum_kl(const DensityMatrix& s1, const DensityMatrix& s2, bool symmetrized = false);

/// ||A - B||_2 / m.
double l2_pi_distance(const HermitianMatrix& a, const HermitianMatrix& b, std::size_t m);

/// Slacks of 1/4 ||S1-S2||_1^2 <= H^2 <= min(K(S1||S2), ||S1-S2||_1).
struct InequalityReport {
  double trace_distance = 0.0;  // ||S1 - S2||_1
  double hellinger_sq = 0.0;
  ExtendedReal kl = ExtendedReal::finite(0.0);
  /// H^2 - ||.||_1^2 / 4
  double lower_slack = 0.0;
  /// ||.||_1 - H^2
  double trace_slack = 0.0;
  /// K - H^2; empty when K is infinite (side skipped).
  std::optional<double> kl_slack;

  bool holds(double tol = 1e-8) const {
    return lower_slack >= -tol && trace_slack >= -tol && (!kl_slack || *kl_slack >= -tol);
  }
};

InequalityReport check_distance_inequalities(const DensityMatrix& s1, const DensityMatrix& s2);

/// h(delta) = delta log(1/delta) + (1-delta) log(1/(1-delta)).
double binary_entropy(double delta);

/// (K + h(delta)) / (1 - delta): a bound on K(S'||U) given K(S||U) for the
/// smoothed S = (1-delta) S' + delta I/m. delta in (0, 1).
double kl_bound_after_smoothing(double k_smoothed, double delta);

}  // namespace qst
