#pragma once

#include <vector>

namespace stabcert {

struct Harmonic {
  int k = 1;       ///< wave number, k >= 1
  double a = 0.0;  ///< cosine coefficient
  double b = 0.0;  ///< sine coefficient

  friend bool operator==(const Harmonic&, const Harmonic&) = default;
};

/// Scalar omega-periodic coefficient
///   f(t) = c0 + sum_k [ a_k cos(2 pi k t / omega) + b_k sin(2 pi k t / omega) ].
///
/// Instances are validated on construction (omega > 0, finite coefficients,
/// k >= 1) and immutable afterwards.
class PeriodicFn {
 public:
  PeriodicFn() = default;
  PeriodicFn(double c0, std::vector<Harmonic> harmonics, double omega);

  static PeriodicFn constant(double c0, double omega = 1.0) { return {c0, {}, omega}; }

  double operator()(double t) const;

  double c0() const noexcept { return c0_; }
  const std::vector<Harmonic>& harmonics() const noexcept { return harmonics_; }
  double period() const noexcept { return omega_; }

  /// True when every harmonic coefficient is exactly zero.
  bool is_constant() const noexcept;

  friend bool operator==(const PeriodicFn&, const PeriodicFn&) = default;

 private:
  double c0_ = 0.0;
  std::vector<Harmonic> harmonics_;
  double omega_ = 1.0;
};

/// max over one period of |f(t)|.
double sup_abs(const PeriodicFn& f);
/// min over one period of f(t).
double inf_value(const PeriodicFn& f);
/// max over one period of f(t).
double sup_value(const PeriodicFn& f);

}  // namespace stabcert
