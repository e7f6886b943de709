#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "stabcert/matrix.hpp"
#include "stabcert/periodic.hpp"

namespace stabcert {

/// Built-in activation shapes. Both are globally Lipschitz with constant equal
/// to the slope they are evaluated with.
enum class Activation { identity, saturation };

/// identity: slope * x;  saturation: min(1, max(-1, slope * x)).
double activate(Activation kind, double slope, double x) noexcept;

std::string to_string(Activation kind);
Activation activation_from_string(const std::string& name);

/// Delayed periodic recurrent network
///   du_i/dt = -d_i(t) u_i + sum_j a_ij(t) g_j(u_j(t))
///             + sum_j b_ij(t) f_j(u_j(t - tau_ij)) + I_i(t),
/// with g_j, f_j Lipschitz with constants G_j, F_j.
struct NetworkSpec {
  std::size_t n = 0;
  double omega = 1.0;
  std::vector<PeriodicFn> d;
  Grid<PeriodicFn> a;
  Grid<PeriodicFn> b;
  std::vector<PeriodicFn> inputs;
  Matrix tau;
  Vector G;
  Vector F;
  Activation g_activation = Activation::identity;
  Activation f_activation = Activation::identity;

  /// Checks shapes, shared period, delays and Lipschitz constants. Throws
  /// Error(validation) naming the offending entry.
  void validate() const;

  double tau_max() const;
  /// Smallest strictly positive delay, or 0 when every delay is zero.
  double tau_min_positive() const;
  /// True when every coefficient and input is time-invariant.
  bool is_constant() const;
};

/// All-constant network with zero delays, identity activations and unit
/// Lipschitz constants; d, a, b, inputs given as plain numbers.
NetworkSpec constant_network(const Vector& d, const Matrix& a, const Matrix& b,
                             const Vector& inputs, const Matrix& tau, double omega = 1.0);

struct StarBounds {
  Matrix a_star;
  Matrix b_star;
  Vector i_star;
  Vector d_lower;
};

StarBounds star_bounds(const NetworkSpec& spec);

/// Throws Error(validation) naming the first d_i with inf_t d_i(t) <= 0.
void require_positive_decay(const StarBounds& bounds);

struct WeightedNorm {
  Vector xi;
  double p = 1.0;
};

/// [ (1/n) sum_i xi_i |u_i|^p ]^(1/p)
double weighted_norm(std::span<const double> u, const WeightedNorm& w);

/// Initial function phi on [-span, 0].
class History {
 public:
  enum class Kind { constant, sampled_cubic };

  static History constant(Vector values);
  /// samples[i] holds coordinate i on a uniform grid over [-span, 0]
  /// (first sample at -span, last at 0); at least two samples each.
  static History sampled_cubic(std::vector<Vector> samples, double span);

  Kind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return kind_ == Kind::constant ? values_.size() : samples_.size(); }
  double span() const noexcept { return span_; }

  double operator()(std::size_t i, double s) const;

  /// Throws unless dim() == spec.n and the history covers [-tau_max, 0].
  void validate_for(const NetworkSpec& spec) const;

 private:
  Kind kind_ = Kind::constant;
  Vector values_;
  std::vector<Vector> samples_;
  double span_ = 0.0;
};

}  // namespace stabcert
