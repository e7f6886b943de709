#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "stabcert/criteria.hpp"
#include "stabcert/model.hpp"

namespace stabcert {

/// Fixed-step solution of the network on the grid t_k = k h, k = 0..steps,
/// with cubic Hermite dense output between grid points and the initial
/// history before t = 0. Immutable once built.
class Trajectory {
 public:
  double step() const noexcept { return h_; }
  double t0() const noexcept { return 0.0; }
  double t_end() const noexcept { return h_ * static_cast<double>(steps_); }
  std::size_t steps() const noexcept { return steps_; }
  std::size_t dim() const noexcept { return n_; }
  double time(std::size_t k) const noexcept { return h_ * static_cast<double>(k); }

  std::span<const double> state(std::size_t k) const { return {samples_.data() + k * n_, n_}; }
  std::span<const double> derivative(std::size_t k) const { return {derivs_.data() + k * n_, n_}; }

  /// u_i(t) for any t <= t_end (history for t < 0).
  double value(std::size_t i, double t) const;

  const NetworkSpec& spec() const noexcept { return *spec_; }
  const StarBounds& bounds() const noexcept { return *bounds_; }

  /// CSV with header t,u1,...,un and one row per grid point (17 significant digits).
  void write_csv(std::ostream& os) const;

 private:
  friend Trajectory simulate(const NetworkSpec&, const History&, double, double);

  double hermite(std::size_t i, std::size_t cell, double theta) const;

  std::shared_ptr<const NetworkSpec> spec_;
  std::shared_ptr<const StarBounds> bounds_;
  std::shared_ptr<const History> history_;
  std::size_t n_ = 0;
  std::size_t steps_ = 0;
  double h_ = 0.0;
  std::vector<double> samples_;
  std::vector<double> derivs_;
};

/// Classic RK4 on the delay system. Requires h <= smallest positive delay and
/// h dividing both omega and t_end (to 1e-12). Zero delays use the current
/// stage value. Throws Error(simulation) with the blow-up time on divergence.
Trajectory simulate(const NetworkSpec& spec, const History& hist, double t_end, double h);

struct SimReport {
  /// D_j = max over one period of max_i |u_i(t + (j+1) omega) - u_i(t + j omega)|.
  std::vector<double> diffs;
  /// D_{j+1} / D_j; empty when saturated.
  std::vector<double> ratios;
  /// -ln(geometric mean of the last ceil(J/2) ratios) / omega.
  std::optional<double> eps_hat;
  /// Some D_j < 1e-14: already converged, no rate estimate.
  bool saturated = false;
  /// Start of the analysed window (>= tau_max, on the grid).
  double t_start = 0.0;
  /// Grid times and states of the last compared period (periodic-orbit estimate).
  std::vector<double> v_times;
  std::vector<Vector> v_samples;
};

inline constexpr double kSaturatedDiff = 1e-14;

/// Period-map diagnostics over J >= 3 periods starting at the first grid
/// point at or after tau_max. Needs the trajectory to span (J+1) omega + tau_max.
SimReport period_map_report(const Trajectory& traj, double omega, int periods);

/// Largest max_i v_i - min_i v_i over the periodic-orbit samples.
double orbit_variation(const SimReport& report);

/// L(t) = sum_i xi_i |w_i(t)|^p
///        + p sum_{i,j} xi_i F_j |b*_ij| e^{eps tau_ij} int_{t - tau_ij}^t |w_j(y)|^p dy
/// with w_i(t) = e^{eps t} (u_i(t + omega) - u_i(t)). p = 1 for L1 certificates.
double lyapunov_value(const Trajectory& traj, double t, const Certificate& cert);

}  // namespace stabcert
