#include "stabcert/ddesim.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "stabcert/error.hpp"

namespace stabcert {

namespace {

constexpr double kGridTol = 1e-12;
constexpr double kBlowUp = 1e100;

std::size_t grid_count(double length, double h, const char* what) {
  const double ratio = length / h;
  const double k = std::round(ratio);
  if (std::abs(k * h - length) > kGridTol * std::max(1.0, std::abs(length)))
    fail(ErrorCode::invalid_argument,
         std::string("step size does not divide ") + what + " (" + std::to_string(length) + ")");
  return static_cast<std::size_t>(k);
}

// Coefficients of the right-hand side frozen at one time.
struct Coefficients {
  Vector d, inputs;
  Matrix a, b;

  Coefficients(const NetworkSpec& s, double t) : d(s.n), inputs(s.n), a(s.n, s.n), b(s.n, s.n) {
    for (std::size_t i = 0; i < s.n; ++i) {
      d[i] = s.d[i](t);
      inputs[i] = s.inputs[i](t);
      for (std::size_t j = 0; j < s.n; ++j) {
        a(i, j) = s.a(i, j)(t);
        b(i, j) = s.b(i, j)(t);
      }
    }
  }
};

}  // namespace

double Trajectory::hermite(std::size_t i, std::size_t cell, double theta) const {
  const double y0 = samples_[cell * n_ + i];
  const double y1 = samples_[(cell + 1) * n_ + i];
  const double f0 = derivs_[cell * n_ + i];
  const double f1 = derivs_[(cell + 1) * n_ + i];
  const double t2 = theta * theta;
  const double t3 = t2 * theta;
  return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + theta) * h_ * f0 + (-2 * t3 + 3 * t2) * y1 +
         (t3 - t2) * h_ * f1;
}

double Trajectory::value(std::size_t i, double t) const {
  if (t < 0.0) return (*history_)(i, t);
  const double x = t / h_;
  const double k = std::round(x);
  if (std::abs(x - k) < 1e-9 && k <= static_cast<double>(steps_))
    return samples_[static_cast<std::size_t>(k) * n_ + i];
  if (x > static_cast<double>(steps_) + 1e-9)
    fail(ErrorCode::invalid_argument, "trajectory evaluated beyond t_end");
  const std::size_t cell = std::min(static_cast<std::size_t>(x), steps_ - 1);
  return hermite(i, cell, x - static_cast<double>(cell));
}

void Trajectory::write_csv(std::ostream& os) const {
  os << "t";
  for (std::size_t i = 0; i < n_; ++i) os << ",u" << (i + 1);
  os << '\n';
  std::ostringstream line;
  line << std::setprecision(17);
  for (std::size_t k = 0; k <= steps_; ++k) {
    line.str("");
    line << time(k);
    for (std::size_t i = 0; i < n_; ++i) line << ',' << samples_[k * n_ + i];
    os << line.str() << '\n';
  }
}

Trajectory simulate(const NetworkSpec& spec, const History& hist, double t_end, double h) {
  spec.validate();
  hist.validate_for(spec);
  if (!(h > 0.0) || !std::isfinite(h)) fail(ErrorCode::invalid_argument, "step size must be positive");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) fail(ErrorCode::invalid_argument, "t_end must be positive");
  const double tau_min = spec.tau_min_positive();
  if (tau_min > 0.0 && h > tau_min * (1.0 + kGridTol))
    fail(ErrorCode::invalid_argument, "step size " + std::to_string(h) +
                                          " exceeds the smallest positive delay " + std::to_string(tau_min));
  grid_count(spec.omega, h, "omega");
  const std::size_t steps = grid_count(t_end, h, "t_end");
  if (steps == 0) fail(ErrorCode::invalid_argument, "t_end shorter than one step");

  Trajectory tr;
  tr.spec_ = std::make_shared<const NetworkSpec>(spec);
  tr.bounds_ = std::make_shared<const StarBounds>(star_bounds(spec));
  tr.history_ = std::make_shared<const History>(hist);
  const std::size_t n = spec.n;
  tr.n_ = n;
  tr.steps_ = steps;
  tr.h_ = h;
  tr.samples_.assign((steps + 1) * n, 0.0);
  tr.derivs_.assign((steps + 1) * n, 0.0);

  // Delayed value u_j(s) using only cells whose end derivatives are known.
  auto past = [&](std::size_t j, double s, std::size_t known_cells) {
    if (s < 0.0 || known_cells == 0) return hist(j, std::min(s, 0.0));
    const double x = s / h;
    const std::size_t cell = std::min(static_cast<std::size_t>(std::max(x, 0.0)), known_cells - 1);
    return tr.hermite(j, cell, x - static_cast<double>(cell));
  };

  auto rhs = [&](double t, const Coefficients& co, std::span<const double> u, std::size_t known_cells,
                 std::span<double> out) {
    for (std::size_t i = 0; i < n; ++i) {
      double v = -co.d[i] * u[i] + co.inputs[i];
      for (std::size_t j = 0; j < n; ++j) {
        if (co.a(i, j) != 0.0) v += co.a(i, j) * activate(spec.g_activation, spec.G[j], u[j]);
        if (co.b(i, j) != 0.0) {
          const double tau = spec.tau(i, j);
          const double delayed = tau > 0.0 ? past(j, t - tau, known_cells) : u[j];
          v += co.b(i, j) * activate(spec.f_activation, spec.F[j], delayed);
        }
      }
      out[i] = v;
    }
  };

  for (std::size_t i = 0; i < n; ++i) tr.samples_[i] = hist(i, 0.0);

  Vector k1(n), k2(n), k3(n), k4(n), stage(n);
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = tr.time(k);
    std::span<const double> y(tr.samples_.data() + k * n, n);
    const Coefficients c0(spec, t);
    const Coefficients c_half(spec, t + 0.5 * h);
    const Coefficients c1(spec, t + h);

    // Lookups from t_k reach back at least one step, so cells before k-1 suffice.
    rhs(t, c0, y, k == 0 ? 0 : k - 1, k1);
    std::copy(k1.begin(), k1.end(), tr.derivs_.begin() + static_cast<std::ptrdiff_t>(k * n));
    for (std::size_t i = 0; i < n; ++i) stage[i] = y[i] + 0.5 * h * k1[i];
    rhs(t + 0.5 * h, c_half, stage, k, k2);
    for (std::size_t i = 0; i < n; ++i) stage[i] = y[i] + 0.5 * h * k2[i];
    rhs(t + 0.5 * h, c_half, stage, k, k3);
    for (std::size_t i = 0; i < n; ++i) stage[i] = y[i] + h * k3[i];
    rhs(t + h, c1, stage, k, k4);

    double* next = tr.samples_.data() + (k + 1) * n;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      if (!std::isfinite(next[i]) || std::abs(next[i]) > kBlowUp)
        fail(ErrorCode::simulation, "solution diverged at t = " + std::to_string(t + h));
    }
  }
  {
    const Coefficients c_end(spec, tr.t_end());
    std::span<const double> y(tr.samples_.data() + steps * n, n);
    Vector last(n);
    rhs(tr.t_end(), c_end, y, steps - 1, last);
    std::copy(last.begin(), last.end(), tr.derivs_.begin() + static_cast<std::ptrdiff_t>(steps * n));
  }
  return tr;
}

SimReport period_map_report(const Trajectory& traj, double omega, int periods) {
  if (periods < 3) fail(ErrorCode::invalid_argument, "period map report needs J >= 3");
  const double h = traj.step();
  const std::size_t per = grid_count(omega, h, "omega");
  const double tau_max = traj.spec().tau_max();
  const auto offset = static_cast<std::size_t>(std::ceil(tau_max / h - 1e-9));
  const auto J = static_cast<std::size_t>(periods);
  if (offset + (J + 1) * per > traj.steps())
    fail(ErrorCode::invalid_argument, "trajectory too short for " + std::to_string(periods) +
                                          " periods after tau_max");

  const std::size_t n = traj.dim();
  SimReport rep;
  rep.t_start = traj.time(offset);
  rep.diffs.resize(J, 0.0);
  for (std::size_t j = 0; j < J; ++j) {
    double d = 0.0;
    for (std::size_t k = 0; k < per; ++k) {
      const auto a = traj.state(offset + j * per + k);
      const auto b = traj.state(offset + (j + 1) * per + k);
      for (std::size_t i = 0; i < n; ++i) d = std::max(d, std::abs(b[i] - a[i]));
    }
    rep.diffs[j] = d;
  }

  for (std::size_t k = 0; k < per; ++k) {
    const std::size_t idx = offset + J * per + k;
    rep.v_times.push_back(traj.time(idx));
    const auto s = traj.state(idx);
    rep.v_samples.emplace_back(s.begin(), s.end());
  }

  rep.saturated = std::any_of(rep.diffs.begin(), rep.diffs.end(), [](double d) { return d < kSaturatedDiff; });
  if (rep.saturated) return rep;

  for (std::size_t j = 0; j + 1 < J; ++j) rep.ratios.push_back(rep.diffs[j + 1] / rep.diffs[j]);
  const std::size_t take = std::min((J + 1) / 2, rep.ratios.size());
  double log_sum = 0.0;
  for (std::size_t r = rep.ratios.size() - take; r < rep.ratios.size(); ++r) log_sum += std::log(rep.ratios[r]);
  rep.eps_hat = -(log_sum / static_cast<double>(take)) / omega;
  return rep;
}

double orbit_variation(const SimReport& report) {
  if (report.v_samples.empty()) return 0.0;
  const std::size_t n = report.v_samples.front().size();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& v : report.v_samples) {
      lo = std::min(lo, v[i]);
      hi = std::max(hi, v[i]);
    }
    worst = std::max(worst, hi - lo);
  }
  return worst;
}

double lyapunov_value(const Trajectory& traj, double t, const Certificate& cert) {
  const NetworkSpec& spec = traj.spec();
  const std::size_t n = spec.n;
  if (cert.weights.size() != n) fail(ErrorCode::dimension_mismatch, "certificate size differs from network");
  const double omega = spec.omega;
  const double tau_max = spec.tau_max();
  const double h = traj.step();
  if (t - tau_max < -1e-12 * std::max(1.0, t) || t + omega > traj.t_end() + 1e-9 * h)
    fail(ErrorCode::invalid_argument, "trajectory does not span [t - tau_max, t + omega]");

  const double p = cert.exps && !is_l1_kind(cert.kind) ? cert.exps->p : 1.0;
  const double eps = cert.epsilon;
  auto w_pow = [&](std::size_t i, double y) {
    const double w = std::exp(eps * y) * (traj.value(i, y + omega) - traj.value(i, y));
    return std::pow(std::abs(w), p);
  };
  // Simpson on each grid cell (or partial cell) of [lo, hi].
  auto integral = [&](std::size_t j, double lo, double hi) {
    double acc = 0.0;
    double x0 = lo;
    while (x0 < hi - 1e-15 * std::max(1.0, hi)) {
      double x1 = (std::floor(x0 / h + 1e-9) + 1.0) * h;
      if (x1 > hi) x1 = hi;
      acc += (x1 - x0) / 6.0 * (w_pow(j, x0) + 4.0 * w_pow(j, 0.5 * (x0 + x1)) + w_pow(j, x1));
      x0 = x1;
    }
    return acc;
  };

  const StarBounds& sb = traj.bounds();
  double value = 0.0;
  for (std::size_t i = 0; i < n; ++i) value += cert.weights[i] * w_pow(i, t);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double coeff = cert.weights[i] * spec.F[j] * sb.b_star(i, j);
      const double tau = spec.tau(i, j);
      if (coeff == 0.0 || tau == 0.0) continue;
      value += p * coeff * std::exp(eps * tau) * integral(j, t - tau, t);
    }
  }
  return value;
}

}  // namespace stabcert
