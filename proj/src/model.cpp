#include "stabcert/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stabcert/error.hpp"

namespace stabcert {

namespace {

std::string entry(const char* name, std::size_t i) {
  return std::string(name) + "[" + std::to_string(i) + "]";
}

std::string entry(const char* name, std::size_t i, std::size_t j) {
  return std::string(name) + "[" + std::to_string(i) + "][" + std::to_string(j) + "]";
}

void check_period(const PeriodicFn& f, double omega, const std::string& where) {
  if (std::abs(f.period() - omega) > 1e-12 * std::max(1.0, omega))
    fail(ErrorCode::validation, where + ": period " + std::to_string(f.period()) +
                                    " differs from omega " + std::to_string(omega));
}

}  // namespace

double activate(Activation kind, double slope, double x) noexcept {
  const double y = slope * x;
  if (kind == Activation::saturation) return std::clamp(y, -1.0, 1.0);
  return y;
}

std::string to_string(Activation kind) {
  return kind == Activation::identity ? "identity" : "saturation";
}

Activation activation_from_string(const std::string& name) {
  if (name == "identity") return Activation::identity;
  if (name == "saturation") return Activation::saturation;
  fail(ErrorCode::validation, "unknown activation '" + name + "'");
}

void NetworkSpec::validate() const {
  if (n == 0) fail(ErrorCode::validation, "n must be positive");
  if (!(omega > 0.0) || !std::isfinite(omega))
    fail(ErrorCode::validation, "omega must be finite and > 0");
  if (d.size() != n) fail(ErrorCode::validation, "d must have length n");
  if (inputs.size() != n) fail(ErrorCode::validation, "inputs must have length n");
  if (G.size() != n) fail(ErrorCode::validation, "G must have length n");
  if (F.size() != n) fail(ErrorCode::validation, "F must have length n");
  if (a.rows() != n || a.cols() != n) fail(ErrorCode::validation, "a must be n x n");
  if (b.rows() != n || b.cols() != n) fail(ErrorCode::validation, "b must be n x n");
  if (tau.rows() != n || tau.cols() != n) fail(ErrorCode::validation, "tau must be n x n");

  for (std::size_t i = 0; i < n; ++i) {
    check_period(d[i], omega, entry("d", i));
    check_period(inputs[i], omega, entry("inputs", i));
    if (!(G[i] >= 0.0) || !std::isfinite(G[i]))
      fail(ErrorCode::validation, entry("G", i) + " must be finite and >= 0");
    if (!(F[i] >= 0.0) || !std::isfinite(F[i]))
      fail(ErrorCode::validation, entry("F", i) + " must be finite and >= 0");
    for (std::size_t j = 0; j < n; ++j) {
      check_period(a(i, j), omega, entry("a", i, j));
      check_period(b(i, j), omega, entry("b", i, j));
      if (!(tau(i, j) >= 0.0) || !std::isfinite(tau(i, j)))
        fail(ErrorCode::validation, entry("tau", i, j) + " must be finite and >= 0");
    }
  }
}

double NetworkSpec::tau_max() const {
  double m = 0.0;
  for (double t : tau.data()) m = std::max(m, t);
  return m;
}

double NetworkSpec::tau_min_positive() const {
  double m = std::numeric_limits<double>::infinity();
  for (double t : tau.data())
    if (t > 0.0) m = std::min(m, t);
  return std::isfinite(m) ? m : 0.0;
}

bool NetworkSpec::is_constant() const {
  auto constant = [](const PeriodicFn& f) { return f.is_constant(); };
  return std::all_of(d.begin(), d.end(), constant) &&
         std::all_of(inputs.begin(), inputs.end(), constant) &&
         std::all_of(a.data().begin(), a.data().end(), constant) &&
         std::all_of(b.data().begin(), b.data().end(), constant);
}

NetworkSpec constant_network(const Vector& d, const Matrix& a, const Matrix& b,
                             const Vector& inputs, const Matrix& tau, double omega) {
  NetworkSpec s;
  s.n = d.size();
  s.omega = omega;
  s.a = Grid<PeriodicFn>(a.rows(), a.cols());
  s.b = Grid<PeriodicFn>(b.rows(), b.cols());
  for (double v : d) s.d.push_back(PeriodicFn::constant(v, omega));
  for (double v : inputs) s.inputs.push_back(PeriodicFn::constant(v, omega));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) s.a(i, j) = PeriodicFn::constant(a(i, j), omega);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) s.b(i, j) = PeriodicFn::constant(b(i, j), omega);
  s.tau = tau;
  s.G = Vector(s.n, 1.0);
  s.F = Vector(s.n, 1.0);
  s.validate();
  return s;
}

StarBounds star_bounds(const NetworkSpec& spec) {
  spec.validate();
  const std::size_t n = spec.n;
  StarBounds out{Matrix(n, n), Matrix(n, n), Vector(n), Vector(n)};
  for (std::size_t i = 0; i < n; ++i) {
    out.i_star[i] = sup_abs(spec.inputs[i]);
    out.d_lower[i] = inf_value(spec.d[i]);
    for (std::size_t j = 0; j < n; ++j) {
      out.a_star(i, j) = sup_abs(spec.a(i, j));
      out.b_star(i, j) = sup_abs(spec.b(i, j));
    }
  }
  return out;
}

void require_positive_decay(const StarBounds& bounds) {
  for (std::size_t i = 0; i < bounds.d_lower.size(); ++i)
    if (!(bounds.d_lower[i] > 0.0))
      fail(ErrorCode::validation, "coefficient " + entry("d", i) + " has inf_t d(t) = " +
                                      std::to_string(bounds.d_lower[i]) +
                                      " <= 0; stability criteria need a positive lower bound");
}

double weighted_norm(std::span<const double> u, const WeightedNorm& w) {
  if (u.size() != w.xi.size() || u.empty())
    fail(ErrorCode::dimension_mismatch, "weighted_norm: vector and weight lengths differ");
  if (!(w.p >= 1.0)) fail(ErrorCode::domain, "weighted_norm: p must be >= 1");
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!(w.xi[i] > 0.0)) fail(ErrorCode::domain, "weighted_norm: weights must be positive");
    acc += w.xi[i] * std::pow(std::abs(u[i]), w.p);
  }
  return std::pow(acc / static_cast<double>(u.size()), 1.0 / w.p);
}

History History::constant(Vector values) {
  History h;
  h.kind_ = Kind::constant;
  for (double v : values)
    if (!std::isfinite(v)) fail(ErrorCode::validation, "history value is not finite");
  h.values_ = std::move(values);
  h.span_ = std::numeric_limits<double>::infinity();
  return h;
}

History History::sampled_cubic(std::vector<Vector> samples, double span) {
  if (!(span > 0.0) || !std::isfinite(span))
    fail(ErrorCode::validation, "sampled history span must be finite and > 0");
  for (const auto& s : samples) {
    if (s.size() < 2) fail(ErrorCode::validation, "sampled history needs >= 2 samples per coordinate");
    for (double v : s)
      if (!std::isfinite(v)) fail(ErrorCode::validation, "history value is not finite");
  }
  History h;
  h.kind_ = Kind::sampled_cubic;
  h.samples_ = std::move(samples);
  h.span_ = span;
  return h;
}

double History::operator()(std::size_t i, double s) const {
  if (kind_ == Kind::constant) return values_[i];

  // Catmull-Rom cubic Hermite: C1, interpolating, one-sided slopes at the ends.
  const Vector& y = samples_[i];
  const std::size_t m = y.size();
  const double dx = span_ / static_cast<double>(m - 1);
  if (s < -span_ * (1.0 + 1e-12) || s > 1e-12 * span_)
    fail(ErrorCode::invalid_argument, "history evaluated outside [-span, 0]");
  double x = (s + span_) / dx;
  x = std::clamp(x, 0.0, static_cast<double>(m - 1));
  std::size_t k = std::min(static_cast<std::size_t>(x), m - 2);
  const double u = x - static_cast<double>(k);
  auto slope = [&](std::size_t idx) {
    if (idx == 0) return y[1] - y[0];
    if (idx == m - 1) return y[m - 1] - y[m - 2];
    return 0.5 * (y[idx + 1] - y[idx - 1]);
  };
  const double m0 = slope(k);
  const double m1 = slope(k + 1);
  const double u2 = u * u;
  const double u3 = u2 * u;
  return (2 * u3 - 3 * u2 + 1) * y[k] + (u3 - 2 * u2 + u) * m0 + (-2 * u3 + 3 * u2) * y[k + 1] +
         (u3 - u2) * m1;
}

void History::validate_for(const NetworkSpec& spec) const {
  if (dim() != spec.n)
    fail(ErrorCode::dimension_mismatch, "history has " + std::to_string(dim()) +
                                            " coordinates, network has " + std::to_string(spec.n));
  if (kind_ == Kind::sampled_cubic && span_ < spec.tau_max() * (1.0 - 1e-12))
    fail(ErrorCode::validation, "history span " + std::to_string(span_) +
                                    " shorter than tau_max " + std::to_string(spec.tau_max()));
}

}  // namespace stabcert
