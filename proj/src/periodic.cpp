#include "stabcert/periodic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <string>

#include "stabcert/error.hpp"

namespace stabcert {

namespace {

constexpr int kSamples = 4096;
constexpr double kRefineTol = 1e-9;

// Harmonics with the same wave number collapsed; zero terms dropped.
std::map<int, std::pair<double, double>> merged(const std::vector<Harmonic>& hs) {
  std::map<int, std::pair<double, double>> out;
  for (const auto& h : hs) {
    auto& [a, b] = out[h.k];
    a += h.a;
    b += h.b;
  }
  std::erase_if(out, [](const auto& kv) {
    return kv.second.first == 0.0 && kv.second.second == 0.0;
  });
  return out;
}

// Golden-section maximisation of `score` on [lo, hi].
double golden_max(const std::function<double(double)>& score, double lo, double hi) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = score(x1);
  double f2 = score(x2);
  while (hi - lo > kRefineTol) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = score(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = score(x1);
    }
  }
  return std::max({f1, f2, score(0.5 * (lo + hi))});
}

// Maximum of score(f(t)) over one period: dense sampling followed by a
// golden-section refinement around the best sample.
double sampled_max(const PeriodicFn& f, const std::function<double(double)>& transform) {
  const double omega = f.period();
  const double dt = omega / kSamples;
  int best = 0;
  double best_val = transform(f(0.0));
  for (int s = 1; s < kSamples; ++s) {
    const double v = transform(f(s * dt));
    if (v > best_val) {
      best_val = v;
      best = s;
    }
  }
  const double centre = best * dt;
  const double refined =
      golden_max([&](double t) { return transform(f(t)); }, centre - dt, centre + dt);
  return std::max(best_val, refined);
}

}  // namespace

PeriodicFn::PeriodicFn(double c0, std::vector<Harmonic> harmonics, double omega)
    : c0_(c0), harmonics_(std::move(harmonics)), omega_(omega) {
  if (!(omega_ > 0.0) || !std::isfinite(omega_))
    fail(ErrorCode::validation, "period must be finite and > 0, got " + std::to_string(omega_));
  if (!std::isfinite(c0_)) fail(ErrorCode::validation, "constant term is not finite");
  for (const auto& h : harmonics_) {
    if (h.k < 1)
      fail(ErrorCode::validation, "harmonic wave number must be >= 1, got " + std::to_string(h.k));
    if (!std::isfinite(h.a) || !std::isfinite(h.b))
      fail(ErrorCode::validation, "harmonic coefficient is not finite");
  }
}

double PeriodicFn::operator()(double t) const {
  if (harmonics_.empty()) return c0_;
  // Reduce to one period first so that f(t + omega) and f(t) see the same phase.
  double phase = std::fmod(t, omega_) / omega_;
  if (phase < 0.0) phase += 1.0;
  double v = c0_;
  for (const auto& h : harmonics_) {
    const double arg = 2.0 * std::numbers::pi * h.k * phase;
    v += h.a * std::cos(arg) + h.b * std::sin(arg);
  }
  return v;
}

bool PeriodicFn::is_constant() const noexcept {
  return std::all_of(harmonics_.begin(), harmonics_.end(),
                     [](const Harmonic& h) { return h.a == 0.0 && h.b == 0.0; });
}

double sup_value(const PeriodicFn& f) {
  const auto hs = merged(f.harmonics());
  if (hs.empty()) return f.c0();
  if (hs.size() == 1) {
    const auto [a, b] = hs.begin()->second;
    return f.c0() + std::hypot(a, b);
  }
  return sampled_max(f, [](double v) { return v; });
}

double inf_value(const PeriodicFn& f) {
  const auto hs = merged(f.harmonics());
  if (hs.empty()) return f.c0();
  if (hs.size() == 1) {
    const auto [a, b] = hs.begin()->second;
    return f.c0() - std::hypot(a, b);
  }
  return -sampled_max(f, [](double v) { return -v; });
}

double sup_abs(const PeriodicFn& f) {
  const auto hs = merged(f.harmonics());
  if (hs.empty()) return std::abs(f.c0());
  if (hs.size() == 1) {
    const auto [a, b] = hs.begin()->second;
    return std::abs(f.c0()) + std::hypot(a, b);
  }
  return sampled_max(f, [](double v) { return std::abs(v); });
}

}  // namespace stabcert
