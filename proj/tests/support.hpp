#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>

#include "stabcert/matrix.hpp"

namespace testsupport {

using stabcert::Matrix;
using stabcert::Vector;

// STABCERT_SEED overrides the default seed for every randomized test.
inline std::uint64_t seed() {
  if (const char* s = std::getenv("STABCERT_SEED"); s && *s) return std::strtoull(s, nullptr, 10);
  return 12345;
}

inline std::mt19937_64 rng(std::uint64_t salt) { return std::mt19937_64(seed() * 1000003ULL + salt); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

// Determinant by cofactor expansion along the first row.
inline double cofactor_det(const Matrix& m) {
  const std::size_t n = m.rows();
  if (n == 1) return m(0, 0);
  if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  double det = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    Matrix minor(n - 1, n - 1);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 0, k = 0; j < n; ++j)
        if (j != c) minor(i - 1, k++) = m(i, j);
    det += (c % 2 == 0 ? 1.0 : -1.0) * m(0, c) * cofactor_det(minor);
  }
  return det;
}

inline Matrix leading(const Matrix& m, std::size_t k) {
  Matrix out(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) out(i, j) = m(i, j);
  return out;
}

// Best margin -max_i (M x)_i over rays x on the probability simplex sampled
// at the given resolution (interior points only). Supports n = 2 and 3.
inline double grid_best_margin(const Matrix& m, double step = 1e-3) {
  const std::size_t n = m.rows();
  const auto cells = static_cast<int>(std::lround(1.0 / step));
  double best = -INFINITY;
  auto score = [&](const double* x) {
    double worst = -INFINITY;
    for (std::size_t i = 0; i < n; ++i) {
      double r = 0.0;
      for (std::size_t j = 0; j < n; ++j) r += m(i, j) * x[j];
      worst = std::max(worst, r);
    }
    best = std::max(best, -worst);
  };
  if (n == 2) {
    for (int a = 1; a < cells; ++a) {
      const double x[2] = {a * step, 1.0 - a * step};
      score(x);
    }
  } else if (n == 3) {
    for (int a = 1; a < cells; ++a)
      for (int b = 1; a + b < cells; ++b) {
        const double x[3] = {a * step, b * step, 1.0 - (a + b) * step};
        score(x);
      }
  }
  return best;
}

// The margin is concave on the simplex, so a fine pass around the best coarse
// sample catches feasible windows narrower than the coarse step.
inline double refined_best_margin(const Matrix& m, double step = 1e-3) {
  const std::size_t n = m.rows();
  double best = -INFINITY;
  double centre[3] = {0.0, 0.0, 0.0};
  auto eval = [&](const double* x) {
    double worst = -INFINITY;
    for (std::size_t i = 0; i < n; ++i) {
      double r = 0.0;
      for (std::size_t j = 0; j < n; ++j) r += m(i, j) * x[j];
      worst = std::max(worst, r);
    }
    return -worst;
  };
  const int coarse = static_cast<int>(std::lround(1.0 / step));
  auto visit = [&](double a, double b) {
    if (a <= 0.0 || b < 0.0 || a + b >= 1.0 || (n == 3 && b <= 0.0)) return;
    const double x[3] = {a, n == 2 ? 1.0 - a : b, n == 2 ? 0.0 : 1.0 - a - b};
    const double v = eval(x);
    if (v > best) {
      best = v;
      centre[0] = a;
      centre[1] = b;
    }
  };
  if (n == 2) {
    for (int a = 1; a < coarse; ++a) visit(a * step, 0.0);
    const double a0 = centre[0];
    const int fine = 2000;
    for (int k = -fine; k <= fine; ++k) visit(a0 + k * step / 1000.0, 0.0);
  } else if (n == 3) {
    for (int a = 1; a < coarse; ++a)
      for (int b = 1; a + b < coarse; ++b) visit(a * step, b * step);
    const double a0 = centre[0], b0 = centre[1];
    const int fine = 200;
    for (int i = -fine; i <= fine; ++i)
      for (int k = -fine; k <= fine; ++k) visit(a0 + i * step / 100.0, b0 + k * step / 100.0);
  }
  return best;
}

// Root of a monotone increasing function on [lo, hi] by plain bisection.
inline double bisect_root(const std::function<double(double)>& f, double lo, double hi, int iters = 200) {
  for (int k = 0; k < iters; ++k) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

}  // namespace testsupport
