#include "stabcert/polyhedra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "stabcert/error.hpp"

namespace stabcert {

namespace {

constexpr double kPivotEps = 1e-12;
constexpr double kCostEps = 1e-11;
constexpr std::size_t kMaxPivots = 200000;

// Simplex tableau for  maximize c^T y  s.t.  rows of [T | rhs] with a basic
// variable per row. The reduced-cost row is kept in `cost_`, its last entry
// holding minus the current objective.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), t_(rows * (cols + 1), 0.0), basis_(rows), cost_(cols + 1, 0.0) {}

  double& at(std::size_t i, std::size_t j) { return t_[i * (cols_ + 1) + j]; }
  double at(std::size_t i, std::size_t j) const { return t_[i * (cols_ + 1) + j]; }
  double& rhs(std::size_t i) { return at(i, cols_); }
  double rhs(std::size_t i) const { return at(i, cols_); }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void set_objective(std::span<const double> c) {
    for (std::size_t j = 0; j <= cols_; ++j) cost_[j] = j < cols_ ? c[j] : 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
      const double cb = c[basis_[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) cost_[j] -= cb * at(i, j);
    }
  }

  double objective() const { return -cost_[cols_]; }

  void pivot(std::size_t r, std::size_t c) {
    const double p = at(r, c);
    for (std::size_t j = 0; j <= cols_; ++j) at(r, j) /= p;
    at(r, c) = 1.0;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == r) continue;
      const double f = at(i, c);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= cols_; ++j) at(i, j) -= f * at(r, j);
      at(i, c) = 0.0;
    }
    const double f = cost_[c];
    if (f != 0.0) {
      for (std::size_t j = 0; j <= cols_; ++j) cost_[j] -= f * at(r, j);
      cost_[c] = 0.0;
    }
    basis_[r] = c;
  }

  // Runs Bland's rule over columns in [0, allowed_cols).
  LpStatus optimise(std::size_t allowed_cols) {
    for (std::size_t iter = 0; iter < kMaxPivots; ++iter) {
      std::size_t enter = cols_;
      for (std::size_t j = 0; j < allowed_cols; ++j) {
        if (cost_[j] > kCostEps) {
          enter = j;
          break;
        }
      }
      if (enter == cols_) return LpStatus::optimal;

      std::size_t leave = rows_;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < rows_; ++i) {
        const double a = at(i, enter);
        if (a <= kPivotEps) continue;
        const double ratio = std::max(rhs(i), 0.0) / a;
        const double tie = 1e-15 * std::max(1.0, best_ratio);
        if (leave == rows_ || ratio < best_ratio - tie ||
            (ratio <= best_ratio + tie && basis_[i] < basis_[leave])) {
          best_ratio = ratio;
          leave = i;
        }
      }
      if (leave == rows_) return LpStatus::unbounded;
      pivot(leave, enter);
    }
    fail(ErrorCode::internal, "simplex exceeded pivot limit");
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> t_;
  std::vector<std::size_t> basis_;
  std::vector<double> cost_;
};

}  // namespace

LpSolution maximize(const Matrix& A, std::span<const double> b, std::span<const double> c) {
  const std::size_t m = A.rows();
  const std::size_t n = A.cols();
  if (b.size() != m || c.size() != n) fail(ErrorCode::dimension_mismatch, "LP dimensions disagree");
  for (double v : A.data())
    if (!std::isfinite(v)) fail(ErrorCode::domain, "LP matrix has non-finite entries");
  for (double v : b)
    if (!std::isfinite(v)) fail(ErrorCode::domain, "LP right-hand side has non-finite entries");

  std::size_t n_art = 0;
  for (double v : b)
    if (v < 0.0) ++n_art;

  // Columns: structural [0, n), slack [n, n+m), artificial [n+m, n+m+n_art).
  const std::size_t structural_and_slack = n + m;
  Tableau tab(m, structural_and_slack + n_art);
  std::size_t next_art = structural_and_slack;
  for (std::size_t i = 0; i < m; ++i) {
    const double sign = b[i] < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) tab.at(i, j) = sign * A(i, j);
    tab.at(i, n + i) = sign;
    tab.rhs(i) = sign * b[i];
    if (sign < 0.0) {
      tab.at(i, next_art) = 1.0;
      tab.basis()[i] = next_art++;
    } else {
      tab.basis()[i] = n + i;
    }
  }

  double b_scale = 1.0;
  for (double v : b) b_scale = std::max(b_scale, std::abs(v));

  if (n_art > 0) {
    Vector phase1(tab.cols(), 0.0);
    for (std::size_t j = structural_and_slack; j < tab.cols(); ++j) phase1[j] = -1.0;
    tab.set_objective(phase1);
    tab.optimise(tab.cols());
    if (tab.objective() < -1e-9 * b_scale) return {LpStatus::infeasible, {}, 0.0};

    // Drive zero-level artificials out of the basis where possible.
    for (std::size_t i = 0; i < m; ++i) {
      if (tab.basis()[i] < structural_and_slack) continue;
      for (std::size_t j = 0; j < structural_and_slack; ++j) {
        if (std::abs(tab.at(i, j)) > 1e-9) {
          tab.pivot(i, j);
          break;
        }
      }
    }
  }

  Vector phase2(tab.cols(), 0.0);
  std::copy(c.begin(), c.end(), phase2.begin());
  tab.set_objective(phase2);
  if (tab.optimise(structural_and_slack) == LpStatus::unbounded)
    return {LpStatus::unbounded, {}, 0.0};

  LpSolution sol{LpStatus::optimal, Vector(n, 0.0), 0.0};
  for (std::size_t i = 0; i < m; ++i)
    if (tab.basis()[i] < n) sol.x[tab.basis()[i]] = std::max(tab.rhs(i), 0.0);
  for (std::size_t j = 0; j < n; ++j) sol.objective += c[j] * sol.x[j];
  return sol;
}

double margin(const Matrix& m, std::span<const double> x) {
  const Vector y = multiply(m, x);
  double worst = -std::numeric_limits<double>::infinity();
  for (double v : y) worst = std::max(worst, v);
  return -worst;
}

FeasibilityResult solve_strict(const IneqSystem& sys) {
  const Matrix& M = sys.m;
  if (!M.square() || M.rows() == 0) fail(ErrorCode::dimension_mismatch, "inequality system must be square");
  for (double v : M.data())
    if (!std::isfinite(v)) fail(ErrorCode::domain, "inequality system has non-finite entries");

  const std::size_t n = M.rows();
  // Variables: x' = x - 1 >= 0 (n), s+ and s- (margin s = s+ - s-).
  Matrix A(n + 1, n + 2, 0.0);
  Vector b(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      A(i, j) = M(i, j);
      row_sum += M(i, j);
    }
    A(i, n) = 1.0;
    A(i, n + 1) = -1.0;
    b[i] = -row_sum;
  }
  A(n, n) = 1.0;
  b[n] = kSlackCap;
  Vector c(n + 2, 0.0);
  c[n] = 1.0;
  c[n + 1] = -1.0;

  const LpSolution lp = maximize(A, b, c);
  if (lp.status != LpStatus::optimal)
    fail(ErrorCode::internal, "auxiliary feasibility LP did not reach an optimum");

  const double s = lp.x[n] - lp.x[n + 1];
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + lp.x[i];
  const double min_x = *std::min_element(x.begin(), x.end());
  for (double& v : x) v /= min_x;

  FeasibilityResult out;
  if (s > kStrictSlack) {
    const double mu = margin(M, x);
    out.slack = mu;
    out.verdict = mu > kStrictSlack ? Verdict::feasible
                  : mu >= -kStrictSlack ? Verdict::boundary
                                        : Verdict::infeasible;
  } else {
    out.slack = s;
    out.verdict = s >= -kStrictSlack ? Verdict::boundary : Verdict::infeasible;
  }

  out.feasible = sys.strict ? out.verdict == Verdict::feasible : out.verdict != Verdict::infeasible;
  if (out.feasible) out.x = std::move(x);
  return out;
}

FeasibilityResult solve_transpose(const IneqSystem& sys) {
  return solve_strict(IneqSystem{transpose(sys.m), sys.strict});
}

std::optional<Vector> window_center(const Matrix& m, std::size_t ref) {
  const std::size_t n = m.rows();
  if (!m.square() || ref >= n) fail(ErrorCode::invalid_argument, "window_center: bad system or reference index");
  if (n == 1) return Vector{1.0};

  // Free coordinates are all k != ref; x_ref = 1 moves its column to the rhs.
  Matrix A(n, n - 1, 0.0);
  Vector b(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0, c = 0; k < n; ++k)
      if (k != ref) A(i, c++) = m(i, k);
    b[i] = -m(i, ref);
  }
  Vector x(n, 1.0);
  Vector c(n - 1, 0.0);
  for (std::size_t k = 0, col = 0; k < n; ++k) {
    if (k == ref) continue;
    c.assign(n - 1, 0.0);
    c[col] = 1.0;
    const LpSolution hi = maximize(A, b, c);
    if (hi.status != LpStatus::optimal) return std::nullopt;
    c[col] = -1.0;
    const LpSolution lo = maximize(A, b, c);
    if (lo.status != LpStatus::optimal) return std::nullopt;
    x[k] = 0.5 * (hi.x[col] + lo.x[col]);
    ++col;
  }
  const double min_x = *std::min_element(x.begin(), x.end());
  if (!(min_x > 0.0)) return std::nullopt;
  for (double& v : x) v /= min_x;
  if (!(margin(m, x) > kStrictSlack)) return std::nullopt;
  return x;
}

double determinant(const Matrix& m) {
  if (!m.square()) fail(ErrorCode::dimension_mismatch, "determinant of a non-square matrix");
  const std::size_t n = m.rows();
  Matrix lu = m;
  double det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(lu(i, k)) > std::abs(lu(piv, k))) piv = i;
    if (lu(piv, k) == 0.0) return 0.0;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(piv, j));
      det = -det;
    }
    det *= lu(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = lu(i, k) / lu(k, k);
      for (std::size_t j = k; j < n; ++j) lu(i, j) -= f * lu(k, j);
    }
  }
  return det;
}

bool is_m_matrix(const Matrix& c) {
  if (!c.square()) fail(ErrorCode::dimension_mismatch, "M-matrix test needs a square matrix");
  const std::size_t n = c.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && c(i, j) > 0.0) return false;

  for (std::size_t k = 1; k <= n; ++k) {
    Matrix sub(k, k);
    double scale = 0.0;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        sub(i, j) = c(i, j);
        scale = std::max(scale, std::abs(c(i, j)));
      }
    if (scale == 0.0) return false;
    if (!(determinant(sub) > 1e-12 * std::pow(scale, static_cast<double>(k)))) return false;
  }
  return true;
}

}  // namespace stabcert
