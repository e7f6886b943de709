#pragma once

#include <optional>
#include <span>

#include "stabcert/matrix.hpp"

namespace stabcert {

// ---------------------------------------------------------------------------
// Dense linear programming

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  Vector x;
  double objective = 0.0;
};

/// maximize c^T x  subject to  A x <= b,  x >= 0.
///
/// Two-phase tableau simplex with Bland's smallest-index rule, so it cannot
/// cycle. Right-hand sides of either sign are accepted. Intended for the
/// small dense systems built here (tens to a few hundred variables).
LpSolution maximize(const Matrix& A, std::span<const double> b, std::span<const double> c);

// ---------------------------------------------------------------------------
// Strict feasibility of homogeneous systems  M x < 0,  x > 0

/// Row i of `m` holds the coefficients of the i-th inequality in the weight
/// vector. `strict` selects whether a zero margin is acceptable.
struct IneqSystem {
  Matrix m;
  bool strict = true;
};

enum class Verdict { feasible, boundary, infeasible };

struct FeasibilityResult {
  bool feasible = false;
  Verdict verdict = Verdict::infeasible;
  /// Positive weights normalised to min_i x_i = 1; empty unless feasible.
  Vector x;
  /// Feasible: -max_i (M x)_i recomputed on the normalised x.
  /// Otherwise: the optimal margin of the auxiliary LP (<= threshold).
  double slack = 0.0;
};

/// Margin below which a system is not strictly feasible.
inline constexpr double kStrictSlack = 1e-9;
/// Upper bound on the LP margin variable.
inline constexpr double kSlackCap = 1.0;

/// Maximises s subject to (M x)_i + s <= 0, x_i >= 1, s <= kSlackCap. In
/// strict mode feasible iff the re-checked margin exceeds kStrictSlack; in
/// non-strict mode a margin within [-kStrictSlack, kStrictSlack] is accepted.
FeasibilityResult solve_strict(const IneqSystem& sys);

/// solve_strict applied to M^T: finds eta > 0 with M^T eta < 0.
FeasibilityResult solve_transpose(const IneqSystem& sys);

/// Centre of the bounding box of {x >= 0 : M x <= 0, x_ref = 1}, each
/// coordinate range found by LP, normalised to min x = 1. nullopt when the
/// box is unbounded or empty, or its centre is not strictly feasible. For
/// n = 2 this is the midpoint of the admissible ratio window.
std::optional<Vector> window_center(const Matrix& m, std::size_t ref);

/// -max_i (M x)_i evaluated directly.
double margin(const Matrix& m, std::span<const double> x);

// ---------------------------------------------------------------------------
// M-matrices

/// Determinant by LU with partial pivoting.
double determinant(const Matrix& m);

/// Non-positive off-diagonal entries and every leading principal minor
/// greater than 1e-12 * (max |entry| of that submatrix)^k.
bool is_m_matrix(const Matrix& c);

}  // namespace stabcert
