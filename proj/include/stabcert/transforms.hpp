#pragma once

#include <string>
#include <vector>

#include "stabcert/criteria.hpp"
#include "stabcert/matrix.hpp"
#include "stabcert/model.hpp"

namespace stabcert {

/// Abstract comparison data: self-decay c_i, coupling magnitudes c_ij and
/// d_ij, delay factors e_ij >= 1 and Lipschitz constants G_i, F_i.
struct ComparisonProblem {
  Vector c;
  Matrix cmat;
  Matrix dmat;
  Matrix emat;
  Vector G;
  Vector F;

  std::size_t n() const noexcept { return c.size(); }
  void validate() const;
};

struct YoungPair {
  double lhs = 0.0;  ///< a b
  double rhs = 0.0;  ///< (a eps)^p / p + (b / eps)^q / q
};

/// Throws Error(domain) unless a, b, eps > 0 and p > 1.
YoungPair young(double a, double b, double eps, double p);

/// The eps for which (a eps)^p = (b / eps)^q, i.e. Young's inequality is tight.
double young_equality_eps(double a, double b, double p);

/// Row i: -c_i theta_i + G_i sum_{j!=i} theta_j c_ji + F_i sum_{j!=i} theta_j d_ji e_ji.
Matrix l1_comparison_matrix(const ComparisonProblem& prob);

/// Row i of the L^p comparison inequality in xi:
///   m_ii = -c_i + (1/q) sum_{j!=i} c_ij^{(1-alpha_ij) q} G_j + (1/q) sum_{j!=i} d_ij^{(1-beta_ij) q} e_ij F_j
///   m_ij = (1/p) c_ji^{alpha_ji p} G_i + (1/p) d_ji^{beta_ji p} e_ji F_i     (i != j)
Matrix lp_comparison_matrix(const ComparisonProblem& prob, const ExponentParams& exps);

struct LpToL1Result {
  Vector theta;  ///< satisfies the L^1 comparison rows strictly
  Vector eta;    ///< M^T eta < 0 for the L^p matrix M
  Vector zeta;   ///< eta^(1/p)
  double slack = 0.0;
};

/// Converts an L^p witness (xi, alpha, beta, p > 1) into L^1 weights theta.
LpToL1Result lp_to_l1(const ComparisonProblem& prob, const Vector& xi, const ExponentParams& exps);

struct L1ToLpResult {
  Vector xi;
  ExponentParams exps;  ///< p, alpha*, beta*
  Vector zeta;
  Vector eta;  ///< zeta^p
  double slack = 0.0;
  /// True when theta itself solved the transposed system and was used as zeta.
  bool zeta_is_theta = false;
  /// Entries where the log base was 0 or 1 and the exponent defaulted to 1/p.
  std::vector<std::string> degenerate;
};

/// Converts L^1 weights theta into an L^p witness with the exponents that
/// make the Young splitting exact.
L1ToLpResult l1_to_lp(const ComparisonProblem& prob, const Vector& theta, double p);

struct Instantiation {
  ComparisonProblem problem;
  /// Per i: (1/p)|b_ii|^{beta_ii p} + (1/q)|b_ii|^{(1-beta_ii) q} >= |b_ii|
  /// evaluated for the supplied (or balanced) beta.
  std::vector<bool> self_delay_condition;
};

/// c_i = d_i - eps - G_i |a_ii| - F_i |b_ii| e^{eps tau_ii},  c_ij = |a_ij|,
/// d_ij = |b_ij|, e_ij = e^{eps tau_ij}, with starred bounds for periodic
/// coefficients. Throws Error(validation) if some c_i <= 0.
Instantiation instantiate(const NetworkSpec& spec, double epsilon, double p,
                          const Matrix* beta = nullptr);

}  // namespace stabcert
