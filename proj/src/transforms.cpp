#include "stabcert/transforms.hpp"

#include <algorithm>
#include <cmath>

#include "stabcert/error.hpp"
#include "stabcert/polyhedra.hpp"

namespace stabcert {

namespace {

double power_term(double c, double e) {
  if (c == 0.0) return 0.0;
  const double v = std::pow(c, e);
  if (!std::isfinite(v)) fail(ErrorCode::domain, "exponent overflow in comparison term");
  return v;
}

void require_positive(const Vector& v, const char* what, std::size_t n) {
  if (v.size() != n) fail(ErrorCode::dimension_mismatch, std::string(what) + " has the wrong length");
  for (double x : v)
    if (!(x > 0.0) || !std::isfinite(x))
      fail(ErrorCode::validation, std::string(what) + " must be a positive vector");
}

std::string cell(const char* name, std::size_t i, std::size_t j) {
  return std::string(name) + "[" + std::to_string(i) + "][" + std::to_string(j) + "]";
}

// (1/p) [1 + log_base r] with log r given; 1/p for a vanishing or unit base.
double exact_exponent(double base, double log_ratio, double p, bool& degenerate) {
  if (base == 0.0 || base == 1.0) {
    degenerate = true;
    return 1.0 / p;
  }
  degenerate = false;
  return (1.0 + log_ratio / std::log(base)) / p;
}

}  // namespace

void ComparisonProblem::validate() const {
  const std::size_t m = n();
  if (m == 0) fail(ErrorCode::validation, "comparison problem is empty");
  auto square = [m](const Matrix& x) { return x.rows() == m && x.cols() == m; };
  if (!square(cmat) || !square(dmat) || !square(emat))
    fail(ErrorCode::dimension_mismatch, "comparison matrices must be n x n");
  if (G.size() != m || F.size() != m) fail(ErrorCode::dimension_mismatch, "G and F must have length n");
  for (std::size_t i = 0; i < m; ++i) {
    if (!(c[i] > 0.0) || !std::isfinite(c[i]))
      fail(ErrorCode::validation, "c[" + std::to_string(i) + "] must be positive");
    if (!(G[i] >= 0.0) || !(F[i] >= 0.0) || !std::isfinite(G[i]) || !std::isfinite(F[i]))
      fail(ErrorCode::validation, "G and F must be finite and non-negative");
    for (std::size_t j = 0; j < m; ++j) {
      if (!(cmat(i, j) >= 0.0) || !std::isfinite(cmat(i, j)))
        fail(ErrorCode::validation, cell("cmat", i, j) + " must be finite and >= 0");
      if (!(dmat(i, j) >= 0.0) || !std::isfinite(dmat(i, j)))
        fail(ErrorCode::validation, cell("dmat", i, j) + " must be finite and >= 0");
      if (!(emat(i, j) >= 1.0) || !std::isfinite(emat(i, j)))
        fail(ErrorCode::validation, cell("emat", i, j) + " must be finite and >= 1");
    }
  }
}

YoungPair young(double a, double b, double eps, double p) {
  if (!(a > 0.0) || !(b > 0.0) || !(eps > 0.0))
    fail(ErrorCode::domain, "young: a, b and eps must be positive");
  if (!(p > 1.0) || !std::isfinite(p)) fail(ErrorCode::domain, "young: p must be finite and > 1");
  const double q = p / (p - 1.0);
  return {a * b, std::pow(a * eps, p) / p + std::pow(b / eps, q) / q};
}

double young_equality_eps(double a, double b, double p) {
  if (!(a > 0.0) || !(b > 0.0) || !(p > 1.0)) fail(ErrorCode::domain, "young_equality_eps: bad arguments");
  const double q = p / (p - 1.0);
  return std::exp((q * std::log(b) - p * std::log(a)) / (p + q));
}

Matrix l1_comparison_matrix(const ComparisonProblem& prob) {
  prob.validate();
  const std::size_t n = prob.n();
  Matrix m(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = -prob.c[i];
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      m(i, j) = prob.G[i] * prob.cmat(j, i) + prob.F[i] * prob.dmat(j, i) * prob.emat(j, i);
    }
  }
  return m;
}

Matrix lp_comparison_matrix(const ComparisonProblem& prob, const ExponentParams& exps) {
  prob.validate();
  const std::size_t n = prob.n();
  const double p = exps.p;
  if (!(p > 1.0) || !std::isfinite(p)) fail(ErrorCode::domain, "L^p comparison needs finite p > 1");
  if (exps.alpha.rows() != n || exps.alpha.cols() != n || exps.beta.rows() != n || exps.beta.cols() != n)
    fail(ErrorCode::dimension_mismatch, "alpha and beta must be n x n");
  const double q = p / (p - 1.0);
  Matrix m(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double diag = -prob.c[i];
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      diag += power_term(prob.cmat(i, j), (1.0 - exps.alpha(i, j)) * q) * prob.G[j] / q;
      diag += power_term(prob.dmat(i, j), (1.0 - exps.beta(i, j)) * q) * prob.emat(i, j) * prob.F[j] / q;
      m(i, j) = power_term(prob.cmat(j, i), exps.alpha(j, i) * p) * prob.G[i] / p +
                power_term(prob.dmat(j, i), exps.beta(j, i) * p) * prob.emat(j, i) * prob.F[i] / p;
    }
    m(i, i) = diag;
  }
  return m;
}

LpToL1Result lp_to_l1(const ComparisonProblem& prob, const Vector& xi, const ExponentParams& exps) {
  prob.validate();
  const std::size_t n = prob.n();
  require_positive(xi, "xi", n);
  const Matrix M = lp_comparison_matrix(prob, exps);
  if (!(margin(M, xi) >= kCertificateTol))
    fail(ErrorCode::validation, "lp_to_l1: (xi, alpha, beta) does not satisfy the L^p inequalities strictly");

  // M xi < 0 with xi > 0 and non-negative off-diagonals: -M is a nonsingular
  // M-matrix, so its transpose admits a positive solution as well.
  const FeasibilityResult eta_res = solve_transpose({M, true});
  if (!eta_res.feasible) fail(ErrorCode::internal, "lp_to_l1: no eta with M^T eta < 0");

  LpToL1Result out;
  out.eta = eta_res.x;
  out.zeta.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.zeta[i] = std::pow(out.eta[i], 1.0 / exps.p);

  const Matrix l1 = l1_comparison_matrix(prob);
  const Matrix zeta_form = transpose(l1);
  if (!(margin(zeta_form, out.zeta) > 0.0))
    fail(ErrorCode::internal, "lp_to_l1: zeta = eta^(1/p) violates the transposed L^1 rows");

  const FeasibilityResult theta_res = solve_transpose({zeta_form, true});
  if (!theta_res.feasible) fail(ErrorCode::internal, "lp_to_l1: no theta for the L^1 rows");
  out.theta = theta_res.x;
  out.slack = margin(l1, out.theta);
  if (!(out.slack > kStrictSlack)) fail(ErrorCode::internal, "lp_to_l1: theta failed re-substitution");
  return out;
}

L1ToLpResult l1_to_lp(const ComparisonProblem& prob, const Vector& theta, double p) {
  prob.validate();
  const std::size_t n = prob.n();
  require_positive(theta, "theta", n);
  if (!(p > 1.0) || !std::isfinite(p)) fail(ErrorCode::domain, "l1_to_lp: p must be finite and > 1");
  const Matrix l1 = l1_comparison_matrix(prob);
  if (!(margin(l1, theta) >= kCertificateTol))
    fail(ErrorCode::validation, "l1_to_lp: theta does not satisfy the L^1 inequalities strictly");

  L1ToLpResult out;
  const Matrix zeta_form = transpose(l1);
  if (margin(zeta_form, theta) > kStrictSlack) {
    out.zeta = theta;
    out.zeta_is_theta = true;
  } else {
    const FeasibilityResult z = solve_strict({zeta_form, true});
    if (!z.feasible) fail(ErrorCode::internal, "l1_to_lp: transposed L^1 system has no positive solution");
    out.zeta = z.x;
  }

  out.eta.resize(n);
  Vector log_zeta(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.eta[i] = std::pow(out.zeta[i], p);
    log_zeta[i] = std::log(out.zeta[i]);
  }

  // alpha*_ij = (1/p)[1 + log_{c_ij}((eta_i/eta_j)^{1/q})], and
  // log (eta_i/eta_j)^{1/q} = (p - 1)(log zeta_i - log zeta_j).
  out.exps = ExponentParams::balanced(n, p);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double log_ratio = (p - 1.0) * (log_zeta[i] - log_zeta[j]);
      bool degenerate = false;
      out.exps.alpha(i, j) = exact_exponent(prob.cmat(i, j), log_ratio, p, degenerate);
      if (degenerate) out.degenerate.push_back(cell("alpha", i, j));
      out.exps.beta(i, j) = exact_exponent(prob.dmat(i, j), log_ratio, p, degenerate);
      if (degenerate) out.degenerate.push_back(cell("beta", i, j));
    }
  }

  const Matrix M = lp_comparison_matrix(prob, out.exps);
  const FeasibilityResult xi = solve_strict({M, true});
  if (!xi.feasible) {
    std::string msg = "l1_to_lp: no xi for the L^p rows with the exact exponents";
    if (!out.degenerate.empty()) msg += " (defaulted exponents at " + std::to_string(out.degenerate.size()) + " entries)";
    fail(ErrorCode::internal, msg);
  }
  out.xi = xi.x;
  out.slack = margin(M, out.xi);
  if (!(out.slack > kStrictSlack)) fail(ErrorCode::internal, "l1_to_lp: xi failed re-substitution");
  return out;
}

Instantiation instantiate(const NetworkSpec& spec, double epsilon, double p, const Matrix* beta) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) fail(ErrorCode::domain, "epsilon must be finite and >= 0");
  if (!(p >= 1.0) || !std::isfinite(p)) fail(ErrorCode::domain, "p must be finite and >= 1");
  const StarBounds sb = star_bounds(spec);
  const std::size_t n = spec.n;
  if (beta != nullptr && (beta->rows() != n || beta->cols() != n))
    fail(ErrorCode::dimension_mismatch, "beta must be n x n");

  Instantiation out;
  ComparisonProblem& prob = out.problem;
  prob.c.resize(n);
  prob.cmat = Matrix(n, n, 0.0);
  prob.dmat = Matrix(n, n, 0.0);
  prob.emat = Matrix(n, n, 1.0);
  prob.G = spec.G;
  prob.F = spec.F;
  out.self_delay_condition.assign(n, true);

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      prob.emat(i, j) = std::exp(epsilon * spec.tau(i, j));
      if (i != j) {
        prob.cmat(i, j) = sb.a_star(i, j);
        prob.dmat(i, j) = sb.b_star(i, j);
      }
    }
    prob.c[i] = sb.d_lower[i] - epsilon - spec.G[i] * sb.a_star(i, i) -
                spec.F[i] * sb.b_star(i, i) * prob.emat(i, i);
    if (!(prob.c[i] > 0.0))
      fail(ErrorCode::validation, "instantiation needs c_i > 0 but c[" + std::to_string(i) +
                                      "] = " + std::to_string(prob.c[i]));

    if (p > 1.0 && sb.b_star(i, i) > 0.0) {
      const double q = p / (p - 1.0);
      const double bii = sb.b_star(i, i);
      const double beta_ii = beta != nullptr ? (*beta)(i, i) : 1.0 / p;
      const double lhs = std::pow(bii, beta_ii * p) / p + std::pow(bii, (1.0 - beta_ii) * q) / q;
      out.self_delay_condition[i] = lhs >= bii * (1.0 - 1e-12);
    }
  }
  return out;
}

}  // namespace stabcert
