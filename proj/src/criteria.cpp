#include "stabcert/criteria.hpp"

#include <algorithm>
#include <cmath>

#include "stabcert/error.hpp"

namespace stabcert {

namespace {

// c^e with the convention that a zero coefficient contributes zero.
double power_term(double c, double e) {
  if (c == 0.0) return 0.0;
  if (!std::isfinite(e)) fail(ErrorCode::domain, "non-finite exponent");
  const double v = std::pow(c, e);
  if (!std::isfinite(v)) fail(ErrorCode::domain, "exponent overflow in criterion term");
  return v;
}

void check_exponents(const ExponentParams& exps, std::size_t n) {
  if (!(exps.p >= 1.0) || !std::isfinite(exps.p)) fail(ErrorCode::domain, "p must be finite and >= 1");
  if (exps.p == 1.0) return;
  if (exps.alpha.rows() != n || exps.alpha.cols() != n || exps.beta.rows() != n ||
      exps.beta.cols() != n)
    fail(ErrorCode::dimension_mismatch, "alpha and beta must be n x n");
  for (double v : exps.alpha.data())
    if (!std::isfinite(v)) fail(ErrorCode::domain, "alpha has non-finite entries");
  for (double v : exps.beta.data())
    if (!std::isfinite(v)) fail(ErrorCode::domain, "beta has non-finite entries");
}

IneqSystem l1_matrix(const NetworkSpec& spec, const StarBounds& sb, double eps) {
  const std::size_t n = spec.n;
  Matrix m(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double v = spec.G[i] * sb.a_star(j, i) + spec.F[i] * sb.b_star(j, i) * std::exp(eps * spec.tau(j, i));
      if (i == j) v += -sb.d_lower[i] + eps;
      m(i, j) = v;
    }
  }
  return {m, true};
}

IneqSystem lp_matrix(const NetworkSpec& spec, const StarBounds& sb, const ExponentParams& exps,
                     double eps) {
  const std::size_t n = spec.n;
  const double p = exps.p;
  const double q = p / (p - 1.0);
  Matrix m(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double diag = -sb.d_lower[i] + eps + spec.G[i] * sb.a_star(i, i);
    for (std::size_t j = 0; j < n; ++j) {
      const double e_ij = std::exp(eps * spec.tau(i, j));
      const double e_ji = std::exp(eps * spec.tau(j, i));
      if (j != i) {
        diag += spec.G[j] * power_term(sb.a_star(i, j), (1.0 - exps.alpha(i, j)) * q) / q;
        m(i, j) += spec.G[i] * power_term(sb.a_star(j, i), exps.alpha(j, i) * p) / p;
      }
      m(i, j) += spec.F[i] * power_term(sb.b_star(j, i), exps.beta(j, i) * p) * e_ji / p;
      diag += spec.F[j] * power_term(sb.b_star(i, j), (1.0 - exps.beta(i, j)) * q) * e_ij / q;
    }
    m(i, i) += diag;
  }
  return {m, true};
}

void require_constant(const NetworkSpec& spec, CriterionKind kind) {
  if (is_constant_kind(kind) && !spec.is_constant())
    fail(ErrorCode::validation,
         to_string(kind) + " certificate requires time-invariant coefficients and inputs");
}

IneqSystem assemble_with(const NetworkSpec& spec, const StarBounds& sb, CriterionKind kind,
                         const ExponentParams* exps, double eps) {
  require_constant(spec, kind);
  if (!(eps >= 0.0) || !std::isfinite(eps)) fail(ErrorCode::domain, "epsilon must be finite and >= 0");
  if (is_l1_kind(kind)) return l1_matrix(spec, sb, eps);
  if (exps == nullptr) fail(ErrorCode::invalid_argument, to_string(kind) + " needs exponent parameters");
  if (exps->p == 1.0) return l1_matrix(spec, sb, eps);
  if (kind == CriterionKind::LpBalanced || kind == CriterionKind::ConstantLpBalanced) {
    const ExponentParams bal = ExponentParams::balanced(spec.n, exps->p);
    check_exponents(bal, spec.n);
    return lp_matrix(spec, sb, bal, eps);
  }
  check_exponents(*exps, spec.n);
  return lp_matrix(spec, sb, *exps, eps);
}

std::optional<ExponentParams> certificate_exponents(CriterionKind kind, const ExponentParams* exps,
                                                    std::size_t n) {
  if (is_l1_kind(kind)) return std::nullopt;
  if (kind == CriterionKind::LpBalanced || kind == CriterionKind::ConstantLpBalanced)
    return ExponentParams::balanced(n, exps->p);
  return *exps;
}

std::optional<Certificate> find_with(const NetworkSpec& spec, const StarBounds& sb,
                                     CriterionKind kind, const ExponentParams* exps, double eps) {
  const IneqSystem sys = assemble_with(spec, sb, kind, exps, eps);
  const FeasibilityResult res = solve_strict(sys);
  if (!res.feasible) return std::nullopt;

  Certificate cert{kind, res.x, certificate_exponents(kind, exps, spec.n), eps, res.slack};
  const CertificateCheck check = check_certificate(spec, cert);
  if (!check.valid) fail(ErrorCode::internal, "LP weights failed re-substitution");
  return cert;
}

}  // namespace

std::string to_string(CriterionKind kind) {
  switch (kind) {
    case CriterionKind::L1: return "L1";
    case CriterionKind::LpBalanced: return "LpBalanced";
    case CriterionKind::LpGeneral: return "LpGeneral";
    case CriterionKind::ConstantL1: return "ConstantL1";
    case CriterionKind::ConstantLpBalanced: return "ConstantLpBalanced";
    case CriterionKind::ConstantLpGeneral: return "ConstantLpGeneral";
  }
  return "unknown";
}

CriterionKind criterion_from_string(const std::string& name) {
  for (auto k : {CriterionKind::L1, CriterionKind::LpBalanced, CriterionKind::LpGeneral,
                 CriterionKind::ConstantL1, CriterionKind::ConstantLpBalanced,
                 CriterionKind::ConstantLpGeneral})
    if (to_string(k) == name) return k;
  fail(ErrorCode::validation, "unknown certificate kind '" + name + "'");
}

bool is_constant_kind(CriterionKind kind) {
  return kind == CriterionKind::ConstantL1 || kind == CriterionKind::ConstantLpBalanced ||
         kind == CriterionKind::ConstantLpGeneral;
}

bool is_l1_kind(CriterionKind kind) {
  return kind == CriterionKind::L1 || kind == CriterionKind::ConstantL1;
}

ExponentParams ExponentParams::balanced(std::size_t n, double p) {
  return {p, Matrix(n, n, 1.0 / p), Matrix(n, n, 1.0 / p)};
}

IneqSystem assemble_l1(const NetworkSpec& spec, double epsilon) {
  const StarBounds sb = star_bounds(spec);
  require_positive_decay(sb);
  return assemble_with(spec, sb, CriterionKind::L1, nullptr, epsilon);
}

IneqSystem assemble_lp(const NetworkSpec& spec, const ExponentParams& exps, double epsilon) {
  const StarBounds sb = star_bounds(spec);
  require_positive_decay(sb);
  return assemble_with(spec, sb, CriterionKind::LpGeneral, &exps, epsilon);
}

IneqSystem assemble(const NetworkSpec& spec, CriterionKind kind, const ExponentParams* exps,
                    double epsilon) {
  const StarBounds sb = star_bounds(spec);
  require_positive_decay(sb);
  return assemble_with(spec, sb, kind, exps, epsilon);
}

CertificateCheck check_certificate(const NetworkSpec& spec, const Certificate& cert) {
  if (cert.weights.size() != spec.n)
    fail(ErrorCode::dimension_mismatch, "certificate has " + std::to_string(cert.weights.size()) +
                                            " weights, network has " + std::to_string(spec.n));
  for (double w : cert.weights)
    if (!(w > 0.0) || !std::isfinite(w)) fail(ErrorCode::validation, "certificate weights must be positive");
  const ExponentParams* exps = cert.exps ? &*cert.exps : nullptr;
  const IneqSystem sys = assemble(spec, cert.kind, exps, cert.epsilon);
  CertificateCheck out;
  out.row_margins = multiply(sys.m, cert.weights);
  out.valid = std::all_of(out.row_margins.begin(), out.row_margins.end(),
                          [](double v) { return v <= -kCertificateTol; });
  return out;
}

std::optional<Certificate> find_weights(const NetworkSpec& spec, CriterionKind kind,
                                        const ExponentParams* exps, double epsilon) {
  const StarBounds sb = star_bounds(spec);
  require_positive_decay(sb);
  return find_with(spec, sb, kind, exps, epsilon);
}

std::optional<Certificate> central_weights(const NetworkSpec& spec, CriterionKind kind,
                                           const ExponentParams* exps, double epsilon) {
  auto cert = find_weights(spec, kind, exps, epsilon);
  if (!cert) return std::nullopt;
  const auto ref = static_cast<std::size_t>(
      std::min_element(cert->weights.begin(), cert->weights.end()) - cert->weights.begin());
  const Matrix m = assemble(spec, kind, exps, epsilon).m;
  if (auto x = window_center(m, ref)) {
    Certificate centred = *cert;
    centred.weights = *x;
    centred.slack = margin(m, *x);
    if (check_certificate(spec, centred).valid) return centred;
  }
  return cert;
}

std::optional<RateResult> max_epsilon(const NetworkSpec& spec, CriterionKind kind,
                                      const ExponentParams* exps) {
  const StarBounds sb = star_bounds(spec);
  require_positive_decay(sb);
  auto best = find_with(spec, sb, kind, exps, 0.0);
  if (!best) return std::nullopt;

  // Every epsilon-dependent term is non-decreasing, and the row of the
  // smallest d_i is non-negative at epsilon = min d_i, so the feasible set is
  // an interval [0, eps*) inside this bracket.
  double lo = 0.0;
  double hi = *std::min_element(sb.d_lower.begin(), sb.d_lower.end());
  for (int iter = 0; iter < kBisectionCap && hi - lo > 0.5 * kEpsilonTol; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (auto cert = find_with(spec, sb, kind, exps, mid)) {
      lo = mid;
      best = std::move(cert);
    } else {
      hi = mid;
    }
  }
  return RateResult{lo, *best};
}

}  // namespace stabcert
