#pragma once

#include <optional>
#include <string>

#include "stabcert/matrix.hpp"
#include "stabcert/model.hpp"
#include "stabcert/polyhedra.hpp"

namespace stabcert {

enum class CriterionKind {
  L1,
  LpBalanced,
  LpGeneral,
  ConstantL1,
  ConstantLpBalanced,
  ConstantLpGeneral,
};

std::string to_string(CriterionKind kind);
CriterionKind criterion_from_string(const std::string& name);
bool is_constant_kind(CriterionKind kind);
bool is_l1_kind(CriterionKind kind);

/// Exponent data of the L^p criterion. q = p/(p-1) is never stored; for
/// p = 1 the conjugate terms vanish and alpha/beta are ignored.
struct ExponentParams {
  double p = 1.0;
  Matrix alpha;
  Matrix beta;

  /// alpha = beta = 1/p everywhere.
  static ExponentParams balanced(std::size_t n, double p);
};

struct Certificate {
  CriterionKind kind = CriterionKind::L1;
  Vector weights;
  std::optional<ExponentParams> exps;  ///< absent for the L1 kinds
  double epsilon = 0.0;
  double slack = 0.0;
};

/// Row i: (-d_i + eps) theta_i + G_i [theta_i |a*_ii| + sum_{j!=i} theta_j |a*_ji|]
///        + F_i sum_j theta_j |b*_ji| e^{eps tau_ji}.
IneqSystem assemble_l1(const NetworkSpec& spec, double epsilon);

/// Row i: (-d_i + eps) xi_i + G_i [xi_i |a*_ii| + (1/p) sum_{j!=i} xi_j |a*_ji|^{alpha_ji p}]
///        + (1/q) xi_i sum_{j!=i} G_j |a*_ij|^{(1-alpha_ij) q}
///        + (1/p) F_i sum_j xi_j |b*_ji|^{beta_ji p} e^{eps tau_ji}
///        + (1/q) xi_i sum_j F_j |b*_ij|^{(1-beta_ij) q} e^{eps tau_ij}.
/// Zero coefficients contribute nothing whatever their exponent. p = 1 falls
/// through to assemble_l1.
IneqSystem assemble_lp(const NetworkSpec& spec, const ExponentParams& exps, double epsilon);

/// Matrix for `kind` at `epsilon`. Balanced kinds take p from `exps` and force
/// alpha = beta = 1/p; general kinds need full exponents. Constant kinds
/// require a time-invariant network.
IneqSystem assemble(const NetworkSpec& spec, CriterionKind kind, const ExponentParams* exps,
                    double epsilon);

struct CertificateCheck {
  bool valid = false;
  Vector row_margins;  ///< (M w)_i; valid iff all <= -1e-12
};

CertificateCheck check_certificate(const NetworkSpec& spec, const Certificate& cert);

/// Searches for weights at a fixed rate. nullopt when the LP is not strictly
/// feasible.
std::optional<Certificate> find_weights(const NetworkSpec& spec, CriterionKind kind,
                                        const ExponentParams* exps, double epsilon);

/// Weights from the centre of the admissible region (window_center, with the
/// reference coordinate at the smallest max-margin weight), falling back to
/// the max-margin weights of find_weights. nullopt when infeasible.
std::optional<Certificate> central_weights(const NetworkSpec& spec, CriterionKind kind,
                                           const ExponentParams* exps, double epsilon);

struct RateResult {
  double epsilon_star = 0.0;
  Certificate cert;
};

/// Largest certified rate by bisection on [0, min_i inf d_i]; nullopt when
/// no certificate exists at epsilon = 0.
std::optional<RateResult> max_epsilon(const NetworkSpec& spec, CriterionKind kind,
                                      const ExponentParams* exps);

inline constexpr double kEpsilonTol = 1e-8;
inline constexpr int kBisectionCap = 200;
inline constexpr double kCertificateTol = 1e-12;

}  // namespace stabcert
