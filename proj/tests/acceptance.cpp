// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "stabcert/criteria.hpp"
#include "stabcert/ddesim.hpp"
#include "stabcert/polyhedra.hpp"
#include "stabcert/transforms.hpp"
#include "support.hpp"

using namespace stabcert;
using testsupport::uniform;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      if (ok) detail << "failed: ";
      else detail << "; ";
      detail << what;
      ok = false;
    }
  }
};

NetworkSpec example1(const Vector& inputs = {0, 0}) {
  return constant_network({2, 11}, Matrix{{1, 3}, {3, 1}}, Matrix(2, 2, 0.0), inputs, Matrix(2, 2, 0.0));
}

NetworkSpec example1_forced() {
  NetworkSpec s = example1();
  s.inputs[0] = PeriodicFn(0.0, {{1, 0.0, 1.0}}, 1.0);
  s.inputs[1] = PeriodicFn(0.0, {{1, 1.0, 0.0}}, 1.0);
  return s;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
  return worst;
}

// Sweeps r = x1 / x2 over (0, hi] and returns the extent of {r : M (r, 1) < 0}.
std::pair<double, double> ratio_window(const Matrix& m, double step, double hi) {
  double lo_r = INFINITY, hi_r = -INFINITY;
  const auto count = static_cast<long>(std::lround(hi / step));
  for (long k = 1; k <= count; ++k) {
    const double r = k * step;
    const double x[2] = {r, 1.0};
    if (margin(m, x) > 0.0) {
      lo_r = std::min(lo_r, r);
      hi_r = std::max(hi_r, r);
    }
  }
  return {lo_r, hi_r};
}

Outcome criterion1() {
  Outcome o;
  const NetworkSpec s = example1();
  const Matrix m = assemble(s, CriterionKind::ConstantL1, nullptr, 0.0).m;
  o.expect(m == Matrix{{-1, 3}, {3, -10}}, "assembled matrix");
  const FeasibilityResult res = solve_strict({m, true});
  o.expect(res.feasible, "LP feasible");
  if (res.feasible) {
    const double r = res.x[0] / res.x[1];
    o.expect(r > 3.0 && r < 10.0 / 3.0, "theta ratio in (3, 10/3)");
    o.detail << "theta1/theta2 = " << r;
  }
  for (const Vector& w : {Vector{3, 1}, Vector{10, 3}}) {
    const CertificateCheck c = check_certificate(s, {CriterionKind::ConstantL1, w, std::nullopt});
    const double slack = -*std::max_element(c.row_margins.begin(), c.row_margins.end());
    o.expect(!c.valid && slack <= 1e-9, "boundary ratio rejected");
  }
  return o;
}

Outcome criterion2() {
  Outcome o;
  const NetworkSpec s = example1();
  const ComparisonProblem prob = instantiate(s, 0.0, 2.0).problem;
  const L1ToLpResult r = l1_to_lp(prob, {19, 6}, 2.0);
  const double a12 = 0.5 * std::log(19.0 / 2.0) / std::log(3.0);
  const double a21 = 0.5 * std::log(18.0 / 19.0) / std::log(3.0);
  o.expect(std::abs(r.exps.alpha(0, 1) - a12) <= 1e-12, "alpha12");
  o.expect(std::abs(r.exps.alpha(1, 0) - a21) <= 1e-12, "alpha21");
  const Matrix m = assemble_lp(s, r.exps, 0.0).m;
  const Matrix want{{-10.0 / 19, 9.0 / 19}, {19.0 / 4, -21.0 / 4}};
  o.expect(max_abs_diff(m, want) <= 1e-12, "assembled Lp matrix");

  const FeasibilityResult lp = solve_strict({m, true});
  o.expect(lp.feasible, "LP feasible");
  if (lp.feasible) {
    const double q = lp.x[0] / lp.x[1];
    o.expect(q > 0.9 && q < 21.0 / 19.0, "LP xi ratio in (9/10, 21/19)");
  }
  const auto [lo, hi] = ratio_window(m, 1e-4, 10.0);
  o.expect(std::abs(lo - 0.9) <= 2e-4 && std::abs(hi - 21.0 / 19.0) <= 2e-4, "grid window");
  o.detail << "alpha12 = " << r.exps.alpha(0, 1) << ", grid xi window [" << lo << ", " << hi << "]";
  return o;
}

Outcome criterion3() {
  Outcome o;
  const NetworkSpec s = example1();
  const ExponentParams bal = ExponentParams::balanced(2, 2.0);
  const Matrix m = assemble(s, CriterionKind::ConstantLpBalanced, &bal, 0.0).m;
  o.expect(m == Matrix{{0.5, 1.5}, {1.5, -8.5}}, "assembled matrix");
  const FeasibilityResult res = solve_strict({m, true});
  o.expect(!res.feasible && res.verdict == Verdict::infeasible, "declared infeasible");
  o.expect(!find_weights(s, CriterionKind::ConstantLpBalanced, &bal, 0.0), "no certificate");
  o.detail << "verdict infeasible, slack " << res.slack;
  return o;
}

Outcome criterion4() {
  Outcome o;
  auto g = testsupport::rng(401);
  int violations = 0, eq_failures = 0;
  double worst_eq = 0.0;
  for (int k = 0; k < 100000; ++k) {
    const double a = std::exp(uniform(g, -4, 4));
    const double b = std::exp(uniform(g, -4, 4));
    const double eps = std::exp(uniform(g, -3, 3));
    const double p = uniform(g, 1.1, 10.0);
    const YoungPair y = young(a, b, eps, p);
    if (!(y.lhs <= y.rhs * (1 + 1e-14))) ++violations;
    const YoungPair eq = young(a, b, young_equality_eps(a, b, p), p);
    const double rel = std::abs(eq.rhs - eq.lhs) / eq.lhs;
    worst_eq = std::max(worst_eq, rel);
    if (rel > 1e-12) ++eq_failures;
  }
  o.expect(violations == 0, std::to_string(violations) + " inequality violations");
  o.expect(eq_failures == 0, std::to_string(eq_failures) + " equality cases off");
  o.detail << "1e5 draws, worst equality rel err " << worst_eq;
  return o;
}

ComparisonProblem random_problem(std::mt19937_64& g, std::size_t n) {
  ComparisonProblem p;
  p.c.resize(n);
  p.cmat = Matrix(n, n, 0.0);
  p.dmat = Matrix(n, n, 0.0);
  p.emat = Matrix(n, n, 1.0);
  p.G.resize(n);
  p.F.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    p.c[i] = uniform(g, 0.5, 8);
    p.G[i] = uniform(g, 0.2, 1.5);
    p.F[i] = uniform(g, 0.2, 1.5);
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      p.cmat(i, j) = uniform(g, 0, 1) < 0.15 ? 0.0 : uniform(g, 0.0, 3.0);
      p.dmat(i, j) = uniform(g, 0, 1) < 0.15 ? 0.0 : uniform(g, 0.0, 2.0);
      p.emat(i, j) = uniform(g, 1.0, 2.0);
    }
  }
  return p;
}

Outcome criterion5() {
  Outcome o;
  auto g = testsupport::rng(501);
  int feasible = 0, failures = 0, drawn = 0;
  while (feasible < 1000 && drawn < 100000) {
    const std::size_t n = drawn++ % 2 == 0 ? 2 : 3;
    const ComparisonProblem prob = random_problem(g, n);
    const FeasibilityResult th = solve_strict({l1_comparison_matrix(prob), true});
    if (!th.feasible) continue;
    ++feasible;
    const double p = uniform(g, 1.1, 8.0);
    try {
      const L1ToLpResult fwd = l1_to_lp(prob, th.x, p);
      const bool fwd_ok = margin(lp_comparison_matrix(prob, fwd.exps), fwd.xi) > 0.0;
      const LpToL1Result back = lp_to_l1(prob, fwd.xi, fwd.exps);
      const bool back_ok = margin(l1_comparison_matrix(prob), back.theta) > 0.0;
      if (!fwd_ok || !back_ok) ++failures;
    } catch (const std::exception&) {
      ++failures;
    }
  }
  o.expect(feasible == 1000, "only " + std::to_string(feasible) + " feasible problems drawn");
  o.expect(failures == 0, std::to_string(failures) + " round-trip failures");
  o.detail << feasible << " feasible problems from " << drawn << " draws, " << failures << " failures";
  return o;
}

Outcome criterion6() {
  Outcome o;
  auto g = testsupport::rng(601);
  int compared = 0, excluded = 0, disagreements = 0, positives = 0;
  for (int trial = 0; trial < 500; ++trial) {
    Matrix m(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) m(i, j) = i == j ? uniform(g, 0.0, 4.0) : uniform(g, -1.5, 0.0);
    bool oracle = true, near = false;
    for (std::size_t k = 1; k <= 4; ++k) {
      const double det = testsupport::cofactor_det(testsupport::leading(m, k));
      if (std::abs(det) < 1e-10) near = true;
      if (det <= 0.0) oracle = false;
    }
    if (near) {
      ++excluded;
      continue;
    }
    ++compared;
    positives += oracle;
    if (is_m_matrix(m) != oracle) ++disagreements;
  }
  o.expect(disagreements == 0, std::to_string(disagreements) + " disagreements");
  o.expect(positives > 50 && compared - positives > 50, "both verdicts represented");
  o.detail << compared << " compared (" << positives << " M-matrices), " << excluded << " in boundary band";
  return o;
}

Outcome criterion7() {
  Outcome o;
  const NetworkSpec relax = constant_network({1}, Matrix{{0}}, Matrix{{0}}, {1}, Matrix{{0}});
  auto err = [&](double h) {
    const Trajectory tr = simulate(relax, History::constant({0.0}), 1.0, h);
    return std::abs(tr.state(tr.steps())[0] - (1.0 - std::exp(-1.0)));
  };
  const double ratio = err(1e-2) / err(5e-3);
  o.expect(ratio >= 12.0 && ratio <= 20.0, "error ratio " + std::to_string(ratio));
  const NetworkSpec delay = constant_network({0}, Matrix{{0}}, Matrix{{-1}}, {0}, Matrix{{1}});
  const Trajectory tr = simulate(delay, History::constant({1.0}), 1.0, 1e-2);
  const double u1 = tr.state(tr.steps())[0];
  o.expect(std::abs(u1) <= 1e-12, "pure delay u(1)");
  o.detail << "error ratio " << ratio << ", pure delay u(1) = " << u1;
  return o;
}

struct Shared {
  NetworkSpec spec = example1_forced();
  std::optional<RateResult> rate;
  std::vector<Trajectory> trajs;
};

constexpr int kPeriods = 20;
constexpr double kStep = 1e-3;

Outcome criterion8(Shared& sh) {
  Outcome o;
  sh.rate = max_epsilon(sh.spec, CriterionKind::L1, nullptr);
  o.expect(sh.rate && sh.rate->epsilon_star > 0.0, "positive certified rate");
  if (!sh.rate) return o;
  const double eps = sh.rate->epsilon_star;
  o.detail << "eps* = " << eps;
  for (const Vector& h0 : {Vector{1.0, -1.0}, Vector{-2.0, 3.0}}) {
    sh.trajs.push_back(simulate(sh.spec, History::constant(h0), kPeriods + 1.0, kStep));
    const SimReport rep = period_map_report(sh.trajs.back(), 1.0, kPeriods);
    o.expect(rep.eps_hat.has_value(), "rate estimate available");
    if (!rep.eps_hat) continue;
    o.expect(*rep.eps_hat >= 0.95 * eps, "eps_hat below 0.95 eps*");
    bool monotone = true;
    for (std::size_t j = 1; j < rep.diffs.size(); ++j) monotone = monotone && rep.diffs[j] < rep.diffs[j - 1];
    o.expect(monotone, "D_j not monotone decreasing");
    o.detail << ", eps_hat = " << *rep.eps_hat;
  }
  return o;
}

Outcome criterion9(const Shared& sh) {
  Outcome o;
  o.expect(sh.rate.has_value() && !sh.trajs.empty(), "criterion 8 inputs");
  if (!o.ok) return o;
  const Certificate& cert = sh.rate->cert;
  int points = 0;
  double worst = -INFINITY;
  for (const Trajectory& tr : sh.trajs) {
    // L needs the window [t - tau_max, t + omega]; tau_max = 0 here.
    const std::size_t last = tr.steps() - static_cast<std::size_t>(std::lround(1.0 / kStep));
    double prev = lyapunov_value(tr, tr.time(0), cert);
    for (std::size_t k = 1; k <= last; ++k) {
      const double cur = lyapunov_value(tr, tr.time(k), cert);
      worst = std::max(worst, cur - prev);
      if (!(cur <= prev * (1 + 1e-6) + 1e-9)) {
        o.expect(false, "increase at t = " + std::to_string(tr.time(k)));
        break;
      }
      prev = cur;
      ++points;
    }
  }
  o.detail << points << " grid steps, max step change " << worst;
  return o;
}

Outcome criterion10() {
  Outcome o;
  const NetworkSpec s = example1({1.0, 1.0});
  const int periods = 300;
  const Trajectory tr = simulate(s, History::constant({1.0, -1.0}), periods + 1.0, 1e-2);
  const SimReport rep = period_map_report(tr, 1.0, periods);
  const double var = orbit_variation(rep);
  const double dj = rep.diffs.back();
  o.expect(var <= dj + 1e-9, "orbit variation exceeds D_J");
  // Equilibrium of -d u + A u + I = 0 for the undelayed system.
  const double det = (-1.0) * (-10.0) - 9.0;
  const double e1 = -((-10.0) * 1.0 - 3.0 * 1.0) / det, e2 = -((-1.0) * 1.0 - 3.0 * 1.0) / det;
  const auto last = tr.state(tr.steps());
  o.expect(std::abs(last[0] - e1) <= 1e-6 && std::abs(last[1] - e2) <= 1e-6, "far from the equilibrium");
  o.detail << "variation " << var << ", D_J " << dj << ", u(t_end) = (" << last[0] << ", " << last[1]
           << "), equilibrium (" << e1 << ", " << e2 << ")";
  return o;
}

}  // namespace

int main() {
  Shared shared;
  struct Item {
    int id;
    double budget;
    std::function<Outcome()> run;
  };
  const std::vector<Item> items = {
      {1, 0.1, criterion1},
      {2, 0.1, criterion2},
      {3, 0.1, criterion3},
      {4, 1.0, criterion4},
      {5, 10.0, criterion5},
      {6, 1.0, criterion6},
      {7, 1.0, criterion7},
      {8, 30.0, [&] { return criterion8(shared); }},
      {9, 30.0, [&] { return criterion9(shared); }},
      {10, 10.0, criterion10},
  };
  std::printf("seed %llu\n", static_cast<unsigned long long>(testsupport::seed()));
  int failed = 0;
  for (const Item& item : items) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = item.run();
    } catch (const std::exception& e) {
      out.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.expect(secs < item.budget, "runtime over " + std::to_string(item.budget) + " s");
    if (!out.ok) ++failed;
    std::printf("criterion %2d: %s (%.3f s) %s\n", item.id, out.ok ? "PASS" : "FAIL", secs, out.detail.str().c_str());
  }
  return failed == 0 ? 0 : 1;
}
