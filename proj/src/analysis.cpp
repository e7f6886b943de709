#include "stabcert/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "stabcert/error.hpp"
#include "stabcert/transforms.hpp"

namespace stabcert {

namespace {

constexpr const char* kToolVersion = "0.1.0";
constexpr double kReproTol = 1e-9;

CriterionKind l1_kind_for(const NetworkSpec& spec) {
  return spec.is_constant() ? CriterionKind::ConstantL1 : CriterionKind::L1;
}

CriterionKind balanced_kind_for(const NetworkSpec& spec) {
  return spec.is_constant() ? CriterionKind::ConstantLpBalanced : CriterionKind::LpBalanced;
}

CriterionKind general_kind_for(const NetworkSpec& spec) {
  return spec.is_constant() ? CriterionKind::ConstantLpGeneral : CriterionKind::LpGeneral;
}

Json outcome(CriterionKind kind, double epsilon, const std::optional<Certificate>& cert) {
  Json j = {{"kind", to_string(kind)}, {"epsilon", epsilon}, {"feasible", cert.has_value()}};
  if (cert) {
    j["weights"] = cert->weights;
    j["slack"] = cert->slack;
  }
  return j;
}

Json rate_outcome(CriterionKind kind, const std::optional<RateResult>& rate) {
  Json j = {{"kind", to_string(kind)}, {"feasible", rate.has_value()}};
  if (rate) {
    j["epsilon_star"] = rate->epsilon_star;
    j["certificate"] = to_json(rate->cert);
  }
  return j;
}

Json l1_to_lp_json(const L1ToLpResult& r) {
  return {{"p", r.exps.p},
          {"xi", r.xi},
          {"alpha_star", to_json(r.exps.alpha)},
          {"beta_star", to_json(r.exps.beta)},
          {"zeta", r.zeta},
          {"eta", r.eta},
          {"zeta_is_theta", r.zeta_is_theta},
          {"degenerate", r.degenerate},
          {"slack", r.slack}};
}

double default_step(const NetworkSpec& spec) {
  const double tau_min = spec.tau_min_positive();
  double per = 200.0;
  if (tau_min > 0.0) per = std::max(per, std::ceil(spec.omega / tau_min - 1e-12));
  return spec.omega / per;
}

Json check_json(const std::string& name, bool pass, Json expected, Json computed) {
  return {{"name", name}, {"pass", pass}, {"expected", std::move(expected)}, {"computed", std::move(computed)}};
}

bool matrix_close(const Matrix& a, const Matrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (std::abs(a(i, j) - b(i, j)) > tol) return false;
  return true;
}

// LP verdict on the L1 rows compared with the M-matrix test on their negation.
Json l1_control(const std::string& name, const NetworkSpec& spec) {
  const Matrix m = assemble(spec, CriterionKind::ConstantL1, nullptr, 0.0).m;
  const bool lp = find_weights(spec, CriterionKind::ConstantL1, nullptr, 0.0).has_value();
  const bool oracle = is_m_matrix(scaled(m, -1.0));
  return {{"name", name}, {"matrix", to_json(m)}, {"lp_feasible", lp}, {"m_matrix_feasible", oracle},
          {"pass", lp == oracle}};
}

}  // namespace

Json envelope(const std::string& command, Json payload) {
  return {{"metadata", {{"tool", "stabcert"}, {"version", kToolVersion}, {"command", command}}},
          {"report", std::move(payload)}};
}

NetworkSpec example1_spec(double input1, double input2) {
  return constant_network({2.0, 11.0}, Matrix{{1.0, 3.0}, {3.0, 1.0}}, Matrix(2, 2, 0.0), {input1, input2},
                          Matrix(2, 2, 0.0));
}

AnalysisOutcome analyze(const NetworkSpec& spec, const AnalysisOptions& opts) {
  const StarBounds sb = star_bounds(spec);
  require_positive_decay(sb);

  AnalysisOutcome out;
  Json& r = out.report;
  r["spec_digest"] = spec_digest(spec);
  r["n"] = spec.n;
  r["constant_coefficients"] = spec.is_constant();
  r["star_bounds"] = to_json(sb);

  const CriterionKind l1 = l1_kind_for(spec);
  const auto l1_cert = central_weights(spec, l1, nullptr, 0.0);
  const auto l1_rate = max_epsilon(spec, l1, nullptr);
  Json criteria = Json::array();
  criteria.push_back(outcome(l1, 0.0, l1_cert));
  out.certified = l1_cert.has_value();

  Json rates = Json::array();
  rates.push_back(rate_outcome(l1, l1_rate));

  for (double p : opts.p_values) {
    if (!(p > 1.0)) fail(ErrorCode::invalid_argument, "p values must be > 1");
    const ExponentParams bal = ExponentParams::balanced(spec.n, p);
    const CriterionKind kind = balanced_kind_for(spec);
    const auto cert = find_weights(spec, kind, &bal, 0.0);
    Json o = outcome(kind, 0.0, cert);
    o["p"] = p;
    criteria.push_back(o);
    Json ro = rate_outcome(kind, cert ? max_epsilon(spec, kind, &bal) : std::nullopt);
    ro["p"] = p;
    rates.push_back(ro);
    out.certified = out.certified || cert.has_value();
  }
  r["criteria"] = criteria;
  r["rates"] = rates;

  Json transforms = Json::array();
  if (l1_cert) {
    for (double p : opts.p_values) {
      Json t = {{"p", p}, {"theta", l1_cert->weights}};
      try {
        const Instantiation inst = instantiate(spec, 0.0, p);
        const L1ToLpResult res = l1_to_lp(inst.problem, l1_cert->weights, p);
        t["l1_to_lp"] = l1_to_lp_json(res);
        Certificate lp{general_kind_for(spec), res.xi, res.exps, 0.0, res.slack};
        const CertificateCheck check = check_certificate(spec, lp);
        t["lp_certificate_valid"] = check.valid;
        t["lp_row_margins"] = check.row_margins;
        const LpToL1Result back = lp_to_l1(inst.problem, res.xi, res.exps);
        t["round_trip_theta"] = back.theta;
        t["round_trip_slack"] = back.slack;
      } catch (const Error& e) {
        t["error"] = e.what();
      }
      transforms.push_back(t);
    }
  }
  r["transforms"] = transforms;

  Json sim = {{"enabled", opts.simulate}};
  if (opts.simulate) {
    try {
      const double h = default_step(spec);
      const auto per = static_cast<std::size_t>(std::llround(spec.omega / h));
      const auto offset = static_cast<std::size_t>(std::ceil(spec.tau_max() / h - 1e-9));
      const auto steps = offset + static_cast<std::size_t>(opts.periods + 1) * per;
      const History hist = History::constant(Vector(spec.n, 1.0));
      const Trajectory traj = simulate(spec, hist, static_cast<double>(steps) * h, h);
      const SimReport rep = period_map_report(traj, spec.omega, opts.periods);
      sim["step"] = h;
      sim["periods"] = opts.periods;
      sim["diffs"] = rep.diffs;
      sim["saturated"] = rep.saturated;
      sim["eps_hat"] = rep.eps_hat ? Json(*rep.eps_hat) : Json(nullptr);
      if (rep.eps_hat && l1_rate) {
        const bool pass = *rep.eps_hat >= kRateConsistency * l1_rate->epsilon_star;
        sim["verdict"] = pass ? "pass" : "fail";
      } else {
        sim["verdict"] = rep.saturated ? "saturated" : "not_applicable";
      }
    } catch (const Error& e) {
      sim["error"] = e.what();
      sim["verdict"] = "not_applicable";
    }
  }
  r["simulation"] = sim;
  r["certified"] = out.certified;
  return out;
}

VerifyOutcome verify(const NetworkSpec& spec, const Certificate& cert) {
  const CertificateCheck check = check_certificate(spec, cert);
  VerifyOutcome out;
  out.valid = check.valid;
  out.report = {{"spec_digest", spec_digest(spec)},
                {"kind", to_string(cert.kind)},
                {"epsilon", cert.epsilon},
                {"valid", check.valid},
                {"row_margins", check.row_margins}};
  return out;
}

Json transform(const NetworkSpec& spec, const std::string& from, const std::string& to, double p,
               const std::optional<Certificate>& cert) {
  Json r = {{"spec_digest", spec_digest(spec)}, {"from", from}, {"to", to}};
  if (from == "l1" && to == "lp") {
    if (!(p > 1.0)) fail(ErrorCode::invalid_argument, "--p must be > 1");
    Certificate theta;
    if (cert) {
      if (!is_l1_kind(cert->kind)) fail(ErrorCode::invalid_argument, "l1 -> lp needs an L1 certificate");
      theta = *cert;
    } else {
      auto found = central_weights(spec, l1_kind_for(spec), nullptr, 0.0);
      if (!found) fail(ErrorCode::validation, "no L1 certificate exists at epsilon = 0");
      theta = *found;
    }
    const Instantiation inst = instantiate(spec, theta.epsilon, p);
    const L1ToLpResult res = l1_to_lp(inst.problem, theta.weights, p);
    Certificate lp{general_kind_for(spec), res.xi, res.exps, theta.epsilon, res.slack};
    const CertificateCheck check = check_certificate(spec, lp);
    r["theta"] = theta.weights;
    r["epsilon"] = theta.epsilon;
    r["result"] = l1_to_lp_json(res);
    r["certificate"] = to_json(lp);
    r["certificate_valid"] = check.valid;
    r["row_margins"] = check.row_margins;
    return r;
  }
  if (from == "lp" && to == "l1") {
    if (!cert || !cert->exps || !(cert->exps->p > 1.0))
      fail(ErrorCode::invalid_argument, "lp -> l1 needs an L^p certificate with p > 1 (--cert)");
    const ExponentParams& exps = *cert->exps;
    const Instantiation inst = instantiate(spec, cert->epsilon, exps.p, &exps.beta);
    const LpToL1Result res = lp_to_l1(inst.problem, cert->weights, exps);
    Certificate l1{l1_kind_for(spec), res.theta, std::nullopt, cert->epsilon, res.slack};
    const CertificateCheck check = check_certificate(spec, l1);
    r["xi"] = cert->weights;
    r["epsilon"] = cert->epsilon;
    r["self_delay_condition"] = inst.self_delay_condition;
    r["result"] = {{"theta", res.theta}, {"eta", res.eta}, {"zeta", res.zeta}, {"slack", res.slack}};
    r["certificate"] = to_json(l1);
    r["certificate_valid"] = check.valid;
    r["row_margins"] = check.row_margins;
    return r;
  }
  fail(ErrorCode::invalid_argument, "unsupported transform " + from + " -> " + to);
}

SimulationOutcome run_simulation(const NetworkSpec& spec, const History& hist, double t_end, double h,
                                 std::optional<int> periods) {
  SimulationOutcome out{simulate(spec, hist, t_end, h), std::nullopt, {}};
  const double usable = out.trajectory.t_end() - std::ceil(spec.tau_max() / h - 1e-9) * h;
  const int fit = static_cast<int>(std::floor(usable / spec.omega + 1e-9)) - 1;
  const int J = periods.value_or(fit);
  if (J < 3) {
    out.report_note = "horizon too short for a period-map report (needs J >= 3)";
  } else {
    out.report = period_map_report(out.trajectory, spec.omega, J);
  }
  return out;
}

ReproOutcome repro_example1() {
  ReproOutcome out;
  Json checks = Json::array();
  const NetworkSpec spec = example1_spec();

  // 1. L1 rows and the admissible ratio window (3, 10/3).
  {
    const Matrix m = assemble(spec, CriterionKind::ConstantL1, nullptr, 0.0).m;
    const Matrix expected{{-1.0, 3.0}, {3.0, -10.0}};
    const auto cert = find_weights(spec, CriterionKind::ConstantL1, nullptr, 0.0);
    const double ratio = cert ? cert->weights[0] / cert->weights[1] : 0.0;
    auto rejects = [&](Vector theta) {
      return !check_certificate(spec, {CriterionKind::ConstantL1, std::move(theta), std::nullopt}).valid;
    };
    const bool lower_rejected = rejects({3.0, 1.0});
    const bool upper_rejected = rejects({10.0, 3.0});
    const bool pass = matrix_close(m, expected, kReproTol) && cert && ratio > 3.0 && ratio < 10.0 / 3.0 &&
                      lower_rejected && upper_rejected;
    checks.push_back(check_json("l1_ratio_window", pass,
                                {{"matrix", to_json(expected)}, {"ratio_open_interval", {3.0, 10.0 / 3.0}}},
                                {{"matrix", to_json(m)}, {"theta", cert ? Json(cert->weights) : Json(nullptr)},
                                 {"ratio", ratio}, {"boundaries_rejected", lower_rejected && upper_rejected}}));
  }

  // 2-4. Exact exponents from theta = (19, 6), the resulting p = 2 rows and
  // the xi window (9/10, 21/19).
  {
    const Vector theta{19.0, 6.0};
    const Instantiation inst = instantiate(spec, 0.0, 2.0);
    const L1ToLpResult res = l1_to_lp(inst.problem, theta, 2.0);
    const double a12 = 0.5 * std::log(19.0 / 2.0) / std::log(3.0);
    const double a21 = 0.5 * std::log(18.0 / 19.0) / std::log(3.0);
    const bool exps_pass = std::abs(res.exps.alpha(0, 1) - a12) <= kReproTol &&
                           std::abs(res.exps.alpha(1, 0) - a21) <= kReproTol;
    checks.push_back(check_json("exact_exponents", exps_pass, {{"alpha12", a12}, {"alpha21", a21}},
                                {{"alpha12", res.exps.alpha(0, 1)}, {"alpha21", res.exps.alpha(1, 0)}}));

    const Matrix m = assemble(spec, CriterionKind::ConstantLpGeneral, &res.exps, 0.0).m;
    const Matrix expected{{-10.0 / 19.0, 9.0 / 19.0}, {19.0 / 4.0, -21.0 / 4.0}};
    checks.push_back(check_json("lp_matrix_p2", matrix_close(m, expected, kReproTol),
                                {{"matrix", to_json(expected)}}, {{"matrix", to_json(m)}}));

    const double ratio = res.xi[0] / res.xi[1];
    auto rejects = [&](Vector xi) {
      return !check_certificate(spec, {CriterionKind::ConstantLpGeneral, std::move(xi), res.exps}).valid;
    };
    const bool boundaries = rejects({9.0, 10.0}) && rejects({21.0, 19.0});
    const bool pass = ratio > 0.9 && ratio < 21.0 / 19.0 && boundaries;
    checks.push_back(check_json("xi_ratio_window", pass, {{"ratio_open_interval", {0.9, 21.0 / 19.0}}},
                                {{"xi", res.xi}, {"ratio", ratio}, {"boundaries_rejected", boundaries}}));
  }

  // 5. Balanced p = 2 rows admit no positive solution.
  {
    const ExponentParams bal = ExponentParams::balanced(2, 2.0);
    const Matrix m = assemble(spec, CriterionKind::ConstantLpBalanced, &bal, 0.0).m;
    const Matrix expected{{0.5, 1.5}, {1.5, -8.5}};
    const bool infeasible = !find_weights(spec, CriterionKind::ConstantLpBalanced, &bal, 0.0).has_value();
    checks.push_back(check_json("balanced_p2_infeasible", matrix_close(m, expected, kReproTol) && infeasible,
                                {{"matrix", to_json(expected)}, {"feasible", false}},
                                {{"matrix", to_json(m)}, {"feasible", !infeasible}}));
  }

  Json controls = Json::array();
  {
    NetworkSpec low_decay = spec;
    low_decay.d[1] = PeriodicFn::constant(3.9, spec.omega);
    controls.push_back(l1_control("d2=3.9", low_decay));
    NetworkSpec strong_coupling = spec;
    strong_coupling.a(1, 0) = PeriodicFn::constant(11.0, spec.omega);
    controls.push_back(l1_control("a21=11", strong_coupling));
  }

  out.all_pass = std::all_of(checks.begin(), checks.end(), [](const Json& c) { return c["pass"].get<bool>(); }) &&
                 std::all_of(controls.begin(), controls.end(), [](const Json& c) { return c["pass"].get<bool>(); });
  out.report = {{"example", "example1"}, {"checks", checks}, {"controls", controls}, {"all_pass", out.all_pass}};
  return out;
}

}  // namespace stabcert
