#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "stabcert/criteria.hpp"
#include "stabcert/ddesim.hpp"
#include "stabcert/error.hpp"

using namespace stabcert;

namespace {

NetworkSpec relaxation() { return constant_network({1}, Matrix{{0}}, Matrix{{0}}, {1}, Matrix{{0}}); }

NetworkSpec pure_delay() {
  NetworkSpec s = constant_network({0}, Matrix{{0}}, Matrix{{-1}}, {0}, Matrix{{1}});
  return s;
}

NetworkSpec forced_example1() {
  NetworkSpec s = constant_network({2, 11}, Matrix{{1, 3}, {3, 1}}, Matrix(2, 2, 0.0), {0, 0}, Matrix(2, 2, 0.0));
  s.inputs[0] = PeriodicFn(0.0, {{1, 0.0, 1.0}}, 1.0);
  s.inputs[1] = PeriodicFn(0.0, {{1, 1.0, 0.0}}, 1.0);
  return s;
}

NetworkSpec delayed_pair() {
  NetworkSpec s = constant_network({4, 5}, Matrix{{0.5, -1}, {0.8, 0.2}}, Matrix{{0.3, 0.6}, {-0.4, 0.2}}, {0, 0},
                                   Matrix{{0.5, 0.25}, {1.0, 0.5}});
  s.d[0] = PeriodicFn(4.0, {{1, 0.5, 0.0}}, 1.0);
  s.inputs[0] = PeriodicFn(1.0, {{1, 0.0, 1.0}}, 1.0);
  s.inputs[1] = PeriodicFn(0.0, {{2, 0.5, 0.5}}, 1.0);
  s.F = {1.0, 0.5};
  s.f_activation = Activation::saturation;
  return s;
}

double relaxation_error(double h) {
  const Trajectory tr = simulate(relaxation(), History::constant({0.0}), 1.0, h);
  return std::abs(tr.state(tr.steps())[0] - (1.0 - std::exp(-1.0)));
}

}  // namespace

TEST_CASE("scalar relaxation matches the closed form") {
  const Trajectory tr = simulate(relaxation(), History::constant({0.0}), 1.0, 1e-3);
  CHECK(tr.steps() == 1000);
  CHECK(std::abs(tr.state(1000)[0] - (1.0 - std::exp(-1.0))) <= 1e-9);
  CHECK(tr.t_end() == doctest::Approx(1.0));
}

TEST_CASE("fourth-order convergence") {
  const double ratio = relaxation_error(1e-2) / relaxation_error(5e-3);
  CHECK(ratio >= 12.0);
  CHECK(ratio <= 20.0);
}

TEST_CASE("pure delay: first interval is linear") {
  const Trajectory tr = simulate(pure_delay(), History::constant({1.0}), 1.0, 1e-2);
  CHECK(std::abs(tr.state(tr.steps())[0]) <= 1e-12);
  CHECK(std::abs(tr.value(0, 0.37) - 0.63) <= 1e-12);
  CHECK(tr.value(0, -0.5) == 1.0);
}

TEST_CASE("dense output reproduces grid samples") {
  const Trajectory tr = simulate(delayed_pair(), History::constant({1.0, -1.0}), 3.0, 0.05);
  for (std::size_t k = 0; k <= tr.steps(); k += 7)
    for (std::size_t i = 0; i < 2; ++i) CHECK(tr.value(i, tr.time(k)) == tr.state(k)[i]);
}

TEST_CASE("step-size and horizon preconditions") {
  CHECK_THROWS_AS(simulate(pure_delay(), History::constant({1.0}), 2.0, 2.0), Error);
  CHECK_THROWS_AS(simulate(relaxation(), History::constant({0.0}), 1.0, 0.3), Error);
  CHECK_THROWS_AS(simulate(relaxation(), History::constant({0.0}), 1.05, 0.1), Error);
  CHECK_THROWS_AS(simulate(relaxation(), History::constant({0.0}), 1.0, -0.1), Error);
  CHECK_THROWS_AS(simulate(relaxation(), History::constant({0.0, 1.0}), 1.0, 0.1), Error);
}

TEST_CASE("divergence reports the blow-up time") {
  const NetworkSpec s = constant_network({-50}, Matrix{{0}}, Matrix{{0}}, {0}, Matrix{{0}});
  try {
    simulate(s, History::constant({1.0}), 10.0, 1e-2);
    FAIL("expected a simulation error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::simulation);
    CHECK(std::string(e.what()).find("t = ") != std::string::npos);
  }
}

TEST_CASE("two histories converge and agree under step halving") {
  const NetworkSpec s = forced_example1();
  const Trajectory a = simulate(s, History::constant({1.0, -1.0}), 10.0, 1e-3);
  const Trajectory b = simulate(s, History::constant({-2.0, 3.0}), 10.0, 1e-3);
  const Trajectory a2 = simulate(s, History::constant({1.0, -1.0}), 10.0, 5e-4);
  double prev = INFINITY;
  for (int period = 1; period <= 10; ++period) {
    const std::size_t k = static_cast<std::size_t>(period * 1000);
    const double gap = std::max(std::abs(a.state(k)[0] - b.state(k)[0]), std::abs(a.state(k)[1] - b.state(k)[1]));
    CHECK(gap < prev);
    prev = gap;
    for (std::size_t i = 0; i < 2; ++i) CHECK(std::abs(a.state(k)[i] - a2.state(2 * k)[i]) <= 1e-6);
  }
}

TEST_CASE("period map: geometric decay gives the exact rate") {
  // u' = -ln2 u + sin(2 pi t): period differences halve every period.
  const NetworkSpec s = [] {
    NetworkSpec x = constant_network({std::numbers::ln2}, Matrix{{0}}, Matrix{{0}}, {0}, Matrix{{0}});
    x.inputs[0] = PeriodicFn(0.0, {{1, 0.0, 1.0}}, 1.0);
    return x;
  }();
  const Trajectory tr = simulate(s, History::constant({1.0}), 12.0, 1e-3);
  const SimReport rep = period_map_report(tr, 1.0, 10);
  REQUIRE(rep.eps_hat);
  CHECK(*rep.eps_hat == doctest::Approx(std::numbers::ln2).epsilon(1e-6));
  CHECK(rep.diffs.size() == 10);
  CHECK(rep.ratios.size() == 9);
  for (double r : rep.ratios) CHECK(r == doctest::Approx(0.5).epsilon(1e-6));
  CHECK_FALSE(rep.saturated);
}

TEST_CASE("period map: constant trajectory is saturated") {
  const NetworkSpec s = constant_network({1}, Matrix{{0}}, Matrix{{0}}, {0}, Matrix{{0}});
  const Trajectory tr = simulate(s, History::constant({0.0}), 5.0, 0.01);
  const SimReport rep = period_map_report(tr, 1.0, 3);
  CHECK(rep.saturated);
  CHECK_FALSE(rep.eps_hat);
  for (double d : rep.diffs) CHECK(d == 0.0);
  CHECK(orbit_variation(rep) == 0.0);
}

TEST_CASE("period map: preconditions") {
  const Trajectory tr = simulate(relaxation(), History::constant({0.0}), 4.0, 0.01);
  CHECK_THROWS_AS(period_map_report(tr, 1.0, 2), Error);
  CHECK_THROWS_AS(period_map_report(tr, 1.0, 4), Error);
  CHECK_NOTHROW(period_map_report(tr, 1.0, 3));
}

TEST_CASE("period map: the limit orbit is periodic") {
  const NetworkSpec s = delayed_pair();
  const Trajectory tr = simulate(s, History::constant({0.5, -0.5}), 16.0, 0.05);
  const SimReport a = period_map_report(tr, 1.0, 12);
  const SimReport b = period_map_report(tr, 1.0, 13);
  REQUIRE(a.v_samples.size() == b.v_samples.size());
  double gap = 0.0;
  for (std::size_t k = 0; k < a.v_samples.size(); ++k)
    for (std::size_t i = 0; i < 2; ++i) gap = std::max(gap, std::abs(a.v_samples[k][i] - b.v_samples[k][i]));
  CHECK(gap <= a.diffs.back() + 1e-9);
  for (double d : a.diffs) CHECK(d >= 0.0);
}

TEST_CASE("lyapunov: undelayed L1 value is the weighted period difference") {
  const NetworkSpec s = forced_example1();
  const Trajectory tr = simulate(s, History::constant({1.0, -1.0}), 4.0, 1e-3);
  const Certificate cert{CriterionKind::L1, {3.2, 1.0}, std::nullopt, 0.05, 0.0};
  for (double t : {0.0, 0.5, 1.234, 2.9}) {
    double want = 0.0;
    for (std::size_t i = 0; i < 2; ++i)
      want += cert.weights[i] * std::exp(0.05 * t) * std::abs(tr.value(i, t + 1.0) - tr.value(i, t));
    CHECK(lyapunov_value(tr, t, cert) == doctest::Approx(want).epsilon(1e-13));
  }
}

TEST_CASE("lyapunov: zero on a periodic trajectory") {
  const NetworkSpec s = relaxation();
  const Trajectory tr = simulate(s, History::constant({1.0}), 3.0, 0.01);
  CHECK(lyapunov_value(tr, 1.0, {CriterionKind::L1, {1.0}, std::nullopt, 0.3, 0.0}) == 0.0);
}

TEST_CASE("lyapunov: delay integral against a fine trapezoid oracle") {
  const NetworkSpec s = delayed_pair();
  const Trajectory tr = simulate(s, History::constant({0.5, -0.5}), 4.0, 0.05);
  ExponentParams e = ExponentParams::balanced(2, 2.0);
  const Certificate cert{CriterionKind::LpGeneral, {1.0, 1.3}, e, 0.2, 0.0};
  const StarBounds sb = star_bounds(s);
  const double t = 2.1;
  auto w = [&](std::size_t j, double y) { return std::exp(0.2 * y) * (tr.value(j, y + 1.0) - tr.value(j, y)); };
  double want = 0.0;
  for (std::size_t i = 0; i < 2; ++i) want += cert.weights[i] * std::pow(std::abs(w(i, t)), 2.0);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      const double tau = s.tau(i, j);
      const int m = 20000;
      double integral = 0.0;
      for (int k = 0; k <= m; ++k) {
        const double y = t - tau + tau * k / m;
        integral += (k == 0 || k == m ? 0.5 : 1.0) * std::pow(std::abs(w(j, y)), 2.0);
      }
      integral *= tau / m;
      want += 2.0 * cert.weights[i] * s.F[j] * sb.b_star(i, j) * std::exp(0.2 * tau) * integral;
    }
  CHECK(lyapunov_value(tr, t, cert) == doctest::Approx(want).epsilon(1e-6));
  CHECK_THROWS_AS(lyapunov_value(tr, 3.5, cert), Error);
  CHECK_THROWS_AS(lyapunov_value(tr, 0.2, cert), Error);
}

TEST_CASE("lyapunov: non-increasing along a certified delayed trajectory") {
  const NetworkSpec s = delayed_pair();
  const auto rate = max_epsilon(s, CriterionKind::L1, nullptr);
  REQUIRE(rate);
  Certificate cert = rate->cert;
  const Trajectory tr = simulate(s, History::constant({0.5, -0.5}), 6.0, 0.01);
  double prev = lyapunov_value(tr, 1.0, cert);
  for (std::size_t k = 101; k <= 500; ++k) {
    const double cur = lyapunov_value(tr, tr.time(k), cert);
    CHECK(cur <= prev * (1 + 1e-6) + 1e-9);
    prev = cur;
  }
}

TEST_CASE("csv export") {
  const Trajectory tr = simulate(relaxation(), History::constant({0.0}), 0.1, 0.05);
  std::ostringstream os;
  tr.write_csv(os);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "t,u1");
  int rows = 0;
  std::string last;
  while (std::getline(is, line)) {
    ++rows;
    last = line;
  }
  CHECK(rows == 3);
  const double u = std::stod(last.substr(last.find(',') + 1));
  CHECK(u == tr.state(2)[0]);
  CHECK(std::abs(u - (1.0 - std::exp(-0.1))) <= 1e-8);
}
