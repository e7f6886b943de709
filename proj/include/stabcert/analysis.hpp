#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stabcert/io.hpp"

namespace stabcert {

struct AnalysisOptions {
  std::vector<double> p_values{2.0, 3.0};
  bool simulate = true;
  int periods = 20;
};

struct AnalysisOutcome {
  Json report;
  bool certified = false;
};

/// L1 feasibility at eps = 0, the maximal certified L1 rate, balanced L^p for
/// every requested p, the L1 -> L^p conversion of the eps = 0 certificate, and
/// optionally a simulation cross-check of the certified rate.
AnalysisOutcome analyze(const NetworkSpec& spec, const AnalysisOptions& opts);

struct VerifyOutcome {
  Json report;
  bool valid = false;
};

VerifyOutcome verify(const NetworkSpec& spec, const Certificate& cert);

/// from/to in {"l1", "lp"}. For l1 -> lp, `cert` (an L1 certificate) is
/// optional; otherwise weights are searched at eps = 0. For lp -> l1 a
/// certificate with p > 1 is required.
Json transform(const NetworkSpec& spec, const std::string& from, const std::string& to, double p,
               const std::optional<Certificate>& cert);

struct SimulationOutcome {
  Trajectory trajectory;
  std::optional<SimReport> report;
  std::string report_note;
};

/// Simulates and, when the horizon allows J >= 3, builds the period-map
/// report; J defaults to the largest that fits.
SimulationOutcome run_simulation(const NetworkSpec& spec, const History& hist, double t_end, double h,
                                 std::optional<int> periods);

/// The worked two-neuron example: d = (2, 11), a = [[1,3],[3,1]], b = 0,
/// unit Lipschitz constants, zero delays, constant inputs.
NetworkSpec example1_spec(double input1 = 0.0, double input2 = 0.0);

struct ReproOutcome {
  Json report;
  bool all_pass = false;
};

ReproOutcome repro_example1();

/// Wraps a payload as {"metadata": {...}, "report": payload}.
Json envelope(const std::string& command, Json payload);

inline constexpr double kRateConsistency = 0.95;

}  // namespace stabcert
