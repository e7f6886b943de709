// stabcert command-line front end. Talks to the library only through the C API.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "stabcert/stabcert.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitNegative = 2;

struct InputError {
  std::string msg;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError{"cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text << '\n')) throw InputError{"cannot write " + path};
}

[[noreturn]] void raise(stabcert_status s, const std::string& context) {
  throw InputError{context + ": " + stabcert_status_name(s) + ": " + stabcert_last_error()};
}

using SpecPtr = std::unique_ptr<stabcert_spec, decltype(&stabcert_spec_free)>;
using TrajPtr = std::unique_ptr<stabcert_trajectory, decltype(&stabcert_trajectory_free)>;

SpecPtr load_spec(const std::string& path) {
  const std::string text = read_file(path);
  stabcert_spec* raw = nullptr;
  if (const auto s = stabcert_spec_from_json(text.c_str(), &raw); s != STABCERT_OK) raise(s, path);
  return SpecPtr(raw, stabcert_spec_free);
}

// Takes ownership of a library string.
std::string take(char* s) {
  std::string out = s ? s : "";
  stabcert_string_free(s);
  return out;
}

void emit(const std::string& json, const std::string& out_path) {
  if (out_path.empty())
    std::cout << json << '\n';
  else
    write_file(out_path, json);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exponential-stability certificates for periodic delayed neural networks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(stabcert_version()));

  std::string spec_path, hist_path, cert_path, out_path, out_prefix, from, to, example;
  std::vector<double> p_values;
  double t_end = 0.0, h = 0.0, p = 2.0;
  int periods = 20;
  bool no_sim = false;

  auto* analyze = app.add_subcommand("analyze", "Search for certificates and report rates");
  analyze->add_option("spec", spec_path, "network spec (JSON)")->required();
  analyze->add_option("--p", p_values, "extra comma-separated p values (2 and 3 are always tried)")->delimiter(',');
  analyze->add_option("--out", out_path, "write the report here instead of stdout");
  analyze->add_option("--periods", periods, "periods J for the simulation cross-check")->check(CLI::Range(3, 100000));
  analyze->add_flag("--no-sim", no_sim, "skip the simulation cross-check");

  auto* simulate = app.add_subcommand("simulate", "Integrate the network and write CSV plus report");
  simulate->set_help_flag("--help", "print this help message and exit");
  simulate->add_option("spec", spec_path, "network spec (JSON)")->required();
  simulate->add_option("history", hist_path, "initial history (JSON)")->required();
  simulate->add_option("--t-end", t_end, "final time")->required();
  simulate->add_option("--h", h, "step size")->required();
  simulate->add_option("--out-prefix", out_prefix, "writes PREFIX.csv and PREFIX.report.json")->required();
  auto* sim_periods = simulate->add_option("--periods", periods, "periods J (default: as many as fit)");

  auto* verify = app.add_subcommand("verify", "Check a certificate against a spec");
  verify->add_option("spec", spec_path, "network spec (JSON)")->required();
  verify->add_option("cert", cert_path, "certificate (JSON)")->required();
  verify->add_option("--out", out_path, "write the report here instead of stdout");

  auto* transform = app.add_subcommand("transform", "Convert certificates between L1 and L^p");
  transform->add_option("spec", spec_path, "network spec (JSON)")->required();
  transform->add_option("--from", from, "l1 or lp")->required()->check(CLI::IsMember({"l1", "lp"}));
  transform->add_option("--to", to, "l1 or lp")->required()->check(CLI::IsMember({"l1", "lp"}));
  transform->add_option("--p", p, "exponent p > 1 for l1 -> lp");
  transform->add_option("--cert", cert_path, "source certificate (JSON); required for lp -> l1");
  transform->add_option("--out", out_path, "write the report here instead of stdout");

  auto* repro = app.add_subcommand("repro", "Reproduce a worked example");
  repro->add_option("example", example, "example name")->required()->check(CLI::IsMember({"example1"}));
  repro->add_option("--out", out_path, "write the report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*analyze) {
      const SpecPtr spec = load_spec(spec_path);
      p_values.insert(p_values.end(), {2.0, 3.0});
      std::sort(p_values.begin(), p_values.end());
      p_values.erase(std::unique(p_values.begin(), p_values.end()), p_values.end());
      char* json = nullptr;
      int certified = 0;
      const int sim_periods_arg = no_sim ? 0 : periods;
      if (const auto s = stabcert_analyze(spec.get(), p_values.data(), p_values.size(), sim_periods_arg, &json,
                                          &certified);
          s != STABCERT_OK)
        raise(s, spec_path);
      emit(take(json), out_path);
      return certified ? kExitOk : kExitNegative;
    }

    if (*simulate) {
      const SpecPtr spec = load_spec(spec_path);
      const std::string hist = read_file(hist_path);
      stabcert_trajectory* raw = nullptr;
      const int J = sim_periods->count() > 0 ? periods : 0;
      if (const auto s = stabcert_simulate(spec.get(), hist.c_str(), t_end, h, J, &raw); s != STABCERT_OK)
        raise(s, hist_path);
      const TrajPtr traj(raw, stabcert_trajectory_free);
      const std::string csv = out_prefix + ".csv";
      if (const auto s = stabcert_trajectory_write_csv(traj.get(), csv.c_str()); s != STABCERT_OK) raise(s, csv);
      char* json = nullptr;
      if (const auto s = stabcert_trajectory_report(traj.get(), &json); s != STABCERT_OK) raise(s, "report");
      write_file(out_prefix + ".report.json", take(json));
      return kExitOk;
    }

    if (*verify) {
      const SpecPtr spec = load_spec(spec_path);
      const std::string cert = read_file(cert_path);
      char* json = nullptr;
      const auto s = stabcert_verify(spec.get(), cert.c_str(), &json);
      if (s != STABCERT_OK && s != STABCERT_INFEASIBLE) raise(s, cert_path);
      emit(take(json), out_path);
      return s == STABCERT_OK ? kExitOk : kExitNegative;
    }

    if (*transform) {
      const SpecPtr spec = load_spec(spec_path);
      std::optional<std::string> cert;
      if (!cert_path.empty()) cert = read_file(cert_path);
      char* json = nullptr;
      if (const auto s = stabcert_transform(spec.get(), from.c_str(), to.c_str(), p, cert ? cert->c_str() : nullptr,
                                            &json);
          s != STABCERT_OK)
        raise(s, spec_path);
      emit(take(json), out_path);
      return kExitOk;
    }

    if (*repro) {
      char* json = nullptr;
      int all_pass = 0;
      if (const auto s = stabcert_repro_example1(&json, &all_pass); s != STABCERT_OK) raise(s, "repro");
      emit(take(json), out_path);
      return all_pass ? kExitOk : kExitNegative;
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.msg << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}
