#include "stabcert/stabcert.h"

#include <cstring>
#include <fstream>
#include <string>

#include "stabcert/analysis.hpp"
#include "stabcert/error.hpp"

struct stabcert_spec {
  stabcert::NetworkSpec spec;
};

struct stabcert_trajectory {
  stabcert::SimulationOutcome sim;
};

namespace {

thread_local std::string g_last_error;

stabcert_status to_status(stabcert::ErrorCode code) {
  using stabcert::ErrorCode;
  switch (code) {
    case ErrorCode::invalid_argument:
    case ErrorCode::dimension_mismatch:
      return STABCERT_INVALID_ARGUMENT;
    case ErrorCode::validation:
      return STABCERT_VALIDATION;
    case ErrorCode::domain:
      return STABCERT_DOMAIN;
    case ErrorCode::parse:
      return STABCERT_PARSE;
    case ErrorCode::simulation:
      return STABCERT_SIMULATION;
    case ErrorCode::io:
      return STABCERT_IO;
    case ErrorCode::internal:
      break;
  }
  return STABCERT_INTERNAL;
}

stabcert_status set_error(stabcert_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

template <class F>
stabcert_status guarded(F&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const stabcert::Error& e) {
    return set_error(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(STABCERT_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(STABCERT_INTERNAL, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

char* dump(const stabcert::Json& j) { return dup_string(j.dump(2)); }

}  // namespace

#define REQUIRE_ARG(cond, msg) \
  if (!(cond)) return set_error(STABCERT_INVALID_ARGUMENT, msg)

extern "C" {

const char* stabcert_last_error(void) { return g_last_error.c_str(); }

const char* stabcert_status_name(stabcert_status status) {
  switch (status) {
    case STABCERT_OK: return "ok";
    case STABCERT_INVALID_ARGUMENT: return "invalid_argument";
    case STABCERT_PARSE: return "parse";
    case STABCERT_VALIDATION: return "validation";
    case STABCERT_DOMAIN: return "domain";
    case STABCERT_INFEASIBLE: return "infeasible";
    case STABCERT_INTERNAL: return "internal";
    case STABCERT_IO: return "io";
    case STABCERT_SIMULATION: return "simulation";
  }
  return "unknown";
}

const char* stabcert_version(void) { return "0.1.0"; }

void stabcert_string_free(char* s) { delete[] s; }

stabcert_status stabcert_spec_from_json(const char* json, stabcert_spec** out) {
  REQUIRE_ARG(json && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    *out = new stabcert_spec{stabcert::spec_from_text(json)};
    return STABCERT_OK;
  });
}

void stabcert_spec_free(stabcert_spec* spec) { delete spec; }

size_t stabcert_spec_dim(const stabcert_spec* spec) { return spec ? spec->spec.n : 0; }

stabcert_status stabcert_spec_digest(const stabcert_spec* spec, char** out) {
  REQUIRE_ARG(spec && out, "null argument");
  return guarded([&] {
    *out = dup_string(stabcert::spec_digest(spec->spec));
    return STABCERT_OK;
  });
}

stabcert_status stabcert_analyze(const stabcert_spec* spec, const double* p_values, size_t n_p, int periods,
                                 char** report_json, int* certified) {
  REQUIRE_ARG(spec && report_json, "null argument");
  REQUIRE_ARG(p_values || n_p == 0, "p_values is null but n_p > 0");
  return guarded([&] {
    stabcert::AnalysisOptions opts;
    if (p_values) opts.p_values.assign(p_values, p_values + n_p);
    opts.simulate = periods > 0;
    if (periods > 0) {
      if (periods < 3) stabcert::fail(stabcert::ErrorCode::invalid_argument, "periods must be >= 3");
      opts.periods = periods;
    }
    const auto res = stabcert::analyze(spec->spec, opts);
    *report_json = dump(stabcert::envelope("analyze", res.report));
    if (certified) *certified = res.certified ? 1 : 0;
    return STABCERT_OK;
  });
}

stabcert_status stabcert_verify(const stabcert_spec* spec, const char* certificate_json, char** report_json) {
  REQUIRE_ARG(spec && certificate_json && report_json, "null argument");
  return guarded([&] {
    const auto cert = stabcert::certificate_from_text(certificate_json);
    const auto res = stabcert::verify(spec->spec, cert);
    *report_json = dump(stabcert::envelope("verify", res.report));
    if (!res.valid) return set_error(STABCERT_INFEASIBLE, "certificate does not satisfy the criterion");
    return STABCERT_OK;
  });
}

stabcert_status stabcert_transform(const stabcert_spec* spec, const char* from, const char* to, double p,
                                   const char* certificate_json, char** report_json) {
  REQUIRE_ARG(spec && from && to && report_json, "null argument");
  return guarded([&] {
    std::optional<stabcert::Certificate> cert;
    if (certificate_json) cert = stabcert::certificate_from_text(certificate_json);
    *report_json = dump(stabcert::envelope("transform", stabcert::transform(spec->spec, from, to, p, cert)));
    return STABCERT_OK;
  });
}

stabcert_status stabcert_simulate(const stabcert_spec* spec, const char* history_json, double t_end, double h,
                                  int periods, stabcert_trajectory** out) {
  REQUIRE_ARG(spec && history_json && out, "null argument");
  *out = nullptr;
  return guarded([&] {
    const auto hist = stabcert::history_from_text(history_json, spec->spec);
    std::optional<int> J;
    if (periods > 0) J = periods;
    *out = new stabcert_trajectory{stabcert::run_simulation(spec->spec, hist, t_end, h, J)};
    return STABCERT_OK;
  });
}

void stabcert_trajectory_free(stabcert_trajectory* traj) { delete traj; }

size_t stabcert_trajectory_size(const stabcert_trajectory* traj) {
  return traj ? traj->sim.trajectory.steps() + 1 : 0;
}

stabcert_status stabcert_trajectory_state(const stabcert_trajectory* traj, size_t k, double* t, double* out,
                                          size_t dim) {
  REQUIRE_ARG(traj && out, "null argument");
  const auto& tr = traj->sim.trajectory;
  REQUIRE_ARG(k <= tr.steps(), "grid index out of range");
  REQUIRE_ARG(dim == tr.dim(), "dimension mismatch");
  const auto s = tr.state(k);
  std::copy(s.begin(), s.end(), out);
  if (t) *t = tr.time(k);
  g_last_error.clear();
  return STABCERT_OK;
}

stabcert_status stabcert_trajectory_write_csv(const stabcert_trajectory* traj, const char* path) {
  REQUIRE_ARG(traj && path, "null argument");
  return guarded([&] {
    std::ofstream os(path);
    if (!os) stabcert::fail(stabcert::ErrorCode::io, std::string("cannot open ") + path + " for writing");
    traj->sim.trajectory.write_csv(os);
    if (!os) stabcert::fail(stabcert::ErrorCode::io, std::string("write failed for ") + path);
    return STABCERT_OK;
  });
}

stabcert_status stabcert_trajectory_report(const stabcert_trajectory* traj, char** report_json) {
  REQUIRE_ARG(traj && report_json, "null argument");
  return guarded([&] {
    const auto& sim = traj->sim;
    const auto& tr = sim.trajectory;
    stabcert::Json body = {{"spec_digest", stabcert::spec_digest(tr.spec())},
                           {"step", tr.step()},
                           {"t_end", tr.t_end()},
                           {"grid_points", tr.steps() + 1}};
    if (sim.report) {
      body["period_map"] = stabcert::to_json(*sim.report);
    } else {
      body["period_map"] = nullptr;
      body["note"] = sim.report_note;
    }
    *report_json = dump(stabcert::envelope("simulate", body));
    return STABCERT_OK;
  });
}

stabcert_status stabcert_repro_example1(char** report_json, int* all_pass) {
  REQUIRE_ARG(report_json, "null argument");
  return guarded([&] {
    const auto res = stabcert::repro_example1();
    *report_json = dump(stabcert::envelope("repro", res.report));
    if (all_pass) *all_pass = res.all_pass ? 1 : 0;
    return STABCERT_OK;
  });
}

}  // extern "C"
