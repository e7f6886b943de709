#include "stabcert/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>

#include "stabcert/error.hpp"

namespace stabcert {

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& msg) {
  fail(ErrorCode::parse, "field " + (path.empty() ? std::string("/") : path) + ": " + msg);
}

std::string sub(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string sub(const std::string& path, std::size_t idx) { return path + "/" + std::to_string(idx); }

const Json& member(const Json& obj, const std::string& path, const char* key) {
  if (!obj.is_object()) schema_error(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(sub(path, key), "missing required field");
  return *it;
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) schema_error(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) schema_error(path, "number is not finite");
  return v;
}

const Json& array(const Json& j, const std::string& path, std::size_t expected) {
  if (!j.is_array()) schema_error(path, "expected an array");
  if (expected != 0 && j.size() != expected)
    schema_error(path, "expected " + std::to_string(expected) + " entries, found " + std::to_string(j.size()));
  return j;
}

Vector number_vector(const Json& j, const std::string& path, std::size_t n) {
  array(j, path, n);
  Vector out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], sub(path, i)));
  return out;
}

Matrix number_matrix(const Json& j, const std::string& path, std::size_t n) {
  array(j, path, n);
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string rp = sub(path, i);
    array(j[i], rp, n);
    for (std::size_t k = 0; k < n; ++k) m(i, k) = number(j[i][k], sub(rp, k));
  }
  return m;
}

PeriodicFn periodic_from_json(const Json& j, const std::string& path, double omega) {
  try {
    if (j.is_number()) return PeriodicFn::constant(number(j, path), omega);
    const double c0 = number(member(j, path, "c0"), sub(path, "c0"));
    std::vector<Harmonic> hs;
    if (auto it = j.find("harmonics"); it != j.end()) {
      const std::string hp = sub(path, "harmonics");
      array(*it, hp, 0);
      for (std::size_t k = 0; k < it->size(); ++k) {
        const std::string ep = sub(hp, k);
        const Json& e = array((*it)[k], ep, 3);
        const double wave = number(e[0], sub(ep, 0));
        if (wave != std::floor(wave) || wave < 1) schema_error(sub(ep, 0), "wave number must be an integer >= 1");
        hs.push_back({static_cast<int>(wave), number(e[1], sub(ep, 1)), number(e[2], sub(ep, 2))});
      }
    }
    return PeriodicFn(c0, std::move(hs), omega);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::parse) throw;
    fail(e.code(), "field " + path + ": " + e.what());
  }
}

Json periodic_to_json(const PeriodicFn& f) {
  Json hs = Json::array();
  for (const auto& h : f.harmonics()) hs.push_back({h.k, h.a, h.b});
  return {{"c0", f.c0()}, {"harmonics", hs}};
}

std::size_t dimension(const Json& j) {
  const Json& n = member(j, "", "n");
  if (!n.is_number_integer() || n.get<long long>() < 1) schema_error("/n", "expected a positive integer");
  return static_cast<std::size_t>(n.get<long long>());
}

}  // namespace

Json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(ErrorCode::parse, what + ": " + e.what());
  }
}

NetworkSpec spec_from_json(const Json& j) {
  NetworkSpec s;
  s.n = dimension(j);
  const std::size_t n = s.n;
  s.omega = number(member(j, "", "omega"), "/omega");
  if (!(s.omega > 0.0)) schema_error("/omega", "must be > 0");

  const Json& d = array(member(j, "", "d"), "/d", n);
  const Json& in = array(member(j, "", "inputs"), "/inputs", n);
  for (std::size_t i = 0; i < n; ++i) {
    s.d.push_back(periodic_from_json(d[i], sub("/d", i), s.omega));
    s.inputs.push_back(periodic_from_json(in[i], sub("/inputs", i), s.omega));
  }
  s.a = Grid<PeriodicFn>(n, n);
  s.b = Grid<PeriodicFn>(n, n);
  for (const char* key : {"a", "b"}) {
    const std::string path = std::string("/") + key;
    const Json& m = array(member(j, "", key), path, n);
    auto& target = key[0] == 'a' ? s.a : s.b;
    for (std::size_t i = 0; i < n; ++i) {
      array(m[i], sub(path, i), n);
      for (std::size_t k = 0; k < n; ++k)
        target(i, k) = periodic_from_json(m[i][k], sub(sub(path, i), k), s.omega);
    }
  }
  s.tau = number_matrix(member(j, "", "tau"), "/tau", n);
  s.G = number_vector(member(j, "", "G"), "/G", n);
  s.F = number_vector(member(j, "", "F"), "/F", n);
  for (const char* key : {"g_activation", "f_activation"}) {
    if (auto it = j.find(key); it != j.end()) {
      if (!it->is_string()) schema_error(std::string("/") + key, "expected a string");
      (key[0] == 'g' ? s.g_activation : s.f_activation) = activation_from_string(it->get<std::string>());
    }
  }
  s.validate();
  return s;
}

NetworkSpec spec_from_text(const std::string& text) {
  return spec_from_json(parse_json_text(text, "network spec"));
}

Json to_json(const NetworkSpec& s) {
  Json d = Json::array(), inputs = Json::array(), a = Json::array(), b = Json::array();
  for (std::size_t i = 0; i < s.n; ++i) {
    d.push_back(periodic_to_json(s.d[i]));
    inputs.push_back(periodic_to_json(s.inputs[i]));
    Json ar = Json::array(), br = Json::array();
    for (std::size_t k = 0; k < s.n; ++k) {
      ar.push_back(periodic_to_json(s.a(i, k)));
      br.push_back(periodic_to_json(s.b(i, k)));
    }
    a.push_back(ar);
    b.push_back(br);
  }
  return {{"n", s.n},         {"omega", s.omega}, {"d", d},         {"a", a},
          {"b", b},           {"inputs", inputs}, {"tau", to_json(s.tau)},
          {"G", s.G},         {"F", s.F},         {"g_activation", to_string(s.g_activation)},
          {"f_activation", to_string(s.f_activation)}};
}

History history_from_json(const Json& j, const NetworkSpec& spec) {
  const Json& kind = member(j, "", "kind");
  if (!kind.is_string()) schema_error("/kind", "expected a string");
  const std::string k = kind.get<std::string>();
  History h;
  if (k == "constant") {
    h = History::constant(number_vector(member(j, "", "values"), "/values", spec.n));
  } else if (k == "sampled-cubic") {
    const Json& vals = array(member(j, "", "values"), "/values", spec.n);
    std::vector<Vector> samples;
    for (std::size_t i = 0; i < spec.n; ++i) samples.push_back(number_vector(vals[i], sub("/values", i), 0));
    double span = spec.tau_max();
    if (auto it = j.find("span"); it != j.end()) span = number(*it, "/span");
    h = History::sampled_cubic(std::move(samples), span);
  } else {
    schema_error("/kind", "expected 'constant' or 'sampled-cubic'");
  }
  h.validate_for(spec);
  return h;
}

History history_from_text(const std::string& text, const NetworkSpec& spec) {
  return history_from_json(parse_json_text(text, "history"), spec);
}

Certificate certificate_from_json(const Json& j) {
  Certificate c;
  const Json& kind = member(j, "", "kind");
  if (!kind.is_string()) schema_error("/kind", "expected a string");
  c.kind = criterion_from_string(kind.get<std::string>());
  c.weights = number_vector(member(j, "", "weights"), "/weights", 0);
  const std::size_t n = c.weights.size();
  if (n == 0) schema_error("/weights", "must not be empty");
  if (auto it = j.find("epsilon"); it != j.end()) c.epsilon = number(*it, "/epsilon");
  if (auto it = j.find("slack"); it != j.end()) c.slack = number(*it, "/slack");
  if (!is_l1_kind(c.kind)) {
    ExponentParams e;
    e.p = number(member(j, "", "p"), "/p");
    if (c.kind == CriterionKind::LpBalanced || c.kind == CriterionKind::ConstantLpBalanced) {
      e = ExponentParams::balanced(n, e.p);
    } else if (e.p != 1.0) {
      e.alpha = number_matrix(member(j, "", "alpha"), "/alpha", n);
      e.beta = number_matrix(member(j, "", "beta"), "/beta", n);
    }
    c.exps = std::move(e);
  }
  return c;
}

Certificate certificate_from_text(const std::string& text) {
  return certificate_from_json(parse_json_text(text, "certificate"));
}

Json to_json(const Matrix& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto r = m.row(i);
    out.push_back(Vector(r.begin(), r.end()));
  }
  return out;
}

Json to_json(const Certificate& c) {
  Json j = {{"kind", to_string(c.kind)}, {"weights", c.weights}, {"epsilon", c.epsilon}, {"slack", c.slack}};
  if (c.exps) {
    j["p"] = c.exps->p;
    if (!c.exps->alpha.empty()) j["alpha"] = to_json(c.exps->alpha);
    if (!c.exps->beta.empty()) j["beta"] = to_json(c.exps->beta);
  }
  return j;
}

Json to_json(const StarBounds& sb) {
  return {{"a_star", to_json(sb.a_star)},
          {"b_star", to_json(sb.b_star)},
          {"i_star", sb.i_star},
          {"d_lower", sb.d_lower}};
}

Json to_json(const SimReport& rep) {
  Json j = {{"diffs", rep.diffs},
            {"ratios", rep.ratios},
            {"saturated", rep.saturated},
            {"t_start", rep.t_start},
            {"eps_hat", rep.eps_hat ? Json(*rep.eps_hat) : Json(nullptr)},
            {"orbit_variation", orbit_variation(rep)}};
  Json v = Json::array();
  for (std::size_t k = 0; k < rep.v_samples.size(); ++k) {
    Json row = Json::array({rep.v_times[k]});
    for (double x : rep.v_samples[k]) row.push_back(x);
    v.push_back(row);
  }
  j["v_samples"] = v;
  return j;
}

std::string spec_digest(const NetworkSpec& spec) {
  const std::string canon = to_json(spec).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : canon) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace stabcert
