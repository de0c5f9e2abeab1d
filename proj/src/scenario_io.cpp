#include "ch/scenario_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ch/errors.hpp"

namespace ch {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  ensure_parse(j.is_object(), where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw ParseError("unknown key '" + it.key() + "' in " + where);
}

[[noreturn]] void fail(const std::string& what) { throw ParseError(what); }

double need_number(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) fail("missing key '" + key + "' in " + where);
  if (!j[key].is_number()) fail("key '" + key + "' in " + where + " must be a number");
  return j[key].get<double>();
}

std::vector<double> need_array(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key) || !j[key].is_array()) fail("missing array '" + key + "' in " + where);
  std::vector<double> out;
  for (const auto& v : j[key]) {
    if (!v.is_number()) fail("array '" + key + "' in " + where + " must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

TimeSampler parse_sampler(const json& j, const std::string& where) {
  ensure_parse(j.is_object() && j.contains("type") && j["type"].is_string(),
               where + " must be an object with a 'type' tag");
  std::string type = j["type"].get<std::string>();
  try {
    if (type == "constant") {
      reject_unknown(j, {"type", "value"}, where);
      return TimeSampler::constant(need_number(j, "value", where));
    }
    if (type == "linear") {
      reject_unknown(j, {"type", "a", "b"}, where);
      return TimeSampler::linear(need_number(j, "a", where), need_number(j, "b", where));
    }
    if (type == "polynomial") {
      reject_unknown(j, {"type", "coeffs"}, where);
      return TimeSampler::polynomial(need_array(j, "coeffs", where));
    }
    if (type == "sine") {
      reject_unknown(j, {"type", "amplitude", "omega", "phase", "offset"}, where);
      return TimeSampler::sine(need_number(j, "amplitude", where), need_number(j, "omega", where),
                               need_number(j, "phase", where), need_number(j, "offset", where));
    }
    if (type == "table") {
      reject_unknown(j, {"type", "times", "values"}, where);
      return TimeSampler::table(need_array(j, "times", where), need_array(j, "values", where));
    }
  } catch (const std::invalid_argument& e) {
    fail(where + ": " + e.what());
  }
  fail("unknown sampler type '" + type + "' in " + where);
}

InitialData parse_profile(const json& j, const std::string& where) {
  ensure_parse(j.is_object() && j.contains("type") && j["type"].is_string(),
               where + " must be an object with a 'type' tag");
  std::string type = j["type"].get<std::string>();
  try {
    if (type == "constant") {
      reject_unknown(j, {"type", "value"}, where);
      return InitialData::constant(need_number(j, "value", where));
    }
    if (type == "gaussian_bump") {
      reject_unknown(j, {"type", "amplitude", "center", "width"}, where);
      return InitialData::gaussian_bump(need_number(j, "amplitude", where),
                                        need_number(j, "center", where),
                                        need_number(j, "width", where));
    }
    if (type == "polynomial") {
      reject_unknown(j, {"type", "coeffs"}, where);
      return InitialData::polynomial(need_array(j, "coeffs", where));
    }
    if (type == "table") {
      reject_unknown(j, {"type", "x", "values"}, where);
      return InitialData::table(need_array(j, "x", where), need_array(j, "values", where));
    }
  } catch (const std::invalid_argument& e) {
    fail(where + ": " + e.what());
  }
  fail("unknown profile type '" + type + "' in " + where);
}

json parse_text(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ParseError("malformed JSON input");
  return j;
}

}  // namespace

Scenario parse_scenario(const std::string& json_text) {
  json j = parse_text(json_text);
  reject_unknown(j, {"order", "domain", "initial", "boundary", "solver"}, "scenario");

  Scenario sc;
  ensure_parse(j.contains("order"), "scenario needs an 'order' section");
  reject_unknown(j["order"], {"n", "kappa"}, "order");
  sc.order = static_cast<int>(need_number(j["order"], "n", "order"));
  sc.kappa = j["order"].contains("kappa") ? need_number(j["order"], "kappa", "order") : 0.0;

  ensure_parse(j.contains("domain"), "scenario needs a 'domain' section");
  reject_unknown(j["domain"], {"t_final", "n_cells", "slab_dt"}, "domain");
  sc.t_final = need_number(j["domain"], "t_final", "domain");
  sc.n_cells = static_cast<int>(need_number(j["domain"], "n_cells", "domain"));
  sc.slab_dt = need_number(j["domain"], "slab_dt", "domain");

  ensure_parse(j.contains("initial"), "scenario needs an 'initial' section");
  reject_unknown(j["initial"], {"y0"}, "initial");
  ensure_parse(j["initial"].contains("y0"), "initial needs 'y0'");
  sc.y0 = parse_profile(j["initial"]["y0"], "initial.y0");

  ensure_parse(j.contains("boundary"), "scenario needs a 'boundary' section");
  const json& b = j["boundary"];
  reject_unknown(b,
                 {"v_left", "v_right", "trace_left", "trace_right", "y_left_in", "y_right_in"},
                 "boundary");
  ensure_parse(b.contains("v_left") && b.contains("v_right"),
               "boundary needs 'v_left' and 'v_right'");
  sc.v_left = parse_sampler(b["v_left"], "boundary.v_left");
  sc.v_right = parse_sampler(b["v_right"], "boundary.v_right");

  auto parse_traces = [&](const char* key, const TimeSampler& flux) {
    std::vector<TimeSampler> traces;
    if (b.contains(key)) {
      ensure_parse(b[key].is_array(), std::string(key) + " must be an array of samplers");
      int idx = 0;
      for (const auto& e : b[key])
        traces.push_back(parse_sampler(e, std::string(key) + "[" + std::to_string(idx++) + "]"));
    } else {
      traces.push_back(flux);
      for (int i = 1; i < sc.order; ++i) traces.push_back(TimeSampler::constant(0.0));
    }
    return traces;
  };
  sc.trace_left = parse_traces("trace_left", sc.v_left);
  sc.trace_right = parse_traces("trace_right", sc.v_right);
  sc.y_left_in = b.contains("y_left_in") ? parse_sampler(b["y_left_in"], "boundary.y_left_in")
                                         : TimeSampler::constant(0.0);
  sc.y_right_in = b.contains("y_right_in") ? parse_sampler(b["y_right_in"], "boundary.y_right_in")
                                           : TimeSampler::constant(0.0);

  if (j.contains("solver")) {
    const json& s = j["solver"];
    reject_unknown(s,
                   {"picard_tol", "picard_max_iter", "relax", "sign_change_cap", "eps_v_rel",
                    "max_halvings", "zero_initial_guess"},
                   "solver");
    if (s.contains("picard_tol")) sc.params.picard_tol = need_number(s, "picard_tol", "solver");
    if (s.contains("picard_max_iter"))
      sc.params.picard_max_iter = static_cast<int>(need_number(s, "picard_max_iter", "solver"));
    if (s.contains("relax")) sc.params.relax = need_number(s, "relax", "solver");
    if (s.contains("sign_change_cap"))
      sc.params.sign_change_cap = static_cast<int>(need_number(s, "sign_change_cap", "solver"));
    if (s.contains("eps_v_rel")) sc.params.eps_v_rel = need_number(s, "eps_v_rel", "solver");
    if (s.contains("max_halvings"))
      sc.params.max_halvings = static_cast<int>(need_number(s, "max_halvings", "solver"));
    if (s.contains("zero_initial_guess")) {
      ensure_parse(s["zero_initial_guess"].is_boolean(), "zero_initial_guess must be a boolean");
      sc.params.zero_initial_guess = s["zero_initial_guess"].get<bool>();
    }
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read scenario file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

Perturbation parse_perturbation(const std::string& json_text) {
  json j = parse_text(json_text);
  reject_unknown(j, {"y0_delta", "y_left_in_delta", "y_right_in_delta"}, "perturbation");
  Perturbation p;
  if (j.contains("y0_delta")) p.y0_delta = parse_profile(j["y0_delta"], "y0_delta");
  if (j.contains("y_left_in_delta"))
    p.y_left_in_delta = parse_sampler(j["y_left_in_delta"], "y_left_in_delta");
  if (j.contains("y_right_in_delta"))
    p.y_right_in_delta = parse_sampler(j["y_right_in_delta"], "y_right_in_delta");
  return p;
}

Perturbation load_perturbation(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read perturbation file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_perturbation(ss.str());
}

Scenario apply_perturbation(const Scenario& base, const Perturbation& p) {
  Scenario sc = base;
  if (p.y0_delta) sc.y0 = InitialData::sum(sc.y0, *p.y0_delta);
  if (p.y_left_in_delta) sc.y_left_in = TimeSampler::sum(sc.y_left_in, *p.y_left_in_delta);
  if (p.y_right_in_delta) sc.y_right_in = TimeSampler::sum(sc.y_right_in, *p.y_right_in_delta);
  return sc;
}

}  // namespace ch
