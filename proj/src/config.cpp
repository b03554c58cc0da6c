// Copyright 2026 The wristfic Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "wristfic/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

namespace wristfic {

namespace {

using nlohmann::json;

constexpr double kDeg = std::numbers::pi / 180.0;

std::string child(const std::string& where, const std::string& key) {
  return where + "/" + key;
}

std::string child(const std::string& where, std::size_t index) {
  return where + "/" + std::to_string(index);
}

std::string number_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

void require_object(const json& j, const std::string& where,
                    std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(where, "expected an object");
  for (const auto& [key, value] : j.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* a) { return key == a; });
    if (!known) throw ConfigError(child(where, key), "unknown key");
  }
}

double get_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(where, "must be finite");
  return v;
}

double get_positive(const json& j, const std::string& where) {
  const double v = get_number(j, where);
  if (!(v > 0.0)) throw ConfigError(where, "must be positive");
  return v;
}

double get_non_negative(const json& j, const std::string& where) {
  const double v = get_number(j, where);
  if (!(v >= 0.0)) throw ConfigError(where, "must be non-negative");
  return v;
}

int get_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ConfigError(where, "expected an integer");
  return j.get<int>();
}

bool get_bool(const json& j, const std::string& where) {
  if (!j.is_boolean()) throw ConfigError(where, "expected true or false");
  return j.get<bool>();
}

std::string get_choice(const json& j, const std::string& where,
                       std::initializer_list<const char*> choices) {
  if (!j.is_string()) throw ConfigError(where, "expected a string");
  const auto s = j.get<std::string>();
  for (const char* c : choices) {
    if (s == c) return s;
  }
  std::string msg = "expected one of";
  for (const char* c : choices) msg += std::string(" \"") + c + "\"";
  throw ConfigError(where, msg);
}

Vec3 get_vec3(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) {
    throw ConfigError(where, "expected an array of 3 numbers");
  }
  return {get_number(j[0], child(where, std::size_t{0})),
          get_number(j[1], child(where, std::size_t{1})),
          get_number(j[2], child(where, std::size_t{2}))};
}

// A scalar, or an array of [t, value] pairs with strictly increasing t.
PiecewiseConstant get_schedule(const json& j, const std::string& where,
                               double scale, bool positive) {
  auto value = [&](const json& v, const std::string& w) {
    const double x = positive ? get_positive(v, w) : get_number(v, w);
    return x * scale;
  };
  if (j.is_number()) return PiecewiseConstant(value(j, where));
  if (!j.is_array() || j.empty()) {
    throw ConfigError(where, "expected a number or a list of [t, value] pairs");
  }
  std::vector<std::pair<double, double>> points;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = child(where, i);
    if (!j[i].is_array() || j[i].size() != 2) {
      throw ConfigError(w, "expected a [t, value] pair");
    }
    const double t = get_non_negative(j[i][0], child(w, std::size_t{0}));
    if (!points.empty() && !(t > points.back().first)) {
      throw ConfigError(child(w, std::size_t{0}),
                        "breakpoints must be strictly increasing");
    }
    points.emplace_back(t, value(j[i][1], child(w, std::size_t{1})));
  }
  return PiecewiseConstant(std::move(points));
}

std::vector<int> get_targets(const json& j, const std::string& where,
                             int n_targets) {
  if (!j.is_array()) throw ConfigError(where, "expected a list of target indices");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const int idx = get_int(j[i], child(where, i));
    if (idx < 0 || idx >= n_targets) {
      throw ConfigError(child(where, i), "target index out of range");
    }
    out.push_back(idx);
  }
  return out;
}

void parse_body(const json& j, ExperimentConfig& cfg) {
  const std::string w = "/body";
  require_object(j, w, {"mass", "H", "L", "T", "com_offset", "gravity"});
  BodyModel b = cfg.body;
  if (j.contains("mass")) b.mass = get_positive(j["mass"], w + "/mass");
  if (j.contains("H")) b.h = get_positive(j["H"], w + "/H");
  if (j.contains("L")) b.l = get_positive(j["L"], w + "/L");
  if (j.contains("T")) b.t = get_positive(j["T"], w + "/T");
  if (j.contains("com_offset")) {
    b.com_offset = get_vec3(j["com_offset"], w + "/com_offset");
  }
  if (j.contains("gravity")) b.gravity = get_vec3(j["gravity"], w + "/gravity");
  try {
    cfg.body = BodyModel::box(b.mass, b.h, b.l, b.t, b.com_offset, b.gravity);
  } catch (const std::exception& e) {
    throw ConfigError(w, e.what());
  }
}

void parse_band(const json& j, ExperimentConfig& cfg) {
  const std::string w = "/band";
  require_object(j, w, {"a_max", "mass", "mode"});
  if (j.contains("a_max")) cfg.band.a_max = get_positive(j["a_max"], w + "/a_max");
  if (j.contains("mass")) cfg.band.mass = get_positive(j["mass"], w + "/mass");
  if (j.contains("mode")) {
    cfg.band.mode = get_choice(j["mode"], w + "/mode", {"fic", "spring"}) == "fic"
                        ? BandMode::kFic
                        : BandMode::kSpring;
  }
}

void parse_task(const json& j, ExperimentConfig& cfg) {
  const std::string w = "/task";
  require_object(j, w, {"plane_x", "radius", "n_targets", "dwell", "order"});
  ClockTask& t = cfg.task;
  if (j.contains("plane_x")) t.plane_x = get_positive(j["plane_x"], w + "/plane_x");
  if (j.contains("radius")) t.radius = get_positive(j["radius"], w + "/radius");
  if (j.contains("n_targets")) {
    t.n_targets = get_int(j["n_targets"], w + "/n_targets");
    if (t.n_targets < 1) throw ConfigError(w + "/n_targets", "must be at least 1");
    cfg.order.clear();
    for (int i = 0; i < t.n_targets; ++i) cfg.order.push_back(i);
  }
  if (j.contains("dwell")) t.dwell = get_non_negative(j["dwell"], w + "/dwell");
  if (j.contains("order")) cfg.order = get_targets(j["order"], w + "/order", t.n_targets);
}

void parse_controller(const json& j, ExperimentConfig& cfg) {
  const std::string w = "/controller";
  require_object(j, w, {"torque_axis", "torsion_order"});
  if (j.contains("torque_axis")) {
    cfg.controller.axis =
        get_choice(j["torque_axis"], w + "/torque_axis", {"unit", "raw"}) == "unit"
            ? TorqueAxis::kUnit
            : TorqueAxis::kRaw;
  }
  if (j.contains("torsion_order")) {
    cfg.controller.order =
        get_choice(j["torsion_order"], w + "/torsion_order",
                   {"pointer", "global"}) == "pointer"
            ? TorsionOrder::kPointerTwist
            : TorsionOrder::kGlobalPremultiply;
  }
}

void parse_integrator(const json& j, ExperimentConfig& cfg) {
  const std::string w = "/integrator";
  require_object(j, w, {"kind", "sample_rate", "substeps", "rel_tol"});
  IntegratorSettings& s = cfg.integrator;
  if (j.contains("kind")) {
    s.kind = get_choice(j["kind"], w + "/kind", {"fixed", "adaptive"}) == "fixed"
                 ? IntegratorKind::kFixedRk4
                 : IntegratorKind::kAdaptive;
  }
  if (j.contains("sample_rate")) {
    s.sample_dt = 1.0 / get_positive(j["sample_rate"], w + "/sample_rate");
  }
  if (j.contains("substeps")) {
    s.substeps = get_int(j["substeps"], w + "/substeps");
    if (s.substeps < 0) throw ConfigError(w + "/substeps", "must be non-negative");
  }
  if (j.contains("rel_tol")) {
    s.rel_tol = get_positive(j["rel_tol"], w + "/rel_tol");
    if (s.rel_tol < 1e-12 || s.rel_tol > 1e-3) {
      throw ConfigError(w + "/rel_tol", "must lie in [1e-12, 1e-3]");
    }
  }
}

std::string condition_name(bool gravity, const std::string& k_label,
                           const std::string& phi_label) {
  return std::string(gravity ? "gravity_on" : "gravity_off") + "_K" + k_label +
         "_phi" + phi_label;
}

Condition parse_condition(const json& j, const std::string& w,
                          const ExperimentConfig& cfg) {
  require_object(j, w, {"name", "gravity", "K", "phi", "phi_deg", "targets"});
  Condition c;
  c.schedule.targets = cfg.order;
  std::string k_label = "10000", phi_label = "0";
  if (j.contains("gravity")) c.schedule.gravity = get_bool(j["gravity"], w + "/gravity");
  if (j.contains("K")) {
    c.schedule.stiffness = get_schedule(j["K"], w + "/K", 1.0, true);
    k_label = j["K"].is_number() ? number_label(c.schedule.stiffness.at(0.0))
                                 : "sched";
  }
  if (j.contains("phi") && j.contains("phi_deg")) {
    throw ConfigError(w + "/phi", "give either phi or phi_deg, not both");
  }
  if (j.contains("phi")) {
    c.schedule.torsion = get_schedule(j["phi"], w + "/phi", 1.0, false);
    phi_label = j["phi"].is_number()
                    ? number_label(c.schedule.torsion.at(0.0) / kDeg)
                    : "sched";
  }
  if (j.contains("phi_deg")) {
    c.schedule.torsion = get_schedule(j["phi_deg"], w + "/phi_deg", kDeg, false);
    phi_label = j["phi_deg"].is_number() ? number_label(j["phi_deg"].get<double>())
                                         : "sched";
  }
  if (j.contains("targets")) {
    c.schedule.targets =
        get_targets(j["targets"], w + "/targets", cfg.task.n_targets);
  }
  if (j.contains("name")) {
    if (!j["name"].is_string() || j["name"].get<std::string>().empty()) {
      throw ConfigError(w + "/name", "expected a non-empty string");
    }
    c.name = j["name"].get<std::string>();
    if (c.name.find_first_of("/\\") != std::string::npos || c.name == "." ||
        c.name == "..") {
      throw ConfigError(w + "/name", "must be usable as a directory name");
    }
  } else {
    c.name = condition_name(c.schedule.gravity, k_label, phi_label);
  }
  return c;
}

std::vector<Condition> parse_sweep(const json& j, const ExperimentConfig& cfg) {
  const std::string w = "/sweep";
  require_object(j, w, {"gravity", "K", "phi_deg"});
  auto list = [&](const char* key) {
    const std::string wk = w + "/" + key;
    if (!j[key].is_array() || j[key].empty()) {
      throw ConfigError(wk, "expected a non-empty list");
    }
    return j[key];
  };
  std::vector<bool> gravity{true};
  std::vector<double> stiffness{10000.0};
  std::vector<double> phi_deg{0.0};
  if (j.contains("gravity")) {
    gravity.clear();
    const json g = list("gravity");
    for (std::size_t i = 0; i < g.size(); ++i) {
      gravity.push_back(get_bool(g[i], child(w + "/gravity", i)));
    }
  }
  if (j.contains("K")) {
    stiffness.clear();
    const json k = list("K");
    for (std::size_t i = 0; i < k.size(); ++i) {
      stiffness.push_back(get_positive(k[i], child(w + "/K", i)));
    }
  }
  if (j.contains("phi_deg")) {
    phi_deg.clear();
    const json p = list("phi_deg");
    for (std::size_t i = 0; i < p.size(); ++i) {
      phi_deg.push_back(get_number(p[i], child(w + "/phi_deg", i)));
    }
  }
  std::vector<Condition> out;
  for (bool g : gravity) {
    for (double k : stiffness) {
      for (double p : phi_deg) {
        Condition c;
        c.name = condition_name(g, number_label(k), number_label(p));
        c.schedule.gravity = g;
        c.schedule.stiffness = k;
        c.schedule.torsion = p * kDeg;
        c.schedule.targets = cfg.order;
        out.push_back(std::move(c));
      }
    }
  }
  return out;
}

}  // namespace

ParamSchedule retune_schedule() {
  ParamSchedule s;
  s.gravity = true;
  s.targets = {0, 0};
  // Reaches run over [0.50, 0.89], [1.39, 1.79], [2.29, 2.68] and
  // [3.18, 3.57] s with the default band and dwell.
  s.stiffness = PiecewiseConstant(
      {{0.0, 1000.0}, {0.70, 10000.0}, {1.59, 8000.0}, {2.48, 1000.0}});
  s.torsion = PiecewiseConstant({{0.0, 0.0}, {0.75, -25.0 * kDeg}, {3.37, 0.0}});
  return s;
}

std::vector<Condition> default_conditions(const std::vector<int>& order) {
  std::vector<Condition> out;
  auto add = [&](bool gravity, double k, double phi_deg) {
    Condition c;
    c.name = condition_name(gravity, number_label(k), number_label(phi_deg));
    c.schedule.gravity = gravity;
    c.schedule.stiffness = k;
    c.schedule.torsion = phi_deg * kDeg;
    c.schedule.targets = order;
    out.push_back(std::move(c));
  };
  add(false, 10000.0, 0.0);
  for (double k : {10000.0, 8000.0, 1000.0}) {
    for (double phi : {0.0, -25.0}) add(true, k, phi);
  }
  out.push_back({"retune", retune_schedule()});
  return out;
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  const bool blank = std::all_of(text.begin(), text.end(), [](unsigned char ch) {
    return std::isspace(ch) != 0;
  });
  json root = json::object();
  if (!blank) {
    try {
      root = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError("", std::string("parse error: ") + e.what());
    }
  }
  require_object(root, "", {"output_dir", "seed", "body", "band", "task",
                            "controller", "integrator", "conditions", "sweep"});
  if (root.contains("output_dir")) {
    if (!root["output_dir"].is_string() ||
        root["output_dir"].get<std::string>().empty()) {
      throw ConfigError("/output_dir", "expected a non-empty string");
    }
    cfg.output_dir = root["output_dir"].get<std::string>();
  }
  if (root.contains("seed")) {
    if (!root["seed"].is_number_unsigned()) {
      throw ConfigError("/seed", "expected a non-negative integer");
    }
    cfg.seed = root["seed"].get<std::uint64_t>();
  }
  if (root.contains("body")) parse_body(root["body"], cfg);
  if (root.contains("band")) parse_band(root["band"], cfg);
  if (root.contains("task")) parse_task(root["task"], cfg);
  if (root.contains("controller")) parse_controller(root["controller"], cfg);
  if (root.contains("integrator")) parse_integrator(root["integrator"], cfg);

  if (root.contains("conditions")) {
    const json& list = root["conditions"];
    if (!list.is_array()) throw ConfigError("/conditions", "expected a list");
    for (std::size_t i = 0; i < list.size(); ++i) {
      cfg.conditions.push_back(
          parse_condition(list[i], child("/conditions", i), cfg));
    }
  }
  if (root.contains("sweep")) {
    for (auto& c : parse_sweep(root["sweep"], cfg)) {
      cfg.conditions.push_back(std::move(c));
    }
  }
  if (!root.contains("conditions") && !root.contains("sweep")) {
    cfg.conditions = default_conditions(cfg.order);
  }

  std::set<std::string> names;
  for (std::size_t i = 0; i < cfg.conditions.size(); ++i) {
    const Condition& c = cfg.conditions[i];
    if (!names.insert(c.name).second) {
      throw ConfigError("/conditions", "duplicate condition name \"" + c.name + "\"");
    }
    try {
      c.schedule.validate(cfg.task);
    } catch (const std::exception& e) {
      throw ConfigError(child("/conditions", i), e.what());
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace wristfic
