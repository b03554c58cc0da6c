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


// Experiment configuration as JSON. Every key is optional; an empty file
// yields the default eight-condition clock study. Unknown keys are rejected.
//
//   {
//     "output_dir": "out",
//     "seed": 1,
//     "body": {"mass": 1, "H": 0.1, "L": 0.08, "T": 0.02,
//              "com_offset": [0.05, 0, 0], "gravity": [0, 0, -9.81]},
//     "band": {"a_max": 3.2, "mass": 1, "mode": "fic" | "spring"},
//     "task": {"plane_x": 0.3, "radius": 0.1, "n_targets": 8,
//              "dwell": 0.5, "order": [0, 1, 2, 3, 4, 5, 6, 7]},
//     "controller": {"torque_axis": "unit" | "raw",
//                    "torsion_order": "pointer" | "global"},
//     "integrator": {"kind": "fixed" | "adaptive", "sample_rate": 1000,
//                    "substeps": 0, "rel_tol": 1e-8},
//     "conditions": [{"name": "...", "gravity": true,
//                     "K": 10000 or [[t, K], ...],
//                     "phi_deg": -25 or [[t, deg], ...],  (or "phi" in rad)
//                     "targets": [0, 0]}],
//     "sweep": {"gravity": [true, false], "K": [10000, 8000, 1000],
//               "phi_deg": [0, -25]}
//   }
//
// "conditions" and "sweep" may be combined; the sweep expands to the
// Cartesian product after the explicit conditions.

#ifndef WRISTFIC_CONFIG_HPP_
#define WRISTFIC_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "wristfic/dynamics.hpp"
#include "wristfic/experiments.hpp"
#include "wristfic/planner.hpp"

namespace wristfic {

struct Condition {
  std::string name;
  ParamSchedule schedule;
};

struct ExperimentConfig {
  BodyModel body = BodyModel::hand_default(true);
  BandParams band;
  ClockTask task;
  std::vector<int> order{0, 1, 2, 3, 4, 5, 6, 7};
  ControllerSettings controller;
  IntegratorSettings integrator;
  std::vector<Condition> conditions;
  std::string output_dir = "out";
  std::uint64_t seed = 1;
};

// Parse and validation failures. `where` is a JSON pointer to the offending
// value, empty for syntax errors.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& where, const std::string& reason)
      : std::runtime_error(where.empty() ? reason : where + ": " + reason),
        where_(where) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

// Gravity off at 10 kN m/rad; gravity on at {10, 8, 1} kN m/rad with
// phi in {0, -25 deg}; and an online-retuning run on the top target.
std::vector<Condition> default_conditions(const std::vector<int>& order);

// Online-retuning schedule: K and phi steps land mid-reach for the default
// task timing.
ParamSchedule retune_schedule();

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace wristfic

#endif  // WRISTFIC_CONFIG_HPP_
