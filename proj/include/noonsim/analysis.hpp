// Copyright 2026 The noonsim Authors
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


#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "noonsim/protocol.hpp"

namespace noonsim {

/// One swept parameter. Recognized names and their units:
///   N            photon number (integer valued)
///   omega_mhz    Omega / 2pi
///   g_mhz        reference g / 2pi; g1, g2, g' and g12 keep their ratio to g
///   g1_frac, g2_frac, gprime_frac, g12_frac   coupling as a multiple of g
///   delta_mhz    cavity detuning / 2pi
struct SweepAxis {
  std::string name;
  std::vector<double> values;
};

struct SweepSpec {
  RunConfig base;
  std::vector<SweepAxis> axes;        // at most two, values strictly increasing
  std::vector<double> g_candidates;   // g / 2pi in MHz; empty disables optimization

  void validate() const;
  std::size_t point_count() const;
};

/// Outcome of one run_protocol call inside a sweep.
struct PointResult {
  double fidelity = 0.0;
  double trace_drift = 0.0;
  double hermiticity = 0.0;
  double min_eigenvalue = 0.0;
  double edge_population = 0.0;
  double wall_ms = 0.0;
  std::string error;  // empty on success

  bool ok() const { return error.empty(); }
};

struct SweepRow {
  std::vector<double> axis_values;
  std::optional<double> g_best_mhz;
  PointResult result;  // of the best candidate when optimizing
};

struct SweepResult {
  std::vector<std::string> axis_names;
  bool optimized = false;
  std::vector<SweepRow> rows;  // grid order, last axis fastest
};

/// Identifies one evaluation (grid point plus candidate g) for resume files.
std::string task_key(const std::vector<double>& axis_values, std::optional<double> g_mhz);

struct SweepOptions {
  int workers = 1;
  /// Previously finished evaluations keyed by task_key; they are reused, not rerun.
  std::map<std::string, PointResult> completed;
  /// Called once per fresh evaluation, serialized (never concurrently).
  std::function<void(const std::string& key, const PointResult&)> on_result;
};

/// Applies a named axis value to a configuration. Throws std::invalid_argument
/// for unknown names.
void apply_axis(RunConfig& config, const std::string& name, double value);

/// Runs every grid point. Failed evaluations are recorded in their row and the
/// sweep continues. The result does not depend on the worker count.
SweepResult sweep(const SweepSpec& spec, const SweepOptions& options = {});

struct OptimizeResult {
  double g_best_mhz = 0.0;
  PointResult best;
  std::vector<std::pair<double, PointResult>> evaluated;  // sorted by g
};

/// Exhaustive search over candidate g (MHz) values; ties go to the smaller g.
/// Throws std::invalid_argument for an empty list.
OptimizeResult optimize_g(const RunConfig& config, std::vector<double> candidates_mhz,
                          int workers = 1);

/// Evaluates a single configuration, converting exceptions into an error string.
PointResult evaluate_point(const RunConfig& config);

}  // namespace noonsim
