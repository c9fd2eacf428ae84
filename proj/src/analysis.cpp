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


#include "noonsim/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace noonsim {
namespace {

void append_shortest(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

std::vector<double> sorted_unique(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

int resolve_workers(int requested, std::size_t tasks) {
  int w = requested;
  if (w <= 0) {
    w = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  }
  return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(w), std::max<std::size_t>(tasks, 1)));
}

// Runs body(i) for i in [0, n) on `workers` threads pulling from a shared counter.
// Each index is handled exactly once, so output slots need no locking.
template <typename Body>
void parallel_for(std::size_t n, int workers, Body&& body) {
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

// Best successful candidate. Candidates arrive sorted ascending, so a strict
// comparison keeps the smaller g on ties.
std::size_t pick_best(const std::vector<const PointResult*>& results) {
  std::size_t best = results.size();
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (!results[i]->ok()) continue;
    if (best == results.size() || results[i]->fidelity > results[best]->fidelity) best = i;
  }
  return best;
}

}  // namespace

void SweepSpec::validate() const {
  base.validate();
  if (axes.size() > 2) throw std::invalid_argument("a sweep takes at most two axes");
  for (const auto& axis : axes) {
    if (axis.values.empty()) {
      throw std::invalid_argument("sweep axis '" + axis.name + "' has no values");
    }
    for (std::size_t i = 1; i < axis.values.size(); ++i) {
      if (!(axis.values[i] > axis.values[i - 1])) {
        throw std::invalid_argument("sweep axis '" + axis.name + "' must be strictly increasing");
      }
    }
    RunConfig probe = base;
    apply_axis(probe, axis.name, axis.values.front());
    if (axis.name == "g_mhz" && !g_candidates.empty()) {
      throw std::invalid_argument("g_mhz cannot be both a sweep axis and optimized");
    }
  }
  if (axes.size() == 2 && axes[0].name == axes[1].name) {
    throw std::invalid_argument("sweep axes must be distinct");
  }
  for (double g : g_candidates) {
    if (!(g > 0.0) || !std::isfinite(g)) {
      throw std::invalid_argument("candidate g values must be positive");
    }
  }
}

std::size_t SweepSpec::point_count() const {
  std::size_t n = 1;
  for (const auto& axis : axes) n *= axis.values.size();
  return n;
}

std::string task_key(const std::vector<double>& axis_values, std::optional<double> g_mhz) {
  std::string key;
  for (std::size_t i = 0; i < axis_values.size(); ++i) {
    if (i) key += ',';
    append_shortest(key, axis_values[i]);
  }
  if (g_mhz) {
    key += ";g=";
    append_shortest(key, *g_mhz);
  }
  return key;
}

void apply_axis(RunConfig& config, const std::string& name, double value) {
  PhysicalParams& p = config.params;
  if (!std::isfinite(value)) throw std::invalid_argument("axis '" + name + "': non-finite value");
  if (name == "N") {
    if (value != std::floor(value) || value < 2 || value > 64) {
      throw std::invalid_argument("axis 'N': values must be integers in [2, 64]");
    }
    config.n_photons = static_cast<int>(value);
  } else if (name == "omega_mhz") {
    p.omega_rabi = mhz_to_rad(value);
  } else if (name == "g_mhz") {
    p = with_reference_g(p, mhz_to_rad(value));
  } else if (name == "g1_frac") {
    p.g1 = value * p.g;
  } else if (name == "g2_frac") {
    p.g2 = value * p.g;
  } else if (name == "gprime_frac") {
    p.gprime = value * p.g;
  } else if (name == "g12_frac") {
    p.g12 = value * p.g;
  } else if (name == "delta_mhz") {
    p.delta = mhz_to_rad(value);
  } else {
    throw std::invalid_argument("unknown sweep axis '" + name + "'");
  }
}

PointResult evaluate_point(const RunConfig& config) {
  PointResult out;
  try {
    const RunResult r = run_protocol(config);
    out.fidelity = r.fidelity;
    out.trace_drift = r.diagnostics.trace_drift;
    out.hermiticity = r.diagnostics.hermiticity;
    out.min_eigenvalue = r.diagnostics.min_eigenvalue;
    out.edge_population = r.diagnostics.edge_population;
    out.wall_ms = r.wall_ms;
  } catch (const std::exception& e) {
    out.error = e.what();
    if (out.error.empty()) out.error = "unknown failure";
  }
  return out;
}

SweepResult sweep(const SweepSpec& spec, const SweepOptions& options) {
  spec.validate();
  const std::vector<double> candidates = sorted_unique(spec.g_candidates);
  const bool optimizing = !candidates.empty();
  const std::size_t per_point = optimizing ? candidates.size() : 1;
  const std::size_t points = spec.point_count();

  std::vector<std::vector<double>> grid(points);
  for (std::size_t p = 0; p < points; ++p) {
    std::size_t rest = p;
    std::vector<double> values(spec.axes.size());
    for (std::size_t a = spec.axes.size(); a-- > 0;) {
      const auto& vals = spec.axes[a].values;
      values[a] = vals[rest % vals.size()];
      rest /= vals.size();
    }
    grid[p] = std::move(values);
  }

  const std::size_t tasks = points * per_point;
  std::vector<PointResult> results(tasks);
  std::mutex report_mutex;

  parallel_for(tasks, resolve_workers(options.workers, tasks), [&](std::size_t t) {
    const std::size_t p = t / per_point;
    const std::optional<double> g =
        optimizing ? std::optional<double>(candidates[t % per_point]) : std::nullopt;
    const std::string key = task_key(grid[p], g);
    if (auto it = options.completed.find(key); it != options.completed.end()) {
      results[t] = it->second;
      return;
    }
    RunConfig cfg = spec.base;
    try {
      for (std::size_t a = 0; a < spec.axes.size(); ++a) {
        apply_axis(cfg, spec.axes[a].name, grid[p][a]);
      }
      if (g) apply_axis(cfg, "g_mhz", *g);
      results[t] = evaluate_point(cfg);
    } catch (const std::exception& e) {
      results[t].error = e.what();
    }
    if (options.on_result) {
      std::lock_guard<std::mutex> lock(report_mutex);
      options.on_result(key, results[t]);
    }
  });

  SweepResult out;
  out.optimized = optimizing;
  for (const auto& axis : spec.axes) out.axis_names.push_back(axis.name);
  out.rows.reserve(points);
  for (std::size_t p = 0; p < points; ++p) {
    SweepRow row;
    row.axis_values = grid[p];
    std::vector<const PointResult*> group;
    for (std::size_t c = 0; c < per_point; ++c) group.push_back(&results[p * per_point + c]);
    const std::size_t best = pick_best(group);
    double wall = 0.0;
    for (const auto* r : group) wall += r->wall_ms;
    if (best < group.size()) {
      row.result = *group[best];
      if (optimizing) row.g_best_mhz = candidates[best];
    } else {
      row.result = *group.front();
    }
    row.result.wall_ms = wall;
    out.rows.push_back(std::move(row));
  }
  return out;
}

OptimizeResult optimize_g(const RunConfig& config, std::vector<double> candidates_mhz,
                          int workers) {
  if (candidates_mhz.empty()) throw std::invalid_argument("optimize_g needs at least one candidate");
  SweepSpec spec;
  spec.base = config;
  spec.g_candidates = std::move(candidates_mhz);
  const std::vector<double> sorted = sorted_unique(spec.g_candidates);

  OptimizeResult out;
  SweepOptions opts;
  opts.workers = workers;
  std::map<std::string, PointResult> seen;
  opts.on_result = [&](const std::string& key, const PointResult& r) { seen[key] = r; };
  const SweepResult res = sweep(spec, opts);
  for (double g : sorted) out.evaluated.emplace_back(g, seen.at(task_key({}, g)));
  const SweepRow& row = res.rows.front();
  if (!row.g_best_mhz) {
    throw std::runtime_error("every candidate failed: " + row.result.error);
  }
  out.g_best_mhz = *row.g_best_mhz;
  out.best = row.result;
  out.best.wall_ms = seen.at(task_key({}, out.g_best_mhz)).wall_ms;
  return out;
}

}  // namespace noonsim
