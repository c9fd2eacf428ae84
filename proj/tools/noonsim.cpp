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


// noonsim command-line front end: run, sweep, schedule, verify.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "noonsim/analysis.hpp"
#include "noonsim/config.hpp"
#include "noonsim/lindblad.hpp"
#include "noonsim/report.hpp"
#include "noonsim/verify.hpp"

namespace {

using namespace noonsim;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitFailed = 2;

struct Common {
  std::string config;
  std::string preset;
  std::string out;
  std::optional<int> workers;
  std::string mode;
  std::string pulses;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "YAML configuration file")->check(CLI::ExistingFile);
  sub->add_option("--preset", c.preset, "start from a shipped preset: point, fig3, fig4, ideal");
  sub->add_option("--out", c.out, "output path (overrides the config's output)");
  sub->add_option("--workers", c.workers, "parallel sweep workers (0 = one per core)")
      ->check(CLI::Range(0, 1024));
  sub->add_option("--mode", c.mode, "crosstalk treatment")
      ->check(CLI::IsMember({"exact", "averaged"}));
  sub->add_option("--pulses", c.pulses, "pulse model")
      ->check(CLI::IsMember({"dynamic", "instantaneous"}));
}

ConfigFile resolve(const Common& c) {
  if (!c.config.empty() && !c.preset.empty()) {
    throw std::invalid_argument("give --config or --preset, not both (a config may name a preset)");
  }
  if (c.config.empty() && c.preset.empty()) {
    throw std::invalid_argument("missing --config PATH (or --preset NAME)");
  }
  ConfigFile cfg = c.config.empty() ? preset_config(c.preset) : load_config(c.config);
  if (!c.out.empty()) cfg.output = c.out;
  if (c.workers) cfg.workers = *c.workers;
  if (!c.mode.empty()) cfg.crosstalk = c.mode == "exact" ? CrosstalkMode::Exact : CrosstalkMode::Averaged;
  if (!c.pulses.empty()) {
    cfg.pulses = c.pulses == "dynamic" ? PulseModel::Dynamic : PulseModel::Instantaneous;
  }
  return cfg;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    write_file_atomic(path, text);
  }
}

int cmd_run(const Common& c, bool verbose) {
  const ConfigFile cfg = resolve(c);
  const RunResult r = run_protocol(cfg.run_config());
  std::cout << run_summary(r, cfg) << "\n";
  if (verbose) {
    for (const auto& cp : r.checkpoints) {
      std::cout << "  " << cp.label << "  t=" << format_number(cp.t_end * 1e9) << " ns";
      if (cp.fidelity) std::cout << "  ladder F=" << format_number(*cp.fidelity);
      std::cout << "\n";
    }
  }
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  if (!cfg.output.empty()) write_text(cfg.output, run_record_json(r, cfg));
  return kExitOk;
}

int cmd_sweep(const Common& c, bool timing, bool fresh) {
  const ConfigFile cfg = resolve(c);
  const SweepSpec spec = cfg.sweep_spec();
  const std::string hash = config_hash(cfg);
  const bool to_file = !cfg.output.empty() && cfg.output != "-";

  SweepOptions opts;
  opts.workers = cfg.workers;
  std::optional<ProgressLog> log;
  if (to_file) {
    const std::string side = progress_path(cfg.output);
    if (!fresh) opts.completed = read_progress(side, hash);
    log.emplace(side, hash, !fresh && !opts.completed.empty());
    if (!opts.completed.empty()) {
      std::cerr << "resuming: " << opts.completed.size() << " evaluations reused from " << side
                << "\n";
    }
  }
  const std::size_t total =
      spec.point_count() * std::max<std::size_t>(1, spec.g_candidates.size());
  std::size_t done = opts.completed.size();
  opts.on_result = [&](const std::string& key, const PointResult& r) {
    ++done;
    if (log) log->append(key, r);
    std::cerr << "[" << done << "/" << total << "] " << key << "  "
              << (r.ok() ? "F=" + format_number(r.fidelity) : "error: " + r.error) << "\n";
  };

  const SweepResult result = sweep(spec, opts);
  write_text(cfg.output, sweep_csv(result, provenance_header(cfg), timing));

  std::size_t failed = 0;
  for (const auto& row : result.rows) failed += row.result.ok() ? 0 : 1;
  if (failed > 0) {
    std::cerr << failed << " of " << result.rows.size() << " points failed; see the status column\n";
    return kExitFailed;
  }
  return kExitOk;
}

int cmd_schedule(const Common& c) {
  const ConfigFile cfg = resolve(c);
  write_text(cfg.output, schedule_table(cfg.run_config().build()));
  return kExitOk;
}

int cmd_verify() {
  int failed = 0;
  for (const auto& r : run_verification()) {
    std::cout << (r.passed ? "PASS  " : "FAIL  ") << r.name << ": " << r.detail << "\n";
    failed += r.passed ? 0 : 1;
  }
  std::cout << (failed == 0 ? "all checks passed" : std::to_string(failed) + " check(s) failed")
            << "\n";
  return failed == 0 ? kExitOk : kExitInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"noonsim: NOON-state generation in two cavities coupled by a four-level device"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(noonsim::kEngineVersion));

  Common run_opts, sweep_opts, sched_opts;
  bool verbose = false, timing = false, fresh = false;

  CLI::App* run = app.add_subcommand("run", "simulate one protocol and report the fidelity");
  add_common(run, run_opts);
  run->add_flag("-v,--verbose", verbose, "print every checkpoint");

  CLI::App* sw = app.add_subcommand("sweep", "evaluate a grid of configurations into a CSV file");
  add_common(sw, sweep_opts);
  sw->add_flag("--timing", timing, "append a wall_ms column (makes the file run dependent)");
  sw->add_flag("--fresh", fresh, "ignore any progress file and recompute everything");

  CLI::App* sched = app.add_subcommand("schedule", "print the segment timing table");
  add_common(sched, sched_opts);

  CLI::App* ver = app.add_subcommand("verify", "run the built-in oracle checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_opts, verbose);
    if (sw->parsed()) return cmd_sweep(sweep_opts, timing, fresh);
    if (sched->parsed()) return cmd_schedule(sched_opts);
    if (ver->parsed()) return cmd_verify();
  } catch (const noonsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::out_of_range& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const noonsim::IntegrationError& e) {
    std::cerr << "integration failed: " << e.what() << "\n";
    return kExitFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailed;
  }
  return kExitInvalid;
}
