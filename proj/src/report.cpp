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


#include "noonsim/report.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "noonsim/kernels.hpp"

namespace noonsim {
namespace {

std::string roundtrip(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument("bad number '" + s + "'");
  }
  return v;
}

// Keeps free text inside one CSV/TSV field.
std::string flatten(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\t') c = ';';
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

std::string format_fixed(double v, int decimals) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[48];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
  return std::string(buf, res.ptr);
}

std::string provenance_header(const ConfigFile& cfg) {
  std::string h;
  h += "# noonsim " + std::string(kEngineVersion) + "\n";
  h += "# config_hash " + config_hash(cfg) + "\n";
  if (!cfg.preset.empty()) h += "# preset " + cfg.preset + "\n";
  h += "# crosstalk=" + std::string(crosstalk_name(cfg.crosstalk)) +
       " pulses=" + std::string(pulse_model_name(cfg.pulses)) +
       " schedule=" + std::string(schedule_mode_name(cfg.schedule)) +
       " kernels=" + std::string(kernels::isa_name(kernels::active().isa)) + "\n";
  return h;
}

std::string sweep_csv(const SweepResult& result, const std::string& header, bool timing) {
  std::string out = header;
  std::string cols;
  for (const auto& name : result.axis_names) cols += name + ",";
  cols += "fidelity,";
  if (result.optimized) cols += "g_best_mhz,";
  cols += "trace_drift,hermiticity,min_eig,edge_pop,status";
  if (timing) cols += ",wall_ms";
  out += cols + "\n";
  for (const auto& row : result.rows) {
    std::string line;
    for (double v : row.axis_values) line += format_number(v) + ",";
    const PointResult& r = row.result;
    const double nan = std::nan("");
    line += format_number(r.ok() ? r.fidelity : nan) + ",";
    if (result.optimized) line += (row.g_best_mhz ? format_number(*row.g_best_mhz) : "nan") + ",";
    line += format_number(r.ok() ? r.trace_drift : nan) + ",";
    line += format_number(r.ok() ? r.hermiticity : nan) + ",";
    line += format_number(r.ok() ? r.min_eigenvalue : nan) + ",";
    line += format_number(r.ok() ? r.edge_population : nan) + ",";
    line += r.ok() ? "ok" : "error: " + flatten(r.error);
    if (timing) line += "," + format_fixed(r.wall_ms, 1);
    out += line + "\n";
  }
  return out;
}

std::string schedule_table(const ProtocolSchedule& schedule) {
  std::ostringstream o;
  o << std::left << std::setw(5) << "idx" << std::setw(26) << "label" << std::setw(15) << "kind"
    << std::right << std::setw(12) << "start_ns" << std::setw(14) << "duration_ns" << "\n";
  for (std::size_t i = 0; i < schedule.segments.size(); ++i) {
    const Segment& s = schedule.segments[i];
    o << std::left << std::setw(5) << i << std::setw(26) << s.label << std::setw(15)
      << kind_name(s.kind) << std::right << std::setw(12) << format_fixed(s.t_start * 1e9, 3)
      << std::setw(14) << format_fixed(s.duration * 1e9, 3) << "\n";
  }
  o << "total protocol time: " << format_fixed(schedule.total_time * 1e9, 3) << " ns ("
    << schedule.segments.size() << " segments)\n";
  return o.str();
}

std::string run_record_json(const RunResult& r, const ConfigFile& cfg) {
  nlohmann::ordered_json j;
  j["engine_version"] = kEngineVersion;
  j["config_hash"] = config_hash(cfg);
  j["preset"] = cfg.preset;
  j["N"] = cfg.n_photons;
  j["crosstalk"] = crosstalk_name(cfg.crosstalk);
  j["pulses"] = pulse_model_name(cfg.pulses);
  j["schedule"] = schedule_mode_name(cfg.schedule);
  j["kernels"] = kernels::isa_name(kernels::active().isa);
  j["nmax"] = {r.final_state.space().nmax1(), r.final_state.space().nmax2()};
  j["fidelity"] = r.fidelity;
  const Diagnostics& d = r.diagnostics;
  j["diagnostics"] = {{"trace_drift", d.trace_drift},
                      {"hermiticity", d.hermiticity},
                      {"min_eigenvalue", d.min_eigenvalue},
                      {"edge_population", d.edge_population},
                      {"device_purity", d.device_purity},
                      {"device_populations",
                       {{"g", d.device_populations[0]},
                        {"e", d.device_populations[1]},
                        {"f", d.device_populations[2]},
                        {"a", d.device_populations[3]}}}};
  j["warnings"] = r.warnings;
  nlohmann::ordered_json cps = nlohmann::ordered_json::array();
  for (const auto& c : r.checkpoints) {
    nlohmann::ordered_json cp;
    cp["label"] = c.label;
    cp["t_end_ns"] = c.t_end * 1e9;
    cp["ladder_fidelity"] = c.fidelity ? nlohmann::ordered_json(*c.fidelity) : nullptr;
    cps.push_back(std::move(cp));
  }
  j["checkpoints"] = std::move(cps);
  j["total_time_ns"] = r.schedule.total_time * 1e9;
  j["pure_state_path"] = r.pure_state_path;
  j["wall_ms"] = r.wall_ms;
  return j.dump(2) + "\n";
}

std::string run_summary(const RunResult& r, const ConfigFile& cfg) {
  std::string s = "N=" + std::to_string(cfg.n_photons) + " omega=" + format_number(cfg.omega_mhz) +
                  " MHz g=" + format_number(cfg.g_mhz) + " MHz  F=" + format_fixed(r.fidelity, 6) +
                  "  T=" + format_fixed(r.schedule.total_time * 1e9, 1) + " ns" +
                  "  edge_pop=" + format_number(r.diagnostics.edge_population) +
                  "  min_eig=" + format_number(r.diagnostics.min_eigenvalue);
  return s;
}

std::string progress_path(const std::string& csv_path) { return csv_path + ".progress"; }

std::map<std::string, PointResult> read_progress(const std::string& path, const std::string& hash) {
  std::map<std::string, PointResult> out;
  std::ifstream in(path);
  if (!in) return out;
  std::string line;
  if (!std::getline(in, line) || line != "# config_hash " + hash) return out;
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::size_t pos = 0;
    while (true) {
      const std::size_t tab = line.find('\t', pos);
      f.push_back(line.substr(pos, tab - pos));
      if (tab == std::string::npos) break;
      pos = tab + 1;
    }
    // A torn final line from an interrupted run is skipped and recomputed.
    if (f.size() != 8) continue;
    try {
      PointResult r;
      r.fidelity = parse_double(f[1]);
      r.trace_drift = parse_double(f[2]);
      r.hermiticity = parse_double(f[3]);
      r.min_eigenvalue = parse_double(f[4]);
      r.edge_population = parse_double(f[5]);
      r.wall_ms = parse_double(f[6]);
      r.error = f[7];
      out[f[0]] = r;
    } catch (const std::invalid_argument&) {
      continue;
    }
  }
  return out;
}

ProgressLog::ProgressLog(const std::string& path, const std::string& hash, bool resume) {
  if (resume) {
    // Never append to a log written for a different configuration.
    std::ifstream in(path);
    std::string first;
    if (in && std::getline(in, first) && first != "# config_hash " + hash) resume = false;
  }
  file_ = std::fopen(path.c_str(), resume ? "a" : "w");
  if (!file_) throw std::runtime_error("cannot open progress file " + path);
  if (!resume || std::ftell(file_) == 0) {
    std::fprintf(file_, "# config_hash %s\n", hash.c_str());
    std::fflush(file_);
  }
}

ProgressLog::~ProgressLog() {
  if (file_) std::fclose(file_);
}

void ProgressLog::append(const std::string& key, const PointResult& r) {
  const std::string line = key + "\t" + roundtrip(r.fidelity) + "\t" + roundtrip(r.trace_drift) +
                           "\t" + roundtrip(r.hermiticity) + "\t" + roundtrip(r.min_eigenvalue) +
                           "\t" + roundtrip(r.edge_population) + "\t" + roundtrip(r.wall_ms) +
                           "\t" + flatten(r.error) + "\n";
  std::fputs(line.c_str(), file_);
  std::fflush(file_);
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  // Devices and pipes (/dev/stdout, a fifo) are written in place; renaming
  // over them would replace the node with a regular file.
  std::error_code ec;
  const auto st = std::filesystem::status(path, ec);
  if (!ec && std::filesystem::exists(st) && !std::filesystem::is_regular_file(st)) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << contents;
    if (!out.flush()) throw std::runtime_error("write failed for " + path);
    return;
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << contents;
    if (!out.flush()) throw std::runtime_error("write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw std::runtime_error("cannot move " + tmp + " to " + path + ": " + std::strerror(errno));
  }
}

}  // namespace noonsim
