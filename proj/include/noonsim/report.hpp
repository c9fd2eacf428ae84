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

#include <cstdio>
#include <map>
#include <string>

#include "noonsim/analysis.hpp"
#include "noonsim/config.hpp"
#include "noonsim/protocol.hpp"

namespace noonsim {

/// Nine significant digits, '.' decimal separator, locale independent.
std::string format_number(double v);

/// '#'-prefixed lines: engine version, config hash, preset, mode flags and
/// the active kernel set.
std::string provenance_header(const ConfigFile& cfg);

/// Header comment, column row, one line per grid point. Columns: the axes,
/// fidelity, g_best_mhz (when optimizing), trace_drift, hermiticity,
/// min_eig, edge_pop, status and, only when `timing` is set, wall_ms.
std::string sweep_csv(const SweepResult& result, const std::string& header, bool timing);

/// Fixed-width segment table followed by the total protocol time.
std::string schedule_table(const ProtocolSchedule& schedule);

/// Run summary as pretty-printed JSON.
std::string run_record_json(const RunResult& result, const ConfigFile& cfg);

/// One-line human summary of a run.
std::string run_summary(const RunResult& result, const ConfigFile& cfg);

std::string progress_path(const std::string& csv_path);

/// Finished evaluations recorded for a config hash. A missing file or one
/// written for another hash yields an empty map.
std::map<std::string, PointResult> read_progress(const std::string& path, const std::string& hash);

/// Appends evaluations to the sidecar as they finish, flushing every line so
/// an interrupted sweep can resume.
class ProgressLog {
 public:
  /// Keeps existing lines when `resume` is set, else starts a new file.
  ProgressLog(const std::string& path, const std::string& hash, bool resume);
  ~ProgressLog();
  ProgressLog(const ProgressLog&) = delete;
  ProgressLog& operator=(const ProgressLog&) = delete;

  void append(const std::string& key, const PointResult& r);

 private:
  std::FILE* file_ = nullptr;
};

/// Writes via a temporary file and rename so readers never see a partial file.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace noonsim
