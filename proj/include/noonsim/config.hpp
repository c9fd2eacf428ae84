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

#include <array>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "noonsim/analysis.hpp"
#include "noonsim/protocol.hpp"

namespace noonsim {

inline constexpr std::string_view kEngineVersion = "1.0.0";

/// Channel lifetimes in microseconds; infinity switches a channel off.
struct NoiseLifetimes {
  static constexpr std::size_t kChannels = 11;
  /// Config key stems, in storage order: kappa1 kappa2 gamma_ae gamma_af
  /// gamma_ag gamma_ef gamma_eg gamma_fg gphi_a gphi_e gphi_f.
  static const std::array<std::string_view, kChannels>& names();

  std::array<double, kChannels> us{};

  static NoiseLifetimes reference_device();
  static NoiseLifetimes off();
  NoiseRates rates() const;
};

/// Everything a config file can say, in the units used at the boundary
/// (MHz, microseconds, nanoseconds). Couplings are stored relative to g.
struct ConfigFile {
  std::string preset;  // informational; empty when none was used
  int n_photons = 0;
  double g_mhz = 0.0;
  double omega_mhz = 0.0;
  double g1_frac = 1.0;
  double g2_frac = 1.0;
  double gprime_frac = 1.0;
  double g12_frac = 0.0;
  double delta_mhz = 2000.0;
  NoiseLifetimes noise = NoiseLifetimes::reference_device();
  int nmax1 = 0;  // 0 selects the default for N
  int nmax2 = 0;
  double steps_per_period = 50.0;
  double max_dt_ns = 0.0;  // 0 means unbounded
  CrosstalkMode crosstalk = CrosstalkMode::Averaged;
  PulseModel pulses = PulseModel::Dynamic;
  ScheduleMode schedule = ScheduleMode::Synchronous;
  std::vector<SweepAxis> axes;
  std::vector<double> optimize_g_mhz;
  std::string output;
  int workers = 1;

  /// Converts to engine units. Throws std::invalid_argument when the values
  /// do not describe a runnable protocol.
  RunConfig run_config() const;
  SweepSpec sweep_spec() const;
};

/// Parse or validation failure tied to a location in the config text.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& origin, int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

/// Strict parse: unknown keys, wrong types and out-of-range values are
/// rejected with the offending key and its 1-based line.
ConfigFile parse_config(const std::string& text, const std::string& origin = "<config>");
ConfigFile load_config(const std::string& path);

/// Shipped presets: "point" (one reproduction point), "fig3", "fig4", "ideal".
ConfigFile preset_config(std::string_view name);
std::vector<std::string> preset_names();

/// Fully resolved configuration as sorted key=value lines. Output path and
/// worker count are left out because they cannot change results.
std::string canonical_form(const ConfigFile& cfg);

/// 64-bit FNV-1a of canonical_form, as 16 lowercase hex digits.
std::string config_hash(const ConfigFile& cfg);

/// Values from..to inclusive in steps of `step`, computed as from + k*step.
std::vector<double> linear_range(double from, double to, double step);

}  // namespace noonsim
