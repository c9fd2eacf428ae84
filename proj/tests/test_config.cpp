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


#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "noonsim/config.hpp"
#include "noonsim/report.hpp"

using namespace noonsim;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text, "t.yaml");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::path(testing::TempDir()) / name).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

const char* kMinimal = "N: 4\ng_mhz: 5\nomega_mhz: 250\n";

}  // namespace

TEST(Config, minimal_file_and_defaults) {
  const ConfigFile c = parse_config(kMinimal);
  EXPECT_EQ(c.n_photons, 4);
  EXPECT_EQ(c.g_mhz, 5.0);
  EXPECT_EQ(c.omega_mhz, 250.0);
  EXPECT_EQ(c.g12_frac, 0.0);
  EXPECT_EQ(c.delta_mhz, 2000.0);
  EXPECT_EQ(c.crosstalk, CrosstalkMode::Averaged);
  EXPECT_EQ(c.pulses, PulseModel::Dynamic);
  EXPECT_EQ(c.workers, 1);
  const RunConfig r = c.run_config();
  EXPECT_EQ(r.n_photons, 4);
  EXPECT_DOUBLE_EQ(r.params.g, mhz_to_rad(5.0));
  EXPECT_DOUBLE_EQ(r.params.omega_rabi, mhz_to_rad(250.0));
  EXPECT_NEAR(r.rates.kappa1, 1.0 / 20e-6, 1e-6);
  EXPECT_EQ(r.space().nmax1(), 7);
}

TEST(Config, every_key) {
  const ConfigFile c = parse_config(
      "N: 3\ng_mhz: 4\nomega_mhz: 300\ng1_frac: 0.95\ng2_frac: 1.05\ngprime_frac: 1.1\n"
      "g12_frac: 0.1\ndelta_mhz: 1500\nnmax1: 5\nnmax2: 6\nsteps_per_period: 80\n"
      "max_dt_ns: 0.01\ncrosstalk: exact\npulses: instantaneous\nschedule: async\n"
      "output: out.csv\nworkers: 3\n");
  const RunConfig r = c.run_config();
  EXPECT_DOUBLE_EQ(r.params.g1, 0.95 * mhz_to_rad(4.0));
  EXPECT_DOUBLE_EQ(r.params.g2, 1.05 * mhz_to_rad(4.0));
  EXPECT_DOUBLE_EQ(r.params.gprime, 1.1 * mhz_to_rad(4.0));
  EXPECT_DOUBLE_EQ(r.params.g12, 0.1 * mhz_to_rad(4.0));
  EXPECT_DOUBLE_EQ(r.params.delta, mhz_to_rad(1500.0));
  EXPECT_EQ(r.nmax1, 5);
  EXPECT_EQ(r.nmax2, 6);
  EXPECT_EQ(r.steps.steps_per_period, 80.0);
  EXPECT_NEAR(r.steps.max_dt, 1e-11, 1e-25);
  EXPECT_EQ(r.crosstalk, CrosstalkMode::Exact);
  EXPECT_EQ(r.pulses, PulseModel::Instantaneous);
  EXPECT_EQ(r.schedule, ScheduleMode::Asynchronous);
  EXPECT_EQ(c.output, "out.csv");
  EXPECT_EQ(c.workers, 3);
  EXPECT_EQ(parse_config(std::string(kMinimal) + "nmax: 9\n").run_config().nmax2, 9);
}

TEST(Config, errors_carry_line_numbers) {
  EXPECT_EQ(error_of("N: 3\ng_mhz: 4\nomega_mhz: 300\nbogus: 1\n"), "t.yaml:4: unknown key 'bogus'");
  EXPECT_EQ(error_of("N: 3\ng_mhz: 4\nomega_mhz: 300\nnoise:\n  kappa1_us: 10\n  gamma_xx_us: 1\n"),
            "t.yaml:6: unknown key 'noise.gamma_xx_us'");
  EXPECT_NE(error_of("N: 3\ng_mhz: 4\ng_mhz: 5\nomega_mhz: 300\n").find("duplicate key 'g_mhz'"),
            std::string::npos);
  EXPECT_EQ(error_of("N: 3\ng_mhz: -4\nomega_mhz: 300\n").rfind("t.yaml:2: g_mhz", 0), 0u);
  EXPECT_EQ(error_of("N: three\ng_mhz: 4\nomega_mhz: 300\n").rfind("t.yaml:1: N: expected an integer", 0), 0u);
  EXPECT_NE(error_of("N: 3\ng_mhz: 4\nomega_mhz: 300\ncrosstalk: maybe\n").find("averaged|exact"),
            std::string::npos);
  EXPECT_NE(error_of("N: 3\ng_mhz: 4\n").find("missing required key 'omega_mhz'"), std::string::npos);
  EXPECT_NE(error_of("N: [3\n").find("t.yaml:"), std::string::npos);
  EXPECT_NE(error_of("").find("empty"), std::string::npos);
  EXPECT_NE(error_of("- 1\n- 2\n").find("expected a mapping"), std::string::npos);
}

TEST(Config, n_below_two_explains_itself) {
  const std::string e = error_of("g_mhz: 4\nomega_mhz: 300\nN: 1\n");
  EXPECT_EQ(e.rfind("t.yaml:3: N must be >= 2", 0), 0u) << e;
  EXPECT_NE(e.find("-|f>"), std::string::npos);
}

TEST(Config, noise_forms) {
  EXPECT_TRUE(parse_config(std::string(kMinimal) + "noise: off\n").run_config().rates.all_zero());
  const NoiseRates ref = parse_config(std::string(kMinimal) + "noise: reference\n").run_config().rates;
  EXPECT_NEAR(ref.gphi_e, 1.0 / 1.5e-6, 1e-3);
  const NoiseRates one =
      parse_config(std::string(kMinimal) + "noise:\n  base: off\n  kappa2_us: 4\n").run_config().rates;
  EXPECT_NEAR(one.kappa2, 2.5e5, 1e-6);
  EXPECT_NEAR(one.total(), one.kappa2, 0.0);
  const NoiseRates most =
      parse_config(std::string(kMinimal) + "noise:\n  gphi_a_us: off\n  gamma_fg_us: 2\n").run_config().rates;
  EXPECT_EQ(most.gphi_a, 0.0);
  EXPECT_NEAR(most.gamma_fg, 5e5, 1e-6);
  EXPECT_NEAR(most.kappa1, ref.kappa1, 0.0);
  EXPECT_NE(error_of(std::string(kMinimal) + "noise:\n  kappa1_us: 0\n").find("lifetime must be positive"),
            std::string::npos);
  EXPECT_NE(error_of(std::string(kMinimal) + "noise: loud\n").find("t.yaml:4"), std::string::npos);
  EXPECT_EQ(NoiseLifetimes::names().size(), 11u);
  EXPECT_EQ(NoiseLifetimes::names()[8], "gphi_a");
}

TEST(Config, sweep_block) {
  const ConfigFile c = parse_config(
      std::string(kMinimal) +
      "sweep:\n  axes:\n    - name: omega_mhz\n      values: [100, 200]\n"
      "    - name: N\n      range: {from: 2, to: 4, step: 1}\n");
  ASSERT_EQ(c.axes.size(), 2u);
  EXPECT_EQ(c.axes[1].values, (std::vector<double>{2, 3, 4}));
  EXPECT_EQ(c.sweep_spec().point_count(), 6u);
  const ConfigFile o = parse_config(
      std::string(kMinimal) +
      "sweep:\n  axes:\n    - name: N\n      values: [2, 3]\n"
      "  optimize_g_mhz: {from: 1, to: 2, step: 0.25}\n");
  EXPECT_EQ(o.optimize_g_mhz, (std::vector<double>{1, 1.25, 1.5, 1.75, 2}));
  EXPECT_NE(error_of(std::string(kMinimal) +
                     "sweep:\n  axes:\n    - name: N\n      values: [3, 2]\n").find("t.yaml:"),
            std::string::npos);
  EXPECT_NE(error_of(std::string(kMinimal) +
                     "sweep:\n  axes:\n    - name: spin\n      values: [1]\n").find("spin"),
            std::string::npos);
  EXPECT_NE(error_of(std::string(kMinimal) +
                     "sweep:\n  axes:\n    - name: N\n      values: [1, 2]\n").find("N"),
            std::string::npos);
}

TEST(Config, ranges) {
  EXPECT_EQ(linear_range(1, 15, 0.5).size(), 29u);
  EXPECT_EQ(linear_range(1, 15, 0.5)[27], 14.5);
  EXPECT_EQ(linear_range(0.1, 0.3, 0.1).size(), 3u);  // inclusive despite rounding
  EXPECT_EQ(linear_range(2, 2, 1), (std::vector<double>{2}));
  EXPECT_THROW(linear_range(1, 0, 1), std::invalid_argument);
  EXPECT_THROW(linear_range(0, 1, 0), std::invalid_argument);
  EXPECT_THROW(linear_range(0, 1e9, 1e-3), std::invalid_argument);
}

TEST(Config, presets) {
  EXPECT_EQ(preset_names(), (std::vector<std::string>{"point", "fig3", "fig4", "ideal"}));
  const ConfigFile f4 = preset_config("fig4");
  EXPECT_EQ(f4.sweep_spec().point_count(), 27u);
  EXPECT_EQ(f4.optimize_g_mhz.size(), 29u);
  EXPECT_NO_THROW(f4.sweep_spec().validate());
  const ConfigFile f3 = preset_config("fig3");
  EXPECT_EQ(f3.sweep_spec().point_count(), 5u * 29u);
  EXPECT_TRUE(f3.optimize_g_mhz.empty());
  const ConfigFile pt = preset_config("point");
  EXPECT_EQ(pt.n_photons, 6);
  EXPECT_EQ(pt.g1_frac, 0.95);
  EXPECT_EQ(pt.g12_frac, 0.1);
  EXPECT_NO_THROW(pt.run_config());
  EXPECT_TRUE(preset_config("ideal").run_config().rates.all_zero());
  EXPECT_THROW(preset_config("fig9"), std::invalid_argument);
  // file keys override the preset
  const ConfigFile o = parse_config("preset: point\nN: 3\n");
  EXPECT_EQ(o.n_photons, 3);
  EXPECT_EQ(o.preset, "point");
  EXPECT_EQ(o.omega_mhz, 300.0);
}

TEST(Config, hash_tracks_physics_only) {
  const ConfigFile a = parse_config(kMinimal);
  ConfigFile b = a;
  b.output = "elsewhere.csv";
  b.workers = 8;
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 16u);
  b.g12_frac = 0.01;
  EXPECT_NE(config_hash(a), config_hash(b));
  b = a;
  b.pulses = PulseModel::Instantaneous;
  EXPECT_NE(config_hash(a), config_hash(b));
  b = a;
  b.noise.us[3] = 7.0;
  EXPECT_NE(config_hash(a), config_hash(b));
  // the same content written differently hashes the same
  EXPECT_EQ(config_hash(parse_config("omega_mhz: 250.0\nN: 4\ng_mhz: 5e0\n")), config_hash(a));
  const std::string canon = canonical_form(a);
  EXPECT_NE(canon.find("N=4\n"), std::string::npos);
  EXPECT_EQ(canon.find("workers"), std::string::npos);
  EXPECT_EQ(canon.find("output"), std::string::npos);
}

TEST(Report, number_format) {
  EXPECT_EQ(format_number(0.5), "0.5");
  EXPECT_EQ(format_number(0.123456789123), "0.123456789");
  EXPECT_EQ(format_number(300.0), "300");
  EXPECT_EQ(format_number(1.5e-12), "1.5e-12");
  EXPECT_EQ(format_number(std::nan("")), "nan");
}

TEST(Report, sweep_csv_layout) {
  SweepResult r;
  r.axis_names = {"N", "omega_mhz"};
  r.optimized = true;
  SweepRow ok{{2, 300}, 4.5, {}};
  ok.result.fidelity = 0.9;
  ok.result.wall_ms = 12.34;
  SweepRow bad{{3, 300}, std::nullopt, {}};
  bad.result.error = "nmax1 must be >= N\nsecond line";
  r.rows = {ok, bad};
  const std::string csv = sweep_csv(r, "# h\n", false);
  std::istringstream in(csv);
  std::string l1, l2, l3, l4;
  std::getline(in, l1);
  std::getline(in, l2);
  std::getline(in, l3);
  std::getline(in, l4);
  EXPECT_EQ(l1, "# h");
  EXPECT_EQ(l2, "N,omega_mhz,fidelity,g_best_mhz,trace_drift,hermiticity,min_eig,edge_pop,status");
  EXPECT_EQ(l3, "2,300,0.9,4.5,0,0,0,0,ok");
  EXPECT_EQ(l4.rfind("3,300,nan,nan,nan,nan,nan,nan,error: nmax1 must be >= N", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  const std::string timed = sweep_csv(r, "", true);
  EXPECT_NE(timed.find(",status,wall_ms\n"), std::string::npos);
  EXPECT_NE(timed.find(",ok,12.3\n"), std::string::npos);
}

TEST(Report, header_and_schedule_table) {
  const ConfigFile c = preset_config("point");
  const std::string h = provenance_header(c);
  EXPECT_EQ(h.rfind("# noonsim 1.0.0\n# config_hash " + config_hash(c) + "\n# preset point\n", 0), 0u);
  EXPECT_NE(h.find("crosstalk=averaged pulses=dynamic schedule=sync kernels="), std::string::npos);
  const std::string t = schedule_table(c.run_config().build());
  EXPECT_NE(t.find("62.500"), std::string::npos);  // first resonant step, pi / (2 g) at 4 MHz
  EXPECT_NE(t.find("(13 segments)"), std::string::npos);
  EXPECT_EQ(std::count(t.begin(), t.end(), '\n'), 15);
}

TEST(Report, json_record) {
  ConfigFile c = preset_config("ideal");
  c.n_photons = 2;
  const RunResult r = run_protocol(c.run_config());
  const auto j = nlohmann::json::parse(run_record_json(r, c));
  EXPECT_EQ(j["engine_version"], "1.0.0");
  EXPECT_EQ(j["config_hash"], config_hash(c));
  EXPECT_EQ(j["N"], 2);
  EXPECT_EQ(j["pulses"], "instantaneous");
  EXPECT_DOUBLE_EQ(j["fidelity"].get<double>(), r.fidelity);
  EXPECT_EQ(j["checkpoints"].size(), 5u);
  EXPECT_TRUE(j["pure_state_path"].get<bool>());
  EXPECT_NE(run_summary(r, c).find("F=1.000000"), std::string::npos);
}

TEST(Report, progress_round_trip) {
  const std::string path = temp_path("p.progress");
  std::filesystem::remove(path);
  PointResult a;
  a.fidelity = 0.1 + 0.2;  // needs all 17 digits
  a.min_eigenvalue = -3.5e-17;
  a.wall_ms = 5;
  PointResult b;
  b.error = "bad\tthing\nhere";
  {
    ProgressLog log(path, "abc", false);
    log.append("2,300", a);
    log.append("3,300", b);
  }
  auto got = read_progress(path, "abc");
  ASSERT_EQ(got.size(), 2u);
  EXPECT_EQ(got["2,300"].fidelity, a.fidelity);
  EXPECT_EQ(got["2,300"].min_eigenvalue, a.min_eigenvalue);
  EXPECT_FALSE(got["3,300"].ok());
  EXPECT_TRUE(read_progress(path, "other").empty());
  EXPECT_TRUE(read_progress(temp_path("missing"), "abc").empty());
  {
    ProgressLog log(path, "abc", true);
    log.append("4,300", a);
  }
  EXPECT_EQ(read_progress(path, "abc").size(), 3u);
  // a torn last line is ignored
  { std::ofstream(path, std::ios::app) << "5,300\t0.5\t0"; }
  EXPECT_EQ(read_progress(path, "abc").size(), 3u);
  // resuming with another hash starts over
  {
    ProgressLog log(path, "xyz", true);
  }
  EXPECT_EQ(slurp(path), "# config_hash xyz\n");
  EXPECT_EQ(progress_path("a/b.csv"), "a/b.csv.progress");
}

TEST(Report, atomic_write) {
  const std::string path = temp_path("atomic.txt");
  write_file_atomic(path, "one\n");
  write_file_atomic(path, "two\n");
  EXPECT_EQ(slurp(path), "two\n");
  EXPECT_FALSE(std::filesystem::exists(path + ".tmp"));
  // device nodes are written through, not replaced
  write_file_atomic("/dev/null", "discarded\n");
  EXPECT_FALSE(std::filesystem::is_regular_file("/dev/null"));
  EXPECT_TRUE(std::filesystem::is_character_file("/dev/null"));
}

TEST(Config, load_from_disk) {
  const std::string path = temp_path("c.yaml");
  { std::ofstream(path) << kMinimal << "noise: off\n"; }
  EXPECT_EQ(load_config(path).n_photons, 4);
  try {
    load_config(temp_path("nope.yaml"));
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("nope.yaml"), std::string::npos);
  }
}

TEST(Config, shipped_configs_are_valid) {
  int seen = 0;
  for (const auto& e : std::filesystem::directory_iterator(std::string(NOONSIM_SOURCE_DIR) + "/configs")) {
    if (e.path().extension() != ".yaml") continue;
    ++seen;
    const ConfigFile c = load_config(e.path().string());
    EXPECT_NO_THROW(c.run_config()) << e.path();
    EXPECT_NO_THROW(c.sweep_spec().validate()) << e.path();
  }
  EXPECT_GE(seen, 5);
}
