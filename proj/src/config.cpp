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


#include "noonsim/config.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace noonsim {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const std::array<std::string_view, NoiseLifetimes::kChannels> kChannelNames = {
    "kappa1", "kappa2", "gamma_ae", "gamma_af", "gamma_ag", "gamma_ef",
    "gamma_eg", "gamma_fg", "gphi_a", "gphi_e", "gphi_f"};

std::string shortest(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

int line_of(const YAML::Node& n) { return n.Mark().line + 1; }

// Walks one YAML document, carrying the origin for error messages.
class Reader {
 public:
  explicit Reader(std::string origin) : origin_(std::move(origin)) {}

  [[noreturn]] void fail(const YAML::Node& at, const std::string& msg) const {
    throw ConfigError(origin_, at.IsDefined() ? line_of(at) : 0, msg);
  }

  void require_map(const YAML::Node& n, const std::string& what) const {
    if (!n.IsMap()) fail(n, what + ": expected a mapping");
  }

  // Visits each key of a mapping, rejecting duplicates and unknown keys.
  template <typename Fn>
  void each_key(const YAML::Node& map, const std::string& where,
                const std::set<std::string>& allowed, Fn&& fn) const {
    std::set<std::string> seen;
    for (const auto& kv : map) {
      const std::string key = kv.first.Scalar();
      if (!allowed.count(key)) {
        fail(kv.first, "unknown key '" + prefixed(where, key) + "'");
      }
      if (!seen.insert(key).second) {
        fail(kv.first, "duplicate key '" + prefixed(where, key) + "'");
      }
      fn(key, kv.second);
    }
  }

  double number(const YAML::Node& n, const std::string& key) const {
    if (!n.IsScalar()) fail(n, key + ": expected a number");
    try {
      const double v = n.as<double>();
      if (std::isnan(v)) fail(n, key + ": NaN is not allowed");
      return v;
    } catch (const YAML::BadConversion&) {
      fail(n, key + ": expected a number, got '" + n.Scalar() + "'");
    }
  }

  double positive(const YAML::Node& n, const std::string& key) const {
    const double v = number(n, key);
    if (!(v > 0.0) || std::isinf(v)) fail(n, key + ": must be a positive finite number");
    return v;
  }

  double nonnegative(const YAML::Node& n, const std::string& key) const {
    const double v = number(n, key);
    if (!(v >= 0.0) || std::isinf(v)) fail(n, key + ": must be a non-negative finite number");
    return v;
  }

  int integer(const YAML::Node& n, const std::string& key, int lo, int hi) const {
    if (!n.IsScalar()) fail(n, key + ": expected an integer");
    int v = 0;
    try {
      v = n.as<int>();
    } catch (const YAML::BadConversion&) {
      fail(n, key + ": expected an integer, got '" + n.Scalar() + "'");
    }
    if (v < lo || v > hi) {
      fail(n, key + ": must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return v;
  }

  std::string word(const YAML::Node& n, const std::string& key) const {
    if (!n.IsScalar()) fail(n, key + ": expected a string");
    return n.Scalar();
  }

  std::vector<double> values(const YAML::Node& n, const std::string& key) const {
    if (n.IsSequence()) {
      std::vector<double> out;
      for (const auto& item : n) out.push_back(number(item, key));
      if (out.empty()) fail(n, key + ": empty list");
      return out;
    }
    if (n.IsMap()) {
      double from = 0, to = 0, step = 0;
      bool have_from = false, have_to = false, have_step = false;
      each_key(n, key, {"from", "to", "step"}, [&](const std::string& k, const YAML::Node& v) {
        if (k == "from") from = number(v, key + ".from"), have_from = true;
        if (k == "to") to = number(v, key + ".to"), have_to = true;
        if (k == "step") step = number(v, key + ".step"), have_step = true;
      });
      if (!(have_from && have_to && have_step)) fail(n, key + ": range needs from, to and step");
      try {
        return linear_range(from, to, step);
      } catch (const std::invalid_argument& e) {
        fail(n, key + ": " + e.what());
      }
    }
    fail(n, key + ": expected a list or a {from, to, step} range");
  }

 private:
  static std::string prefixed(const std::string& where, const std::string& key) {
    return where.empty() ? key : where + "." + key;
  }

  std::string origin_;
};

void read_noise(const Reader& rd, const YAML::Node& n, NoiseLifetimes& out) {
  if (n.IsScalar()) {
    const std::string w = n.Scalar();
    if (w == "reference") {
      out = NoiseLifetimes::reference_device();
    } else if (w == "off") {
      out = NoiseLifetimes::off();
    } else {
      rd.fail(n, "noise: expected 'reference', 'off' or a mapping of *_us lifetimes");
    }
    return;
  }
  rd.require_map(n, "noise");
  std::set<std::string> allowed = {"base"};
  for (auto name : kChannelNames) allowed.insert(std::string(name) + "_us");
  out = NoiseLifetimes::reference_device();
  if (n["base"]) {
    const std::string b = rd.word(n["base"], "noise.base");
    if (b == "off") {
      out = NoiseLifetimes::off();
    } else if (b != "reference") {
      rd.fail(n["base"], "noise.base: expected 'reference' or 'off'");
    }
  }
  rd.each_key(n, "noise", allowed, [&](const std::string& key, const YAML::Node& v) {
    if (key == "base") return;
    const std::string stem = key.substr(0, key.size() - 3);
    for (std::size_t i = 0; i < kChannelNames.size(); ++i) {
      if (kChannelNames[i] != stem) continue;
      if (v.IsScalar() && v.Scalar() == "off") {
        out.us[i] = kInf;
      } else {
        const double t = rd.number(v, "noise." + key);
        if (!(t > 0.0)) rd.fail(v, "noise." + key + ": lifetime must be positive (or 'off')");
        out.us[i] = t;
      }
    }
  });
}

void read_sweep(const Reader& rd, const YAML::Node& n, ConfigFile& cfg) {
  rd.require_map(n, "sweep");
  cfg.axes.clear();
  cfg.optimize_g_mhz.clear();
  rd.each_key(n, "sweep", {"axes", "optimize_g_mhz"}, [&](const std::string& key, const YAML::Node& v) {
    if (key == "optimize_g_mhz") {
      cfg.optimize_g_mhz = rd.values(v, "sweep.optimize_g_mhz");
      for (double g : cfg.optimize_g_mhz) {
        if (!(g > 0.0)) rd.fail(v, "sweep.optimize_g_mhz: values must be positive");
      }
      return;
    }
    if (!v.IsSequence()) rd.fail(v, "sweep.axes: expected a list");
    if (v.size() > 2) rd.fail(v, "sweep.axes: at most two axes");
    for (const auto& axis : v) {
      rd.require_map(axis, "sweep.axes[]");
      SweepAxis a;
      bool have_values = false;
      rd.each_key(axis, "sweep.axes[]", {"name", "values", "range"},
                  [&](const std::string& k, const YAML::Node& val) {
                    if (k == "name") a.name = rd.word(val, "sweep.axes[].name");
                    if (k == "values" || k == "range") {
                      if (have_values) rd.fail(val, "sweep.axes[]: give either values or range");
                      a.values = rd.values(val, "sweep.axes[]." + k);
                      have_values = true;
                    }
                  });
      if (a.name.empty() || !have_values) rd.fail(axis, "sweep.axes[]: needs name and values (or range)");
      for (std::size_t i = 1; i < a.values.size(); ++i) {
        if (!(a.values[i] > a.values[i - 1])) {
          rd.fail(axis, "sweep axis '" + a.name + "': values must be strictly increasing");
        }
      }
      RunConfig probe;
      probe.params = PhysicalParams::symmetric(1.0, 1.0);
      try {
        apply_axis(probe, a.name, a.values.front());
      } catch (const std::invalid_argument& e) {
        rd.fail(axis, e.what());
      }
      cfg.axes.push_back(std::move(a));
    }
  });
}

template <typename E>
E read_choice(const Reader& rd, const YAML::Node& n, const std::string& key,
              std::initializer_list<std::pair<std::string_view, E>> choices) {
  const std::string w = rd.word(n, key);
  std::string names;
  for (const auto& [name, value] : choices) {
    if (w == name) return value;
    names += names.empty() ? "" : "|";
    names += name;
  }
  rd.fail(n, key + ": expected " + names + ", got '" + w + "'");
}

ConfigFile parse_root(const YAML::Node& root, const std::string& origin) {
  Reader rd(origin);
  if (!root.IsDefined() || root.IsNull()) throw ConfigError(origin, 0, "config is empty");
  rd.require_map(root, "config");

  ConfigFile cfg;
  bool from_preset = false;
  if (const YAML::Node p = root["preset"]) {
    const std::string name = rd.word(p, "preset");
    try {
      cfg = preset_config(name);
    } catch (const std::invalid_argument& e) {
      rd.fail(p, e.what());
    }
    from_preset = true;
  }

  const std::set<std::string> allowed = {
      "preset", "N", "g_mhz", "omega_mhz", "g1_frac", "g2_frac", "gprime_frac", "g12_frac",
      "delta_mhz", "noise", "nmax", "nmax1", "nmax2", "steps_per_period", "max_dt_ns",
      "crosstalk", "pulses", "schedule", "sweep", "output", "workers"};
  rd.each_key(root, "", allowed, [&](const std::string& key, const YAML::Node& v) {
    if (key == "preset") return;
    if (key == "N") {
      cfg.n_photons = rd.integer(v, key, 0, 64);
      try {
        RunConfig probe;
        probe.n_photons = cfg.n_photons;
        probe.params = PhysicalParams::symmetric(1.0, 1.0);
        probe.validate();
      } catch (const std::invalid_argument& e) {
        rd.fail(v, e.what());
      }
    }
    if (key == "g_mhz") cfg.g_mhz = rd.positive(v, key);
    if (key == "omega_mhz") cfg.omega_mhz = rd.positive(v, key);
    if (key == "g1_frac") cfg.g1_frac = rd.positive(v, key);
    if (key == "g2_frac") cfg.g2_frac = rd.positive(v, key);
    if (key == "gprime_frac") cfg.gprime_frac = rd.positive(v, key);
    if (key == "g12_frac") cfg.g12_frac = rd.nonnegative(v, key);
    if (key == "delta_mhz") cfg.delta_mhz = rd.nonnegative(v, key);
    if (key == "noise") read_noise(rd, v, cfg.noise);
    if (key == "nmax") cfg.nmax1 = cfg.nmax2 = rd.integer(v, key, 1, 200);
    if (key == "nmax1") cfg.nmax1 = rd.integer(v, key, 1, 200);
    if (key == "nmax2") cfg.nmax2 = rd.integer(v, key, 1, 200);
    if (key == "steps_per_period") cfg.steps_per_period = rd.positive(v, key);
    if (key == "max_dt_ns") cfg.max_dt_ns = rd.positive(v, key);
    if (key == "crosstalk") {
      cfg.crosstalk = read_choice<CrosstalkMode>(
          rd, v, key, {{"averaged", CrosstalkMode::Averaged}, {"exact", CrosstalkMode::Exact}});
    }
    if (key == "pulses") {
      cfg.pulses = read_choice<PulseModel>(
          rd, v, key,
          {{"dynamic", PulseModel::Dynamic}, {"instantaneous", PulseModel::Instantaneous}});
    }
    if (key == "schedule") {
      cfg.schedule = read_choice<ScheduleMode>(
          rd, v, key, {{"sync", ScheduleMode::Synchronous}, {"async", ScheduleMode::Asynchronous}});
    }
    if (key == "sweep") read_sweep(rd, v, cfg);
    if (key == "output") cfg.output = rd.word(v, key);
    if (key == "workers") cfg.workers = rd.integer(v, key, 0, 1024);
  });

  if (!from_preset) {
    if (!root["N"]) rd.fail(root, "missing required key 'N'");
    if (!root["g_mhz"]) rd.fail(root, "missing required key 'g_mhz'");
    if (!root["omega_mhz"]) rd.fail(root, "missing required key 'omega_mhz'");
  }
  try {
    cfg.sweep_spec().validate();
  } catch (const std::invalid_argument& e) {
    rd.fail(root, e.what());
  }
  return cfg;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

const std::array<std::string_view, NoiseLifetimes::kChannels>& NoiseLifetimes::names() {
  return kChannelNames;
}

NoiseLifetimes NoiseLifetimes::reference_device() {
  NoiseLifetimes n;
  n.us = {20.0, 20.0, 1.5, 1.5, 1.5, 3.0, 3.0, 10.0, 0.5, 1.5, 5.0};
  return n;
}

NoiseLifetimes NoiseLifetimes::off() {
  NoiseLifetimes n;
  n.us.fill(kInf);
  return n;
}

NoiseRates NoiseLifetimes::rates() const {
  auto r = [](double t_us) { return std::isinf(t_us) ? 0.0 : 1.0 / (t_us * 1e-6); };
  NoiseRates out;
  out.kappa1 = r(us[0]);
  out.kappa2 = r(us[1]);
  out.gamma_ae = r(us[2]);
  out.gamma_af = r(us[3]);
  out.gamma_ag = r(us[4]);
  out.gamma_ef = r(us[5]);
  out.gamma_eg = r(us[6]);
  out.gamma_fg = r(us[7]);
  out.gphi_a = r(us[8]);
  out.gphi_e = r(us[9]);
  out.gphi_f = r(us[10]);
  return out;
}

RunConfig ConfigFile::run_config() const {
  if (!(g_mhz > 0.0)) throw std::invalid_argument("g_mhz must be positive");
  if (!(omega_mhz > 0.0)) throw std::invalid_argument("omega_mhz must be positive");
  RunConfig rc;
  rc.n_photons = n_photons;
  const double g = mhz_to_rad(g_mhz);
  rc.params.g = g;
  rc.params.g1 = g1_frac * g;
  rc.params.g2 = g2_frac * g;
  rc.params.gprime = gprime_frac * g;
  rc.params.g12 = g12_frac * g;
  rc.params.omega_rabi = mhz_to_rad(omega_mhz);
  rc.params.delta = mhz_to_rad(delta_mhz);
  rc.rates = noise.rates();
  rc.nmax1 = nmax1;
  rc.nmax2 = nmax2;
  rc.steps.steps_per_period = steps_per_period;
  if (max_dt_ns > 0.0) rc.steps.max_dt = max_dt_ns * 1e-9;
  rc.crosstalk = crosstalk;
  rc.pulses = pulses;
  rc.schedule = schedule;
  rc.validate();
  return rc;
}

SweepSpec ConfigFile::sweep_spec() const {
  SweepSpec spec;
  spec.base = run_config();
  spec.axes = axes;
  spec.g_candidates = optimize_g_mhz;
  return spec;
}

ConfigError::ConfigError(const std::string& origin, int line, const std::string& message)
    : std::runtime_error(origin + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " +
                         message),
      line_(line) {}

ConfigFile parse_config(const std::string& text, const std::string& origin) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(origin, e.mark.line + 1, e.msg);
  }
  return parse_root(root, origin);
}

ConfigFile load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path, 0, "cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::vector<double> linear_range(double from, double to, double step) {
  if (!std::isfinite(from) || !std::isfinite(to) || !(step > 0.0) || !std::isfinite(step)) {
    throw std::invalid_argument("range needs finite bounds and a positive step");
  }
  if (to < from) throw std::invalid_argument("range 'to' is below 'from'");
  const double span = (to - from) / step;
  const auto count = static_cast<long>(std::floor(span + 1e-9)) + 1;
  if (count > 100000) throw std::invalid_argument("range has too many points");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (long k = 0; k < count; ++k) out.push_back(from + static_cast<double>(k) * step);
  return out;
}

ConfigFile preset_config(std::string_view name) {
  ConfigFile c;
  c.preset = std::string(name);
  // Reference device with an asymmetric g1 and weak crosstalk.
  c.n_photons = 6;
  c.g_mhz = 4.0;
  c.omega_mhz = 300.0;
  c.g1_frac = 0.95;
  c.g12_frac = 0.1;
  c.delta_mhz = 2000.0;
  c.noise = NoiseLifetimes::reference_device();
  if (name == "point") return c;
  if (name == "fig3") {
    c.axes = {{"omega_mhz", {100.0, 150.0, 200.0, 250.0, 300.0}},
              {"g_mhz", linear_range(1.0, 15.0, 0.5)}};
    return c;
  }
  if (name == "fig4") {
    c.axes = {{"N", linear_range(2.0, 10.0, 1.0)}, {"omega_mhz", {100.0, 200.0, 300.0}}};
    c.optimize_g_mhz = linear_range(1.0, 15.0, 0.5);
    return c;
  }
  if (name == "ideal") {
    c.n_photons = 3;
    c.g1_frac = 1.0;
    c.g12_frac = 0.0;
    c.noise = NoiseLifetimes::off();
    c.pulses = PulseModel::Instantaneous;
    c.steps_per_period = 200.0;
    return c;
  }
  throw std::invalid_argument("unknown preset '" + std::string(name) +
                              "' (expected point, fig3, fig4 or ideal)");
}

std::vector<std::string> preset_names() { return {"point", "fig3", "fig4", "ideal"}; }

std::string canonical_form(const ConfigFile& c) {
  std::ostringstream o;
  auto kv = [&](std::string_view k, const std::string& v) { o << k << '=' << v << '\n'; };
  kv("N", std::to_string(c.n_photons));
  kv("crosstalk", std::string(crosstalk_name(c.crosstalk)));
  kv("delta_mhz", shortest(c.delta_mhz));
  kv("g12_frac", shortest(c.g12_frac));
  kv("g1_frac", shortest(c.g1_frac));
  kv("g2_frac", shortest(c.g2_frac));
  kv("g_mhz", shortest(c.g_mhz));
  kv("gprime_frac", shortest(c.gprime_frac));
  kv("max_dt_ns", shortest(c.max_dt_ns));
  kv("nmax1", std::to_string(c.nmax1));
  kv("nmax2", std::to_string(c.nmax2));
  for (std::size_t i = 0; i < NoiseLifetimes::kChannels; ++i) {
    kv("noise." + std::string(kChannelNames[i]) + "_us", shortest(c.noise.us[i]));
  }
  kv("omega_mhz", shortest(c.omega_mhz));
  kv("pulses", std::string(pulse_model_name(c.pulses)));
  kv("schedule", std::string(schedule_mode_name(c.schedule)));
  kv("steps_per_period", shortest(c.steps_per_period));
  for (std::size_t a = 0; a < c.axes.size(); ++a) {
    std::string vals;
    for (double v : c.axes[a].values) vals += (vals.empty() ? "" : ",") + shortest(v);
    kv("sweep.axis" + std::to_string(a), c.axes[a].name + ":" + vals);
  }
  if (!c.optimize_g_mhz.empty()) {
    std::string vals;
    for (double v : c.optimize_g_mhz) vals += (vals.empty() ? "" : ",") + shortest(v);
    kv("sweep.optimize_g_mhz", vals);
  }
  return o.str();
}

std::string config_hash(const ConfigFile& c) {
  const std::uint64_t h = fnv1a(canonical_form(c));
  char buf[17];
  static const char* digits = "0123456789abcdef";
  for (int i = 15; i >= 0; --i) buf[15 - i] = digits[(h >> (4 * i)) & 0xF];
  buf[16] = '\0';
  return buf;
}

}  // namespace noonsim
