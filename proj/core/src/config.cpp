// config.cpp
#include "mwm/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "mwm/errors.hpp"

namespace mwm {
namespace {

constexpr double kPi = 3.14159265358979323846;

struct RawConfig {
  // section -> key -> (value, line number)
  std::map<std::string, std::map<std::string, std::pair<std::string, int>>> entries;
  std::string origin;

  bool has(const std::string& sec, const std::string& key) const {
    auto s = entries.find(sec);
    return s != entries.end() && s->second.count(key) > 0;
  }
  std::string get(const std::string& sec, const std::string& key, bool& found) const {
    auto s = entries.find(sec);
    if (s == entries.end()) {
      found = false;
      return "";
    }
    auto k = s->second.find(key);
    if (k == s->second.end()) {
      found = false;
      return "";
    }
    found = true;
    return k->second.first;
  }
};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

RawConfig tokenize(const std::string& text, const std::string& origin) {
  RawConfig raw;
  raw.origin = origin;
  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty section name");
      raw.entries[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    if (section.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": key outside any section");
    raw.entries[section][key] = {value, lineno};
  }
  return raw;
}

class Reader {
public:
  explicit Reader(const RawConfig& raw) : raw_(raw) {}

  double number(const std::string& sec, const std::string& key, double fallback) {
    mark(sec, key);
    bool found = false;
    const std::string v = raw_.get(sec, key, found);
    if (!found) return fallback;
    return parse_double(sec, key, v);
  }
  int integer(const std::string& sec, const std::string& key, int fallback) {
    const double v = number(sec, key, static_cast<double>(fallback));
    if (v != std::floor(v))
      throw ConfigError(field(sec, key) + ": expected an integer");
    return static_cast<int>(v);
  }
  std::string text(const std::string& sec, const std::string& key, std::string fallback) {
    mark(sec, key);
    bool found = false;
    const std::string v = raw_.get(sec, key, found);
    return found ? v : fallback;
  }
  bool boolean(const std::string& sec, const std::string& key, bool fallback) {
    const std::string v = text(sec, key, fallback ? "true" : "false");
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(field(sec, key) + ": expected a boolean");
  }
  bool has(const std::string& sec, const std::string& key) {
    mark(sec, key);
    return raw_.has(sec, key);
  }

  double parse_double(const std::string& sec, const std::string& key, const std::string& v) {
    try {
      std::size_t used = 0;
      const double x = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument("trailing characters");
      return x;
    } catch (const std::exception&) {
      throw ConfigError(field(sec, key) + ": not a number: '" + v + "'");
    }
  }

  std::string field(const std::string& sec, const std::string& key) const {
    std::string where = raw_.origin;
    auto s = raw_.entries.find(sec);
    if (s != raw_.entries.end()) {
      auto k = s->second.find(key);
      if (k != s->second.end()) where += ":" + std::to_string(k->second.second);
    }
    return where + ": [" + sec + "] " + key;
  }

  void check_unknown() const {
    for (const auto& [sec, keys] : raw_.entries) {
      for (const auto& [key, value] : keys) {
        if (!seen_.count(sec + "\n" + key))
          throw ConfigError(raw_.origin + ":" + std::to_string(value.second) +
                            ": unknown key '" + key + "' in section [" + sec + "]");
      }
    }
  }

private:
  void mark(const std::string& sec, const std::string& key) { seen_.insert(sec + "\n" + key); }
  const RawConfig& raw_;
  std::set<std::string> seen_;
};

SpectralDensity read_reservoir(Reader& r) {
  const std::string type = r.text("reservoir", "type", "ohmic");
  if (type == "ohmic") {
    return SpectralDensity::ohmic(r.number("reservoir", "alpha", 0.1),
                                  r.number("reservoir", "omega_c_mev", 8.0));
  }
  if (type == "gaussian_ohmic") {
    return SpectralDensity::gaussian_ohmic(
        r.number("reservoir", "alpha", 0.1), r.number("reservoir", "omega_c_mev", 8.0),
        r.number("reservoir", "alpha_p", 0.05), r.number("reservoir", "omega_p_mev", 13.0),
        r.number("reservoir", "gamma_p_mev", 4.0));
  }
  if (type == "single_mode") {
    return SpectralDensity::single_mode(r.number("reservoir", "g_sq_mev2", 1.0),
                                        r.number("reservoir", "omega_p_mev", 13.0));
  }
  if (type == "tabulated") {
    const std::string path = r.text("reservoir", "csv", "");
    if (path.empty())
      throw ConfigError(r.field("reservoir", "csv") + ": required for tabulated spectra");
    return SpectralDensity::tabulated_from_csv(path);
  }
  throw ConfigError(r.field("reservoir", "type") + ": unknown reservoir type '" + type + "'");
}

} // namespace

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  const std::string body = trim(text);
  if (body.empty()) return out;
  if (body.find(':') != std::string::npos) {
    // start:step:stop, inclusive within half a step
    double start = 0, step = 0, stop = 0;
    char c1 = 0, c2 = 0;
    std::istringstream is(body);
    if (!(is >> start >> c1 >> step >> c2 >> stop) || c1 != ':' || c2 != ':')
      throw ConfigError("number list: malformed range '" + body + "'");
    if (!(step > 0.0)) throw ConfigError("number list: range step must be > 0");
    for (double v = start; v <= stop + 0.5 * step; v += step) out.push_back(v);
    return out;
  }
  std::istringstream is(body);
  std::string item;
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ConfigError("number list: not a number: '" + item + "'");
    }
  }
  return out;
}

PulseSequence RunConfig::make_sequence() const {
  if (pulse_mode == SequenceMode::PiTrain) return make_pi_train(m_pulses);
  return PulseSequence::weak_three(
      {t0_ps, t1_ps, t2_ps},
      {theta0_over_pi * kPi, theta1_over_pi * kPi, theta2_over_pi * kPi});
}

PulseSequence RunConfig::make_pi_train(int m) const {
  return PulseSequence::pi_train_uniform(t0_ps, m, interval_ps, theta0_over_pi * kPi,
                                         last_interval_ps);
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
  const RawConfig raw = tokenize(text, origin);
  Reader r(raw);
  RunConfig cfg;

  cfg.reservoir = read_reservoir(r);
  cfg.temperature_k = r.number("ensemble", "temperature_k", 10.0);
  if (cfg.temperature_k < 0.0)
    throw ConfigError(r.field("ensemble", "temperature_k") + ": must be >= 0");
  cfg.ensemble.delta_b_mev = r.number("ensemble", "delta_b_mev", 0.0);
  if (cfg.ensemble.delta_b_mev < 0.0)
    throw ConfigError(r.field("ensemble", "delta_b_mev") + ": must be >= 0");

  const std::string mode = r.text("pulses", "mode", "pi_train");
  if (mode == "pi_train") cfg.pulse_mode = SequenceMode::PiTrain;
  else if (mode == "weak_three_pulse") cfg.pulse_mode = SequenceMode::WeakThreePulse;
  else throw ConfigError(r.field("pulses", "mode") + ": unknown mode '" + mode + "'");

  cfg.theta0_over_pi = r.number("pulses", "theta0_over_pi", 0.5);
  cfg.t0_ps = r.number("pulses", "t0_ps", 0.0);
  cfg.interval_ps = r.number("pulses", "interval_ps", 0.2);
  cfg.last_interval_ps = r.number("pulses", "last_interval_ps", 0.0);
  cfg.m_pulses = r.integer("pulses", "m_pulses", 1);
  cfg.t1_ps = r.number("pulses", "t1_ps", 0.1);
  cfg.t2_ps = r.number("pulses", "t2_ps", 0.2);
  cfg.theta1_over_pi = r.number("pulses", "theta1_over_pi", 0.5);
  cfg.theta2_over_pi = r.number("pulses", "theta2_over_pi", 0.5);

  if (r.has("grid", "m_list")) {
    for (double v : parse_number_list(r.text("grid", "m_list", ""))) {
      if (v != std::floor(v) || v < 0)
        throw ConfigError(r.field("grid", "m_list") + ": entries must be integers >= 0");
      cfg.m_list.push_back(static_cast<int>(v));
    }
  }
  cfg.t_start_ps = r.number("grid", "t_start_ps", 0.0);
  cfg.t_end_ps = r.number("grid", "t_end_ps", 2.0);
  cfg.t_step_ps = r.number("grid", "t_step_ps", 0.001);
  if (!(cfg.t_step_ps > 0.0))
    throw ConfigError(r.field("grid", "t_step_ps") + ": must be > 0");
  if (r.has("grid", "t1_list_ps"))
    cfg.t1_list_ps = parse_number_list(r.text("grid", "t1_list_ps", ""));
  if (r.has("grid", "temps_k"))
    cfg.temps_k = parse_number_list(r.text("grid", "temps_k", ""));
  cfg.t_upper_ps = r.number("grid", "t_upper_ps", 0.0);

  cfg.quad.omega_max_mev = r.number("quadrature", "omega_max_mev", 0.0);
  cfg.quad.rel_tol = r.number("quadrature", "rel_tol", 1e-8);
  cfg.quad.abs_tol = r.number("quadrature", "abs_tol", 1e-12);
  cfg.quad.max_panels = r.integer("quadrature", "max_panels", 4000);
  if (!(cfg.quad.rel_tol > 0.0) || !(cfg.quad.abs_tol > 0.0))
    throw ConfigError(origin + ": [quadrature] tolerances must be > 0");
  if (cfg.quad.max_panels < 1)
    throw ConfigError(r.field("quadrature", "max_panels") + ": must be >= 1");

  cfg.out_dir = r.text("output", "dir", "out");
  cfg.prefix = r.text("output", "prefix", "mwm");

  cfg.oracle_n_cut = r.integer("oracle", "n_cut", 0);
  cfg.oracle_tol = r.number("oracle", "tol", 1e-6);
  if (r.has("oracle", "temps_k")) cfg.oracle_temps_k = parse_number_list(r.text("oracle", "temps_k", ""));
  cfg.oracle_corrupt_sign = r.boolean("oracle", "corrupt_sign", false);

  cfg.fit_data_4wm = r.text("fit", "data_4wm", "");
  cfg.fit_data_6wm = r.text("fit", "data_6wm", "");
  cfg.fit_starts = r.integer("fit", "starts", 8);
  cfg.seed = static_cast<std::uint64_t>(r.integer("fit", "seed", 0));
  if (r.has("fit", "param")) {
    throw ConfigError(r.field("fit", "param") +
                      ": use param1, param2, ... (one free parameter per key)");
  }
  for (int i = 1; i <= 8; ++i) {
    const std::string key = "param" + std::to_string(i);
    if (!r.has("fit", key)) continue;
    std::istringstream is(r.text("fit", key, ""));
    std::string name;
    double init = 0, lo = 0, hi = 0;
    if (!(is >> name >> init >> lo >> hi))
      throw ConfigError(r.field("fit", key) + ": expected '<name> <init> <lo> <hi>'");
    const auto param = fit_param_from_name(name);
    if (!param)
      throw ConfigError(r.field("fit", key) + ": unknown parameter '" + name + "'");
    if (!(lo < hi) || init < lo || init > hi)
      throw ConfigError(r.field("fit", key) + ": need lo < hi and init within [lo, hi]");
    cfg.fit_params.push_back({*param, init, lo, hi});
  }

  r.check_unknown();

  // cross-field validation
  if (cfg.pulse_mode == SequenceMode::WeakThreePulse &&
      !(cfg.t0_ps < cfg.t1_ps && cfg.t1_ps < cfg.t2_ps))
    throw ConfigError(origin + ": [pulses] need t0_ps < t1_ps < t2_ps");
  cfg.make_sequence();  // surface pulse invariant violations now
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_config(buf.str(), path);
}

} // namespace mwm
