#include "mnda/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mnda {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(std::string_view key, std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError("bad number for " + std::string(key) + ": '" + std::string(v) + "'");
  }
  return out;
}

long long to_int(std::string_view key, std::string_view v) {
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError("bad integer for " + std::string(key) + ": '" + std::string(v) + "'");
  }
  return out;
}

NudgeKind to_nudge(std::string_view v) {
  if (v == "none") return NudgeKind::none;
  if (v == "local_filtered") return NudgeKind::local_filtered;
  if (v == "spectral_projection") return NudgeKind::spectral_projection;
  throw ConfigError("unknown nudge kind '" + std::string(v) + "'");
}

SchemeKind to_scheme(std::string_view v) {
  if (v == "none") return SchemeKind::none;
  if (v == "discontinuous_periodic") return SchemeKind::discontinuous_periodic;
  if (v == "continuous_periodic") return SchemeKind::continuous_periodic;
  if (v == "dominant") return SchemeKind::dominant;
  if (v == "random") return SchemeKind::random;
  if (v == "hybrid") return SchemeKind::hybrid;
  throw ConfigError("unknown scheme kind '" + std::string(v) + "'");
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

const char* to_string(NudgeKind k) {
  switch (k) {
    case NudgeKind::none: return "none";
    case NudgeKind::local_filtered: return "local_filtered";
    case NudgeKind::spectral_projection: return "spectral_projection";
    case NudgeKind::volume_elements: return "volume_elements";
  }
  return "?";
}

const char* to_string(SchemeKind k) {
  switch (k) {
    case SchemeKind::none: return "none";
    case SchemeKind::discontinuous_periodic: return "discontinuous_periodic";
    case SchemeKind::continuous_periodic: return "continuous_periodic";
    case SchemeKind::dominant: return "dominant";
    case SchemeKind::random: return "random";
    case SchemeKind::hybrid: return "hybrid";
  }
  return "?";
}

int SimConfig::decision_stride() const {
  if (assimilation.decision_stride > 0) return assimilation.decision_stride;
  return grid >= 32 ? grid / 32 : 1;
}

void apply_setting(SimConfig& c, std::string_view key, std::string_view value) {
  auto& a = c.assimilation;
  auto& s = a.scheme;
  const std::string k(key);
  if (k == "grid") c.grid = static_cast<int>(to_int(key, value));
  else if (k == "nu") c.nu = to_double(key, value);
  else if (k == "dt") c.dt = to_double(key, value);
  else if (k == "forcing.annulus_lo") c.forcing.annulus_lo = static_cast<int>(to_int(key, value));
  else if (k == "forcing.annulus_hi") c.forcing.annulus_hi = static_cast<int>(to_int(key, value));
  else if (k == "forcing.grashof_trad") c.forcing.grashof_trad = to_double(key, value);
  else if (k == "forcing.seed") c.forcing.seed = static_cast<std::uint64_t>(to_int(key, value));
  else if (k == "assimilation.mu") a.mu = to_double(key, value);
  else if (k == "assimilation.nudge") a.nudge = to_nudge(value);
  else if (k == "assimilation.p") a.p = static_cast<int>(to_int(key, value));
  else if (k == "assimilation.m") a.modes = static_cast<int>(to_int(key, value));
  else if (k == "assimilation.decision_stride") a.decision_stride = static_cast<int>(to_int(key, value));
  else if (k == "assimilation.scheme.kind") s.kind = to_scheme(value);
  else if (k == "assimilation.scheme.F") s.F = to_double(key, value);
  else if (k == "assimilation.scheme.T") s.T = to_double(key, value);
  else if (k == "assimilation.scheme.delay_frac") s.delay_frac = to_double(key, value);
  else if (k == "assimilation.scheme.seed") s.seed = static_cast<std::uint64_t>(to_int(key, value));
  else if (k == "assimilation.scheme.partition") s.partition = static_cast<int>(to_int(key, value));
  else if (k == "assimilation.scheme.switch_time") s.switch_time = to_double(key, value);
  else if (k == "assimilation.scheme.switch_modes") s.switch_modes = static_cast<int>(to_int(key, value));
  else if (k == "assimilation.scheme.then") s.then = to_scheme(value);
  else if (k == "run.t_end") c.run.t_end = to_double(key, value);
  else if (k == "run.spinup_time") c.run.spinup_time = to_double(key, value);
  else if (k == "run.output_stride") c.run.output_stride = static_cast<int>(to_int(key, value));
  else if (k == "run.checkpoint_path") c.run.checkpoint_path = std::string(value);
  else if (k == "theory.C_L") c.theory.C_L = to_double(key, value);
  else if (k == "theory.C_I") c.theory.C_I = to_double(key, value);
  else if (k == "theory.c0") c.theory.c0 = to_double(key, value);
  else if (k == "theory.c_star") c.theory.c_star = to_double(key, value);
  else if (k == "theory.c_psi") c.theory.c_psi = to_double(key, value);
  else throw ConfigError("unknown config key '" + k + "'");
}

void validate(const SimConfig& c) {
  if (!is_power_of_two(c.grid) || c.grid < 16) throw ConfigError("grid must be a power of two >= 16");
  if (!(c.nu > 0.0)) throw ConfigError("nu must be positive");
  if (!(c.dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(c.forcing.grashof_trad >= 0.0)) throw ConfigError("forcing.grashof_trad must be non-negative");
  if (c.forcing.annulus_lo < 1 || c.forcing.annulus_lo >= c.forcing.annulus_hi) {
    throw ConfigError("forcing annulus must satisfy 1 <= annulus_lo < annulus_hi");
  }
  if (!(c.assimilation.mu >= 0.0)) throw ConfigError("assimilation.mu must be non-negative");
  if (c.assimilation.p < 0 || c.assimilation.p > 8) throw ConfigError("assimilation.p out of range");
  if (c.run.output_stride < 1) throw ConfigError("run.output_stride must be >= 1");
  if (!(c.run.t_end >= 0.0) || !(c.run.spinup_time >= 0.0)) throw ConfigError("run times must be non-negative");
  const auto& s = c.assimilation.scheme;
  if (s.kind == SchemeKind::none && c.assimilation.nudge == NudgeKind::local_filtered) {
    throw ConfigError("local_filtered nudging needs a window scheme");
  }
  if (s.kind != SchemeKind::none && s.kind != SchemeKind::hybrid &&
      c.assimilation.nudge == NudgeKind::spectral_projection) {
    throw ConfigError("spectral_projection nudging is global; use scheme kind none");
  }
  if (c.grid % (s.partition * c.decision_stride()) != 0) {
    throw ConfigError("decision stride times partition must divide the grid");
  }
  try {
    validate(s);
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  }
}

SimConfig parse_config(std::string_view text) {
  SimConfig cfg;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    apply_setting(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  validate(cfg);
  return cfg;
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string spinup_key(const SimConfig& c) {
  std::ostringstream o;
  o << "grid = " << c.grid << "\n"
    << "nu = " << fmt(c.nu) << "\n"
    << "dt = " << fmt(c.dt) << "\n"
    << "forcing.annulus_lo = " << c.forcing.annulus_lo << "\n"
    << "forcing.annulus_hi = " << c.forcing.annulus_hi << "\n"
    << "forcing.grashof_trad = " << fmt(c.forcing.grashof_trad) << "\n"
    << "forcing.seed = " << c.forcing.seed << "\n"
    << "run.spinup_time = " << fmt(c.run.spinup_time) << "\n";
  return o.str();
}

std::string to_text(const SimConfig& c) {
  const auto& a = c.assimilation;
  const auto& s = a.scheme;
  std::ostringstream o;
  o << spinup_key(c)
    << "assimilation.mu = " << fmt(a.mu) << "\n"
    << "assimilation.nudge = " << to_string(a.nudge) << "\n"
    << "assimilation.p = " << a.p << "\n"
    << "assimilation.m = " << a.modes << "\n"
    << "assimilation.decision_stride = " << a.decision_stride << "\n"
    << "assimilation.scheme.kind = " << to_string(s.kind) << "\n"
    << "assimilation.scheme.F = " << fmt(s.F) << "\n"
    << "assimilation.scheme.T = " << fmt(s.T) << "\n"
    << "assimilation.scheme.delay_frac = " << fmt(s.delay_frac) << "\n"
    << "assimilation.scheme.seed = " << s.seed << "\n"
    << "assimilation.scheme.partition = " << s.partition << "\n"
    << "assimilation.scheme.switch_time = " << fmt(s.switch_time) << "\n"
    << "assimilation.scheme.switch_modes = " << s.switch_modes << "\n"
    << "assimilation.scheme.then = " << to_string(s.then) << "\n"
    << "run.t_end = " << fmt(c.run.t_end) << "\n"
    << "run.output_stride = " << c.run.output_stride << "\n";
  if (!c.run.checkpoint_path.empty()) o << "run.checkpoint_path = " << c.run.checkpoint_path << "\n";
  o << "theory.C_L = " << fmt(c.theory.C_L) << "\n"
    << "theory.C_I = " << fmt(c.theory.C_I) << "\n"
    << "theory.c0 = " << fmt(c.theory.c0) << "\n"
    << "theory.c_star = " << fmt(c.theory.c_star) << "\n"
    << "theory.c_psi = " << fmt(c.theory.c_psi) << "\n";
  return o.str();
}

}  // namespace mnda
