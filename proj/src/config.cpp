#include "growup/config.hpp"

#include "growup/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace growup {

namespace {

struct KeySpec {
  const char* key;
  const char* fallback;
};

// Schema of every accepted key with its default value.
const KeySpec kSchema[] = {
    {"m", "3"},
    {"p", "2"},
    {"N", "4"},
    {"sigma", "-1.5"},
    {"A", "1"},
    {"weight.kind", "regular"},
    {"weight.c", "1"},
    {"weight.amplitude", "0.5"},
    {"weight.file", ""},
    {"init.kind", "bump"},
    {"init.center", "0"},
    {"init.width", "2"},
    {"init.height", "1"},
    {"init.R0", "1"},
    {"init.t_init", "1"},
    {"init.file", ""},
    {"numerics.n", "2000"},
    {"numerics.domain", "0"},
    {"numerics.scheme", "implicit"},
    {"numerics.safety", "0.4"},
    {"numerics.reaction_safety", "0.01"},
    {"numerics.change_target", "0.002"},
    {"numerics.newton_tol", "1e-11"},
    {"numerics.support_rel", "1e-10"},
    {"numerics.wall_clock", "0"},
    {"run.frame", "physical"},
    {"run.horizon", "1"},
    {"run.probes", "61"},
    {"run.snapshots", "7"},
    {"run.output", "out"},
    {"profile.eps", "1e-6"},
    {"profile.xi_max", "50"},
    {"profile.rtol", "1e-10"},
    {"profile.tol", "1e-10"},
    {"profile.grid_points", "2001"},
    {"profile.kind", "selfsimilar"},
    {"annulus.R1", "0.001"},
    {"annulus.slope_min", "1e-4"},
    {"annulus.slope_max", "100"},
    {"annulus.slope_count", "25"},
    {"phase.fan_size", "14"},
    {"phase.below_size", "4"},
    {"phase.seed_Y", "4"},
    {"phase.fan_min", "1.5"},
    {"phase.fan_max", "2000"},
    {"phase.Y_far", "1000"},
    {"phase.W_tail", "1e-6"},
    {"phase.eta_max", "5000"},
    {"phase.svg", "auto"},
    {"verify.final_error", "0.05"},
    {"verify.exponent_tol", "0.05"},
    {"verify.fits", "auto"},
    {"theorem.horizon", "6"},
    {"theorem.extended_horizon", "14"},
    {"theorem.probes_per_unit", "20"},
    {"theorem.general", "true"},
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string canonical_key(const std::string& key) {
  static const char* bare[] = {"m", "p", "N", "sigma", "A"};
  if (key.rfind("params.", 0) == 0) {
    const std::string tail = key.substr(7);
    for (const char* b : bare)
      if (tail == b) return tail;
  }
  return key;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const std::string& why) {
  fail(ErrorKind::Config, "bad_value", "key '" + key + "' = '" + value + "': " + why);
}

}  // namespace

ExperimentConfig::ExperimentConfig() {
  for (const auto& k : kSchema) values_[k.key] = k.fallback;
}

const std::vector<std::string>& ExperimentConfig::keys() {
  static const std::vector<std::string> all = [] {
    std::vector<std::string> v;
    for (const auto& k : kSchema) v.emplace_back(k.key);
    std::sort(v.begin(), v.end());
    return v;
  }();
  return all;
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  const std::string k = canonical_key(trim(key));
  auto it = values_.find(k);
  if (it == values_.end()) fail(ErrorKind::Config, "unknown_key", "unknown configuration key '" + k + "'");
  it->second = trim(value);
}

ExperimentConfig ExperimentConfig::from_text(const std::string& text, const std::string& origin) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(ErrorKind::Config, "syntax", origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    cfg.set(line.substr(0, eq), line.substr(eq + 1));
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Config, "missing_file", "cannot open configuration file " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return from_text(os.str(), path);
}

void ExperimentConfig::apply_overrides(const std::vector<std::string>& assignments) {
  for (const auto& a : assignments) {
    const auto eq = a.find('=');
    if (eq == std::string::npos) fail(ErrorKind::Config, "syntax", "override '" + a + "' is not key=value");
    set(a.substr(0, eq), a.substr(eq + 1));
  }
}

const std::string& ExperimentConfig::get(const std::string& key) const {
  auto it = values_.find(canonical_key(key));
  if (it == values_.end()) fail(ErrorKind::Config, "unknown_key", "unknown configuration key '" + key + "'");
  return it->second;
}

double ExperimentConfig::number(const std::string& key) const {
  const std::string& v = get(key);
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) bad_value(key, v, "trailing characters");
    if (std::isnan(x)) bad_value(key, v, "not a number");
    return x;
  } catch (const std::logic_error&) {
    bad_value(key, v, "expected a number");
  }
}

long ExperimentConfig::integer(const std::string& key) const {
  const std::string& v = get(key);
  try {
    std::size_t used = 0;
    const long x = std::stol(v, &used);
    if (used != v.size()) bad_value(key, v, "expected an integer");
    return x;
  } catch (const std::logic_error&) {
    bad_value(key, v, "expected an integer");
  }
}

bool ExperimentConfig::flag(const std::string& key) const {
  const std::string& v = get(key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad_value(key, v, "expected true or false");
}

std::string ExperimentConfig::echo() const {
  std::ostringstream os;
  for (const auto& [k, v] : values_) os << k << " = " << v << "\n";
  return os.str();
}

ProblemParams config_params(const ExperimentConfig& cfg) {
  const long N = cfg.integer("N");
  if (N < 1 || N > 1000) fail(ErrorKind::Regime, "dimension", "spatial dimension must be a positive integer");
  return validate_regime(cfg.number("m"), cfg.number("p"), static_cast<int>(N), cfg.number("sigma"),
                         cfg.number("A"));
}

WeightModel config_weight(const ExperimentConfig& cfg, const ProblemParams& pr) {
  const std::string& kind = cfg.get("weight.kind");
  const double s = pr.sigma(), A = pr.A();
  if (kind == "regular") {
    if (A == 1.0) return RegularPower{s};
    return ScaledRegular{A, s};
  }
  if (kind == "singular") return SingularPower{A, s};
  if (kind == "scaled") {
    const double c = cfg.number("weight.c");
    if (!(c >= 0.0)) bad_value("weight.c", cfg.get("weight.c"), "must be nonnegative");
    return ScaledRegular{c, s};
  }
  if (kind == "perturbed") {
    const double a = cfg.number("weight.amplitude");
    if (!(a > -1.0)) bad_value("weight.amplitude", cfg.get("weight.amplitude"), "must exceed -1");
    return PerturbedRegular{s, A, a};
  }
  if (kind == "tabulated") return load_tabulated_weight(cfg.get("weight.file"), s, A);
  bad_value("weight.kind", kind, "expected regular, singular, scaled, perturbed or tabulated");
}

InitialData config_initial(const ExperimentConfig& cfg, const ProblemParams& pr, const Exponents& ex) {
  const std::string& kind = cfg.get("init.kind");
  if (kind == "bump") {
    Bump b{cfg.number("init.center"), cfg.number("init.width"), cfg.number("init.height")};
    if (!(b.width > 0.0) || !(b.height >= 0.0) || b.center < 0.0)
      fail(ErrorKind::Config, "bad_value", "bump needs center >= 0, width > 0, height >= 0");
    return b;
  }
  if (kind == "indicator") {
    Indicator d{cfg.number("init.R0"), cfg.number("init.height")};
    if (!(d.R0 > 0.0) || !(d.height >= 0.0))
      fail(ErrorKind::Config, "bad_value", "indicator needs R0 > 0 and height >= 0");
    return d;
  }
  if (kind == "profile") {
    const double t = cfg.number("init.t_init");
    if (!(t > 0.0)) bad_value("init.t_init", cfg.get("init.t_init"), "must be positive");
    return ProfileSnapshot{find_selfsimilar_profile(pr, ex, config_shooting(cfg)), t};
  }
  if (kind == "tabulated") return load_tabulated_data(cfg.get("init.file"));
  bad_value("init.kind", kind, "expected bump, indicator, profile or tabulated");
}

SimControls config_sim_controls(const ExperimentConfig& cfg) {
  SimControls c;
  const std::string& scheme = cfg.get("numerics.scheme");
  if (scheme == "implicit") {
    c.scheme = SimControls::Scheme::Implicit;
  } else if (scheme == "explicit") {
    c.scheme = SimControls::Scheme::Explicit;
  } else {
    bad_value("numerics.scheme", scheme, "expected implicit or explicit");
  }
  c.safety = cfg.number("numerics.safety");
  c.reaction_safety = cfg.number("numerics.reaction_safety");
  c.change_target = cfg.number("numerics.change_target");
  c.newton_tol = cfg.number("numerics.newton_tol");
  c.support_rel = cfg.number("numerics.support_rel");
  c.wall_clock_cap = cfg.number("numerics.wall_clock");
  if (!(c.safety > 0.0 && c.safety <= 1.0)) bad_value("numerics.safety", cfg.get("numerics.safety"), "need (0,1]");
  if (!(c.reaction_safety > 0.0))
    bad_value("numerics.reaction_safety", cfg.get("numerics.reaction_safety"), "must be positive");
  if (!(c.change_target > 0.0))
    bad_value("numerics.change_target", cfg.get("numerics.change_target"), "must be positive");
  return c;
}

ShootingControls config_shooting(const ExperimentConfig& cfg) {
  ShootingControls c;
  c.eps = cfg.number("profile.eps");
  c.xi_max = cfg.number("profile.xi_max");
  c.rtol = cfg.number("profile.rtol");
  c.tol = cfg.number("profile.tol");
  const long g = cfg.integer("profile.grid_points");
  if (g < 3) bad_value("profile.grid_points", cfg.get("profile.grid_points"), "need at least 3 points");
  c.grid_points = static_cast<std::size_t>(g);
  if (!(c.eps > 0.0) || !(c.xi_max > c.eps) || !(c.rtol > 0.0) || !(c.tol > 0.0))
    fail(ErrorKind::Config, "bad_value", "profile controls must be positive with xi_max > eps");
  return c;
}

PortraitOptions config_portrait(const ExperimentConfig& cfg) {
  PortraitOptions o;
  o.fan_size = static_cast<int>(cfg.integer("phase.fan_size"));
  o.below_size = static_cast<int>(cfg.integer("phase.below_size"));
  o.seed_Y = cfg.number("phase.seed_Y");
  o.fan_min = cfg.number("phase.fan_min");
  o.fan_max = cfg.number("phase.fan_max");
  o.controls.Y_far = cfg.number("phase.Y_far");
  o.controls.W_tail = cfg.number("phase.W_tail");
  o.controls.eta_max = cfg.number("phase.eta_max");
  if (o.fan_size < 0 || o.below_size < 0 || !(o.fan_min > 1.0) || !(o.fan_max > o.fan_min) || !(o.seed_Y > 0.0))
    fail(ErrorKind::Config, "bad_value", "phase seeds need counts >= 0, seed_Y > 0 and 1 < fan_min < fan_max");
  return o;
}

std::vector<double> config_slope_grid(const ExperimentConfig& cfg) {
  const double lo = cfg.number("annulus.slope_min"), hi = cfg.number("annulus.slope_max");
  const long n = cfg.integer("annulus.slope_count");
  if (!(lo > 0.0) || !(hi >= lo) || n < 1)
    fail(ErrorKind::Config, "bad_value", "annulus slope grid needs 0 < slope_min <= slope_max and count >= 1");
  std::vector<double> g;
  for (long i = 0; i < n; ++i) {
    const double w = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
    g.push_back(std::exp(std::log(lo) + w * (std::log(hi) - std::log(lo))));
  }
  return g;
}

Frame config_frame(const ExperimentConfig& cfg) {
  const std::string& f = cfg.get("run.frame");
  if (f == "physical") return Frame::Physical;
  if (f == "self-similar" || f == "selfsimilar" || f == "rescaled") return Frame::SelfSimilar;
  bad_value("run.frame", f, "expected physical or self-similar");
}

}  // namespace growup
