#pragma once

#include "growup/params.hpp"
#include "growup/pdesim.hpp"
#include "growup/phaseplane.hpp"
#include "growup/profile.hpp"
#include "growup/weights.hpp"

#include <map>
#include <string>
#include <vector>

namespace growup {

/// Flat `key = value` experiment configuration with dotted section keys.
/// Every key has a default; unknown keys are rejected with Error{Config}.
/// The bare parameter keys m, p, N, sigma, A may also be written params.m etc.
class ExperimentConfig {
 public:
  ExperimentConfig();

  static ExperimentConfig from_text(const std::string& text, const std::string& origin = "<string>");
  static ExperimentConfig from_file(const std::string& path);

  /// Throws Error{Config, "unknown_key"} for keys outside the schema.
  void set(const std::string& key, const std::string& value);
  /// Applies "key=value" assignments in order.
  void apply_overrides(const std::vector<std::string>& assignments);

  const std::string& get(const std::string& key) const;
  double number(const std::string& key) const;
  long integer(const std::string& key) const;
  bool flag(const std::string& key) const;

  /// All keys in sorted order with their resolved values, one `key = value` per line.
  std::string echo() const;
  const std::map<std::string, std::string>& values() const { return values_; }

  static const std::vector<std::string>& keys();

 private:
  std::map<std::string, std::string> values_;
};

/// Typed views of the configuration sections. Validation errors carry ErrorKind::Config,
/// except params(), which reports regime violations as ErrorKind::Regime.
ProblemParams config_params(const ExperimentConfig& cfg);
WeightModel config_weight(const ExperimentConfig& cfg, const ProblemParams& pr);
InitialData config_initial(const ExperimentConfig& cfg, const ProblemParams& pr, const Exponents& ex);
SimControls config_sim_controls(const ExperimentConfig& cfg);
ShootingControls config_shooting(const ExperimentConfig& cfg);
PortraitOptions config_portrait(const ExperimentConfig& cfg);
std::vector<double> config_slope_grid(const ExperimentConfig& cfg);
Frame config_frame(const ExperimentConfig& cfg);

}  // namespace growup
