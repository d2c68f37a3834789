#pragma once

#include "growup/asymptotics.hpp"
#include "growup/config.hpp"

#include <string>
#include <vector>

namespace growup {

struct CommandResult {
  int status = 0;  // 0 ok, 5 when a verification check fails
  std::string summary;
  std::vector<std::string> files;
};

/// Subcommands: exponents, profile, phase, simulate, verify, reproduce-figure1,
/// reproduce-theorem. `verify` reads the run directory named by run.output.
/// Throws Error{Config, "unknown_command"} for anything else.
CommandResult run_command(const std::string& command, const ExperimentConfig& cfg);

const std::vector<std::string>& command_names();

/// Weight constant of the comparison supersolution: A for the singular weight,
/// c2 of the equivalence otherwise (1 when the weight vanishes identically).
double upper_weight_constant(const WeightModel& weight, const ProblemParams& pr);

/// Domain length 1.5·(t + τ∞)^β·ξ0 of the supersolution support at physical time t.
double supersolution_domain(const InitialData& init, const Profile& upper, const Exponents& ex, double t);

struct TheoremSetup {
  WeightModel weight = RegularPower{-1.5};
  InitialData init = Bump{0.0, 2.0, 1.0};
  std::size_t n = 2000;
  double horizon = 6.0;     // final s
  int probes_per_unit = 20;
  bool remesh = true;       // shrink the rescaled domain with the supersolution support
  SimControls controls{};
};

/// Physical run on t ∈ [0,1] followed by a self-similar run on s ∈ [0, horizon].
struct TheoremRun {
  WeightEquivalence equivalence{};
  double limit_amplitude = 1.0;  // A of the limit weight A|y|^σ
  Profile upper_profile;
  SupersolutionSchedule tau{};
  double zeta0 = 0.0;
  Diagnostics physical;
  Diagnostics rescaled;
  Profile lower_profile;
  SubsolutionSchedule schedule{};
  SandwichReport sandwich{};
  double fA0 = 0.0;              // f_A(0)
  std::vector<double> t;         // physical time at every probe of both phases
  std::vector<double> sup_u;     // sup u(t)
  std::vector<double> support_u; // physical support radius
  std::vector<double> support_bound;
  double support_excess = 0.0;   // max over probes of support_u − support_bound
  double support_cells = 0.0;    // the same excess in units of the local cell width
  FitReport alpha_fit{};
  FitReport beta_fit{};
  std::size_t remeshes = 0;
  double seconds = 0.0;

  /// e(s) = sup|v(·,s) − f_A| at the probe nearest to s; NaN outside the run.
  double error_at(double s) const;
};

TheoremRun run_theorem(const TheoremSetup& setup, const Profile& fstar, const Profile& annulus,
                       const ProblemParams& pr, const Exponents& ex);

/// Largest sup-difference between two self-similar runs at their shared snapshot times,
/// with the coarse field interpolated onto the fine grid.
double self_convergence_error(const Diagnostics& fine, const Diagnostics& coarse);

}  // namespace growup
