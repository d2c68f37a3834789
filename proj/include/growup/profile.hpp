#pragma once

#include "growup/params.hpp"

#include <array>
#include <span>
#include <variant>
#include <vector>

namespace growup {

enum class ProfileKind { SelfSimilarSolution, AnnularSubsolution };

struct CenteredSupport {
  double xi0;
};
struct AnnularSupport {
  double R1;
  double R2;
};
using ProfileSupport = std::variant<CenteredSupport, AnnularSupport>;

/// Radial self-similar profile sampled on a uniform grid covering its support.
struct Profile {
  ProfileKind kind = ProfileKind::SelfSimilarSolution;
  std::vector<double> xi;
  std::vector<double> f;
  std::vector<double> fm_prime;  // (f^m)'(ξ)
  ProfileSupport support = CenteredSupport{0.0};

  // Shooting bookkeeping.
  double shooting_parameter = 0.0;  // f(0) for f_*, initial (f^m)' slope for the annulus
  double bracket_width = 0.0;
  int bisection_iterations = 0;
  double contact_slope = 0.0;  // (f^m)' at the outer edge

  double support_lo() const;
  double support_hi() const;
  double max_value() const;
};

enum class ShotTag { CrossesZero, StaysPositive, Inconclusive };

struct ShotOutcome {
  ShotTag tag = ShotTag::Inconclusive;
  double contact_xi = 0.0;     // valid for CrossesZero
  double contact_slope = 0.0;  // (f^m)' at the crossing
  double reached_xi = 0.0;     // last integrated radius otherwise
};

struct ShootingControls {
  double eps = 1e-6;      // series start radius
  double xi_max = 50.0;   // StaysPositive horizon
  double rtol = 1e-10;
  // Near-threshold shots dip to f^m ~ (a − a_*)^3; a tiny absolute floor keeps
  // that dip resolved so the shooting dichotomy stays meaningful.
  double atol = 1e-40;
  double h_max = 0.0;     // 0: unlimited
  double a_seed = 1.0;    // geometric bracket search starts here
  int max_doublings = 80;
  double tol = 1e-10;     // bisection bracket width on the shooting parameter
  int max_bisections = 200;
  std::size_t grid_points = 2001;
};

/// First-order form of the profile ODE in (f, g = (f^m)'). Returns (f', g').
/// Throws Error{Numerical, "singular_evaluation"} for ξ ≤ 0.
std::array<double, 2> profile_rhs(double xi, const std::array<double, 2>& fg, const ProblemParams& pr,
                                  const Exponents& ex);

/// Local expansion at the origin, returned as (f, (f^m)') at ξ = eps:
/// f^m ≈ a^m + αa/(2N)·ξ² − a^p/((N+σ)(σ+2))·ξ^{σ+2}.
std::array<double, 2> series_start(double a, double eps, const ProblemParams& pr, const Exponents& ex);

ShotOutcome shoot(double a, const ProblemParams& pr, const Exponents& ex, const ShootingControls& ctl);

/// f_* as the bisection threshold between StaysPositive and CrossesZero shots.
/// Throws Error{Numerical, "bracket_not_found"}.
Profile find_selfsimilar_profile(const ProblemParams& pr, const Exponents& ex, const ShootingControls& ctl = {});

/// Integrates from (f, (f^m)') = (0, s) at ξ = R1 for each candidate s and keeps the
/// first that returns to zero at some R2 with (f^m)'(R2) < 0.
/// Throws Error{Numerical, "no_return_to_zero"}.
Profile find_annular_subsolution(const ProblemParams& pr, const Exponents& ex, double R1,
                                 std::span<const double> slope_grid, const ShootingControls& ctl = {});

/// Piecewise-linear inside the support, exactly 0 outside.
double evaluate_profile(const Profile& profile, double xi);

/// Profile of the self-similar solution for weight c|x|^σ obtained from `profile`
/// through the rescaling λ_c^{1/(m−1)} v(x, λ_c t):
/// ξ ↦ λ_c^{1/(m−1)+α} f(λ_c^{−β} ξ).
Profile scale_profile(const Profile& profile, double c, const ProblemParams& pr, const Exponents& ex);

/// Sup of the profile ODE residual at interior grid nodes (central differences),
/// divided by the largest term magnitude; nodes within `margin`·(support width) of
/// either support edge are skipped.
double profile_residual(const Profile& profile, const ProblemParams& pr, const Exponents& ex,
                        double margin = 0.05);

}  // namespace growup
