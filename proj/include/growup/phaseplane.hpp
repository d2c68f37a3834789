#pragma once

#include "growup/params.hpp"
#include "growup/profile.hpp"

#include <array>
#include <cstddef>
#include <vector>

namespace growup {

/// A point of the profile orbit in phase variables. X, Z, W ≥ 0 and W = X·Z.
struct PhasePoint {
  double eta = 0.0;
  double X = 0.0;
  double Y = 0.0;
  double Z = 0.0;
  double W = 0.0;
};

/// Phase variables of a profile state at ξ; `eta` is carried through unchanged.
/// Throws Error{Numerical, "singular_evaluation"} unless ξ > 0 and f > 0.
PhasePoint to_phase_coords(double xi, double f, double fprime, const ProblemParams& pr, const Exponents& ex,
                           double eta = 0.0);

/// dη/dξ = (α/m)·ξ·f^{1−m}.
double eta_rate(double xi, double f, const ProblemParams& pr, const Exponents& ex);

/// Orbit of a profile at its interior nodes (f > 0), with η accumulated by the
/// trapezoidal rule from the first such node.
std::vector<PhasePoint> profile_orbit(const Profile& profile, const ProblemParams& pr, const Exponents& ex);

/// (X, Y, Z) system.
std::array<double, 3> psyst_rhs(const std::array<double, 3>& xyz, const ProblemParams& pr, const Exponents& ex);
/// (X, Y, W) system with W = X·Z.
std::array<double, 3> psystbis_rhs(const std::array<double, 3>& xyw, const ProblemParams& pr,
                                   const Exponents& ex);
/// Invariant plane X = 0 in (Y, W).
std::array<double, 2> plane_rhs(const std::array<double, 2>& yw, const ProblemParams& pr, const Exponents& ex);

using Mat2 = std::array<std::array<double, 2>, 2>;

struct LinearizationReport {
  std::array<double, 2> point{};
  Mat2 matrix{};
  std::array<double, 2> eigenvalues{};   // unstable first
  std::array<std::array<double, 2>, 2> eigenvectors{};  // (1, ·) normalised, matching eigenvalues
};

LinearizationReport p1_linearization(const ProblemParams& pr, const Exponents& ex);

/// Central-difference Jacobian of plane_rhs.
Mat2 plane_jacobian_fd(const std::array<double, 2>& yw, const ProblemParams& pr, const Exponents& ex,
                       double h = 1e-6);

/// Stable manifold of P1 as the graph W = W1(Y) on [−β/α + eps, Y_max].
struct Separatrix {
  std::vector<double> Y;
  std::vector<double> W;
};

/// Throws Error{Numerical, "singular_denominator"} if the curve meets the isocline.
Separatrix compute_separatrix(const ProblemParams& pr, const Exponents& ex, double eps = 1e-6,
                              double Y_max = 1e3);

/// Linear interpolation of W1 on its sampled range; NaN outside it.
double separatrix_value(const Separatrix& sep, double Y);

enum class Fate { EntersQ3, ExitsQ2, HitsP1, ApproachesP0, Truncated };

const char* fate_name(Fate fate);

struct PlaneControls {
  double Y_far = 1e3;
  double W_tail = 1e-6;   // Q3/Q2 need W at most this fraction of its running peak
  double W_cap = 1e12;
  double eta_max = 5000.0;
  double point_radius = 1e-3;  // capture radius around P0 and P1
  bool backward = false;
  double rtol = 1e-9;
  double atol = 1e-14;
  std::size_t max_steps = 1'000'000;
};

struct PlaneTrajectory {
  std::vector<double> eta;
  std::vector<double> Y;
  std::vector<double> W;
  Fate fate = Fate::Truncated;
  bool backward = false;
  std::array<double, 2> start{};
};

/// Integrates the plane system from `start`, forward or (ctl.backward) backward in η.
/// Forward: EntersQ3 at Y ≤ −Y_far with W ≤ W_tail·peak. Backward: ExitsQ2 at
/// Y ≥ Y_far with W ≤ W_tail·peak. Either direction may end at P0 or P1.
PlaneTrajectory integrate_plane_trajectory(const std::array<double, 2>& start, const ProblemParams& pr,
                                           const Exponents& ex, const PlaneControls& ctl = {});

struct PortraitOptions {
  int fan_size = 14;          // seeds above the separatrix
  int below_size = 4;         // seeds between the separatrix and the Y axis
  bool axis_seeds = true;     // the two pieces of W = 0 around P1
  double seed_Y = 4.0;        // fan seeds sit on this vertical line
  double fan_min = 1.5;       // W/W1(seed_Y) range of the fan
  double fan_max = 2000.0;
  double separatrix_eps = 1e-6;
  double separatrix_Y_max = 1e3;
  PlaneControls controls{};
};

struct Portrait {
  std::array<double, 2> p1{};
  LinearizationReport linearization;
  Separatrix separatrix;
  std::vector<std::array<double, 2>> isocline;  // Y² + (β/α)Y + W = 0, W ≥ 0
  std::vector<PlaneTrajectory> trajectories;     // each joined backward + forward piece
  std::vector<Fate> forward_fate;
  std::vector<Fate> backward_fate;
};

Portrait render_phase_portrait(const ProblemParams& pr, const Exponents& ex, const PortraitOptions& opts = {});

}  // namespace growup
