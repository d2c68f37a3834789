#pragma once

#include "growup/params.hpp"
#include "growup/pdesim.hpp"
#include "growup/profile.hpp"
#include "growup/weights.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace growup {

/// t^{−α}·sup|u − V_*(·,t)| for a physical field, sup|v − f_A| for a self-similar one.
/// Throws Error{Domain, "frame_mismatch"} for a physical field at t ≤ 0.
double rescaled_error(const RadialField& field, const VStar& vstar, const Exponents& ex);

/// (y_i, v_i) = (r_i·t^{−β}, t^{−α}·u_i) of a physical field at time t > 0.
struct SelfSimilarSample {
  double t = 1.0;
  std::vector<double> y;
  std::vector<double> v;
};

SelfSimilarSample self_similar_snapshot(const RadialField& field, const Exponents& ex);

/// Inverse of self_similar_snapshot: (r_i, u_i).
struct PhysicalSample {
  double t = 1.0;
  std::vector<double> r;
  std::vector<double> u;
};

PhysicalSample physical_snapshot(const SelfSimilarSample& sample, const Exponents& ex);

struct FitReport {
  double exponent = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  double residual = 0.0;  // max |log value − fitted line|
  std::size_t count = 0;
};

/// Least-squares slope of log(value) against log(t) over t ∈ [t_lo, t_hi].
/// Throws Error{Numerical, "degenerate_window"} with fewer than 10 points or a
/// nonpositive value inside the window.
FitReport fit_powerlaw(std::span<const double> t, std::span<const double> value, double t_lo, double t_hi);

/// fit_powerlaw over the last decade [t_max/10, t_max].
FitReport fit_last_decade(std::span<const double> t, std::span<const double> value);

/// Data for the two rescaled-frame comparison bounds.
struct SandwichBounds {
  Profile upper_profile;  // centred profile of the supersolution
  double tau_inf = 0.0;
  Profile lower_profile;  // annular subsolution profile, already scaled to the lower weight
  SubsolutionSchedule schedule;
};

/// (1 + τ∞e^{−s})^α·F(|y|(1 + τ∞e^{−s})^{−β}) with F the upper profile.
double upper_bound(const SandwichBounds& b, double y, double s, const Exponents& ex);

/// Lower comparison function in self-similar variables for t = e^s ≥ t0:
/// q^α·g(|y|q^{−β}) with q = 1 − d·e^{−s}, d = t0 − 1/λ_*, g(ξ) = λ_*^{1/(m−1)+α}f(λ_*^{−β}ξ).
/// Returns 0 before t0.
double lower_bound(const SandwichBounds& b, double y, double s, const ProblemParams& pr, const Exponents& ex);

struct SandwichReport {
  std::size_t snapshots = 0;
  std::size_t lower_active = 0;  // snapshots at or after t0
  double worst_upper = 0.0;      // max (v − upper)_+
  double worst_lower = 0.0;      // max (lower − v)_+
  double s_worst_upper = 0.0;
  double s_worst_lower = 0.0;
  double min_lower_peak = 0.0;   // smallest sup of the lower function over active snapshots
};

/// Compares every stored snapshot of a self-similar run against both bounds.
SandwichReport sandwich_check(const Diagnostics& diag, const SandwichBounds& bounds,
                              const ProblemParams& pr, const Exponents& ex);

/// First snapshot time at which every cell of B(0, R2) carries u > rel·sup u, the minimum
/// h of u there, and the resulting λ_* (H is the annular peak).
/// Throws Error{Numerical, "positivity_not_reached"} if no snapshot qualifies.
SubsolutionSchedule detect_subsolution_schedule(const Diagnostics& physical, const Profile& annular, const ProblemParams& pr,
                                                double weight_factor = 1.0, double rel = 1e-10);

/// sup_{R ≥ 1} R^{−2/(m−1)}·(mean of u0 over B(0,R)) on a log grid of `points` radii.
double bracket_norm(const InitialData& init, const ProblemParams& pr, const Exponents& ex,
                    std::size_t points = 400);

}  // namespace growup
