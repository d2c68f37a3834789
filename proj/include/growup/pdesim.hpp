#pragma once

#include "growup/params.hpp"
#include "growup/profile.hpp"
#include "growup/weights.hpp"

#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <variant>
#include <vector>

namespace growup {

/// Cell-centred radial grid on [0, n·dr]; centres r_i = (i + 1/2)·dr.
struct RadialGrid {
  std::size_t n = 0;
  double dr = 0.0;
  int N = 1;

  static RadialGrid over(double length, std::size_t n, int N);
  double center(std::size_t i) const { return (static_cast<double>(i) + 0.5) * dr; }
  double face(std::size_t i) const { return static_cast<double>(i) * dr; }  // inner face of cell i
  double length() const { return static_cast<double>(n) * dr; }
};

enum class Frame { Physical, SelfSimilar };

const char* frame_name(Frame frame);

/// u(·,t) in the physical frame or v(·,s) in the self-similar frame.
struct RadialField {
  RadialGrid grid;
  std::vector<double> u;
  double time = 0.0;
  Frame frame = Frame::Physical;
};

/// height·exp(1 − 1/(1 − ((r − center)/width)²)) for |r − center| < width.
struct Bump {
  double center = 0.0;
  double width = 1.0;
  double height = 1.0;
};
struct Indicator {
  double R0 = 1.0;
  double height = 1.0;
};
/// t^α·f(r·t^{−β}) at t = t_init.
struct ProfileSnapshot {
  Profile profile;
  double t_init = 1.0;
};
/// Piecewise-linear (r, u) table, zero beyond the last node.
struct TabulatedData {
  std::vector<double> r;
  std::vector<double> u;
};

using InitialData = std::variant<Bump, Indicator, ProfileSnapshot, TabulatedData>;

double initial_value(const InitialData& init, double r, const Exponents& ex);
/// Outer radius R0 of the support.
double initial_support_radius(const InitialData& init, const Exponents& ex);
/// sup of the data (from the closed form or the table/profile nodes).
double initial_sup(const InitialData& init, const Exponents& ex);
/// Two-column CSV (r, u), same conventions as weight tables.
TabulatedData load_tabulated_data(const std::string& path);

RadialField sample_initial(const InitialData& init, const RadialGrid& grid, const Exponents& ex,
                           Frame frame = Frame::Physical, double time = 0.0);

struct SimControls {
  enum class Scheme { Explicit, Implicit };
  Scheme scheme = Scheme::Implicit;
  double safety = 0.4;             // explicit: fraction of the monotonicity bound
  double reaction_safety = 0.01;   // explicit: fraction of 1/(p·ϱ·u^{p−1})
  double u_floor = 1e-14;
  double dt_max = std::numeric_limits<double>::infinity();
  double dt_init = 0.0;            // implicit: 0 picks the explicit bound
  double change_target = 2e-3;     // implicit: max |Δu| per step relative to sup u
  int newton_max = 25;
  double newton_tol = 1e-11;       // relative to sup u
  double support_rel = 1e-10;      // support threshold relative to sup u
  double boundary_fraction = 0.9;  // GridTooSmall once the support passes this fraction
  std::size_t max_steps = 50'000'000;
  double wall_clock_cap = 0.0;     // seconds; 0 disables
};

/// Conservative radial Laplacian of u^m with zero flux through both end faces.
std::vector<double> laplacian_flux(const RadialField& field, const ProblemParams& pr);

/// Sum of u_i·r_i^{N−1}·dr.
double discrete_mass(const RadialField& field);
double sup_norm(const RadialField& field);
/// Centre of the outermost cell with u > rel·sup u; 0 for a vanishing field.
double support_radius(const RadialField& field, double rel = 1e-10);

/// Source coefficient at every cell for the field's frame and time.
std::vector<double> source_coefficients(const RadialField& field, const WeightModel& weight, const Exponents& ex);

/// Largest explicit step keeping the update monotone (times `safety`), capped by the
/// reaction scale and ctl.dt_max.
double cfl_dt(const RadialField& field, const WeightModel& weight, const ProblemParams& pr, const Exponents& ex,
              const SimControls& ctl = {});

/// Explicit Euler steps. Throw Error{Numerical, "cfl_violation"} if dt exceeds cfl_dt.
RadialField step_physical(const RadialField& field, const WeightModel& weight, double dt, const ProblemParams& pr,
                          const Exponents& ex, const SimControls& ctl = {});
RadialField step_rescaled(const RadialField& field, const WeightModel& weight, double ds, const ProblemParams& pr,
                          const Exponents& ex, const SimControls& ctl = {});

struct ImplicitStepInfo {
  bool converged = false;
  int iterations = 0;
};

/// Backward Euler step solved by Newton's method with a tridiagonal Jacobian;
/// iterates are projected onto u ≥ 0.
RadialField step_implicit(const RadialField& field, const WeightModel& weight, double dt, const ProblemParams& pr,
                          const Exponents& ex, const SimControls& ctl, ImplicitStepInfo* info = nullptr);

struct Snapshot {
  double time;
  std::vector<double> u;
  RadialGrid grid;
};

/// Probe time series of a run.
struct Diagnostics {
  Frame frame = Frame::Physical;
  std::vector<double> times;
  std::vector<double> sup_norm;
  std::vector<double> support_radius;
  std::vector<double> mass;
  std::vector<double> rescaled_error;  // filled when a reference is attached
  std::vector<Snapshot> snapshots;
  RadialField final_field;
  std::size_t steps = 0;
  std::size_t rejected = 0;
};

struct ProbeSpec {
  std::vector<double> times;           // strictly increasing, within the horizon
  std::vector<double> snapshot_times;  // subset of times at which the field is stored
};

/// `count` log-spaced probe times on [lo, hi] (lo > 0), or uniform when `log` is false.
std::vector<double> probe_grid(double lo, double hi, std::size_t count, bool log = true);

/// Steps `init` to `horizon` in its own frame. The optional reference is V_* (physical)
/// or f_A (self-similar) and feeds Diagnostics::rescaled_error.
/// Throws Error{Numerical, "grid_too_small"}, "newton_failure", "budget_exceeded".
Diagnostics simulate(const RadialField& init, const WeightModel& weight, double horizon, const ProbeSpec& probes,
                     const ProblemParams& pr, const Exponents& ex, const SimControls& ctl = {},
                     const VStar* reference = nullptr);

/// sup_i |∂_t c − Δc^m − ϱc^p| at time t with centred differences in time and the
/// solver's spatial stencil in space.
double residual_norm(const std::function<double(double, double)>& candidate, const WeightModel& weight,
                     const RadialGrid& grid, double t, const ProblemParams& pr, double dt_fd = 1e-6);

}  // namespace growup
