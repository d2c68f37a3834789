#include "growup/pdesim.hpp"

#include "growup/error.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

namespace growup {

namespace {

// Coefficients of the conservative stencil:
// Δ_h U_i = a_i (U_{i+1} − U_i) − b_i (U_i − U_{i−1}), zero flux at both ends.
struct Stencil {
  std::vector<double> a, b;
};

Stencil make_stencil(const RadialGrid& g) {
  Stencil s;
  s.a.assign(g.n, 0.0);
  s.b.assign(g.n, 0.0);
  const double k = g.N - 1.0;
  const double inv = 1.0 / (g.dr * g.dr);
  for (std::size_t i = 0; i < g.n; ++i) {
    const double r = g.center(i);
    if (i + 1 < g.n) s.a[i] = std::pow(g.face(i + 1) / r, k) * inv;
    if (i > 0) s.b[i] = std::pow(g.face(i) / r, k) * inv;
  }
  return s;
}

// Upwind drift β y ∂_y v with a forward difference; the last cell sees a
// zero-gradient ghost.
std::vector<double> drift_coefficients(const RadialField& f, const Exponents& ex) {
  std::vector<double> d(f.grid.n, 0.0);
  if (f.frame != Frame::SelfSimilar) return d;
  for (std::size_t i = 0; i + 1 < f.grid.n; ++i) d[i] = ex.beta * f.grid.center(i) / f.grid.dr;
  return d;
}

void require_frame(const RadialField& f, Frame want) {
  if (f.frame != want)
    fail(ErrorKind::Domain, "frame_mismatch", std::string("expected a field in the ") + frame_name(want) + " frame");
}

std::vector<double> explicit_rate(const RadialField& f, const WeightModel& weight, const ProblemParams& pr,
                                  const Exponents& ex) {
  const std::size_t n = f.grid.n;
  const auto diff = laplacian_flux(f, pr);
  const auto q = source_coefficients(f, weight, ex);
  const auto d = drift_coefficients(f, ex);
  const bool ss = f.frame == Frame::SelfSimilar;
  std::vector<double> rate(n);
  for (std::size_t i = 0; i < n; ++i) {
    double r = diff[i] + q[i] * std::pow(f.u[i], pr.p());
    if (ss) {
      const double next = i + 1 < n ? f.u[i + 1] : f.u[i];
      r += d[i] * (next - f.u[i]) - ex.alpha * f.u[i];
    }
    rate[i] = r;
  }
  return rate;
}

RadialField explicit_step(const RadialField& f, const WeightModel& weight, double dt, const ProblemParams& pr,
                          const Exponents& ex, const SimControls& ctl) {
  if (!(dt > 0.0)) fail(ErrorKind::Domain, "step_size", "time step must be positive");
  const double bound = cfl_dt(f, weight, pr, ex, ctl);
  if (dt > bound * (1.0 + 1e-12))
    fail(ErrorKind::Numerical, "cfl_violation", "explicit step exceeds the stability bound");
  const auto rate = explicit_rate(f, weight, pr, ex);
  RadialField out = f;
  for (std::size_t i = 0; i < f.grid.n; ++i) out.u[i] = std::max(0.0, f.u[i] + dt * rate[i]);
  out.time = f.time + dt;
  return out;
}

// Thomas algorithm; sub[0] and sup[n−1] are ignored. Overwrites rhs with the solution.
bool solve_tridiagonal(std::vector<double>& sub, std::vector<double>& diag, std::vector<double>& sup,
                       std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    if (diag[i - 1] == 0.0) return false;
    const double w = sub[i] / diag[i - 1];
    diag[i] -= w * sup[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  if (diag[n - 1] == 0.0) return false;
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / diag[i];
  return true;
}

double reference_error(const RadialField& f, const VStar& ref, const Exponents& ex) {
  double worst = 0.0;
  if (f.frame == Frame::SelfSimilar) {
    for (std::size_t i = 0; i < f.grid.n; ++i) worst = std::max(worst, std::abs(f.u[i] - ref.fA(f.grid.center(i))));
    return worst;
  }
  const double t = f.time;
  if (!(t > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < f.grid.n; ++i) worst = std::max(worst, std::abs(f.u[i] - ref(f.grid.center(i), t)));
  return std::pow(t, -ex.alpha) * worst;
}

}  // namespace

RadialGrid RadialGrid::over(double length, std::size_t n, int N) {
  if (!(length > 0.0) || n < 2 || N < 1)
    fail(ErrorKind::Domain, "grid", "grid needs positive length, at least two cells and N >= 1");
  RadialGrid g;
  g.n = n;
  g.dr = length / static_cast<double>(n);
  g.N = N;
  return g;
}

const char* frame_name(Frame f) { return f == Frame::Physical ? "physical" : "self-similar"; }

double initial_value(const InitialData& init, double r, const Exponents& ex) {
  if (const auto* b = std::get_if<Bump>(&init)) {
    const double z = (r - b->center) / b->width;
    if (std::abs(z) >= 1.0) return 0.0;
    return b->height * std::exp(1.0 - 1.0 / (1.0 - z * z));
  }
  if (const auto* ind = std::get_if<Indicator>(&init)) return r <= ind->R0 ? ind->height : 0.0;
  if (const auto* ps = std::get_if<ProfileSnapshot>(&init)) {
    const double t = ps->t_init;
    return std::pow(t, ex.alpha) * evaluate_profile(ps->profile, r * std::pow(t, -ex.beta));
  }
  const auto& tab = std::get<TabulatedData>(init);
  if (tab.r.empty() || r < tab.r.front() || r > tab.r.back()) return 0.0;
  auto it = std::upper_bound(tab.r.begin(), tab.r.end(), r);
  if (it == tab.r.end()) return tab.u.back();
  const std::size_t j = static_cast<std::size_t>(it - tab.r.begin());
  const double w = (r - tab.r[j - 1]) / (tab.r[j] - tab.r[j - 1]);
  return (1.0 - w) * tab.u[j - 1] + w * tab.u[j];
}

double initial_support_radius(const InitialData& init, const Exponents& ex) {
  if (const auto* b = std::get_if<Bump>(&init)) return b->center + b->width;
  if (const auto* ind = std::get_if<Indicator>(&init)) return ind->R0;
  if (const auto* ps = std::get_if<ProfileSnapshot>(&init))
    return ps->profile.support_hi() * std::pow(ps->t_init, ex.beta);
  const auto& tab = std::get<TabulatedData>(init);
  for (std::size_t i = tab.u.size(); i-- > 0;)
    if (tab.u[i] > 0.0) return i + 1 < tab.r.size() ? tab.r[i + 1] : tab.r[i];
  return 0.0;
}

double initial_sup(const InitialData& init, const Exponents& ex) {
  if (const auto* b = std::get_if<Bump>(&init)) return b->height;
  if (const auto* ind = std::get_if<Indicator>(&init)) return ind->height;
  if (const auto* ps = std::get_if<ProfileSnapshot>(&init))
    return std::pow(ps->t_init, ex.alpha) * ps->profile.max_value();
  const auto& tab = std::get<TabulatedData>(init);
  return tab.u.empty() ? 0.0 : *std::max_element(tab.u.begin(), tab.u.end());
}

TabulatedData load_tabulated_data(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "initial_table", "cannot open initial-data table " + path);
  TabulatedData t;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream is(line);
    double r, u;
    if (!(is >> r >> u)) {
      if (t.r.empty()) continue;
      fail(ErrorKind::Config, "initial_table", path + ":" + std::to_string(lineno) + ": expected two numbers");
    }
    if (u < 0.0) fail(ErrorKind::Config, "initial_table", "initial data must be nonnegative");
    if (!t.r.empty() && !(r > t.r.back()))
      fail(ErrorKind::Config, "initial_table", "initial-data radii must be strictly increasing");
    t.r.push_back(r);
    t.u.push_back(u);
  }
  if (t.r.size() < 2) fail(ErrorKind::Config, "initial_table", "initial-data table needs at least two rows");
  return t;
}

RadialField sample_initial(const InitialData& init, const RadialGrid& grid, const Exponents& ex, Frame frame,
                           double time) {
  RadialField f;
  f.grid = grid;
  f.frame = frame;
  f.time = time;
  f.u.resize(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) f.u[i] = std::max(0.0, initial_value(init, grid.center(i), ex));
  return f;
}

std::vector<double> laplacian_flux(const RadialField& f, const ProblemParams& pr) {
  const std::size_t n = f.grid.n;
  const Stencil st = make_stencil(f.grid);
  std::vector<double> U(n), out(n);
  for (std::size_t i = 0; i < n; ++i) U[i] = std::pow(f.u[i], pr.m());
  for (std::size_t i = 0; i < n; ++i) {
    double v = 0.0;
    if (i + 1 < n) v += st.a[i] * (U[i + 1] - U[i]);
    if (i > 0) v -= st.b[i] * (U[i] - U[i - 1]);
    out[i] = v;
  }
  return out;
}

double discrete_mass(const RadialField& f) {
  double m = 0.0;
  for (std::size_t i = 0; i < f.grid.n; ++i) m += f.u[i] * std::pow(f.grid.center(i), f.grid.N - 1.0);
  return m * f.grid.dr;
}

double sup_norm(const RadialField& f) {
  return f.u.empty() ? 0.0 : *std::max_element(f.u.begin(), f.u.end());
}

double support_radius(const RadialField& f, double rel) {
  const double thr = rel * sup_norm(f);
  for (std::size_t i = f.grid.n; i-- > 0;)
    if (f.u[i] > thr && f.u[i] > 0.0) return f.grid.center(i);
  return 0.0;
}

std::vector<double> source_coefficients(const RadialField& f, const WeightModel& weight, const Exponents& ex) {
  std::vector<double> q(f.grid.n);
  for (std::size_t i = 0; i < f.grid.n; ++i) {
    const double r = f.grid.center(i);
    q[i] = f.frame == Frame::Physical ? weight_eval(weight, r) : rescaled_weight(weight, r, f.time, ex);
  }
  return q;
}

double cfl_dt(const RadialField& f, const WeightModel& weight, const ProblemParams& pr, const Exponents& ex,
              const SimControls& ctl) {
  const Stencil st = make_stencil(f.grid);
  const auto q = source_coefficients(f, weight, ex);
  const auto d = drift_coefficients(f, ex);
  const bool ss = f.frame == Frame::SelfSimilar;
  const double m = pr.m(), p = pr.p();
  double dt = ctl.dt_max;
  for (std::size_t i = 0; i < f.grid.n; ++i) {
    const double u = f.u[i];
    double rate = (st.a[i] + st.b[i]) * m * std::pow(std::max(u, ctl.u_floor), m - 1.0);
    if (ss) rate += d[i] + ex.alpha;
    dt = std::min(dt, ctl.safety / rate);
    if (u > 0.0 && q[i] > 0.0) dt = std::min(dt, ctl.reaction_safety / (p * q[i] * std::pow(u, p - 1.0)));
  }
  return dt;
}

RadialField step_physical(const RadialField& f, const WeightModel& weight, double dt, const ProblemParams& pr,
                          const Exponents& ex, const SimControls& ctl) {
  require_frame(f, Frame::Physical);
  return explicit_step(f, weight, dt, pr, ex, ctl);
}

RadialField step_rescaled(const RadialField& f, const WeightModel& weight, double ds, const ProblemParams& pr,
                          const Exponents& ex, const SimControls& ctl) {
  require_frame(f, Frame::SelfSimilar);
  return explicit_step(f, weight, ds, pr, ex, ctl);
}

RadialField step_implicit(const RadialField& f, const WeightModel& weight, double dt, const ProblemParams& pr,
                          const Exponents& ex, const SimControls& ctl, ImplicitStepInfo* info) {
  if (!(dt > 0.0)) fail(ErrorKind::Domain, "step_size", "time step must be positive");
  const std::size_t n = f.grid.n;
  const double m = pr.m(), p = pr.p();
  const bool ss = f.frame == Frame::SelfSimilar;

  RadialField out = f;
  out.time = f.time + dt;
  const Stencil st = make_stencil(f.grid);
  const auto q = source_coefficients(out, weight, ex);  // source at the new time
  const auto d = drift_coefficients(f, ex);
  const double lin = ss ? ex.alpha : 0.0;

  std::vector<double>& u = out.u;
  std::vector<double> U(n), dU(n), sub(n), diag(n), sup(n), rhs(n);
  const double scale = std::max(sup_norm(f), 1e-300);
  ImplicitStepInfo local;
  for (int it = 1; it <= ctl.newton_max; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      U[i] = std::pow(u[i], m);
      dU[i] = m * std::pow(u[i], m - 1.0);
    }
    for (std::size_t i = 0; i < n; ++i) {
      double op = -lin * u[i] + q[i] * std::pow(u[i], p);
      double jd = -lin + p * q[i] * std::pow(u[i], p - 1.0);
      double ju = 0.0, jl = 0.0;
      if (i + 1 < n) {
        op += st.a[i] * (U[i + 1] - U[i]) + d[i] * (u[i + 1] - u[i]);
        jd -= st.a[i] * dU[i] + d[i];
        ju = st.a[i] * dU[i + 1] + d[i];
      }
      if (i > 0) {
        op -= st.b[i] * (U[i] - U[i - 1]);
        jd -= st.b[i] * dU[i];
        jl = st.b[i] * dU[i - 1];
      }
      rhs[i] = -(u[i] - f.u[i] - dt * op);
      diag[i] = 1.0 - dt * jd;
      sup[i] = -dt * ju;
      sub[i] = -dt * jl;
    }
    if (!solve_tridiagonal(sub, diag, sup, rhs)) break;
    double step = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(rhs[i])) finite = false;
      const double next = std::max(0.0, u[i] + rhs[i]);
      step = std::max(step, std::abs(next - u[i]));
      u[i] = next;
    }
    local.iterations = it;
    if (!finite) break;
    if (step <= ctl.newton_tol * scale) {
      local.converged = true;
      break;
    }
  }
  if (info) *info = local;
  return out;
}

std::vector<double> probe_grid(double lo, double hi, std::size_t count, bool log) {
  std::vector<double> t;
  if (count == 0) return t;
  if (count == 1) return {hi};
  if (log && !(lo > 0.0)) fail(ErrorKind::Domain, "probe_grid", "log-spaced probes need lo > 0");
  for (std::size_t i = 0; i < count; ++i) {
    const double w = static_cast<double>(i) / static_cast<double>(count - 1);
    t.push_back(log ? std::exp(std::log(lo) + w * (std::log(hi) - std::log(lo))) : lo + w * (hi - lo));
  }
  t.back() = hi;
  return t;
}

Diagnostics simulate(const RadialField& init, const WeightModel& weight, double horizon, const ProbeSpec& probes,
                     const ProblemParams& pr, const Exponents& ex, const SimControls& ctl, const VStar* reference) {
  if (!(horizon >= init.time)) fail(ErrorKind::Domain, "horizon", "horizon lies before the initial time");
  for (std::size_t i = 1; i < probes.times.size(); ++i)
    if (!(probes.times[i] > probes.times[i - 1]))
      fail(ErrorKind::Domain, "probes", "probe times must be strictly increasing");

  Diagnostics diag;
  diag.frame = init.frame;
  RadialField field = init;
  const auto t_start = std::chrono::steady_clock::now();
  const double limit_radius = ctl.boundary_fraction * field.grid.length();

  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); };
  std::size_t next_probe = 0;
  std::size_t next_snap = 0;
  auto record = [&]() {
    const double t = field.time;
    while (next_probe < probes.times.size() && (probes.times[next_probe] < t || close(t, probes.times[next_probe]))) {
      if (close(t, probes.times[next_probe])) {
        diag.times.push_back(t);
        diag.sup_norm.push_back(sup_norm(field));
        diag.support_radius.push_back(support_radius(field, ctl.support_rel));
        diag.mass.push_back(discrete_mass(field));
        if (reference) diag.rescaled_error.push_back(reference_error(field, *reference, ex));
      }
      ++next_probe;
    }
    while (next_snap < probes.snapshot_times.size() &&
           (probes.snapshot_times[next_snap] < t || close(t, probes.snapshot_times[next_snap]))) {
      if (close(t, probes.snapshot_times[next_snap])) diag.snapshots.push_back({t, field.u, field.grid});
      ++next_snap;
    }
  };
  auto check_grid = [&]() {
    if (support_radius(field, ctl.support_rel) > limit_radius)
      fail(ErrorKind::Numerical, "grid_too_small", "support reached the outer part of the computational domain");
  };

  record();
  check_grid();
  const bool implicit = ctl.scheme == SimControls::Scheme::Implicit;
  double dt_ctrl = implicit ? (ctl.dt_init > 0.0 ? ctl.dt_init : cfl_dt(field, weight, pr, ex, ctl)) : 0.0;
  dt_ctrl = std::min(dt_ctrl, ctl.dt_max);

  while (field.time < horizon && !close(field.time, horizon)) {
    if (diag.steps >= ctl.max_steps) fail(ErrorKind::Numerical, "budget_exceeded", "step budget exhausted");
    if (ctl.wall_clock_cap > 0.0) {
      const double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
      if (el > ctl.wall_clock_cap) fail(ErrorKind::Numerical, "budget_exceeded", "wall-clock cap exceeded");
    }
    double stop = horizon;
    if (next_probe < probes.times.size()) stop = std::min(stop, probes.times[next_probe]);
    if (next_snap < probes.snapshot_times.size()) stop = std::min(stop, probes.snapshot_times[next_snap]);
    const double remaining = stop - field.time;

    if (!implicit) {
      double dt = cfl_dt(field, weight, pr, ex, ctl);
      const bool clipped = dt >= remaining;
      if (clipped) dt = remaining;
      field = explicit_step(field, weight, dt, pr, ex, ctl);
      if (clipped) field.time = stop;
    } else {
      const bool clipped = dt_ctrl >= remaining;
      const double dt = clipped ? remaining : dt_ctrl;
      ImplicitStepInfo info;
      RadialField next = step_implicit(field, weight, dt, pr, ex, ctl, &info);
      double change = 0.0;
      for (std::size_t i = 0; i < field.grid.n; ++i) change = std::max(change, std::abs(next.u[i] - field.u[i]));
      change /= std::max(std::max(sup_norm(field), sup_norm(next)), 1e-300);
      if (!info.converged || change > 2.0 * ctl.change_target) {
        ++diag.rejected;
        dt_ctrl = 0.5 * dt;
        if (dt_ctrl < 1e-14 * std::max(1.0, std::abs(field.time)))
          fail(ErrorKind::Numerical, "newton_failure", "implicit step size collapsed");
        continue;
      }
      const double fac = change > 0.0 ? std::clamp(0.9 * ctl.change_target / change, 0.5, 2.0) : 2.0;
      if (!clipped || fac < 1.0) dt_ctrl = std::min(dt * fac, ctl.dt_max);
      field = std::move(next);
      if (clipped) field.time = stop;
    }
    ++diag.steps;
    record();
    check_grid();
  }
  diag.final_field = field;
  return diag;
}

double residual_norm(const std::function<double(double, double)>& candidate, const WeightModel& weight,
                     const RadialGrid& grid, double t, const ProblemParams& pr, double dt_fd) {
  RadialField f;
  f.grid = grid;
  f.time = t;
  f.u.resize(grid.n);
  for (std::size_t i = 0; i < grid.n; ++i) f.u[i] = candidate(grid.center(i), t);
  const auto diff = laplacian_flux(f, pr);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.n; ++i) {
    const double r = grid.center(i);
    const double ut = (candidate(r, t + dt_fd) - candidate(r, t - dt_fd)) / (2.0 * dt_fd);
    const double res = ut - diff[i] - weight_eval(weight, r) * std::pow(f.u[i], pr.p());
    worst = std::max(worst, std::abs(res));
  }
  return worst;
}

}  // namespace growup
