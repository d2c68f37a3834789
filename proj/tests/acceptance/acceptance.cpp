// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include "growup/asymptotics.hpp"
#include "growup/config.hpp"
#include "growup/error.hpp"
#include "growup/params.hpp"
#include "growup/pdesim.hpp"
#include "growup/phaseplane.hpp"
#include "growup/pipelines.hpp"
#include "growup/profile.hpp"
#include "growup/weights.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace growup;

namespace {

const ProblemParams kFig = validate_regime(3, 2, 4, -1.5);
const Exponents kEx = derive_exponents(kFig);

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

const Profile& fstar() {
  static const Profile f = find_selfsimilar_profile(kFig, kEx);
  return f;
}

const Profile& annulus() {
  static const Profile a = find_annular_subsolution(kFig, kEx, 1e-3, config_slope_grid(ExperimentConfig{}));
  return a;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double w = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) w = std::max(w, std::abs(a[i] - b[i]));
  return w;
}

// 1. Exponent arithmetic.
Outcome exponents() {
  const bool exact = kEx.L == -1.0 && kEx.sigma_star == -1.0 && kEx.alpha == 0.5 && kEx.beta == 1.0;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::uniform_int_distribution<int> dim(1, 6);
  double worst = 0.0;
  for (int k = 0; k < 1000;) {
    const double m = 1.05 + 4.0 * U(rng);
    const double p = 1.0 + (m - 1.0) * (0.02 + 0.96 * U(rng));
    const int N = dim(rng);
    const double lo = std::max(-static_cast<double>(N), -2.0), hi = critical_sigma(m, p);
    if (!(hi > lo)) continue;
    const double sigma = lo + (hi - lo) * (0.01 + 0.98 * U(rng));
    const auto ex = derive_exponents(validate_regime(m, p, N, sigma));
    worst = std::max({worst, std::abs((ex.alpha - 1.0) - (m * ex.alpha - 2.0 * ex.beta)),
                      std::abs((ex.alpha - 1.0) - (p * ex.alpha + ex.beta * sigma))});
    ++k;
  }
  return {exact && worst <= 1e-12,
          format("L=%g sigma_*=%g alpha=%g beta=%g; identity defect %.2e over 1000 tuples", kEx.L, kEx.sigma_star,
                 kEx.alpha, kEx.beta, worst)};
}

// 2. Saddle structure.
Outcome saddle() {
  const auto lin = p1_linearization(kFig, kEx);
  const auto fd = plane_jacobian_fd(lin.point, kFig, kEx);
  double jd = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) jd = std::max(jd, std::abs(fd[i][j] - lin.matrix[i][j]));
  const double slope = lin.eigenvectors[1][1] / lin.eigenvectors[1][0];
  const bool ok = std::abs(lin.eigenvalues[0] - 2.0) < 1e-12 && std::abs(lin.eigenvalues[1] + 6.0) < 1e-12 &&
                  std::abs(slope - 8.0) < 1e-12 && jd < 1e-8;
  return {ok, format("eigenvalues {%g, %g}, stable direction (1, %g), |J - J_fd| = %.2e", lin.eigenvalues[0],
                     lin.eigenvalues[1], slope, jd)};
}

// 3. Figure-1 phase portrait.
Outcome portrait() {
  const auto P = render_phase_portrait(kFig, kEx);
  const auto& sep = P.separatrix;
  const double tangent = (sep.W[1] - sep.W[0]) / (sep.Y[1] - sep.Y[0]);
  bool decreasing = true;
  for (std::size_t i = 1; i < sep.Y.size(); ++i)
    if (sep.Y[i] > 0.0 && sep.Y[i - 1] > 0.0 && sep.W[i] >= sep.W[i - 1]) decreasing = false;
  const int fan = P.trajectories.empty() ? 0 : PortraitOptions{}.fan_size;
  int q3 = 0;
  for (int i = 0; i < fan && i < static_cast<int>(P.forward_fate.size()); ++i)
    if (P.forward_fate[i] == Fate::EntersQ3) ++q3;
  const bool at = std::abs(P.p1[0] + 2.0) < 1e-12 && std::abs(P.p1[1]) < 1e-12;
  const bool ok = at && std::abs(tangent - 8.0) < 1e-3 && decreasing && q3 >= 10;
  return {ok, format("saddle (%g, %g), separatrix slope %.5f at the saddle, decreasing for Y>0: %s, "
                     "%d of %d fan trajectories enter Q3",
                     P.p1[0], P.p1[1], tangent, decreasing ? "yes" : "no", q3, fan)};
}

// 4. Profile solver.
Outcome profile_solver() {
  const auto& f = fstar();
  bool monotone = true;
  for (std::size_t i = 1; i < f.f.size(); ++i)
    if (f.f[i] > f.f[i - 1]) monotone = false;
  ShootingControls fine;
  fine.h_max = f.support_hi() / 400.0;
  const auto a = find_selfsimilar_profile(kFig, kEx, fine);
  fine.h_max *= 0.5;
  fine.eps *= 0.5;
  const auto b = find_selfsimilar_profile(kFig, kEx, fine);
  const double dxi = std::abs(b.support_hi() - a.support_hi()) / a.support_hi();
  const double df0 = std::abs(b.f.front() - a.f.front()) / a.f.front();
  const double res = profile_residual(f, kFig, kEx);
  const bool ok = f.bracket_width < 1e-8 && monotone && dxi < 0.01 && df0 < 0.01 && res < 1e-4;
  return {ok, format("f_*(0)=%.10g xi0=%.10g bracket %.1e, non-increasing: %s, step halving changes "
                     "xi0 by %.1e and f(0) by %.1e, residual %.1e",
                     f.f.front(), f.support_hi(), f.bracket_width, monotone ? "yes" : "no", dxi, df0, res)};
}

// 5. Stationarity of f_* under the limit rescaled equation.
double stationarity_error(std::size_t n) {
  const auto& f = fstar();
  const auto grid = RadialGrid::over(1.8 * f.support_hi(), n, kFig.N());
  const auto v = sample_initial(ProfileSnapshot{f, 1.0}, grid, kEx, Frame::SelfSimilar, 0.0);
  const VStar ref(f, 1.0, kFig, kEx);
  ProbeSpec ps;
  ps.times = probe_grid(0.0, 2.0, 21, false);
  const auto d = simulate(v, SingularPower{1.0, kFig.sigma()}, 2.0, ps, kFig, kEx, SimControls{}, &ref);
  return *std::max_element(d.rescaled_error.begin(), d.rescaled_error.end()) / f.f.front();
}

Outcome stationarity() {
  const double coarse = stationarity_error(2000);
  const double fine = stationarity_error(4000);
  return {fine <= 0.02 && fine < coarse,
          format("max_s sup|v - f_*|/f_*(0) = %.4f at n=4000, %.4f at n=2000", fine, coarse)};
}

// 6 and 7 share the theorem runs.
struct TheoremCase {
  std::string name;
  WeightModel weight;
  TheoremRun fine;
  TheoremRun coarse;
};

TheoremRun theorem_run(const WeightModel& w, std::size_t n, double horizon) {
  TheoremSetup s;
  s.weight = w;
  s.n = n;
  s.horizon = horizon;
  return run_theorem(s, fstar(), annulus(), kFig, kEx);
}

std::vector<TheoremCase>& theorem_cases() {
  static std::vector<TheoremCase> cases = [] {
    std::vector<TheoremCase> c;
    c.push_back({"regular", RegularPower{kFig.sigma()}, {}, {}});
    c.push_back({"perturbed", PerturbedRegular{kFig.sigma(), 1.0, 0.5}, {}, {}});
    for (auto& k : c) {
      k.fine = theorem_run(k.weight, 2000, 6.0);
      k.coarse = theorem_run(k.weight, 1000, 6.0);
    }
    return c;
  }();
  return cases;
}

Outcome theorem_convergence() {
  bool ok = true;
  std::string detail;
  for (const auto& c : theorem_cases()) {
    const auto& R = c.fine;
    const double e2 = R.error_at(2.0) / R.fA0, e4 = R.error_at(4.0) / R.fA0, e6 = R.error_at(6.0) / R.fA0;
    const bool pass = e6 < e4 && e4 < e2 && e6 <= 0.05 && std::abs(R.alpha_fit.exponent - kEx.alpha) < 0.05 &&
                      std::abs(R.beta_fit.exponent - kEx.beta) < 0.05;
    ok = ok && pass;
    detail += format("%s%s: e(2,4,6)/f(0) = %.3f, %.3f, %.3f; alpha_fit %.3f, beta_fit %.3f", detail.empty() ? "" : "; ",
                     c.name.c_str(), e2, e4, e6, R.alpha_fit.exponent, R.beta_fit.exponent);
  }
  return {ok, detail};
}

Outcome sandwich() {
  bool ok = true;
  std::string detail;
  for (const auto& c : theorem_cases()) {
    const auto& R = c.fine;
    const double disc = self_convergence_error(R.rescaled, c.coarse.rescaled);
    const bool pass = R.sandwich.worst_upper <= 2.0 * disc && R.sandwich.worst_lower <= 2.0 * disc &&
                      R.support_excess <= 0.0;
    ok = ok && pass;
    detail += format("%s%s: upper %.2e, lower %.2e, discretization %.2e, support excess %.2e (lambda_* %.2e, t0 %g)",
                     detail.empty() ? "" : "; ", c.name.c_str(), R.sandwich.worst_upper, R.sandwich.worst_lower, disc,
                     R.support_excess, R.schedule.lambda_star, R.schedule.t0);
  }
  return {ok, detail};
}

// 8a. Barenblatt tracking.
Outcome barenblatt() {
  const double m = kFig.m();
  const int N = kFig.N();
  const double a = N / (N * (m - 1.0) + 2.0), b = a / N, kappa = b * (m - 1.0) / (2.0 * m);
  auto B = [&](double r, double t) {
    const double q = 1.0 - kappa * r * r * std::pow(t, -2.0 * b);
    return q > 0.0 ? std::pow(t, -a) * std::pow(q, 1.0 / (m - 1.0)) : 0.0;
  };
  const auto grid = RadialGrid::over(1.5 * std::sqrt(1.0 / kappa) * std::pow(10.0, b), 4000, N);
  RadialField f;
  f.grid = grid;
  f.time = 1.0;
  for (std::size_t i = 0; i < grid.n; ++i) f.u.push_back(B(grid.center(i), 1.0));
  ProbeSpec ps;
  ps.times = probe_grid(1.0, 10.0, 11);
  ps.snapshot_times = ps.times;
  const auto d = simulate(f, ScaledRegular{0.0, kFig.sigma()}, 10.0, ps, kFig, kEx);
  double worst = 0.0;
  for (const auto& s : d.snapshots) {
    double e = 0.0, top = 0.0;
    for (std::size_t i = 0; i < grid.n; ++i) {
      const double ex = B(grid.center(i), s.time);
      e = std::max(e, std::abs(s.u[i] - ex));
      top = std::max(top, ex);
    }
    worst = std::max(worst, e / top);
  }
  return {worst < 0.02, format("relative sup error %.4f over t in [1, 10] at n=4000", worst)};
}

// 8b. Homogeneous reaction ODE.
Outcome reaction_ode() {
  const double u0 = 0.5, p = kFig.p();
  const double T = std::pow(u0, 1.0 - p) / (p - 1.0);
  const auto grid = RadialGrid::over(1.0, 50, kFig.N());
  RadialField f;
  f.grid = grid;
  f.u.assign(grid.n, u0);
  SimControls ctl;
  ctl.scheme = SimControls::Scheme::Explicit;
  ctl.boundary_fraction = 2.0;
  ProbeSpec ps;
  ps.times = probe_grid(0.0, 0.9 * T, 50, false);
  const auto d = simulate(f, RegularPower{0.0}, 0.9 * T, ps, kFig, kEx, ctl);
  double worst = 0.0, spread = 0.0;
  for (std::size_t k = 0; k < d.times.size(); ++k) {
    const double exact = std::pow(std::pow(u0, 1.0 - p) - (p - 1.0) * d.times[k], 1.0 / (1.0 - p));
    worst = std::max(worst, std::abs(d.sup_norm[k] - exact) / exact);
  }
  const auto [lo, hi] = std::minmax_element(d.final_field.u.begin(), d.final_field.u.end());
  spread = *hi - *lo;
  return {worst < 1e-3 && spread == 0.0,
          format("relative error %.2e up to 0.9 T (explicit, %zu steps), spatial spread %.1e", worst, d.steps, spread)};
}

// 8c. Discrete comparison principle.
Outcome comparison() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const auto grid = RadialGrid::over(3.0, 200, kFig.N());
  const WeightModel w = RegularPower{kFig.sigma()};
  int violations = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    RadialField lo, hi;
    lo.grid = hi.grid = grid;
    const double c = 0.5 + U(rng), width = 0.5 + 1.5 * U(rng);
    for (std::size_t i = 0; i < grid.n; ++i) {
      const double r = grid.center(i);
      const double base = r < width ? c * (1.0 - r / width) * (0.5 + 0.5 * U(rng)) : 0.0;
      lo.u.push_back(base);
      hi.u.push_back(base + (U(rng) < 0.5 ? 0.0 : 0.3 * U(rng)));
    }
    const bool implicit = trial % 2 == 0;
    const double dt = std::min(cfl_dt(lo, w, kFig, kEx), cfl_dt(hi, w, kFig, kEx)) * (implicit ? 20.0 : 1.0);
    for (int step = 0; step < 20; ++step) {
      if (implicit) {
        lo = step_implicit(lo, w, dt, kFig, kEx, SimControls{});
        hi = step_implicit(hi, w, dt, kFig, kEx, SimControls{});
      } else {
        const double h = std::min(cfl_dt(lo, w, kFig, kEx), cfl_dt(hi, w, kFig, kEx));
        lo = step_physical(lo, w, h, kFig, kEx);
        hi = step_physical(hi, w, h, kFig, kEx);
      }
    }
    const double tol = 1e-10 * sup_norm(hi);
    for (std::size_t i = 0; i < grid.n; ++i) {
      worst = std::max(worst, lo.u[i] - hi.u[i]);
      if (lo.u[i] > hi.u[i] + tol) ++violations;
    }
  }
  return {violations == 0, format("%d violations over 100 ordered pairs (20 steps each, explicit and implicit); "
                                  "largest lo - hi = %.1e",
                                  violations, worst)};
}

// 8d. Scaling equivariance of the singular-weight problem.
Diagnostics scaled_run(double c, double factor, double lambda_time, std::size_t n, double T) {
  const auto grid = RadialGrid::over(3.0, n, kFig.N());
  RadialField f = sample_initial(Bump{0.0, 1.0, factor}, grid, kEx);
  ProbeSpec ps;
  for (int k = 1; k <= 5; ++k) ps.times.push_back(lambda_time * T * k / 5.0);
  ps.snapshot_times = ps.times;
  return simulate(f, SingularPower{c, kFig.sigma()}, lambda_time * T, ps, kFig, kEx);
}

Outcome scaling_equivariance() {
  bool ok = true;
  std::string detail;
  const double T = 0.2, m = kFig.m();
  for (double c : {0.25, 4.0}) {
    const double lam = scaling_factor(c, kFig);
    const auto direct = scaled_run(c, 1.0, 1.0, 1000, T);
    const auto half = scaled_run(c, 1.0, 1.0, 500, T);
    const auto unit = scaled_run(1.0, std::pow(lam, -1.0 / (m - 1.0)), lam, 1000, T);
    double equiv = 0.0;
    for (std::size_t k = 0; k < direct.snapshots.size(); ++k) {
      std::vector<double> w = unit.snapshots[k].u;
      for (auto& x : w) x *= std::pow(lam, 1.0 / (m - 1.0));
      equiv = std::max(equiv, max_abs_diff(direct.snapshots[k].u, w));
    }
    const double disc = self_convergence_error(direct, half);
    ok = ok && equiv <= 3.0 * disc;
    detail += format("%sc=%g: equivariance %.2e, discretization %.2e", detail.empty() ? "" : "; ", c, equiv, disc);
  }
  return {ok, detail};
}

// 9. Annular subsolution and lambda_*.
Outcome annular() {
  const auto& a = annulus();
  const double R1 = a.support_lo(), R2 = a.support_hi();
  bool positive = true;
  for (std::size_t i = 1; i + 1 < a.f.size(); ++i)
    if (!(a.f[i] > 0.0)) positive = false;
  const bool signs = a.fm_prime.front() > 0.0 && a.fm_prime.back() < 0.0 && a.f.front() == 0.0 && positive;
  const double lam = choose_lambda_star(1.0, 2.0, 1.0, kFig).lambda_star;
  const bool ok = 0.0 < R1 && R1 < R2 && signs && std::abs(lam - 0.125) < 1e-15;
  return {ok, format("R1=%g R2=%.6g, (f^m)' = %.3e at R1 and %.3e at R2, positive inside: %s; lambda_* = %g", R1, R2,
                     a.fm_prime.front(), a.fm_prime.back(), positive ? "yes" : "no", lam)};
}

void extended_horizon() {
  for (const auto& [name, w] : {std::pair<const char*, WeightModel>{"regular", RegularPower{kFig.sigma()}},
                                std::pair<const char*, WeightModel>{"perturbed", PerturbedRegular{kFig.sigma(), 1.0, 0.5}}}) {
    const auto R = theorem_run(w, 2000, 14.0);
    std::printf("INFO extended horizon (%s, s=14, n=2000): e(6,10,14)/f(0) = %.4f, %.4f, %.4f; alpha_fit %.3f, "
                "beta_fit %.3f; sandwich upper %.2e; support excess %.2f cells; %.1f s\n",
                name, R.error_at(6.0) / R.fA0, R.error_at(10.0) / R.fA0, R.error_at(14.0) / R.fA0,
                R.alpha_fit.exponent, R.beta_fit.exponent, R.sandwich.worst_upper, R.support_cells, R.seconds);
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 exponent arithmetic", exponents},
      {"2 saddle structure", saddle},
      {"3 phase portrait", portrait},
      {"4 profile solver", profile_solver},
      {"5 stationarity of the limit profile", stationarity},
      {"6 convergence to the limit profile", theorem_convergence},
      {"7 sandwich and finite speed", sandwich},
      {"8a Barenblatt tracking", barenblatt},
      {"8b reaction ODE tracking", reaction_ode},
      {"8c discrete comparison", comparison},
      {"8d scaling equivariance", scaling_equivariance},
      {"9 annular subsolution", annular},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const Error& e) {
      o = {false, std::string("error [") + e.tag() + "]: " + e.what()};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failed;
    std::printf("%s criterion %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), sec);
    std::fflush(stdout);
  }
  extended_horizon();
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
