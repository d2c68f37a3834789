#include "growup/profile.hpp"

#include "growup/error.hpp"
#include "growup/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

namespace growup {

namespace {

using State = ode::Vec<2>;

// Integration runs in (F, g) = (f^m, (f^m)') so that F crosses zero linearly at
// a free boundary even though f itself has an infinite slope there.
struct FluxRhs {
  const ProblemParams& pr;
  const Exponents& ex;
  State operator()(double xi, const State& y) const {
    const double f = y[0] > 0.0 ? std::pow(y[0], 1.0 / pr.m()) : 0.0;
    const auto d = profile_rhs(xi, {f, y[1]}, pr, ex);
    return {y[1], d[1]};
  }
};

ode::Controls make_controls(const ShootingControls& c) {
  ode::Controls oc;
  oc.rtol = c.rtol;
  oc.atol = c.atol;
  if (c.h_max > 0.0) oc.h_max = c.h_max;
  return oc;
}

// Remaining distance to the zero of F under linear extrapolation below which
// the shot is classified without further integration.
constexpr double kCrossingTol = 1e-10;

struct Leg {
  ShotOutcome outcome;
  State y_end{};
  double h_last = 0.0;
};

// Integrates (F, g) from xi_start to xi_end, stopping at the first zero of F.
// With stop_at_turnaround, a local minimum of F (g turning from negative to
// non-negative while F > 0) ends the leg as StaysPositive: past it the profile
// follows the growing ξ^{α/β} tail, and the stiff tiny-F stretch after a
// near-threshold dip would otherwise stall an explicit integrator.
Leg run_leg(double xi_start, const State& y0, double xi_end, const ProblemParams& pr, const Exponents& ex,
            const ode::Controls& oc, bool stop_at_turnaround) {
  FluxRhs rhs{pr, ex};
  double cross_xi = 0.0;
  double cross_g = 0.0;
  bool descending = y0[1] < 0.0;
  bool turned = false;
  auto event = [](double, const State& y) { return y[0]; };
  // Close to F = 0 the dominant balance is dg/dF = −βξ/(m F^{(m−1)/m}), so
  // J = g + βξ F^{1/m} is nearly conserved and its sign decides between
  // reaching the front (J < 0, with slope J there) and turning around.
  auto observer = [&](double xi, const State& y) {
    if (y[0] > 0.0 && y[1] < 0.0 && y[0] < kCrossingTol * (1.0 + xi) * (-y[1])) {
      const double J = y[1] + ex.beta * xi * std::pow(y[0], 1.0 / pr.m());
      if (J < 0.0) {
        cross_xi = xi + y[0] / (-y[1]);
        cross_g = J;
      } else {
        turned = true;
      }
      return false;
    }
    if (y[1] < 0.0) {
      descending = true;
    } else if (descending && stop_at_turnaround && y[0] > 0.0) {
      turned = true;
      return false;
    }
    return true;
  };
  const auto r = ode::integrate<2>(rhs, xi_start, y0, xi_end, oc, event, observer);
  Leg leg;
  leg.y_end = r.y;
  leg.h_last = r.h_last;
  switch (r.stop) {
    case ode::Stop::Event:
      leg.outcome.tag = ShotTag::CrossesZero;
      leg.outcome.contact_xi = r.t;
      leg.outcome.contact_slope = std::min(r.y[1], 0.0);
      break;
    case ode::Stop::Observer:
      if (turned) {
        // Without stop_at_turnaround the caller wants the trajectory itself,
        // which this leg cannot continue.
        leg.outcome.tag = stop_at_turnaround ? ShotTag::StaysPositive : ShotTag::Inconclusive;
        break;
      }
      leg.outcome.tag = ShotTag::CrossesZero;
      leg.outcome.contact_xi = cross_xi;
      leg.outcome.contact_slope = cross_g;
      break;
    case ode::Stop::Reached:
      leg.outcome.tag = ShotTag::StaysPositive;
      break;
    default:
      leg.outcome.tag = ShotTag::Inconclusive;
      break;
  }
  leg.outcome.reached_xi = r.t;
  return leg;
}

State flux_series(double a, double eps, const ProblemParams& pr, const Exponents& ex) {
  const double m = pr.m(), p = pr.p(), N = pr.dim(), s = pr.sigma();
  const double c2 = ex.alpha * a / (2.0 * N);
  const double cs = std::pow(a, p) / ((N + s) * (s + 2.0));
  const double F = std::pow(a, m) + c2 * eps * eps - cs * std::pow(eps, s + 2.0);
  const double g = 2.0 * c2 * eps - cs * (s + 2.0) * std::pow(eps, s + 1.0);
  return {F, g};
}

// Boundary-layer start at an inner edge where F = 0 and g = s > 0. Along the
// layer J = g + βξF^{1/m} stays ≈ s, so F' = s − βR1(F)^{1/m} with F ≈ sδ at
// leading order. δ keeps the correction to g below 1e-3·s when R1 allows it.
std::pair<double, State> edge_start(double R1, double s, const ProblemParams& pr, const Exponents& ex,
                                    double eps) {
  const double m = pr.m();
  const double k = ex.beta * R1;
  double delta = std::min(eps * R1, std::pow(1e-3 / k, m) * std::pow(s, m - 1.0));
  delta = std::max(delta, 1e-12 * R1);
  const double F = s * delta - k * std::pow(s, 1.0 / m) * std::pow(delta, 1.0 + 1.0 / m) / (1.0 + 1.0 / m);
  const double g = s - k * std::pow(s * delta, 1.0 / m);
  return {R1 + delta, {std::max(F, 0.0), g}};
}

// Samples a trajectory on a uniform grid of [lo, hi]; y0 is the state at xi0 ∈ [lo, grid[1]).
void sample(Profile& out, double lo, double hi, double xi0, const State& y0, const ProblemParams& pr,
            const Exponents& ex, const ShootingControls& ctl) {
  const std::size_t n = std::max<std::size_t>(ctl.grid_points, 3);
  out.xi.resize(n);
  out.f.assign(n, 0.0);
  out.fm_prime.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    out.xi[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  out.xi.back() = hi;

  ode::Controls oc = make_controls(ctl);
  double xi = xi0;
  State y = y0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const Leg leg = run_leg(xi, y, out.xi[i], pr, ex, oc, false);
    if (leg.outcome.tag != ShotTag::StaysPositive) break;  // crossed a hair early: rest stays 0
    xi = out.xi[i];
    y = leg.y_end;
    oc.h_init = leg.h_last;
    out.f[i] = std::pow(std::max(y[0], 0.0), 1.0 / pr.m());
    out.fm_prime[i] = y[1];
  }
}

}  // namespace

double Profile::support_lo() const {
  if (const auto* a = std::get_if<AnnularSupport>(&support)) return a->R1;
  return 0.0;
}

double Profile::support_hi() const {
  if (const auto* a = std::get_if<AnnularSupport>(&support)) return a->R2;
  return std::get<CenteredSupport>(support).xi0;
}

double Profile::max_value() const { return f.empty() ? 0.0 : *std::max_element(f.begin(), f.end()); }

std::array<double, 2> profile_rhs(double xi, const std::array<double, 2>& fg, const ProblemParams& pr,
                                  const Exponents& ex) {
  if (!(xi > 0.0)) fail(ErrorKind::Numerical, "singular_evaluation", "profile_rhs evaluated at xi <= 0");
  const double f = fg[0];
  const double g = fg[1];
  const double m = pr.m();
  const double df = f > 0.0 ? g / (m * std::pow(f, m - 1.0)) : 0.0;
  const double src = f > 0.0 ? std::pow(xi, pr.sigma()) * std::pow(f, pr.p()) : 0.0;
  const double dg = -(pr.dim() - 1.0) / xi * g + ex.alpha * f - ex.beta * xi * df - src;
  return {df, dg};
}

std::array<double, 2> series_start(double a, double eps, const ProblemParams& pr, const Exponents& ex) {
  const State s = flux_series(a, eps, pr, ex);
  return {std::pow(std::max(s[0], 0.0), 1.0 / pr.m()), s[1]};
}

ShotOutcome shoot(double a, const ProblemParams& pr, const Exponents& ex, const ShootingControls& ctl) {
  if (!(a > 0.0)) fail(ErrorKind::Domain, "shoot", "shooting parameter must be positive");
  const State y0 = flux_series(a, ctl.eps, pr, ex);
  if (y0[0] <= 0.0) {
    // The source term already drove f^m to zero inside the series region;
    // locate the root of the expansion.
    double lo = 0.0, hi = ctl.eps;
    for (int i = 0; i < 200 && hi - lo > 1e-16 * ctl.eps; ++i) {
      const double mid = 0.5 * (lo + hi);
      (flux_series(a, mid, pr, ex)[0] > 0.0 ? lo : hi) = mid;
    }
    ShotOutcome o;
    o.tag = ShotTag::CrossesZero;
    o.contact_xi = hi;
    o.contact_slope = flux_series(a, hi, pr, ex)[1];
    o.reached_xi = hi;
    return o;
  }
  return run_leg(ctl.eps, y0, ctl.xi_max, pr, ex, make_controls(ctl), true).outcome;
}

Profile find_selfsimilar_profile(const ProblemParams& pr, const Exponents& ex, const ShootingControls& ctl) {
  auto classify = [&](double a) {
    const ShotOutcome o = shoot(a, pr, ex, ctl);
    if (o.tag == ShotTag::Inconclusive) {
      std::ostringstream os;
      os << "inconclusive shot at a = " << a << " (reached xi = " << o.reached_xi << ")";
      fail(ErrorKind::Numerical, "inconclusive_shot", os.str());
    }
    return o;
  };

  double lo = 0.0, hi = 0.0;
  ShotOutcome lo_out;
  {
    double a = ctl.a_seed;
    ShotOutcome o = classify(a);
    const bool crosses = o.tag == ShotTag::CrossesZero;
    int k = 0;
    for (; k < ctl.max_doublings; ++k) {
      const double next = crosses ? 2.0 * a : 0.5 * a;
      const ShotOutcome on = classify(next);
      if ((on.tag == ShotTag::CrossesZero) != crosses) {
        if (crosses) {
          lo = a, lo_out = o, hi = next;
        } else {
          lo = next, lo_out = on, hi = a;
        }
        break;
      }
      a = next;
      o = on;
    }
    if (k == ctl.max_doublings)
      fail(ErrorKind::Numerical, "bracket_not_found", "no StaysPositive/CrossesZero sign change in a-range");
  }

  int iterations = 0;
  while (hi - lo > ctl.tol && iterations < ctl.max_bisections) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const ShotOutcome o = classify(mid);
    if (o.tag == ShotTag::CrossesZero) {
      lo = mid;
      lo_out = o;
    } else {
      hi = mid;
    }
    ++iterations;
  }

  Profile prof;
  prof.kind = ProfileKind::SelfSimilarSolution;
  prof.shooting_parameter = lo;
  prof.bracket_width = hi - lo;
  prof.bisection_iterations = iterations;
  prof.contact_slope = lo_out.contact_slope;
  const double xi0 = lo_out.contact_xi;
  prof.support = CenteredSupport{xi0};

  const std::size_t n = std::max<std::size_t>(ctl.grid_points, 3);
  const double first_node = xi0 / static_cast<double>(n - 1);
  if (ctl.eps >= first_node)
    fail(ErrorKind::Numerical, "grid_too_coarse", "series start radius exceeds the first profile grid node");
  sample(prof, 0.0, xi0, ctl.eps, flux_series(lo, ctl.eps, pr, ex), pr, ex, ctl);
  prof.f.front() = lo;
  prof.fm_prime.front() = 0.0;
  prof.f.back() = 0.0;
  prof.fm_prime.back() = lo_out.contact_slope;

  for (std::size_t i = 1; i < prof.f.size(); ++i) {
    if (prof.f[i] > prof.f[i - 1] * (1.0 + 1e-12))
      fail(ErrorKind::Numerical, "not_monotone", "self-similar profile is not non-increasing on its support");
  }
  return prof;
}

Profile find_annular_subsolution(const ProblemParams& pr, const Exponents& ex, double R1,
                                 std::span<const double> slope_grid, const ShootingControls& ctl) {
  if (!(R1 > 0.0)) fail(ErrorKind::Domain, "annular_R1", "inner radius R1 must be positive");
  ode::Controls oc = make_controls(ctl);
  oc.h_init = 1e-9 * R1;
  for (double s : slope_grid) {
    if (!(s > 0.0)) continue;
    const auto [xi_s, y_s] = edge_start(R1, s, pr, ex, ctl.eps);
    if (!(y_s[0] > 0.0) || !(y_s[1] > 0.0)) continue;
    const Leg leg = run_leg(xi_s, y_s, ctl.xi_max, pr, ex, oc, true);
    if (leg.outcome.tag != ShotTag::CrossesZero || !(leg.outcome.contact_slope < 0.0)) continue;
    const double R2 = leg.outcome.contact_xi;
    if (!(R2 > R1)) continue;

    Profile prof;
    prof.kind = ProfileKind::AnnularSubsolution;
    prof.support = AnnularSupport{R1, R2};
    prof.shooting_parameter = s;
    prof.contact_slope = leg.outcome.contact_slope;
    sample(prof, R1, R2, xi_s, y_s, pr, ex, ctl);
    prof.f.front() = 0.0;
    prof.fm_prime.front() = s;
    prof.f.back() = 0.0;
    prof.fm_prime.back() = leg.outcome.contact_slope;
    const bool positive =
        std::all_of(prof.f.begin() + 1, prof.f.end() - 1, [](double v) { return v > 0.0; });
    if (positive) return prof;
  }
  fail(ErrorKind::Numerical, "no_return_to_zero", "no candidate slope produced a profile returning to zero");
}

double evaluate_profile(const Profile& prof, double xi) {
  const auto& x = prof.xi;
  if (x.empty() || xi < x.front() || xi > x.back()) return 0.0;
  auto it = std::upper_bound(x.begin(), x.end(), xi);
  if (it == x.end()) return prof.f.back();
  const std::size_t j = static_cast<std::size_t>(it - x.begin());
  const std::size_t i = j - 1;
  const double w = (xi - x[i]) / (x[j] - x[i]);
  return (1.0 - w) * prof.f[i] + w * prof.f[j];
}

Profile scale_profile(const Profile& prof, double c, const ProblemParams& pr, const Exponents& ex) {
  const double lam = scaling_factor(c, pr);
  const double amp = std::pow(lam, 1.0 / (pr.m() - 1.0) + ex.alpha);
  const double stretch = std::pow(lam, ex.beta);
  Profile out = prof;
  for (auto& x : out.xi) x *= stretch;
  for (auto& v : out.f) v *= amp;
  const double flux = std::pow(amp, pr.m()) / stretch;
  for (auto& g : out.fm_prime) g *= flux;
  out.contact_slope *= flux;
  if (auto* a = std::get_if<AnnularSupport>(&out.support)) {
    a->R1 *= stretch;
    a->R2 *= stretch;
  } else {
    std::get<CenteredSupport>(out.support).xi0 *= stretch;
  }
  return out;
}

double profile_residual(const Profile& prof, const ProblemParams& pr, const Exponents& ex, double margin) {
  const auto& x = prof.xi;
  const auto& f = prof.f;
  const std::size_t n = x.size();
  if (n < 5) return 0.0;
  const double lo = prof.support_lo(), hi = prof.support_hi();
  const double cut = margin * (hi - lo);
  const double m = pr.m(), p = pr.p(), N = pr.dim(), s = pr.sigma();
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (x[i] < lo + cut || x[i] > hi - cut) continue;
    const double h1 = x[i] - x[i - 1], h2 = x[i + 1] - x[i];
    const double hm = 0.5 * (h1 + h2);
    const double Fm = std::pow(f[i - 1], m), F0 = std::pow(f[i], m), Fp = std::pow(f[i + 1], m);
    const double d2 = ((Fp - F0) / h2 - (F0 - Fm) / h1) / hm;
    const double d1 = (Fp - Fm) / (h1 + h2);
    const double fp = (f[i + 1] - f[i - 1]) / (h1 + h2);
    const double terms[] = {d2, (N - 1.0) / x[i] * d1, -ex.alpha * f[i], ex.beta * x[i] * fp,
                            std::pow(x[i], s) * std::pow(f[i], p)};
    double r = 0.0, mag = 0.0;
    for (double t : terms) {
      r += t;
      mag = std::max(mag, std::abs(t));
    }
    worst = std::max(worst, std::abs(r));
    scale = std::max(scale, mag);
  }
  return scale > 0.0 ? worst / scale : 0.0;
}

}  // namespace growup
