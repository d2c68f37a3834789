#include "growup/asymptotics.hpp"

#include "growup/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace growup {

double rescaled_error(const RadialField& field, const VStar& vstar, const Exponents& ex) {
  double worst = 0.0;
  if (field.frame == Frame::SelfSimilar) {
    for (std::size_t i = 0; i < field.grid.n; ++i)
      worst = std::max(worst, std::abs(field.u[i] - vstar.fA(field.grid.center(i))));
    return worst;
  }
  const double t = field.time;
  if (!(t > 0.0)) fail(ErrorKind::Domain, "frame_mismatch", "physical rescaled error needs t > 0");
  for (std::size_t i = 0; i < field.grid.n; ++i)
    worst = std::max(worst, std::abs(field.u[i] - vstar(field.grid.center(i), t)));
  return std::pow(t, -ex.alpha) * worst;
}

SelfSimilarSample self_similar_snapshot(const RadialField& field, const Exponents& ex) {
  if (field.frame != Frame::Physical)
    fail(ErrorKind::Domain, "frame_mismatch", "self-similar snapshot needs a physical field");
  const double t = field.time;
  if (!(t > 0.0)) fail(ErrorKind::Domain, "frame_mismatch", "self-similar snapshot needs t > 0");
  SelfSimilarSample s;
  s.t = t;
  const double ry = std::pow(t, -ex.beta), rv = std::pow(t, -ex.alpha);
  s.y.resize(field.grid.n);
  s.v.resize(field.grid.n);
  for (std::size_t i = 0; i < field.grid.n; ++i) {
    s.y[i] = field.grid.center(i) * ry;
    s.v[i] = field.u[i] * rv;
  }
  return s;
}

PhysicalSample physical_snapshot(const SelfSimilarSample& sample, const Exponents& ex) {
  PhysicalSample p;
  p.t = sample.t;
  const double ry = std::pow(sample.t, ex.beta), rv = std::pow(sample.t, ex.alpha);
  p.r.resize(sample.y.size());
  p.u.resize(sample.v.size());
  for (std::size_t i = 0; i < sample.y.size(); ++i) p.r[i] = sample.y[i] * ry;
  for (std::size_t i = 0; i < sample.v.size(); ++i) p.u[i] = sample.v[i] * rv;
  return p;
}

FitReport fit_powerlaw(std::span<const double> t, std::span<const double> value, double t_lo, double t_hi) {
  if (t.size() != value.size()) fail(ErrorKind::Domain, "degenerate_window", "series lengths differ");
  std::vector<double> x, y;
  const double slack = 1e-12 * std::max(std::abs(t_lo), std::abs(t_hi));
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_lo - slack || t[i] > t_hi + slack) continue;
    if (!(t[i] > 0.0) || !(value[i] > 0.0))
      fail(ErrorKind::Numerical, "degenerate_window", "power-law fit needs positive times and values");
    x.push_back(std::log(t[i]));
    y.push_back(std::log(value[i]));
  }
  if (x.size() < 10) fail(ErrorKind::Numerical, "degenerate_window", "fit window holds fewer than 10 probes");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) fail(ErrorKind::Numerical, "degenerate_window", "fit window has no spread in time");
  FitReport r;
  r.exponent = sxy / sxx;
  r.t_lo = t_lo;
  r.t_hi = t_hi;
  r.count = x.size();
  for (std::size_t i = 0; i < x.size(); ++i)
    r.residual = std::max(r.residual, std::abs(y[i] - (my + r.exponent * (x[i] - mx))));
  return r;
}

FitReport fit_last_decade(std::span<const double> t, std::span<const double> value) {
  if (t.empty()) fail(ErrorKind::Numerical, "degenerate_window", "empty series");
  const double hi = t.back();
  return fit_powerlaw(t, value, hi / 10.0, hi);
}

double upper_bound(const SandwichBounds& b, double y, double s, const Exponents& ex) {
  const double q = 1.0 + b.tau_inf * std::exp(-s);
  return std::pow(q, ex.alpha) * evaluate_profile(b.upper_profile, y * std::pow(q, -ex.beta));
}

double lower_bound(const SandwichBounds& b, double y, double s, const ProblemParams& pr, const Exponents& ex) {
  const auto& sch = b.schedule;
  const double t = std::exp(s);
  if (t < sch.t0) return 0.0;
  const double lam = sch.lambda_star;
  const double q = 1.0 - sch.shift() * std::exp(-s);
  const double amp = std::pow(lam, 1.0 / (pr.m() - 1.0) + ex.alpha);
  const double xi = y * std::pow(q, -ex.beta) * std::pow(lam, -ex.beta);
  return std::pow(q, ex.alpha) * amp * evaluate_profile(b.lower_profile, xi);
}

SandwichReport sandwich_check(const Diagnostics& diag, const SandwichBounds& bounds,
                              const ProblemParams& pr, const Exponents& ex) {
  if (diag.frame != Frame::SelfSimilar)
    fail(ErrorKind::Domain, "frame_mismatch", "sandwich check needs a self-similar run");
  SandwichReport r;
  r.min_lower_peak = std::numeric_limits<double>::infinity();
  for (const auto& snap : diag.snapshots) {
    ++r.snapshots;
    const double s = snap.time;
    const bool active = std::exp(s) >= bounds.schedule.t0;
    if (active) ++r.lower_active;
    double peak = 0.0;
    const RadialGrid& grid = snap.grid;
    for (std::size_t i = 0; i < grid.n && i < snap.u.size(); ++i) {
      const double y = grid.center(i);
      const double over = snap.u[i] - upper_bound(bounds, y, s, ex);
      if (over > r.worst_upper) {
        r.worst_upper = over;
        r.s_worst_upper = s;
      }
      if (!active) continue;
      const double lo = lower_bound(bounds, y, s, pr, ex);
      peak = std::max(peak, lo);
      const double under = lo - snap.u[i];
      if (under > r.worst_lower) {
        r.worst_lower = under;
        r.s_worst_lower = s;
      }
    }
    if (active) r.min_lower_peak = std::min(r.min_lower_peak, peak);
  }
  if (r.lower_active == 0) r.min_lower_peak = 0.0;
  return r;
}

SubsolutionSchedule detect_subsolution_schedule(const Diagnostics& physical, const Profile& annular, const ProblemParams& pr,
                                                double weight_factor, double rel) {
  if (physical.frame != Frame::Physical)
    fail(ErrorKind::Domain, "frame_mismatch", "positivity detection needs a physical run");
  const double R1 = annular.support_lo(), R2 = annular.support_hi();
  for (const auto& snap : physical.snapshots) {
    const double top = snap.u.empty() ? 0.0 : *std::max_element(snap.u.begin(), snap.u.end());
    if (!(top > 0.0)) continue;
    double h = std::numeric_limits<double>::infinity();
    bool covered = false;
    const RadialGrid& grid = snap.grid;
    for (std::size_t i = 0; i < grid.n; ++i) {
      if (grid.face(i) > R2) {
        covered = true;
        break;
      }
      h = std::min(h, snap.u[i]);
    }
    if (!covered || !(h > rel * top)) continue;
    SubsolutionSchedule sch = choose_lambda_star(h, annular.max_value(), R1, pr, weight_factor);
    sch.t0 = snap.time;
    sch.R2 = R2;
    return sch;
  }
  fail(ErrorKind::Numerical, "positivity_not_reached", "no snapshot is positive on the whole ball B(0, R2)");
}

namespace {

double ball_integral(const InitialData& init, double R, const ProblemParams& pr, const Exponents& ex) {
  using Quad = boost::math::quadrature::gauss_kronrod<double, 31>;
  const double k = pr.dim() - 1.0;
  auto integrand = [&](double r) { return initial_value(init, r, ex) * std::pow(r, k); };
  std::vector<double> breaks{0.0};
  if (const auto* b = std::get_if<Bump>(&init)) {
    for (double x : {b->center - b->width, b->center, b->center + b->width})
      if (x > 0.0) breaks.push_back(x);
  } else if (const auto* ind = std::get_if<Indicator>(&init)) {
    breaks.push_back(ind->R0);
  } else if (const auto* tab = std::get_if<TabulatedData>(&init)) {
    for (double x : tab->r)
      if (x > 0.0) breaks.push_back(x);
  } else {
    breaks.push_back(initial_support_radius(init, ex));
  }
  breaks.push_back(R);
  std::sort(breaks.begin(), breaks.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i], b = std::min(breaks[i + 1], R);
    if (b <= a) continue;
    total += Quad::integrate(integrand, a, b, 12, 1e-12);
    if (b >= R) break;
  }
  return total;
}

}  // namespace

double bracket_norm(const InitialData& init, const ProblemParams& pr, const Exponents& ex, std::size_t points) {
  const double R0 = std::max(1.0, initial_support_radius(init, ex));
  const double hi = 10.0 * R0;
  const double N = pr.dim();
  double best = 0.0;
  const std::size_t count = std::max<std::size_t>(points, 2);
  for (std::size_t i = 0; i < count; ++i) {
    const double R = std::exp(std::log(hi) * static_cast<double>(i) / static_cast<double>(count - 1));
    const double mean = N * ball_integral(init, R, pr, ex) / std::pow(R, N);
    best = std::max(best, std::pow(R, -2.0 / (pr.m() - 1.0)) * mean);
  }
  return best;
}

}  // namespace growup
