#include "growup/phaseplane.hpp"

#include "growup/error.hpp"
#include "growup/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace growup {

PhasePoint to_phase_coords(double xi, double f, double fprime, const ProblemParams& pr, const Exponents& ex,
                           double eta) {
  if (!(xi > 0.0) || !(f > 0.0))
    fail(ErrorKind::Numerical, "singular_evaluation", "phase coordinates need xi > 0 and f > 0");
  const double m = pr.m(), a = ex.alpha;
  PhasePoint pt;
  pt.eta = eta;
  pt.X = m / a * std::pow(f, m - 1.0) / (xi * xi);
  pt.Y = m / a * std::pow(f, m - 2.0) * fprime / xi;
  pt.Z = std::pow(xi, pr.sigma()) * std::pow(f, pr.p() - 1.0) / a;
  pt.W = pt.X * pt.Z;
  return pt;
}

double eta_rate(double xi, double f, const ProblemParams& pr, const Exponents& ex) {
  return ex.alpha / pr.m() * xi * std::pow(f, 1.0 - pr.m());
}

std::vector<PhasePoint> profile_orbit(const Profile& prof, const ProblemParams& pr, const Exponents& ex) {
  std::vector<PhasePoint> out;
  double eta = 0.0, prev_xi = 0.0, prev_rate = 0.0;
  const double m = pr.m();
  for (std::size_t i = 0; i < prof.xi.size(); ++i) {
    const double xi = prof.xi[i], f = prof.f[i];
    if (!(xi > 0.0) || !(f > 0.0)) continue;
    const double rate = eta_rate(xi, f, pr, ex);
    if (!out.empty()) eta += 0.5 * (rate + prev_rate) * (xi - prev_xi);
    const double fp = prof.fm_prime[i] / (m * std::pow(f, m - 1.0));
    out.push_back(to_phase_coords(xi, f, fp, pr, ex, eta));
    prev_xi = xi;
    prev_rate = rate;
  }
  return out;
}

std::array<double, 3> psyst_rhs(const std::array<double, 3>& s, const ProblemParams& pr, const Exponents& ex) {
  const double X = s[0], Y = s[1], Z = s[2];
  const double m = pr.m(), p = pr.p(), N = pr.dim(), sg = pr.sigma();
  const double ba = ex.beta / ex.alpha;
  return {X * ((m - 1.0) * Y - 2.0 * X), -Y * Y - ba * Y + X - N * X * Y - X * Z,
          Z * ((p - 1.0) * Y + sg * X)};
}

std::array<double, 3> psystbis_rhs(const std::array<double, 3>& s, const ProblemParams& pr,
                                   const Exponents& ex) {
  const double X = s[0], Y = s[1], W = s[2];
  const double m = pr.m(), p = pr.p(), N = pr.dim(), sg = pr.sigma();
  const double ba = ex.beta / ex.alpha;
  return {X * ((m - 1.0) * Y - 2.0 * X), -Y * Y - ba * Y + X - N * X * Y - W,
          W * ((m + p - 2.0) * Y + (sg - 2.0) * X)};
}

std::array<double, 2> plane_rhs(const std::array<double, 2>& s, const ProblemParams& pr, const Exponents& ex) {
  const double Y = s[0], W = s[1];
  return {-Y * Y - ex.beta / ex.alpha * Y - W, (pr.m() + pr.p() - 2.0) * Y * W};
}

LinearizationReport p1_linearization(const ProblemParams& pr, const Exponents& ex) {
  const double ba = ex.beta / ex.alpha;
  const double k = pr.m() + pr.p() - 2.0;
  LinearizationReport r;
  r.point = {-ba, 0.0};
  r.matrix = {{{ba, -1.0}, {0.0, -k * ba}}};
  r.eigenvalues = {ba, -k * ba};
  // Upper-triangular: e1 = (1, 0); (M − λ2 I)e2 = 0 gives (λ1 − λ2)·1 − w = 0.
  r.eigenvectors = {{{1.0, 0.0}, {1.0, (pr.m() + pr.p() - 1.0) * ba}}};
  return r;
}

Mat2 plane_jacobian_fd(const std::array<double, 2>& yw, const ProblemParams& pr, const Exponents& ex,
                       double h) {
  Mat2 J{};
  for (int j = 0; j < 2; ++j) {
    auto up = yw, dn = yw;
    up[j] += h;
    dn[j] -= h;
    const auto fu = plane_rhs(up, pr, ex), fd = plane_rhs(dn, pr, ex);
    for (int i = 0; i < 2; ++i) J[i][j] = (fu[i] - fd[i]) / (2.0 * h);
  }
  return J;
}

Separatrix compute_separatrix(const ProblemParams& pr, const Exponents& ex, double eps, double Y_max) {
  const double ba = ex.beta / ex.alpha;
  const double k = pr.m() + pr.p() - 2.0;
  if (!(eps > 0.0) || !(Y_max > -ba + eps))
    fail(ErrorKind::Domain, "separatrix_range", "need eps > 0 and Y_max > -beta/alpha + eps");

  bool singular = false;
  auto rhs = [&](double Y, const ode::Vec<1>& w) -> ode::Vec<1> {
    const double den = Y * Y + ba * Y + w[0];
    if (!(den > 0.0)) {
      singular = true;
      return {0.0};
    }
    return {-k * w[0] * Y / den};
  };

  Separatrix sep;
  const double Y0 = -ba + eps;
  sep.Y.push_back(Y0);
  sep.W.push_back(eps * (k + 1.0) * ba);
  auto observer = [&](double Y, const ode::Vec<1>& w) {
    if (singular) return false;
    sep.Y.push_back(Y);
    sep.W.push_back(w[0]);
    return true;
  };
  ode::Controls oc;
  oc.rtol = 1e-11;
  oc.atol = 1e-300;
  oc.h_init = eps;
  // Keep the samples dense enough to draw near the saddle and across the hump.
  oc.h_max = 0.02 * std::max(1.0, ba);
  const double Y_dense = std::min(Y_max, 10.0 * std::max(1.0, ba));
  ode::Result<1> r = ode::integrate<1>(rhs, Y0, ode::Vec<1>{sep.W.back()}, Y_dense, oc, ode::NoEvent{}, observer);
  if (!singular && r.stop == ode::Stop::Reached && Y_dense < Y_max) {
    oc.h_max = std::numeric_limits<double>::infinity();
    oc.h_init = r.h_last;
    r = ode::integrate<1>(rhs, Y_dense, r.y, Y_max, oc, ode::NoEvent{}, observer);
  }
  if (singular)
    fail(ErrorKind::Numerical, "singular_denominator", "separatrix reached the isocline Y' = 0");
  if (r.stop != ode::Stop::Reached)
    fail(ErrorKind::Numerical, "separatrix_integration", "separatrix integration did not reach Y_max");
  return sep;
}

double separatrix_value(const Separatrix& sep, double Y) {
  const auto& y = sep.Y;
  if (y.empty() || Y < y.front() || Y > y.back()) return std::numeric_limits<double>::quiet_NaN();
  auto it = std::upper_bound(y.begin(), y.end(), Y);
  if (it == y.end()) return sep.W.back();
  const std::size_t j = static_cast<std::size_t>(it - y.begin());
  const std::size_t i = j - 1;
  const double w = (Y - y[i]) / (y[j] - y[i]);
  return (1.0 - w) * sep.W[i] + w * sep.W[j];
}

const char* fate_name(Fate f) {
  switch (f) {
    case Fate::EntersQ3: return "EntersQ3";
    case Fate::ExitsQ2: return "ExitsQ2";
    case Fate::HitsP1: return "HitsP1";
    case Fate::ApproachesP0: return "ApproachesP0";
    case Fate::Truncated: return "Truncated";
  }
  return "Unknown";
}

PlaneTrajectory integrate_plane_trajectory(const std::array<double, 2>& start, const ProblemParams& pr,
                                           const Exponents& ex, const PlaneControls& ctl) {
  if (!(start[1] >= 0.0)) fail(ErrorKind::Domain, "plane_start", "trajectory must start with W >= 0");
  const double ba = ex.beta / ex.alpha;
  const double dir = ctl.backward ? -1.0 : 1.0;

  PlaneTrajectory tr;
  tr.backward = ctl.backward;
  tr.start = start;
  tr.eta.push_back(0.0);
  tr.Y.push_back(start[0]);
  tr.W.push_back(start[1]);

  auto dist_p0 = [](double Y, double W) { return std::max(std::abs(Y), W); };
  auto dist_p1 = [&](double Y, double W) { return std::max(std::abs(Y + ba), W); };
  const double d0_start = dist_p0(start[0], start[1]);
  const double d1_start = dist_p1(start[0], start[1]);

  double peak = start[1];
  Fate fate = Fate::Truncated;
  bool decided = false;
  auto rhs = [&](double, const ode::Vec<2>& s) { return plane_rhs(s, pr, ex); };
  auto observer = [&](double eta, const ode::Vec<2>& s) {
    const double Y = s[0], W = s[1];
    tr.eta.push_back(eta);
    tr.Y.push_back(Y);
    tr.W.push_back(W);
    peak = std::max(peak, W);
    if (!ctl.backward && Y <= -ctl.Y_far && W <= ctl.W_tail * peak) {
      fate = Fate::EntersQ3;
      decided = true;
    } else if (ctl.backward && Y >= ctl.Y_far && W <= ctl.W_tail * peak) {
      fate = Fate::ExitsQ2;
      decided = true;
    } else if (dist_p1(Y, W) < ctl.point_radius && dist_p1(Y, W) < d1_start) {
      fate = Fate::HitsP1;
      decided = true;
    } else if (dist_p0(Y, W) < ctl.point_radius && dist_p0(Y, W) < d0_start) {
      fate = Fate::ApproachesP0;
      decided = true;
    } else if (W > ctl.W_cap || !std::isfinite(Y) || std::abs(Y) > 1e15) {
      decided = true;  // Truncated
    }
    return !decided;
  };
  ode::Controls oc;
  oc.rtol = ctl.rtol;
  oc.atol = ctl.atol;
  oc.max_steps = ctl.max_steps;
  oc.h_init = 1e-4;
  ode::integrate<2>(rhs, 0.0, ode::Vec<2>{start[0], start[1]}, dir * ctl.eta_max, oc, ode::NoEvent{},
                    observer);
  tr.fate = fate;
  return tr;
}

Portrait render_phase_portrait(const ProblemParams& pr, const Exponents& ex, const PortraitOptions& opts) {
  Portrait out;
  out.linearization = p1_linearization(pr, ex);
  out.p1 = out.linearization.point;
  out.separatrix = compute_separatrix(pr, ex, opts.separatrix_eps, opts.separatrix_Y_max);
  const double ba = ex.beta / ex.alpha;

  for (int i = 0; i <= 200; ++i) {
    const double Y = -ba * (1.0 - i / 200.0);
    out.isocline.push_back({Y, std::max(0.0, -Y * Y - ba * Y)});
  }

  std::vector<std::array<double, 2>> seeds;
  const double w1 = separatrix_value(out.separatrix, opts.seed_Y);
  if (opts.fan_size > 0 && std::isfinite(w1)) {
    const double lo = std::log(opts.fan_min), hi = std::log(opts.fan_max);
    for (int i = 0; i < opts.fan_size; ++i) {
      const double t = opts.fan_size == 1 ? 0.0 : static_cast<double>(i) / (opts.fan_size - 1);
      seeds.push_back({opts.seed_Y, w1 * std::exp(lo + t * (hi - lo))});
    }
  }
  if (opts.below_size > 0 && std::isfinite(w1)) {
    for (int i = 1; i <= opts.below_size; ++i)
      seeds.push_back({opts.seed_Y, w1 * static_cast<double>(i) / (opts.below_size + 1)});
  }
  if (opts.axis_seeds) {
    seeds.push_back({-0.5 * ba, 0.0});
    seeds.push_back({-1.5 * ba, 0.0});
  }

  for (const auto& s : seeds) {
    PlaneControls fwd = opts.controls;
    fwd.backward = false;
    PlaneControls bwd = opts.controls;
    bwd.backward = true;
    const PlaneTrajectory f = integrate_plane_trajectory(s, pr, ex, fwd);
    const PlaneTrajectory b = integrate_plane_trajectory(s, pr, ex, bwd);
    PlaneTrajectory joined;
    joined.start = s;
    joined.fate = f.fate;
    for (std::size_t i = b.eta.size(); i-- > 1;) {
      joined.eta.push_back(b.eta[i]);
      joined.Y.push_back(b.Y[i]);
      joined.W.push_back(b.W[i]);
    }
    joined.eta.insert(joined.eta.end(), f.eta.begin(), f.eta.end());
    joined.Y.insert(joined.Y.end(), f.Y.begin(), f.Y.end());
    joined.W.insert(joined.W.end(), f.W.begin(), f.W.end());
    out.trajectories.push_back(std::move(joined));
    out.forward_fate.push_back(f.fate);
    out.backward_fate.push_back(b.fate);
  }
  return out;
}

}  // namespace growup
