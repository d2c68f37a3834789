#pragma once

// Adaptive Dormand–Prince 5(4) integrator for small fixed-size systems.
//
// Two stopping hooks are supported:
//  * an event function e(t, y); integration stops at the first point where it
//    changes sign from positive to non-positive. The crossing is located by
//    bisection on the length of a single RK sub-step taken from the start of
//    the step that straddles it.
//  * an observer o(t, y) called after every accepted step; returning false
//    stops the integration there.
// Either direction of integration works (t1 < t0 integrates backwards).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

namespace growup::ode {

template <std::size_t K>
using Vec = std::array<double, K>;

struct Controls {
  double rtol = 1e-10;
  double atol = 1e-12;
  double h_init = 0.0;  // 0: pick from the scale of the interval
  double h_max = std::numeric_limits<double>::infinity();
  double h_min_rel = 1e-15;  // underflow when |h| < h_min_rel·max(1,|t|)
  std::size_t max_steps = 5'000'000;
  int event_bisections = 80;
};

enum class Stop { Reached, Event, Observer, StepUnderflow, MaxSteps };

template <std::size_t K>
struct Result {
  Stop stop = Stop::Reached;
  double t = 0.0;
  Vec<K> y{};
  std::size_t steps = 0;
  double h_last = 0.0;
};

struct NoEvent {
  template <class Y>
  double operator()(double, const Y&) const { return 1.0; }
};
struct NoObserver {
  template <class Y>
  bool operator()(double, const Y&) const { return true; }
};

namespace detail {

// Tableau of Dormand & Prince (1980).
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                        a75 = -2187.0 / 6784, a76 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

template <std::size_t K, class F>
void step(F& f, double t, const Vec<K>& y, const Vec<K>& k1, double h, Vec<K>& y_out,
          Vec<K>& err, Vec<K>& k7) {
  Vec<K> tmp, k2, k3, k4, k5, k6;
  for (std::size_t i = 0; i < K; ++i) tmp[i] = y[i] + h * a21 * k1[i];
  k2 = f(t + c2 * h, tmp);
  for (std::size_t i = 0; i < K; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
  k3 = f(t + c3 * h, tmp);
  for (std::size_t i = 0; i < K; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
  k4 = f(t + c4 * h, tmp);
  for (std::size_t i = 0; i < K; ++i)
    tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
  k5 = f(t + c5 * h, tmp);
  for (std::size_t i = 0; i < K; ++i)
    tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
  k6 = f(t + h, tmp);
  for (std::size_t i = 0; i < K; ++i)
    y_out[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
  k7 = f(t + h, y_out);
  for (std::size_t i = 0; i < K; ++i)
    err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
}

template <std::size_t K>
double error_norm(const Vec<K>& err, const Vec<K>& y0, const Vec<K>& y1, const Controls& c) {
  double acc = 0.0;
  for (std::size_t i = 0; i < K; ++i) {
    const double sc = c.atol + c.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = err[i] / sc;
    acc += r * r;
  }
  return std::sqrt(acc / static_cast<double>(K));
}

}  // namespace detail

/// One unadapted Dormand–Prince step; used by event localization and tests.
template <std::size_t K, class F>
Vec<K> single_step(F&& f, double t, const Vec<K>& y, double h) {
  Vec<K> out, err, k7;
  const Vec<K> k1 = f(t, y);
  detail::step<K>(f, t, y, k1, h, out, err, k7);
  return out;
}

template <std::size_t K, class F, class E = NoEvent, class O = NoObserver>
Result<K> integrate(F&& f, double t0, const Vec<K>& y0, double t1, const Controls& ctl,
                    E&& event = E{}, O&& observer = O{}) {
  Result<K> res;
  res.t = t0;
  res.y = y0;
  if (t1 == t0) return res;
  const double dir = t1 > t0 ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);
  double h = ctl.h_init > 0.0 ? ctl.h_init : 1e-3 * span;
  h = std::min({h, ctl.h_max, span});

  double t = t0;
  Vec<K> y = y0;
  Vec<K> k1 = f(t, y);
  Vec<K> y_new, err, k7;
  double ev_prev = event(t, y);

  for (std::size_t n = 0; n < ctl.max_steps; ++n) {
    const double remaining = std::abs(t1 - t);
    bool last = false;
    if (h >= remaining) {
      h = remaining;
      last = true;
    }
    if (h < ctl.h_min_rel * std::max(1.0, std::abs(t))) {
      res.stop = Stop::StepUnderflow;
      res.t = t;
      res.y = y;
      res.steps = n;
      res.h_last = h;
      return res;
    }
    detail::step<K>(f, t, y, k1, dir * h, y_new, err, k7);
    const double en = detail::error_norm<K>(err, y, y_new, ctl);
    if (!(en <= 1.0)) {
      const double fac = std::isfinite(en) ? std::max(0.2, 0.9 * std::pow(en, -0.2)) : 0.2;
      h *= fac;
      continue;
    }
    const double t_new = last ? t1 : t + dir * h;
    const double ev_new = event(t_new, y_new);
    if (ev_prev > 0.0 && ev_new <= 0.0) {
      double lo = 0.0, hi = h;
      Vec<K> y_hi = y_new;
      for (int it = 0; it < ctl.event_bisections && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const Vec<K> y_mid = single_step<K>(f, t, y, dir * mid);
        if (event(t + dir * mid, y_mid) > 0.0) {
          lo = mid;
        } else {
          hi = mid;
          y_hi = y_mid;
        }
      }
      res.stop = Stop::Event;
      res.t = t + dir * hi;
      res.y = y_hi;
      res.steps = n + 1;
      res.h_last = hi;
      return res;
    }
    t = t_new;
    y = y_new;
    k1 = k7;
    ev_prev = ev_new;
    res.h_last = h;
    if (!observer(t, y)) {
      res.stop = Stop::Observer;
      res.t = t;
      res.y = y;
      res.steps = n + 1;
      return res;
    }
    if (last) {
      res.stop = Stop::Reached;
      res.t = t;
      res.y = y;
      res.steps = n + 1;
      return res;
    }
    const double fac = en > 0.0 ? std::min(5.0, std::max(0.2, 0.9 * std::pow(en, -0.2))) : 5.0;
    h = std::min(h * fac, ctl.h_max);
  }
  res.stop = Stop::MaxSteps;
  res.t = t;
  res.y = y;
  res.steps = ctl.max_steps;
  return res;
}

}  // namespace growup::ode
