#include <doctest.h>

#include "growup/error.hpp"
#include "growup/profile.hpp"

#include <array>
#include <cmath>
#include <vector>

using namespace growup;

namespace {

const ProblemParams kFig = validate_regime(3, 2, 4, -1.5);
const Exponents kEx = derive_exponents(kFig);

const Profile& fstar() {
  static const Profile f = find_selfsimilar_profile(kFig, kEx);
  return f;
}

std::vector<double> slope_grid() {
  std::vector<double> s;
  for (int k = -16; k <= 8; ++k) s.push_back(std::pow(10.0, k / 4.0));
  return s;
}

// Independent shooting: classical RK4 in (F = f^m, g = F') with a graded step and
// the plain two-term series start. Returns +1 when F reaches zero, -1 when F turns
// around while positive, and writes the crossing radius.
int oracle_shot(double a, double* xi_cross) {
  const double m = 3, p = 2, N = 4, s = -1.5, al = 0.5, be = 1.0;
  auto rhs = [&](double x, double F, double g, double& dF, double& dg) {
    const double f = F > 0.0 ? std::cbrt(F) : 0.0;
    const double fp = f > 0.0 ? g / (m * f * f) : 0.0;
    dF = g;
    dg = -(N - 1.0) / x * g + al * f - be * x * fp - std::pow(x, s) * std::pow(f, p);
  };
  double x = 1e-6;
  double F = std::pow(a, m) + al * a / (2 * N) * x * x - std::pow(a, p) / ((N + s) * (s + 2)) * std::pow(x, s + 2);
  double g = al * a / N * x - std::pow(a, p) / (N + s) * std::pow(x, s + 1);
  while (x < 1.0) {
    // Near F = 0 the equation is stiff but J = g + beta xi f is nearly conserved:
    // its sign decides between reaching zero and turning back.
    if (g < 0.0 && F < 1e-12) {
      if (g + be * x * std::cbrt(F) >= 0.0) return -1;
      *xi_cross = x + F / -g;
      return +1;
    }
    double h = std::min(2e-6, 0.05 * x);
    if (g < 0.0) h = std::min(h, 0.05 * F / -g);
    double k1F, k1g, k2F, k2g, k3F, k3g, k4F, k4g;
    rhs(x, F, g, k1F, k1g);
    rhs(x + h / 2, F + h / 2 * k1F, g + h / 2 * k1g, k2F, k2g);
    rhs(x + h / 2, F + h / 2 * k2F, g + h / 2 * k2g, k3F, k3g);
    rhs(x + h, F + h * k3F, g + h * k3g, k4F, k4g);
    const double Fn = F + h / 6 * (k1F + 2 * k2F + 2 * k3F + k4F);
    const double gn = g + h / 6 * (k1g + 2 * k2g + 2 * k3g + k4g);
    if (Fn <= 0.0) {
      *xi_cross = x + h * F / (F - Fn);
      return +1;
    }
    if (g < 0.0 && gn >= 0.0) return -1;
    x += h;
    F = Fn;
    g = gn;
  }
  return -1;
}

}  // namespace

TEST_CASE("profile_rhs: zero state is an equilibrium, singular at the origin") {
  const auto d = profile_rhs(0.3, {0.0, 0.0}, kFig, kEx);
  CHECK(d[0] == 0.0);
  CHECK(d[1] == 0.0);
  CHECK_THROWS_AS(profile_rhs(0.0, {1.0, 0.0}, kFig, kEx), Error);
  // At an interior maximum (g = 0) the sign of alpha f - xi^sigma f^p decides concavity.
  const double xi = 0.5, f = 0.2;
  const auto e = profile_rhs(xi, {f, 0.0}, kFig, kEx);
  CHECK(e[0] == 0.0);
  CHECK(e[1] == doctest::Approx(kEx.alpha * f - std::pow(xi, -1.5) * f * f).epsilon(1e-14));
}

TEST_CASE("series start recovers f(0) = a as eps -> 0 and decreases near the origin") {
  const double a = 0.3;
  const auto s = series_start(a, 1e-12, kFig, kEx);
  CHECK(s[0] == doctest::Approx(a).epsilon(1e-6));
  CHECK(series_start(a, 1e-4, kFig, kEx)[1] < 0.0);
  // (f^m)' ~ eps^{sigma+1}: it vanishes at the origin only when sigma > -1.
  CHECK(std::abs(1e-12 * s[1]) < 1e-5);
  const auto pr = validate_regime(3, 1.5, 4, -0.8);
  const auto ex = derive_exponents(pr);
  CHECK(std::abs(series_start(a, 1e-12, pr, ex)[1]) < 1e-2);
  CHECK(std::abs(series_start(a, 1e-12, pr, ex)[1]) < std::abs(series_start(a, 1e-8, pr, ex)[1]));
}

TEST_CASE("series start is self-consistent under halving of eps") {
  // Integrate profile_rhs from eps to 2eps with fine RK4 steps; the gap to the series at
  // 2eps must shrink as eps is halved.
  const double a = 0.3;
  double prev = 0.0;
  for (int k = 0; k < 4; ++k) {
    const double eps = 1e-3 / std::pow(2.0, k);
    auto y = series_start(a, eps, kFig, kEx);
    std::array<double, 2> fg{y[0], y[1]};
    const int steps = 4000;
    const double h = eps / steps;
    double x = eps;
    for (int i = 0; i < steps; ++i) {
      const auto k1 = profile_rhs(x, fg, kFig, kEx);
      const auto k2 = profile_rhs(x + h / 2, {fg[0] + h / 2 * k1[0], fg[1] + h / 2 * k1[1]}, kFig, kEx);
      const auto k3 = profile_rhs(x + h / 2, {fg[0] + h / 2 * k2[0], fg[1] + h / 2 * k2[1]}, kFig, kEx);
      const auto k4 = profile_rhs(x + h, {fg[0] + h * k3[0], fg[1] + h * k3[1]}, kFig, kEx);
      fg[0] += h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
      fg[1] += h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
      x += h;
    }
    const double gap = std::abs(series_start(a, 2.0 * eps, kFig, kEx)[0] - fg[0]);
    if (k > 0) CHECK(gap < 0.8 * prev);
    prev = gap;
  }
}

TEST_CASE("shooting dichotomy: tiny a crosses, large a stays positive") {
  const ShootingControls c;
  const auto small = shoot(1e-8, kFig, kEx, c);
  CHECK(small.tag == ShotTag::CrossesZero);
  CHECK(small.contact_slope <= 0.0);
  const auto smaller = shoot(1e-10, kFig, kEx, c);
  CHECK(smaller.contact_xi < small.contact_xi);
  CHECK(shoot(10.0, kFig, kEx, c).tag == ShotTag::StaysPositive);
}

TEST_CASE("self-similar profile at figure-1 parameters") {
  const Profile& f = fstar();
  CHECK(f.kind == ProfileKind::SelfSimilarSolution);
  CHECK(f.bracket_width < 1e-8);
  // Frozen values, cross-checked against the independent oracle below.
  CHECK(f.f.front() == doctest::Approx(0.1078673793).epsilon(1e-8));
  CHECK(f.support_hi() == doctest::Approx(0.07144845879).epsilon(1e-7));
  for (std::size_t i = 1; i < f.f.size(); ++i) CHECK(f.f[i] <= f.f[i - 1]);
  CHECK(f.f.back() == 0.0);
  CHECK(profile_residual(f, kFig, kEx) < 1e-4);
  CHECK(std::abs(f.contact_slope) < 1e-6);
}

TEST_CASE("independent RK4 shooting oracle agrees with the profile solver") {
  double lo = 0.05, hi = 0.2, xc = 0.0, x_lo = 0.0;
  REQUIRE(oracle_shot(lo, &x_lo) == +1);
  REQUIRE(oracle_shot(hi, &xc) == -1);
  for (int k = 0; k < 40; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (oracle_shot(mid, &xc) == +1) {
      lo = mid;
      x_lo = xc;
    } else {
      hi = mid;
    }
  }
  CHECK(lo == doctest::Approx(fstar().f.front()).epsilon(1e-5));
  CHECK(x_lo == doctest::Approx(fstar().support_hi()).epsilon(1e-3));
}

TEST_CASE("f_*(0) and xi0 are stable under halving of the integration step") {
  const Profile& base = fstar();
  ShootingControls c;
  c.h_max = base.support_hi() / 400.0;
  const Profile p1 = find_selfsimilar_profile(kFig, kEx, c);
  c.h_max /= 2.0;
  c.eps /= 2.0;
  const Profile p2 = find_selfsimilar_profile(kFig, kEx, c);
  CHECK(std::abs(p2.f.front() / p1.f.front() - 1.0) < 0.01);
  CHECK(std::abs(p2.support_hi() / p1.support_hi() - 1.0) < 0.01);
  CHECK(std::abs(p1.f.front() / base.f.front() - 1.0) < 1e-6);
}

TEST_CASE("scale_profile matches a direct solve with weight amplitude c") {
  // Weight c|x|^sigma: the profile equation becomes -alpha f + ... + c xi^sigma f^p, which
  // for the same exponents is solved by the rescaled f_*.
  const double c = 4.0;
  const Profile scaled = scale_profile(fstar(), c, kFig, kEx);
  const double lam = scaling_factor(c, kFig);
  CHECK(scaled.f.front() == doctest::Approx(std::pow(lam, 1.0 / 2.0 + 0.5) * fstar().f.front()).epsilon(1e-14));
  CHECK(scaled.support_hi() == doctest::Approx(lam * fstar().support_hi()).epsilon(1e-14));
  // The scaled profile satisfies the equation with c xi^sigma f^p.
  double worst = 0.0, scale = 0.0;
  const auto& x = scaled.xi;
  const auto& f = scaled.f;
  for (std::size_t i = 50; i + 50 < x.size(); ++i) {
    const double h = x[i + 1] - x[i];
    const double Fm = std::pow(f[i - 1], 3), F0 = std::pow(f[i], 3), Fp = std::pow(f[i + 1], 3);
    const double lap = (Fp - 2 * F0 + Fm) / (h * h) + 3.0 / x[i] * (Fp - Fm) / (2 * h);
    const double drift = kEx.beta * x[i] * (f[i + 1] - f[i - 1]) / (2 * h);
    const double src = c * std::pow(x[i], -1.5) * f[i] * f[i];
    worst = std::max(worst, std::abs(lap + drift - kEx.alpha * f[i] + src));
    scale = std::max(scale, std::abs(src));
  }
  CHECK(worst / scale < 1e-3);
}

TEST_CASE("evaluate_profile: endpoints, outside support, bracketing") {
  const Profile& f = fstar();
  CHECK(evaluate_profile(f, 0.0) == f.f.front());
  CHECK(evaluate_profile(f, 1.1 * f.support_hi()) == 0.0);
  for (std::size_t i = 0; i + 1 < f.xi.size(); i += 97) {
    const double mid = 0.5 * (f.xi[i] + f.xi[i + 1]);
    const double v = evaluate_profile(f, mid);
    CHECK(v <= std::max(f.f[i], f.f[i + 1]));
    CHECK(v >= std::min(f.f[i], f.f[i + 1]));
  }
}

TEST_CASE("annular subsolution at R1 = 1e-3") {
  const auto sg = slope_grid();
  const Profile a = find_annular_subsolution(kFig, kEx, 1e-3, sg);
  CHECK(a.kind == ProfileKind::AnnularSubsolution);
  CHECK(a.support_lo() == 1e-3);
  CHECK(a.support_hi() > a.support_lo());
  CHECK(a.f.front() == 0.0);
  CHECK(a.f.back() == 0.0);
  for (std::size_t i = 1; i + 1 < a.f.size(); ++i) CHECK(a.f[i] > 0.0);
  CHECK(a.fm_prime.front() > 0.0);
  CHECK(a.contact_slope < 0.0);
  // Frozen output of the slope scan.
  CHECK(a.support_hi() == doctest::Approx(2.274e-3).epsilon(1e-3));
  CHECK(a.shooting_parameter == doctest::Approx(1e-4).epsilon(1e-12));
}

TEST_CASE("annular search reports failure when no slope returns") {
  const std::vector<double> none{1e6};
  CHECK_THROWS_AS(find_annular_subsolution(kFig, kEx, 1.0, none), Error);
  CHECK_THROWS_AS(find_annular_subsolution(kFig, kEx, -1.0, slope_grid()), Error);
}
