#include <doctest.h>

#include "growup/error.hpp"
#include "growup/phaseplane.hpp"

#include <cmath>
#include <random>

using namespace growup;

namespace {

const ProblemParams kFig = validate_regime(3, 2, 4, -1.5);
const Exponents kEx = derive_exponents(kFig);

}  // namespace

TEST_CASE("phase coordinates: Y vanishes at a maximum, W = X Z") {
  const auto pt = to_phase_coords(0.3, 0.2, 0.0, kFig, kEx);
  CHECK(pt.Y == 0.0);
  CHECK_THROWS_AS(to_phase_coords(0.0, 0.2, 0.0, kFig, kEx), Error);
  CHECK_THROWS_AS(to_phase_coords(0.3, 0.0, 0.0, kFig, kEx), Error);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.01, 3.0), V(-2.0, 2.0);
  for (int k = 0; k < 1000; ++k) {
    const double xi = U(rng), f = U(rng), fp = V(rng);
    const auto q = to_phase_coords(xi, f, fp, kFig, kEx);
    CHECK(q.X >= 0.0);
    CHECK(q.Z >= 0.0);
    const double direct = 3.0 / (0.25) * std::pow(xi, -3.5) * std::pow(f, 3.0);
    CHECK(std::abs(q.W - direct) <= 1e-12 * direct);
  }
}

TEST_CASE("psyst: invariant plane, axis dynamics and equilibria") {
  const double ba = kEx.beta / kEx.alpha;
  const auto a = psyst_rhs({0.0, 1.3, 0.0}, kFig, kEx);
  CHECK(a[0] == 0.0);
  CHECK(a[2] == 0.0);
  CHECK(a[1] == doctest::Approx(-1.3 * 1.3 - ba * 1.3));
  CHECK(psyst_rhs({0.0, 0.7, 2.0}, kFig, kEx)[0] == 0.0);
  for (double Y : {0.0, -ba}) {
    const auto e = psyst_rhs({0.0, Y, 0.0}, kFig, kEx);
    CHECK(e[0] == 0.0);
    CHECK(e[1] == 0.0);
    CHECK(e[2] == 0.0);
  }
}

TEST_CASE("property: W = X Z is preserved between the two systems") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.0, 2.0), V(-3.0, 3.0);
  for (int k = 0; k < 500; ++k) {
    const double X = U(rng), Y = V(rng), Z = U(rng), W = X * Z;
    const auto a = psyst_rhs({X, Y, Z}, kFig, kEx);
    const auto b = psystbis_rhs({X, Y, W}, kFig, kEx);
    CHECK(std::abs(a[0] - b[0]) <= 1e-10 * (1.0 + std::abs(a[0])));
    CHECK(std::abs(a[1] - b[1]) <= 1e-10 * (1.0 + std::abs(a[1])));
    const double dW = a[0] * Z + X * a[2];
    CHECK(std::abs(dW - b[2]) <= 1e-10 * (1.0 + std::abs(dW)));
  }
}

TEST_CASE("plane system: P1 equilibrium, isocline, W decays for Y < 0") {
  const double ba = kEx.beta / kEx.alpha;
  const auto p1 = plane_rhs({-ba, 0.0}, kFig, kEx);
  CHECK(p1[0] == 0.0);
  CHECK(p1[1] == 0.0);
  for (double Y = -ba + 0.05; Y < 0.0; Y += 0.1) {
    const double W = -Y * Y - ba * Y;
    CHECK(std::abs(plane_rhs({Y, W}, kFig, kEx)[0]) < 1e-14);
    CHECK(plane_rhs({Y, W}, kFig, kEx)[1] <= 0.0);
  }
  CHECK(plane_rhs({-0.5, 1.0}, kFig, kEx)[1] < 0.0);
}

TEST_CASE("P1 is a saddle with eigenvalues {2, -6} and stable direction (1, 8)") {
  const auto L = p1_linearization(kFig, kEx);
  CHECK(L.point[0] == -2.0);
  CHECK(L.point[1] == 0.0);
  CHECK(L.eigenvalues[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(L.eigenvalues[1] == doctest::Approx(-6.0).epsilon(1e-14));
  CHECK(L.eigenvectors[0][1] == 0.0);
  CHECK(L.eigenvectors[1][1] == doctest::Approx(8.0).epsilon(1e-14));
  const auto J = plane_jacobian_fd(L.point, kFig, kEx);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(std::abs(J[i][j] - L.matrix[i][j]) < 1e-8);
}

TEST_CASE("property: saddle structure for random valid parameters") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const double m = 1.2 + 3.0 * U(rng), p = 1.0 + (m - 1.0) * (0.05 + 0.9 * U(rng));
    const int N = 3;
    const double lo = -2.0, hi = critical_sigma(m, p);
    const auto pr = validate_regime(m, p, N, lo + (hi - lo) * (0.02 + 0.96 * U(rng)));
    const auto ex = derive_exponents(pr);
    const auto L = p1_linearization(pr, ex);
    const double ba = ex.beta / ex.alpha;
    CHECK(L.eigenvalues[0] == doctest::Approx(ba).epsilon(1e-10));
    CHECK(L.eigenvalues[1] == doctest::Approx(-(m + p - 2.0) * ba).epsilon(1e-10));
    CHECK(L.eigenvectors[1][1] == doctest::Approx((m + p - 1.0) * ba).epsilon(1e-10));
    CHECK(L.eigenvalues[0] * L.eigenvalues[1] < 0.0);
    // Eigen-equation M e = lambda e for both pairs.
    for (int q = 0; q < 2; ++q) {
      const auto& e = L.eigenvectors[q];
      for (int i = 0; i < 2; ++i) {
        const double Me = L.matrix[i][0] * e[0] + L.matrix[i][1] * e[1];
        CHECK(std::abs(Me - L.eigenvalues[q] * e[i]) < 1e-10 * (1.0 + std::abs(Me)));
      }
    }
  }
}

TEST_CASE("separatrix: tangent to (1, 8), decreasing for Y > 0, finite up to 1e3") {
  const auto sep = compute_separatrix(kFig, kEx);
  REQUIRE(sep.Y.size() > 10);
  const double slope = (sep.W[1] - sep.W[0]) / (sep.Y[1] - sep.Y[0]);
  CHECK(slope == doctest::Approx(8.0).epsilon(1e-3));
  for (std::size_t i = 1; i < sep.Y.size(); ++i)
    if (sep.Y[i - 1] > 0.0) CHECK(sep.W[i] <= sep.W[i - 1]);
  CHECK(sep.Y.back() == doctest::Approx(1e3));
  CHECK(std::isfinite(sep.W.back()));
  CHECK(std::isnan(separatrix_value(sep, 2e3)));
  // Along the curve the denominator of the slope equation stays positive.
  for (std::size_t i = 0; i < sep.Y.size(); ++i) {
    const double Y = sep.Y[i];
    CHECK(Y * Y + 2.0 * Y + sep.W[i] > 0.0);
  }
}

TEST_CASE("trajectory fates") {
  const auto sep = compute_separatrix(kFig, kEx);
  const double w1 = separatrix_value(sep, 4.0);
  const auto above = integrate_plane_trajectory({4.0, 3.0 * w1}, kFig, kEx);
  CHECK(above.fate == Fate::EntersQ3);
  CHECK(above.Y.back() <= -1e3);
  PlaneControls back;
  back.backward = true;
  CHECK(integrate_plane_trajectory({4.0, 3.0 * w1}, kFig, kEx, back).fate == Fate::ExitsQ2);
  const auto below = integrate_plane_trajectory({4.0, 0.5 * w1}, kFig, kEx);
  CHECK(below.fate != Fate::EntersQ3);
  // On the W = 0 axis between P1 and P0 the flow runs from P1 to P0.
  CHECK(integrate_plane_trajectory({-1.0, 0.0}, kFig, kEx).fate == Fate::ApproachesP0);
  CHECK(integrate_plane_trajectory({-1.0, 0.0}, kFig, kEx, back).fate == Fate::HitsP1);
  CHECK_THROWS_AS(integrate_plane_trajectory({0.0, -1.0}, kFig, kEx), Error);
}

TEST_CASE("f_* orbit satisfies the phase system") {
  const Profile f = find_selfsimilar_profile(kFig, kEx);
  const auto orbit = profile_orbit(f, kFig, kEx);
  REQUIRE(orbit.size() > 100);
  // Compare d/deta of (X, Y, Z) along the orbit with the right-hand sides, by central
  // differences in eta over the interior of the sampled range.
  double worst = 0.0;
  for (std::size_t i = orbit.size() / 10; i + orbit.size() / 10 < orbit.size(); ++i) {
    const auto& a = orbit[i - 1];
    const auto& b = orbit[i + 1];
    const double de = b.eta - a.eta;
    const auto r = psyst_rhs({orbit[i].X, orbit[i].Y, orbit[i].Z}, kFig, kEx);
    const double d[3] = {(b.X - a.X) / de, (b.Y - a.Y) / de, (b.Z - a.Z) / de};
    for (int q = 0; q < 3; ++q) worst = std::max(worst, std::abs(d[q] - r[q]) / (1.0 + std::abs(r[q])));
  }
  CHECK(worst < 1e-3);
}

TEST_CASE("annular profile orbit runs from Y = +inf towards Y = -inf") {
  std::vector<double> sg;
  for (int k = -16; k <= 8; ++k) sg.push_back(std::pow(10.0, k / 4.0));
  const Profile a = find_annular_subsolution(kFig, kEx, 1e-3, sg);
  const auto orbit = profile_orbit(a, kFig, kEx);
  REQUIRE(orbit.size() > 10);
  CHECK(orbit.front().Y > 10.0);
  CHECK(orbit.back().Y < -10.0);
}

TEST_CASE("figure-1 portrait") {
  const Portrait P = render_phase_portrait(kFig, kEx);
  CHECK(P.p1[0] == -2.0);
  CHECK(P.p1[1] == 0.0);
  int q3 = 0;
  for (Fate f : P.forward_fate) q3 += f == Fate::EntersQ3;
  CHECK(q3 >= 10);
  for (const auto& q : P.isocline) CHECK(std::abs(q[0] * q[0] + 2.0 * q[0] + q[1]) < 1e-12);
  PortraitOptions empty;
  empty.fan_size = 0;
  empty.below_size = 0;
  empty.axis_seeds = false;
  const Portrait E = render_phase_portrait(kFig, kEx, empty);
  CHECK(E.trajectories.empty());
  CHECK(!E.isocline.empty());
  CHECK(!E.separatrix.Y.empty());
  CHECK(std::string(fate_name(Fate::EntersQ3)) == "EntersQ3");
}
