#include <doctest.h>

#include "growup/error.hpp"
#include "growup/weights.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

using namespace growup;

namespace {

const ProblemParams kFig = validate_regime(3, 2, 4, -1.5);
const Exponents kEx = derive_exponents(kFig);

const Profile& fstar() {
  static const Profile f = find_selfsimilar_profile(kFig, kEx);
  return f;
}

}  // namespace

TEST_CASE("weight evaluation") {
  CHECK(weight_eval(RegularPower{-1.5}, 0.0) == 1.0);
  CHECK(weight_eval(ScaledRegular{2.0, -1.0}, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(weight_eval(SingularPower{1.0, -1.5}, 0.0), Error);
  CHECK_THROWS_AS(weight_eval(RegularPower{-1.5}, -1.0), Error);
  for (double r : {1e-3, 0.1, 1.0, 10.0, 1e3})
    CHECK(weight_eval(RegularPower{-1.5}, r) < weight_eval(SingularPower{1.0, -1.5}, r));
  CHECK(weight_is_singular(SingularPower{1.0, -1.5}));
  CHECK_FALSE(weight_is_singular(PerturbedRegular{-1.5, 1.0, 0.5}));
}

TEST_CASE("tail law of every built-in weight") {
  TabulatedWeight tab{{0.0, 1.0, 100.0}, {1.3, 0.5, std::pow(101.0, -1.5)}, -1.5, 1.0};
  const WeightModel models[] = {RegularPower{-1.5}, SingularPower{2.0, -1.5}, ScaledRegular{3.0, -1.2},
                                PerturbedRegular{-1.5, 1.0, 0.5}, tab};
  for (const auto& w : models) {
    CHECK(tail_deviation(w, 1e4) < 0.01);
    CHECK(tail_deviation(w, 1e3) < 0.01);
  }
}

TEST_CASE("comparison radius K(c)") {
  CHECK(comparison_radius(0.5, -1.5) == doctest::Approx(1.0 / (std::pow(2.0, 2.0 / 3.0) - 1.0)).epsilon(1e-14));
  CHECK(comparison_radius(0.5, -1.5) == doctest::Approx(1.7024).epsilon(1e-4));
  CHECK(comparison_radius(0.999999, -1.5) > 1e5);
  CHECK_THROWS_AS(comparison_radius(1.0, -1.5), Error);
  CHECK_THROWS_AS(comparison_radius(0.0, -1.5), Error);
  const double K = comparison_radius(0.5, -1.5);
  CHECK(0.5 * std::pow(K * (1 + 1e-9), -1.5) <= std::pow(1 + K * (1 + 1e-9), -1.5));
  CHECK(0.5 * std::pow(K * (1 - 1e-3), -1.5) > std::pow(1 + K * (1 - 1e-3), -1.5));
}

TEST_CASE("property: c r^sigma <= (1+r)^sigma exactly beyond K(c)") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const double c = 0.02 + 0.96 * U(rng), sigma = -0.05 - 1.9 * U(rng);
    const double K = comparison_radius(c, sigma);
    const double r = K * (1.0 + 1e-9 + 10.0 * U(rng));
    CHECK(c * std::pow(r, sigma) <= std::pow(1.0 + r, sigma) * (1.0 + 1e-12));
    const double below = K * (1.0 - 1e-3);
    CHECK(c * std::pow(below, sigma) > std::pow(1.0 + below, sigma));
  }
}

TEST_CASE("equivalence constants") {
  const auto grid = default_equivalence_grid();
  CHECK(grid.size() == 10000);
  CHECK(grid.front() == 0.0);
  CHECK(grid.back() == doctest::Approx(1e4));
  const auto reg = equivalence_constants(RegularPower{-1.5}, grid);
  CHECK(reg.c1 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(reg.c2 == doctest::Approx(1.0).epsilon(1e-14));
  const auto sc = equivalence_constants(ScaledRegular{3.0, -1.5}, grid);
  CHECK(sc.c1 == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(sc.c2 == doctest::Approx(3.0).epsilon(1e-14));
  const WeightModel pert = PerturbedRegular{-1.5, 1.0, 0.5};
  const auto pe = equivalence_constants(pert, grid);
  CHECK(pe.c1 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(pe.c2 == doctest::Approx(1.5).epsilon(1e-14));
  for (double r : grid) {
    const double base = std::pow(1.0 + r, -1.5);
    CHECK(pe.c1 * base <= weight_eval(pert, r) * (1 + 1e-14));
    CHECK(weight_eval(pert, r) <= pe.c2 * base * (1 + 1e-14));
  }
  CHECK(std::isinf(equivalence_constants(SingularPower{1.0, -1.5}, grid).c2));
}

TEST_CASE("rescaled weight") {
  CHECK(rescaled_weight(RegularPower{-1.5}, 0.3, 2.0, kEx) ==
        doctest::Approx(std::pow(std::exp(-2.0) + 0.3, -1.5)).epsilon(1e-14));
  // Regular coefficient tends to |y|^sigma.
  for (double y : {0.05, 0.5, 2.0}) {
    const double gap = std::abs(rescaled_weight(RegularPower{-1.5}, y, 10.0, kEx) - std::pow(y, -1.5));
    CHECK(gap <= 1.5 * std::exp(-10.0) / y * std::pow(y, -1.5));
  }
  // General form equals e^{-sigma beta s} rho(y e^{beta s}).
  const WeightModel pert = PerturbedRegular{-1.5, 1.0, 0.5};
  for (double s : {0.0, 1.0, 3.0})
    for (double y : {0.01, 0.2, 1.5})
      CHECK(rescaled_weight(pert, y, s, kEx) ==
            doctest::Approx(std::exp(1.5 * s) * weight_eval(pert, y * std::exp(s))).epsilon(1e-12));
}

TEST_CASE("tabulated weight loader") {
  const std::string path = "weights_table_test.csv";
  {
    std::ofstream out(path);
    out.precision(17);
    out << "r,value\n# comment\n0,1\n1," << std::pow(2.0, -1.5) << "\n100," << std::pow(101.0, -1.5) << "\n";
  }
  const auto w = load_tabulated_weight(path, -1.5, 1.0);
  CHECK(w.r.size() == 3);
  CHECK(weight_eval(w, 0.5) == doctest::Approx(0.5 * (1.0 + std::pow(2.0, -1.5))));
  CHECK(weight_eval(w, 1000.0) == doctest::Approx(std::pow(1001.0, -1.5)).epsilon(1e-12));
  CHECK_THROWS_AS(load_tabulated_weight(path, -1.5, 2.0), Error);
  {
    std::ofstream out(path);
    out << "0,1\n0,2\n";
  }
  CHECK_THROWS_AS(load_tabulated_weight(path, -1.5, 1.0), Error);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_tabulated_weight("no_such_table.csv", -1.5, 1.0), Error);
}

TEST_CASE("V_*: unit amplitude, self-similar scaling and support") {
  const VStar v1(fstar(), 1.0, kFig, kEx);
  for (double y : {0.0, 0.02, 0.05, 0.07}) CHECK(v1.fA(y) == doctest::Approx(evaluate_profile(fstar(), y)));
  CHECK(v1(0.01, 2.0) == doctest::Approx(std::pow(2.0, 0.5) * evaluate_profile(fstar(), 0.005)).epsilon(1e-12));
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const double A = 0.25 * std::pow(16.0, U(rng));
    const VStar v(fstar(), A, kFig, kEx);
    const double t = 0.1 + 10.0 * U(rng), x = 0.3 * U(rng) * std::pow(t, kEx.beta);
    const double lhs = v(x, t), rhs = std::pow(t, kEx.alpha) * v.fA(x * std::pow(t, -kEx.beta));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
    // Amplitude and argument rescaling of f_A.
    const double y = 0.1 * U(rng);
    const double lam = scaling_factor(A, kFig);
    const double direct = std::pow(A, (1.0 + kEx.alpha * 2.0) / 1.0) *
                          evaluate_profile(fstar(), y * std::pow(A, -kEx.beta * 2.0));
    CHECK(std::abs(v.fA(y) - direct) <= 1e-12 * std::max(1.0, direct) + 1e-9 * lam);
    const double edge = fstar().support_hi() * std::pow(lam * t, kEx.beta);
    CHECK(v(edge * 1.001, t) == 0.0);
  }
}

TEST_CASE("supersolution delay") {
  const Profile& f = fstar();
  const double xi0 = f.support_hi();
  // Tiny data: the support condition dominates.
  const auto s = choose_tau_infinity(1e-3, 1e-6, f, kEx);
  CHECK(s.tau_inf == doctest::Approx(2e-3 / xi0).epsilon(1e-5));
  // Both conditions hold at the returned delay; doubling the height never lowers it.
  double prev = 0.0;
  for (double u0 : {0.05, 0.1, 0.2, 0.4, 0.8, 1.6}) {
    const auto q = choose_tau_infinity(2.0, u0, f, kEx);
    CHECK(std::pow(q.tau_inf, 0.5) * evaluate_profile(f, 2.0 / q.tau_inf) >= u0);
    CHECK(q.tau_inf * xi0 > 4.0);
    CHECK(q.tau_inf >= prev);
    prev = q.tau_inf;
  }
  CHECK_THROWS_AS(choose_tau_infinity(0.0, 1.0, f, kEx), Error);
}

TEST_CASE("lambda_*") {
  const auto s = choose_lambda_star(1.0, 2.0, 1.0, kFig);
  CHECK(s.lambda_star == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(choose_lambda_star(1e-6, 2.0, 1.0, kFig).lambda_star < 1e-12);
  // The second branch is below one for every R1 > 0.
  for (double R1 : {1e-3, 1.0, 1e3}) CHECK(choose_lambda_star(5.0, 2.0, R1, kFig).lambda_star < 1.0);
  CHECK_THROWS_AS(choose_lambda_star(0.0, 2.0, 1.0, kFig), Error);
}
