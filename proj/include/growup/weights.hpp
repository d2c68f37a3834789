#pragma once

#include "growup/params.hpp"
#include "growup/profile.hpp"

#include <span>
#include <string>
#include <variant>
#include <vector>

namespace growup {

/// (1+r)^σ
struct RegularPower {
  double sigma;
};
/// A·r^σ; singular at the origin.
struct SingularPower {
  double A;
  double sigma;
};
/// c·(1+r)^σ
struct ScaledRegular {
  double c;
  double sigma;
};
/// A·(1+r)^σ·(1 + amplitude/(1+r)): a bounded modulation that dies out at infinity.
struct PerturbedRegular {
  double sigma;
  double A;
  double amplitude = 0.5;
};
/// Piecewise-linear table; beyond the last node the value continues as
/// v_last·((1+r)/(1+r_last))^σ.
struct TabulatedWeight {
  std::vector<double> r;
  std::vector<double> value;
  double sigma;
  double A;
};

using WeightModel = std::variant<RegularPower, SingularPower, ScaledRegular, PerturbedRegular, TabulatedWeight>;

/// Throws Error{Domain, "singular_origin"} for SingularPower at r = 0 and
/// Error{Domain, "negative_radius"} for r < 0.
double weight_eval(const WeightModel& model, double r);
double weight_sigma(const WeightModel& model);
/// lim (1+r)^{−σ}ϱ(r) as r → ∞.
double weight_tail_amplitude(const WeightModel& model);
bool weight_is_singular(const WeightModel& model);
std::string weight_name(const WeightModel& model);

/// Source coefficient of the rescaled equation, e^{−σβs}·ϱ(y·e^{βs}); equals
/// (e^{−βs}+y)^σ for RegularPower and A·y^σ for SingularPower.
double rescaled_weight(const WeightModel& model, double y, double s, const Exponents& ex);

/// Two-column CSV (r, value) with optional header and '#' comments. The table must be
/// strictly increasing in r, start at r = 0, stay positive, and its last node must
/// match the declared tail amplitude within 1%.
TabulatedWeight load_tabulated_weight(const std::string& path, double sigma, double A);

/// K(c) = 1/(c^{1/σ} − 1); c·r^σ ≤ (1+r)^σ exactly when r ≥ K(c).
/// Throws Error{Domain, "comparison_radius"} unless c ∈ (0,1) and σ < 0.
double comparison_radius(double c, double sigma);

struct WeightEquivalence {
  double c1;
  double c2;
};

/// {0} ∪ log-spaced points on [1e−6, r_max], `count` points in total.
std::vector<double> default_equivalence_grid(std::size_t count = 10000, double r_max = 1e4);

/// Extremes of ϱ(r)/(1+r)^σ over the grid, widened by the tail amplitude.
/// Nodes at r = 0 are skipped for singular models (c2 is then +∞ in the limit).
WeightEquivalence equivalence_constants(const WeightModel& model, std::span<const double> r_grid);

/// |(1+r)^{−σ}ϱ(r) − A| / A.
double tail_deviation(const WeightModel& model, double r);

/// V_*(x,t) = A^{1/(m−p)}·U_*(x, A^{(m−1)/(m−p)}t) and its fixed rescaled profile f_A.
class VStar {
 public:
  VStar(Profile fstar, double A, const ProblemParams& pr, const Exponents& ex);

  double operator()(double r, double t) const;
  double fA(double y) const;
  const Profile& fA_profile() const { return fA_; }
  const Profile& fstar() const { return fstar_; }
  double amplitude() const { return A_; }
  double time_factor() const { return lambda_; }

 private:
  Profile fstar_;
  Profile fA_;
  double A_;
  double lambda_;  // A^{(m−1)/(m−p)}
  double amp_;     // A^{1/(m−p)}
  double alpha_;
  double beta_;
};

VStar build_Vstar(const Profile& fstar, double A, const ProblemParams& pr, const Exponents& ex);

struct SupersolutionSchedule {
  double tau_inf;
  double R0;
  double u0_max;
};

/// Smallest τ (geometric search by factor 1.1, then bisection to relative `tol`) with
/// τ^α·f(R0·τ^{−β}) ≥ u0_max and τ^β·ξ0 > 2R0, for a centred profile f.
SupersolutionSchedule choose_tau_infinity(double R0, double u0_max, const Profile& profile,
                                          const Exponents& ex, double tol = 1e-6);

struct SubsolutionSchedule {
  double lambda_star = 0.0;
  double h = 0.0;
  double H = 0.0;
  double t0 = 0.0;
  double R1 = 0.0;
  double R2 = 0.0;
  /// Time shift d with W_*(x, t − d) ≤ u(x, t) for t ≥ t0; d = t0 − 1/λ_*.
  double shift() const { return t0 - 1.0 / lambda_star; }
};

/// λ_* = min{(h/H)^{m−1}, c·((1+R1)/R1)^{σ(m−1)/(m−p)}}; `weight_factor` is c
/// (λ_c of a lower weight constant, 1 for the regular weight).
/// Throws Error{Numerical, "lambda_out_of_range"} if the result leaves (0,1).
SubsolutionSchedule choose_lambda_star(double h, double H, double R1, const ProblemParams& pr,
                                       double weight_factor = 1.0);

}  // namespace growup
