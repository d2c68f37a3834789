#pragma once

#include <string>

namespace growup {

/// Validated problem parameters for u_t = Δu^m + ϱ(x)u^p in the grow-up
/// regime. Only constructible through validate_regime().
class ProblemParams {
 public:
  double m() const noexcept { return m_; }
  double p() const noexcept { return p_; }
  int N() const noexcept { return N_; }
  double dim() const noexcept { return static_cast<double>(N_); }
  double sigma() const noexcept { return sigma_; }
  double A() const noexcept { return A_; }

  friend ProblemParams validate_regime(double m, double p, int N, double sigma, double A);

 private:
  ProblemParams(double m, double p, int N, double sigma, double A)
      : m_(m), p_(p), N_(N), sigma_(sigma), A_(A) {}

  double m_;
  double p_;
  int N_;
  double sigma_;
  double A_;
};

struct Exponents {
  double L;           // σ(m−1) + 2(p−1), negative in the regime
  double sigma_star;  // −2(p−1)/(m−1)
  double alpha;       // amplitude grow-up rate
  double beta;        // support spreading rate
};

/// Critical weight exponent −2(p−1)/(m−1).
double critical_sigma(double m, double p);

/// Throws Error{Regime} with a tag naming the first violated inequality:
/// "m_le_1", "p_out_of_range", "dimension", "amplitude", "sigma_ge_sigma_star",
/// "sigma_le_lower_bound".
ProblemParams validate_regime(double m, double p, int N, double sigma, double A = 1.0);

Exponents derive_exponents(const ProblemParams& params);

/// λ_c = c^{(m−1)/(m−p)}: the time factor mapping solutions of the unit-weight
/// singular equation onto solutions with weight c|x|^σ.
double scaling_factor(double c, const ProblemParams& params);

std::string describe(const ProblemParams& params);

}  // namespace growup
