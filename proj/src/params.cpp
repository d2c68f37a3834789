#include "growup/params.hpp"

#include "growup/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace growup {

double critical_sigma(double m, double p) { return -2.0 * (p - 1.0) / (m - 1.0); }

ProblemParams validate_regime(double m, double p, int N, double sigma, double A) {
  auto reject = [](const char* tag, const std::string& msg) { fail(ErrorKind::Regime, tag, msg); };
  if (!std::isfinite(m) || !(m > 1.0)) reject("m_le_1", "diffusion exponent must satisfy m > 1");
  if (!std::isfinite(p) || !(p > 1.0 && p < m))
    reject("p_out_of_range", "reaction exponent must satisfy 1 < p < m");
  if (N < 1) reject("dimension", "spatial dimension must be a positive integer");
  if (!std::isfinite(A) || !(A > 0.0)) reject("amplitude", "weight tail amplitude A must be positive");
  const double s_star = critical_sigma(m, p);
  const double lower = std::max(-static_cast<double>(N), -2.0);
  if (!std::isfinite(sigma)) reject("sigma_ge_sigma_star", "sigma must be finite");
  if (!(sigma < s_star)) {
    std::ostringstream os;
    os << "sigma = " << sigma << " violates sigma < sigma_* = " << s_star;
    reject("sigma_ge_sigma_star", os.str());
  }
  if (!(sigma > lower)) {
    std::ostringstream os;
    os << "sigma = " << sigma << " violates sigma > max{-N,-2} = " << lower;
    reject("sigma_le_lower_bound", os.str());
  }
  return ProblemParams(m, p, N, sigma, A);
}

Exponents derive_exponents(const ProblemParams& pr) {
  Exponents e{};
  e.L = pr.sigma() * (pr.m() - 1.0) + 2.0 * (pr.p() - 1.0);
  e.sigma_star = critical_sigma(pr.m(), pr.p());
  e.alpha = -(pr.sigma() + 2.0) / e.L;
  e.beta = -(pr.m() - pr.p()) / e.L;
  return e;
}

double scaling_factor(double c, const ProblemParams& pr) {
  if (!(c > 0.0)) fail(ErrorKind::Domain, "scaling_factor", "scaling constant must be positive");
  return std::pow(c, (pr.m() - 1.0) / (pr.m() - pr.p()));
}

std::string describe(const ProblemParams& pr) {
  std::ostringstream os;
  os.precision(17);
  os << "m=" << pr.m() << " p=" << pr.p() << " N=" << pr.N() << " sigma=" << pr.sigma() << " A=" << pr.A();
  return os.str();
}

}  // namespace growup
