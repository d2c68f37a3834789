#include "growup/weights.hpp"

#include "growup/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace growup {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double table_eval(const TabulatedWeight& w, double r) {
  const auto& x = w.r;
  if (r >= x.back()) return w.value.back() * std::pow((1.0 + r) / (1.0 + x.back()), w.sigma);
  auto it = std::upper_bound(x.begin(), x.end(), r);
  const std::size_t j = static_cast<std::size_t>(it - x.begin());
  const std::size_t i = j - 1;
  const double t = (r - x[i]) / (x[j] - x[i]);
  return (1.0 - t) * w.value[i] + t * w.value[j];
}

}  // namespace

double weight_eval(const WeightModel& model, double r) {
  if (r < 0.0) fail(ErrorKind::Domain, "negative_radius", "weight evaluated at negative radius");
  return std::visit(Overloaded{
                        [&](const RegularPower& w) { return std::pow(1.0 + r, w.sigma); },
                        [&](const SingularPower& w) {
                          if (r == 0.0)
                            fail(ErrorKind::Domain, "singular_origin", "singular weight evaluated at r = 0");
                          return w.A * std::pow(r, w.sigma);
                        },
                        [&](const ScaledRegular& w) { return w.c * std::pow(1.0 + r, w.sigma); },
                        [&](const PerturbedRegular& w) {
                          return w.A * std::pow(1.0 + r, w.sigma) * (1.0 + w.amplitude / (1.0 + r));
                        },
                        [&](const TabulatedWeight& w) { return table_eval(w, r); },
                    },
                    model);
}

double weight_sigma(const WeightModel& model) {
  return std::visit([](const auto& w) { return w.sigma; }, model);
}

double weight_tail_amplitude(const WeightModel& model) {
  return std::visit(Overloaded{
                        [](const RegularPower&) { return 1.0; },
                        [](const SingularPower& w) { return w.A; },
                        [](const ScaledRegular& w) { return w.c; },
                        [](const PerturbedRegular& w) { return w.A; },
                        [](const TabulatedWeight& w) { return w.A; },
                    },
                    model);
}

bool weight_is_singular(const WeightModel& model) { return std::holds_alternative<SingularPower>(model); }

std::string weight_name(const WeightModel& model) {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const RegularPower& w) { os << "regular(sigma=" << w.sigma << ")"; },
                 [&](const SingularPower& w) { os << "singular(A=" << w.A << ",sigma=" << w.sigma << ")"; },
                 [&](const ScaledRegular& w) { os << "scaled(c=" << w.c << ",sigma=" << w.sigma << ")"; },
                 [&](const PerturbedRegular& w) {
                   os << "perturbed(sigma=" << w.sigma << ",A=" << w.A << ",amplitude=" << w.amplitude << ")";
                 },
                 [&](const TabulatedWeight& w) {
                   os << "tabulated(nodes=" << w.r.size() << ",sigma=" << w.sigma << ",A=" << w.A << ")";
                 },
             },
             model);
  return os.str();
}

double rescaled_weight(const WeightModel& model, double y, double s, const Exponents& ex) {
  const double bs = ex.beta * s;
  return std::visit(Overloaded{
                        [&](const RegularPower& w) { return std::pow(std::exp(-bs) + y, w.sigma); },
                        [&](const SingularPower& w) {
                          if (y == 0.0)
                            fail(ErrorKind::Domain, "singular_origin", "singular weight evaluated at y = 0");
                          return w.A * std::pow(y, w.sigma);
                        },
                        [&](const ScaledRegular& w) { return w.c * std::pow(std::exp(-bs) + y, w.sigma); },
                        [&](const PerturbedRegular& w) {
                          const double e = std::exp(-bs);
                          return w.A * std::pow(e + y, w.sigma) * (1.0 + w.amplitude * e / (e + y));
                        },
                        [&](const TabulatedWeight& w) {
                          return std::exp(-w.sigma * bs) * table_eval(w, y * std::exp(bs));
                        },
                    },
                    model);
}

TabulatedWeight load_tabulated_weight(const std::string& path, double sigma, double A) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "weight_table", "cannot open weight table " + path);
  TabulatedWeight w{{}, {}, sigma, A};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream is(line);
    double r, v;
    if (!(is >> r >> v)) {
      if (w.r.empty()) continue;  // header row
      fail(ErrorKind::Config, "weight_table", path + ":" + std::to_string(lineno) + ": expected two numbers");
    }
    w.r.push_back(r);
    w.value.push_back(v);
  }
  if (w.r.size() < 2) fail(ErrorKind::Config, "weight_table", "weight table needs at least two rows");
  if (w.r.front() != 0.0) fail(ErrorKind::Config, "weight_table", "weight table must start at r = 0");
  for (std::size_t i = 0; i < w.r.size(); ++i) {
    if (!(w.value[i] > 0.0)) fail(ErrorKind::Config, "weight_table", "weight values must be positive");
    if (i > 0 && !(w.r[i] > w.r[i - 1]))
      fail(ErrorKind::Config, "weight_table", "weight table radii must be strictly increasing");
  }
  const double tail = w.value.back() * std::pow(1.0 + w.r.back(), -sigma);
  if (!(A > 0.0) || std::abs(tail - A) > 0.01 * A)
    fail(ErrorKind::Config, "weight_table", "last table node does not match the declared tail amplitude");
  return w;
}

double comparison_radius(double c, double sigma) {
  if (!(c > 0.0 && c < 1.0) || !(sigma < 0.0))
    fail(ErrorKind::Domain, "comparison_radius", "K(c) needs c in (0,1) and sigma < 0");
  return 1.0 / (std::pow(c, 1.0 / sigma) - 1.0);
}

std::vector<double> default_equivalence_grid(std::size_t count, double r_max) {
  std::vector<double> g;
  if (count == 0) return g;
  g.reserve(count);
  g.push_back(0.0);
  const double lo = std::log(1e-6), hi = std::log(r_max);
  for (std::size_t i = 0; i + 1 < count; ++i) {
    const double t = count > 2 ? static_cast<double>(i) / static_cast<double>(count - 2) : 1.0;
    g.push_back(std::exp(lo + t * (hi - lo)));
  }
  return g;
}

WeightEquivalence equivalence_constants(const WeightModel& model, std::span<const double> r_grid) {
  const double s = weight_sigma(model);
  const bool singular = weight_is_singular(model);
  double c1 = weight_tail_amplitude(model), c2 = c1;
  for (double r : r_grid) {
    if (singular && r == 0.0) continue;
    const double q = weight_eval(model, r) / std::pow(1.0 + r, s);
    c1 = std::min(c1, q);
    c2 = std::max(c2, q);
  }
  if (singular) c2 = std::numeric_limits<double>::infinity();
  return {c1, c2};
}

double tail_deviation(const WeightModel& model, double r) {
  const double A = weight_tail_amplitude(model);
  return std::abs(std::pow(1.0 + r, -weight_sigma(model)) * weight_eval(model, r) - A) / A;
}

VStar::VStar(Profile fstar, double A, const ProblemParams& pr, const Exponents& ex)
    : fstar_(std::move(fstar)),
      A_(A),
      lambda_(scaling_factor(A, pr)),
      amp_(std::pow(A, 1.0 / (pr.m() - pr.p()))),
      alpha_(ex.alpha),
      beta_(ex.beta) {
  if (fstar_.kind != ProfileKind::SelfSimilarSolution)
    fail(ErrorKind::Domain, "vstar_profile", "V_* needs the centred self-similar profile");
  fA_ = scale_profile(fstar_, A, pr, ex);
}

double VStar::operator()(double r, double t) const {
  if (!(t > 0.0)) return 0.0;
  const double T = lambda_ * t;
  return amp_ * std::pow(T, alpha_) * evaluate_profile(fstar_, r * std::pow(T, -beta_));
}

double VStar::fA(double y) const { return evaluate_profile(fA_, y); }

VStar build_Vstar(const Profile& fstar, double A, const ProblemParams& pr, const Exponents& ex) {
  return VStar(fstar, A, pr, ex);
}

SupersolutionSchedule choose_tau_infinity(double R0, double u0_max, const Profile& profile,
                                          const Exponents& ex, double tol) {
  if (!(R0 > 0.0) || !(u0_max > 0.0))
    fail(ErrorKind::Domain, "tau_infinity", "need R0 > 0 and u0_max > 0");
  if (profile.kind != ProfileKind::SelfSimilarSolution)
    fail(ErrorKind::Domain, "tau_infinity", "supersolution needs a centred profile");
  const double xi0 = profile.support_hi();
  // Both conditions are monotone in tau: the amplitude factor grows and the
  // profile argument shrinks toward the maximum at the origin.
  auto ok = [&](double tau) {
    const double U = std::pow(tau, ex.alpha) * evaluate_profile(profile, R0 * std::pow(tau, -ex.beta));
    return U >= u0_max && std::pow(tau, ex.beta) * xi0 > 2.0 * R0;
  };
  double lo = 1.0, hi = 1.0;
  if (ok(1.0)) {
    while (ok(lo)) {
      hi = lo;
      lo /= 1.1;
      if (lo < 1e-300) return {hi, R0, u0_max};
    }
  } else {
    while (!ok(hi)) {
      lo = hi;
      hi *= 1.1;
      if (hi > 1e300) fail(ErrorKind::Numerical, "tau_infinity", "no admissible delay found");
    }
  }
  while (hi - lo > tol * hi) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? hi : lo) = mid;
  }
  return {hi, R0, u0_max};
}

SubsolutionSchedule choose_lambda_star(double h, double H, double R1, const ProblemParams& pr,
                                       double weight_factor) {
  if (!(h > 0.0) || !(H > 0.0) || !(R1 > 0.0) || !(weight_factor > 0.0))
    fail(ErrorKind::Domain, "lambda_star", "need h, H, R1 and the weight factor positive");
  const double m = pr.m(), p = pr.p();
  const double first = std::pow(h / H, m - 1.0);
  const double second = weight_factor * std::pow((1.0 + R1) / R1, pr.sigma() * (m - 1.0) / (m - p));
  SubsolutionSchedule s;
  s.lambda_star = std::min(first, second);
  s.h = h;
  s.H = H;
  s.R1 = R1;
  if (!(s.lambda_star > 0.0 && s.lambda_star < 1.0))
    fail(ErrorKind::Numerical, "lambda_out_of_range", "lambda_* must lie in (0,1)");
  return s;
}

}  // namespace growup
