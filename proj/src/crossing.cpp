#include "somf/crossing.hpp"

#include <gsl/gsl_sf_gamma.h>
#include <gsl/gsl_sf_hyperg.h>

#include <cmath>
#include <random>

#include "somf/eval.hpp"
#include "somf/forms.hpp"

namespace somf {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr cplx I{0.0, 1.0};

const Form& kz_form() {
  static const Form f = builtin_form("kz");
  return f;
}

const Form& eta4_form() {
  static const Form f = builtin_form("eta4");
  return f;
}

// theta_2 and theta_3 at q = e^{-pi r}.
std::pair<double, double> thetas(double r, std::size_t terms) {
  double t2 = 0.0, t3 = 1.0;
  const std::size_t cap = terms ? terms : 100000;
  for (std::size_t n = 0; n < cap; ++n) {
    const double a = std::exp(-kPi * r * (double(n) + 0.5) * (double(n) + 0.5));
    const double b = n ? std::exp(-kPi * r * double(n) * double(n)) : 0.0;
    t2 += 2.0 * a;
    t3 += 2.0 * b;
    if (!terms && a < 1e-18 * t2 && (n == 0 || b < 1e-18 * t3)) break;
  }
  return {t2, t3};
}

// Horizontal crossing probability as a function of lambda <= 1/2.
double cardy_lambda(double lam) {
  const double c = 3.0 * gsl_sf_gamma(2.0 / 3.0) / std::pow(gsl_sf_gamma(1.0 / 3.0), 2);
  return c * std::cbrt(lam) * gsl_sf_hyperg_2F1(1.0 / 3.0, 2.0 / 3.0, 4.0 / 3.0, lam);
}

// Horizontal-without-vertical probability for lambda <= 1/2:
// lambda / (Gamma(1/3) Gamma(2/3)) * 3F2(1, 1, 4/3; 2, 5/3; lambda).
double exclusive_lambda(double lam) {
  double term = 1.0, sum = 1.0;
  for (int n = 0; n < 2000; ++n) {
    // ratio of consecutive terms of sum (4/3)_n / ((n+1) (5/3)_n) lambda^n
    term *= (double(n) + 4.0 / 3.0) / (double(n) + 5.0 / 3.0) * (double(n) + 1.0) / (double(n) + 2.0) * lam;
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return lam * std::sqrt(3.0) / (2.0 * kPi) * sum;
}

double oracle_value(CrossingOracle o, double r) {
  return o == CrossingOracle::cardy ? cardy_oracle(r) : exclusive_crossing_oracle(r);
}

}  // namespace

FracQSeries kz_integrand(std::size_t order) {
  if (order < 1) throw DomainError("order must be at least 1");
  return eta_quotient({{Rational(1, 2), 8}, {2, 8}, {1, -12}}, order);
}

cplx kz_K(cplx z, std::size_t order) {
  require_upper(z);
  if (z.imag() < 0.05) throw DomainError("K is evaluated for Im z >= 0.05");
  cplx e4, integral;
  if (order == 0) {
    e4 = eval_form(eta4_form(), z).value;
    integral = eval_form(kz_form(), z, 1).value;
  } else {
    e4 = eval_qexp(*eta4_form().series(order), z).value;
    integral = eval_qexp(antiderivative(kz_integrand(order), 1), z).value;
  }
  return -16.0 * kPi * I / std::sqrt(3.0) * e4 * integral;
}

VerificationReport kz_automorphy_residual(const Mat2& g, const std::vector<cplx>& samples, double tol,
                                          std::size_t order) {
  Stopwatch sw;
  if (!theta_context().contains(g)) throw DomainError(to_string(g) + " is not in the theta group");
  std::vector<cplx> rho;
  double e4_max = 0.0;
  std::vector<std::pair<cplx, cplx>> vals;
  for (cplx z : samples) {
    const cplx e4 = order ? eval_qexp(*eta4_form().series(order), z).value : eval_form(eta4_form(), z).value;
    const cplx lhs = kz_K(g.apply(z), order) * automorphy_factor(g, z, 2) - kz_K(z, order);
    e4_max = std::max(e4_max, std::abs(e4));
    vals.push_back({lhs, e4});
  }
  for (const auto& [lhs, e4] : vals)
    if (std::abs(e4) > 1e-12 * e4_max) rho.push_back(lhs / e4);
  if (rho.empty()) throw DomainError("every sample has eta^4 near zero");
  cplx mean = 0.0;
  for (auto v : rho) mean += v;
  mean /= double(rho.size());
  double spread = 0.0;
  for (auto v : rho) spread = std::max(spread, std::abs(v - mean));
  auto r = make_report("K slashed minus K lies in the span of eta^4", spread / std::max(1.0, std::abs(mean)), tol,
                       {{"gamma", to_string(g)},
                        {"samples", std::to_string(rho.size())},
                        {"excluded", std::to_string(samples.size() - rho.size())},
                        {"mean", format_param(mean)},
                        {"order", std::to_string(order)}});
  r.seconds = sw.seconds();
  return r;
}

std::vector<cplx> crossing_samples(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> x(-0.5, 0.5), y(0.5, 1.5);
  std::vector<cplx> out;
  for (std::size_t j = 0; j < count; ++j) {
    const double a = x(rng);
    out.push_back({a, y(rng)});
  }
  return out;
}

double modular_lambda(double r, std::size_t terms) {
  if (!(r > 0.0)) throw DomainError("aspect ratio must be positive");
  const auto [t2, t3] = thetas(r, terms);
  return std::pow(t2 / t3, 4);
}

double cardy_oracle(double r, std::size_t terms) {
  if (!(r > 0.0)) throw DomainError("aspect ratio must be positive");
  if (r == 1.0) return 0.5;
  // lambda(1/r) = 1 - lambda(r); evaluate on the side with lambda <= 1/2.
  if (r < 1.0) return 1.0 - cardy_lambda(modular_lambda(1.0 / r, terms));
  return cardy_lambda(modular_lambda(r, terms));
}

double exclusive_crossing_oracle(double r) {
  if (!(r > 0.0)) throw DomainError("aspect ratio must be positive");
  if (r >= 1.0) return exclusive_lambda(modular_lambda(r));
  // Both-direction crossing is symmetric under r -> 1/r and horizontal crossing is complementary.
  return 2.0 * cardy_oracle(r) - 1.0 + exclusive_lambda(modular_lambda(1.0 / r));
}

double oracle_derivative(CrossingOracle oracle, double r) {
  const double h = 1e-2 * r;
  auto d = [&](double t) { return (oracle_value(oracle, r + t) - oracle_value(oracle, r - t)) / (2.0 * t); };
  const double a0 = d(h), a1 = d(h / 2), a2 = d(h / 4);
  const double b1 = (4.0 * a1 - a0) / 3.0, b2 = (4.0 * a2 - a1) / 3.0;
  return (16.0 * b2 - b1) / 15.0;
}

CrossingCurve crossing_curve(double r_min, double r_max, std::size_t steps, CrossingOracle oracle,
                             std::size_t order) {
  if (!(r_min >= 0.2 && r_min < r_max && r_max <= 5.0)) throw DomainError("need 0.2 <= r_min < r_max <= 5");
  if (steps < 2) throw DomainError("degenerate grid: need at least two points");
  CrossingCurve c;
  c.oracle = oracle;
  const double span = r_max - r_min;
  for (std::size_t j = 0; j < steps; ++j) {
    double r = r_min + span * double(j) / double(steps - 1);
    if (std::abs(r - 1.0) < 1e-12) r = 1.0;
    c.r.push_back(r);
  }
  auto K = [&](double r) { return kz_K({0.0, r}, order); };
  for (double r : c.r) c.K.push_back(K(r));

  // Least-squares constant with K ~ c P'.
  cplx num = 0.0;
  double den = 0.0, kmax = 0.0;
  std::vector<double> dP;
  for (std::size_t j = 0; j < steps; ++j) {
    dP.push_back(oracle_derivative(oracle, c.r[j]));
    num += c.K[j] * dP[j];
    den += dP[j] * dP[j];
    kmax = std::max(kmax, std::abs(c.K[j]));
  }
  c.fitted_constant = num / den;
  for (std::size_t j = 0; j < steps; ++j)
    c.proportionality = std::max(c.proportionality, std::abs(c.K[j] - c.fitted_constant * dP[j]) / kmax);

  // Real derivative identified as K / c, integrated with four Simpson panels per grid cell.
  auto deriv = [&](double r) { return (K(r) / c.fitted_constant).real(); };
  auto simpson = [&](double a, double b) {
    const int panels = 4;
    const double h = (b - a) / panels;
    double s = deriv(a) + deriv(b);
    for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * deriv(a + h * i);
    return s * h / 3.0;
  };
  auto cell = [&](double a, double b) {
    double s = 0.0;
    const int sub = 4;
    for (int i = 0; i < sub; ++i) s += simpson(a + (b - a) * i / sub, a + (b - a) * (i + 1) / sub);
    return s;
  };
  std::vector<double> A(steps, 0.0);
  for (std::size_t j = 1; j < steps; ++j) A[j] = A[j - 1] + cell(c.r[j - 1], c.r[j]);
  // Antiderivative at 1 from the nearest grid point at or below it.
  double A1;
  std::size_t below = 0;
  for (std::size_t j = 0; j < steps; ++j)
    if (c.r[j] <= 1.0) below = j;
  if (1.0 <= r_min)
    A1 = -cell(1.0, r_min);
  else
    A1 = A[below] + (c.r[below] == 1.0 ? 0.0 : cell(c.r[below], 1.0));
  const double anchor = oracle == CrossingOracle::cardy ? 0.5 : exclusive_crossing_oracle(1.0);
  c.monotone = true;
  for (std::size_t j = 0; j < steps; ++j) {
    const double P = c.r[j] == 1.0 ? anchor : anchor + (A[j] - A1);
    c.P.push_back(P);
    c.P_oracle.push_back(oracle_value(oracle, c.r[j]));
    c.deviation.push_back(std::abs(P - c.P_oracle.back()));
    c.max_deviation = std::max(c.max_deviation, c.deviation.back());
    if (j > 0) {
      const double d0 = c.P[j] - c.P[j - 1];
      if (j > 1 && d0 * (c.P[j - 1] - c.P[j - 2]) < 0.0) c.monotone = false;
    }
  }
  return c;
}

}  // namespace somf
