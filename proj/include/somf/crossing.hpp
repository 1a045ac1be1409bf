#pragma once

#include <cstdint>
#include <vector>

#include "somf/qseries.hpp"
#include "somf/report.hpp"

namespace somf {

/// eta(z/2)^8 eta(2z)^8 eta(z)^-12, exponents 1/3 + n/2.
FracQSeries kz_integrand(std::size_t order);

/// K(z) = (-16 pi i / sqrt 3) eta(z)^4 int_{i inf}^z of the integrand.
/// order = 0 grows both expansions as needed; otherwise the given orders are used and
/// InsufficientOrder is thrown when they cannot reach full precision.
cplx kz_K(cplx z, std::size_t order = 0);

/// rho(z) = (K(g z) j(g, z)^-2 - K(z)) / eta(z)^4 should be constant; the residual is its
/// spread about the mean, relative to max(1, |mean|).
VerificationReport kz_automorphy_residual(const Mat2& g, const std::vector<cplx>& samples, double tol = 1e-5,
                                          std::size_t order = 0);

/// Deterministic sample points with 0.5 <= y <= 1.5 and |x| <= 0.5.
std::vector<cplx> crossing_samples(std::size_t count, std::uint64_t seed);

/// Modular lambda (theta_2 / theta_3)^4 at i r; terms = 0 sums until the terms vanish.
double modular_lambda(double r, std::size_t terms = 0);

/// Horizontal crossing probability of an r-by-1 rectangle (hypergeometric form in lambda).
double cardy_oracle(double r, std::size_t terms = 0);

/// Probability of a horizontal crossing with no vertical one, from the closed form for
/// crossings in both directions.
double exclusive_crossing_oracle(double r);

enum class CrossingOracle { cardy, exclusive };

struct CrossingCurve {
  CrossingOracle oracle = CrossingOracle::cardy;
  std::vector<double> r;
  std::vector<cplx> K;
  std::vector<double> P;            // reconstructed
  std::vector<double> P_oracle;
  std::vector<double> deviation;    // |P - P_oracle|
  cplx fitted_constant;             // K(ir) ~ c dP/dr
  double proportionality = 0.0;     // max |K - c P'| / max |K|
  double max_deviation = 0.0;
  bool monotone = false;
};

/// K(ir) on an evenly spaced grid, a fitted constant against the oracle derivative, and
/// P(r) = P(1) + int_1^r K(it)/c dt by composite Simpson; P(1) = 1/2 for the Cardy oracle.
CrossingCurve crossing_curve(double r_min, double r_max, std::size_t steps,
                             CrossingOracle oracle = CrossingOracle::cardy, std::size_t order = 0);

/// Oracle derivative dP/dr by Richardson-extrapolated central differences.
double oracle_derivative(CrossingOracle oracle, double r);

}  // namespace somf
