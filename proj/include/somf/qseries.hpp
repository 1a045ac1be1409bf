#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "somf/core.hpp"

namespace somf {

using Rational = boost::rational<std::int64_t>;

struct EtaFactor {
  Rational scale;  // eta(scale * z)
  int exponent;
};

/// Truncated expansion sum_n c_n q^{(lead + n*step)/den}, q = e(z).
class FracQSeries {
 public:
  FracQSeries() = default;
  FracQSeries(std::int64_t den, std::int64_t lead, std::int64_t step, std::vector<cplx> coeffs);

  std::int64_t den() const { return den_; }
  std::int64_t lead() const { return lead_; }
  std::int64_t step() const { return step_; }
  const std::vector<cplx>& coeffs() const { return coeffs_; }
  std::size_t order() const { return coeffs_.size(); }
  bool is_zero() const { return coeffs_.empty() || zero_; }

  double exponent(std::size_t n) const { return double(lead_ + std::int64_t(n) * step_) / double(den_); }
  Rational exponent_exact(std::size_t n) const { return Rational(lead_ + std::int64_t(n) * step_, den_); }
  /// Exponent up to which the expansion is known (exclusive).
  Rational precision() const { return exponent_exact(order()); }

  /// Coefficient of q^e, zero off the lattice; throws past the precision.
  cplx coefficient_at(Rational e) const;

  /// |c_j| <= growth_scale * (j+1)^growth_power for every stored j.
  double growth_scale() const { return growth_scale_; }
  double growth_power() const { return growth_power_; }

  FracQSeries truncated(std::size_t order) const;

  std::string label;
  int weight = 0;
  std::int64_t level = 0;

 private:
  void normalize();
  std::int64_t den_ = 1, lead_ = 0, step_ = 1;
  std::vector<cplx> coeffs_;
  bool zero_ = true;
  double growth_scale_ = 0.0, growth_power_ = 0.0;
};

/// Integer-coefficient expansion produced by the exact eta engine.
struct ExactQSeries {
  std::int64_t den = 1, lead = 0, step = 1;
  std::vector<std::int64_t> coeffs;
  FracQSeries to_series() const;
};

FracQSeries eta_qexp(Rational t, std::size_t order);
FracQSeries eta_quotient(const std::vector<EtaFactor>& factors, std::size_t order);
/// Throws somf::Error on 64-bit overflow.
ExactQSeries eta_quotient_exact(const std::vector<EtaFactor>& factors, std::size_t order);

FracQSeries add(const FracQSeries& f, const FracQSeries& g);
FracQSeries multiply(const FracQSeries& f, const FracQSeries& g);
FracQSeries scale(const FracQSeries& f, cplx s);
FracQSeries power(const FracQSeries& f, int e);
FracQSeries invert(const FracQSeries& f);
FracQSeries derive(const FracQSeries& f);
/// n-th antiderivative from i*inf for n > 0, |n|-th derivative for n < 0.
FracQSeries antiderivative(const FracQSeries& f, int n);

void save_series(const FracQSeries& f, const std::string& path,
                 const std::optional<std::vector<EtaFactor>>& recipe = std::nullopt);
FracQSeries load_series(const std::string& path);

std::string format_double(double x);
double parse_double(const std::string& s);

}  // namespace somf
