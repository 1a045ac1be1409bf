#include "somf/qseries.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include "json.hpp"

namespace somf {

FracQSeries::FracQSeries(std::int64_t den, std::int64_t lead, std::int64_t step, std::vector<cplx> coeffs)
    : den_(den), lead_(lead), step_(step), coeffs_(std::move(coeffs)) {
  if (den_ <= 0 || step_ <= 0) throw DomainError("exponent denominator and step must be positive");
  normalize();
}

void FracQSeries::normalize() {
  std::size_t k = 0;
  while (k < coeffs_.size() && coeffs_[k] == cplx(0.0)) ++k;
  zero_ = k == coeffs_.size();
  if (!zero_ && k > 0) {
    lead_ += std::int64_t(k) * step_;
    coeffs_.erase(coeffs_.begin(), coeffs_.begin() + std::ptrdiff_t(k));
  }
  std::int64_t g = std::gcd(std::gcd(den_, step_), lead_ < 0 ? -lead_ : lead_);
  if (g > 1) {
    den_ /= g;
    step_ /= g;
    lead_ /= g;
  }

  // Power-law envelope for tail estimates.
  const std::size_t n = coeffs_.size();
  growth_power_ = 0.0;
  growth_scale_ = 0.0;
  if (zero_) return;
  std::vector<double> env(n);
  double m = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    m = std::max(m, std::abs(coeffs_[j]));
    env[j] = m;
  }
  if (n >= 8) {
    std::size_t q = n / 4;
    if (env[q - 1] > 0.0)
      growth_power_ = std::max(0.0, std::log(env[n - 1] / env[q - 1]) / std::log(double(n) / double(q)));
  }
  for (std::size_t j = 0; j < n; ++j)
    growth_scale_ = std::max(growth_scale_, std::abs(coeffs_[j]) / std::pow(double(j + 1), growth_power_));
  growth_scale_ *= 2.0;
}

cplx FracQSeries::coefficient_at(Rational e) const {
  if (e >= precision()) throw InsufficientOrder(order(), order() + 1);
  Rational idx = (e * den_ - lead_) / step_;
  if (idx.denominator() != 1 || idx.numerator() < 0) return 0.0;
  return coeffs_[std::size_t(idx.numerator())];
}

FracQSeries FracQSeries::truncated(std::size_t order) const {
  std::vector<cplx> c(coeffs_.begin(), coeffs_.begin() + std::ptrdiff_t(std::min(order, coeffs_.size())));
  FracQSeries out(den_, lead_, step_, std::move(c));
  out.label = label;
  out.weight = weight;
  out.level = level;
  return out;
}

FracQSeries ExactQSeries::to_series() const {
  std::vector<cplx> c(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); ++i) c[i] = double(coeffs[i]);
  return FracQSeries(den, lead, step, std::move(c));
}

namespace {

// Generalized pentagonal exponents with signs, k = 1, -1, 2, -2, ...
std::vector<std::pair<std::size_t, int>> pentagonal(std::size_t limit) {
  std::vector<std::pair<std::size_t, int>> out;
  for (std::int64_t k = 1;; ++k) {
    int sign = (k % 2 == 0) ? 1 : -1;
    std::size_t p1 = std::size_t(k * (3 * k - 1) / 2);
    std::size_t p2 = std::size_t(k * (3 * k + 1) / 2);
    if (p1 >= limit) break;
    out.emplace_back(p1, sign);
    if (p2 < limit) out.emplace_back(p2, sign);
  }
  return out;
}

struct CheckedInt {
  static std::int64_t add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw Error("eta quotient: 64-bit overflow in exact mode");
    return r;
  }
};

struct PlainDouble {
  static double add(double a, double b) { return a + b; }
};

struct Lattice {
  std::int64_t den, lead, step;
  std::vector<std::int64_t> strides;  // a_i / g for each factor
};

Lattice eta_lattice(const std::vector<EtaFactor>& factors) {
  if (factors.empty()) throw DomainError("empty eta quotient");
  std::int64_t M = 1;
  for (const auto& f : factors) {
    if (f.scale <= 0) throw DomainError("eta scale must be positive");
    M = std::lcm(M, f.scale.denominator());
  }
  std::int64_t g = 0;
  std::vector<std::int64_t> a;
  Rational L = 0;
  for (const auto& f : factors) {
    std::int64_t ai = f.scale.numerator() * (M / f.scale.denominator());
    a.push_back(ai);
    g = std::gcd(g, ai);
    L += f.scale * f.exponent / 24;
  }
  Rational stepR(g, M);
  std::int64_t den = std::lcm(L.denominator(), stepR.denominator());
  Lattice lat;
  lat.den = den;
  lat.lead = (L * den).numerator();
  lat.step = (stepR * den).numerator();
  for (auto ai : a) lat.strides.push_back(ai / g);
  return lat;
}

template <class T, class Ops>
std::vector<T> eta_engine(const std::vector<EtaFactor>& factors, const Lattice& lat, std::size_t order) {
  std::vector<T> v(order, T(0));
  if (order == 0) return v;
  v[0] = T(1);
  auto pent = pentagonal(order);
  for (std::size_t fi = 0; fi < factors.size(); ++fi) {
    const std::size_t a = std::size_t(lat.strides[fi]);
    const int e = factors[fi].exponent;
    for (int rep = 0; rep < std::abs(e); ++rep) {
      if (e > 0) {
        for (std::size_t n = order; n-- > 0;) {
          T acc = v[n];
          for (const auto& [p, sgn] : pent) {
            std::size_t off = p * a;
            if (off > n) break;
            acc = Ops::add(acc, sgn > 0 ? v[n - off] : T(-v[n - off]));
          }
          v[n] = acc;
        }
      } else {
        for (std::size_t n = 0; n < order; ++n) {
          T acc = v[n];
          for (const auto& [p, sgn] : pent) {
            std::size_t off = p * a;
            if (off > n) break;
            acc = Ops::add(acc, sgn > 0 ? T(-v[n - off]) : v[n - off]);
          }
          v[n] = acc;
        }
      }
    }
  }
  return v;
}

}  // namespace

ExactQSeries eta_quotient_exact(const std::vector<EtaFactor>& factors, std::size_t order) {
  Lattice lat = eta_lattice(factors);
  ExactQSeries out;
  out.den = lat.den;
  out.lead = lat.lead;
  out.step = lat.step;
  out.coeffs = eta_engine<std::int64_t, CheckedInt>(factors, lat, order);
  return out;
}

FracQSeries eta_quotient(const std::vector<EtaFactor>& factors, std::size_t order) {
  if (order < 1) throw DomainError("order must be at least 1");
  Lattice lat = eta_lattice(factors);
  std::vector<cplx> c(order);
  try {
    auto ex = eta_engine<std::int64_t, CheckedInt>(factors, lat, order);
    for (std::size_t i = 0; i < order; ++i) c[i] = double(ex[i]);
  } catch (const Error&) {
    auto dv = eta_engine<double, PlainDouble>(factors, lat, order);
    for (std::size_t i = 0; i < order; ++i) c[i] = dv[i];
  }
  int w2 = 0;
  for (const auto& f : factors) w2 += f.exponent;
  FracQSeries out(lat.den, lat.lead, lat.step, std::move(c));
  out.weight = w2 / 2;
  return out;
}

FracQSeries eta_qexp(Rational t, std::size_t order) {
  FracQSeries out = eta_quotient({{t, 1}}, order);
  out.label = "eta";
  return out;
}

namespace {

struct Aligned {
  std::int64_t den;
  std::int64_t la, sa, lb, sb;
};

Aligned align(const FracQSeries& f, const FracQSeries& g) {
  std::int64_t D = std::lcm(f.den(), g.den());
  return {D, f.lead() * (D / f.den()), f.step() * (D / f.den()), g.lead() * (D / g.den()),
          g.step() * (D / g.den())};
}

FracQSeries with_meta(FracQSeries s, const FracQSeries& like) {
  s.label = like.label;
  s.weight = like.weight;
  s.level = like.level;
  return s;
}

}  // namespace

FracQSeries add(const FracQSeries& f, const FracQSeries& g) {
  Aligned al = align(f, g);
  std::int64_t step = std::gcd(std::gcd(al.sa, al.sb), std::abs(al.la - al.lb));
  if (step == 0) step = al.sa;
  std::int64_t lead = std::min(al.la, al.lb);
  std::int64_t end = std::min(al.la + std::int64_t(f.order()) * al.sa, al.lb + std::int64_t(g.order()) * al.sb);
  std::size_t n = end > lead ? std::size_t((end - lead + step - 1) / step) : 0;
  std::vector<cplx> c(n, 0.0);
  for (std::size_t i = 0; i < f.order(); ++i) {
    std::int64_t e = al.la + std::int64_t(i) * al.sa;
    if (e >= end) break;
    c[std::size_t((e - lead) / step)] += f.coeffs()[i];
  }
  for (std::size_t i = 0; i < g.order(); ++i) {
    std::int64_t e = al.lb + std::int64_t(i) * al.sb;
    if (e >= end) break;
    c[std::size_t((e - lead) / step)] += g.coeffs()[i];
  }
  return with_meta(FracQSeries(al.den, lead, step, std::move(c)), f);
}

FracQSeries multiply(const FracQSeries& f, const FracQSeries& g) {
  Aligned al = align(f, g);
  std::int64_t step = std::gcd(al.sa, al.sb);
  std::int64_t lead = al.la + al.lb;
  std::int64_t end = std::min(al.la + al.lb + std::int64_t(g.order()) * al.sb,
                              al.lb + al.la + std::int64_t(f.order()) * al.sa);
  std::size_t n = end > lead ? std::size_t((end - lead + step - 1) / step) : 0;
  std::vector<cplx> c(n, 0.0);
  const std::int64_t ra = al.sa / step, rb = al.sb / step;
  for (std::size_t i = 0; i < f.order(); ++i) {
    if (f.coeffs()[i] == cplx(0.0)) continue;
    for (std::size_t j = 0; j < g.order(); ++j) {
      std::size_t idx = std::size_t(std::int64_t(i) * ra + std::int64_t(j) * rb);
      if (idx >= n) break;
      c[idx] += f.coeffs()[i] * g.coeffs()[j];
    }
  }
  FracQSeries out(al.den, lead, step, std::move(c));
  out.weight = f.weight + g.weight;
  out.level = std::max(f.level, g.level);
  return out;
}

FracQSeries scale(const FracQSeries& f, cplx s) {
  std::vector<cplx> c = f.coeffs();
  for (auto& x : c) x *= s;
  return with_meta(FracQSeries(f.den(), f.lead(), f.step(), std::move(c)), f);
}

FracQSeries invert(const FracQSeries& f) {
  if (f.is_zero()) throw DomainError("cannot invert the zero series");
  const auto& a = f.coeffs();
  const std::size_t n = a.size();
  std::vector<cplx> b(n, 0.0);
  const cplx inv0 = 1.0 / a[0];
  b[0] = inv0;
  for (std::size_t m = 1; m < n; ++m) {
    cplx acc = 0.0;
    for (std::size_t k = 1; k <= m; ++k) acc += a[k] * b[m - k];
    b[m] = -acc * inv0;
  }
  FracQSeries out(f.den(), -f.lead(), f.step(), std::move(b));
  out.weight = -f.weight;
  out.level = f.level;
  return out;
}

FracQSeries power(const FracQSeries& f, int e) {
  if (e < 0) return invert(power(f, -e));
  std::size_t n = f.order();
  FracQSeries result(1, 0, 1, std::vector<cplx>(n, 0.0));
  {
    std::vector<cplx> one(n, 0.0);
    one[0] = 1.0;
    result = FracQSeries(f.den(), 0, f.step(), std::move(one));
  }
  FracQSeries base = f;
  while (e > 0) {
    if (e & 1) result = multiply(result, base);
    e >>= 1;
    if (e) base = multiply(base, base);
  }
  return result;
}

FracQSeries antiderivative(const FracQSeries& f, int n) {
  if (n == 0) return f;
  std::vector<cplx> c = f.coeffs();
  for (std::size_t j = 0; j < c.size(); ++j) {
    double e = f.exponent(j);
    if (c[j] == cplx(0.0)) continue;
    if (e == 0.0) {
      if (n > 0) throw DomainError("antiderivative of a series with a constant term");
      c[j] = 0.0;
      continue;
    }
    if (n > 0 && e < 0.0) throw DomainError("antiderivative needs positive exponents");
    c[j] *= std::pow(two_pi_i * e, -n);
  }
  FracQSeries out(f.den(), f.lead(), f.step(), std::move(c));
  out.label = f.label;
  out.level = f.level;
  out.weight = f.weight - 2 * n;
  return out;
}

FracQSeries derive(const FracQSeries& f) { return antiderivative(f, -1); }

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw SchemaError("bad decimal string: " + s);
  return v;
}

void save_series(const FracQSeries& f, const std::string& path,
                 const std::optional<std::vector<EtaFactor>>& recipe) {
  nlohmann::json j;
  j["label"] = f.label;
  j["weight"] = f.weight;
  j["level"] = f.level;
  j["exponent_denominator"] = f.den();
  j["leading_numerator"] = f.lead();
  j["exponent_step"] = f.step();
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : f.coeffs()) arr.push_back({format_double(c.real()), format_double(c.imag())});
  j["coefficients"] = std::move(arr);
  if (recipe) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& e : *recipe) r.push_back({e.scale.numerator(), e.scale.denominator(), e.exponent});
    j["eta_quotient"] = std::move(r);
  }
  std::ofstream os(path);
  if (!os) throw Error("cannot write " + path);
  os << j.dump(1) << "\n";
}

FracQSeries load_series(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw SchemaError("cannot open " + path);
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  auto need = [&](const char* key) -> const nlohmann::json& {
    if (!j.contains(key)) throw SchemaError(std::string("missing field: ") + key);
    return j.at(key);
  };
  if (!need("label").is_string()) throw SchemaError("label must be a string");
  if (!need("weight").is_number_integer()) throw SchemaError("weight must be an integer");
  if (!need("level").is_number_integer()) throw SchemaError("level must be an integer");
  if (!need("exponent_denominator").is_number_integer() || j["exponent_denominator"].get<std::int64_t>() <= 0)
    throw SchemaError("exponent_denominator must be a positive integer");
  if (!need("leading_numerator").is_number_integer()) throw SchemaError("leading_numerator must be an integer");
  std::int64_t step = 1;
  if (j.contains("exponent_step")) {
    if (!j["exponent_step"].is_number_integer() || j["exponent_step"].get<std::int64_t>() <= 0)
      throw SchemaError("exponent_step must be a positive integer");
    step = j["exponent_step"].get<std::int64_t>();
  }
  const auto& arr = need("coefficients");
  if (!arr.is_array()) throw SchemaError("coefficients must be an array");
  std::vector<cplx> c;
  c.reserve(arr.size());
  for (const auto& pair : arr) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string())
      throw SchemaError("each coefficient must be a pair of decimal strings");
    c.emplace_back(parse_double(pair[0].get<std::string>()), parse_double(pair[1].get<std::string>()));
  }
  // The stored lattice is kept verbatim; normalization would strip leading zeros.
  FracQSeries out(j["exponent_denominator"].get<std::int64_t>(), j["leading_numerator"].get<std::int64_t>(), step,
                  std::move(c));
  out.label = j["label"].get<std::string>();
  out.weight = j["weight"].get<int>();
  out.level = j["level"].get<std::int64_t>();

  if (j.contains("eta_quotient")) {
    std::vector<EtaFactor> recipe;
    for (const auto& e : j["eta_quotient"]) {
      if (!e.is_array() || e.size() != 3) throw SchemaError("eta_quotient entries are [num, den, exponent]");
      recipe.push_back({Rational(e[0].get<std::int64_t>(), e[1].get<std::int64_t>()), e[2].get<int>()});
    }
    int w2 = 0;
    for (const auto& f : recipe) w2 += f.exponent;
    if (w2 % 2 != 0 || w2 / 2 != out.weight)
      throw SchemaError("weight field does not match the eta-quotient recipe");
    FracQSeries ref = eta_quotient(recipe, std::max<std::size_t>(out.order(), 1));
    if (!out.is_zero() && ref.exponent_exact(0) != out.exponent_exact(0))
      throw SchemaError("leading exponent does not match the eta-quotient recipe");
    std::size_t n = std::min<std::size_t>(out.order(), 64);
    for (std::size_t i = 0; i < n; ++i) {
      Rational e = out.exponent_exact(i);
      if (e >= ref.precision()) break;
      if (std::abs(ref.coefficient_at(e) - out.coeffs()[i]) > 1e-9 * (1.0 + std::abs(ref.coefficient_at(e))))
        throw SchemaError("coefficients do not match the eta-quotient recipe");
    }
  }
  return out;
}

}  // namespace somf
