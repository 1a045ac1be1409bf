#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace somf {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx two_pi_i{0.0, 2.0 * std::numbers::pi};

// e(z) = exp(2 pi i z)
inline cplx expi(cplx z) { return std::exp(two_pi_i * z); }

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedWeight : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class DivergentSeries : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Bad run configuration (unknown key, unparsable or out-of-range value).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Raised when a truncated q-expansion cannot meet the requested tolerance.
class InsufficientOrder : public Error {
 public:
  InsufficientOrder(std::size_t have, std::size_t need)
      : Error("insufficient order: have " + std::to_string(have) + ", need " + std::to_string(need)),
        have_(have),
        need_(need) {}
  std::size_t have() const { return have_; }
  std::size_t required() const { return need_; }

 private:
  std::size_t have_;
  std::size_t need_;
};

/// Integer 2x2 matrix of determinant one, identified with its negative.
struct Mat2 {
  std::int64_t a = 1, b = 0, c = 0, d = 1;

  std::int64_t det() const { return a * d - b * c; }
  Mat2 inverse() const { return {d, -b, -c, a}; }
  Mat2 operator-() const { return {-a, -b, -c, -d}; }
  std::int64_t trace() const { return a + d; }

  cplx apply(cplx z) const { return (double(a) * z + double(b)) / (double(c) * z + double(d)); }
  cplx j(cplx z) const { return double(c) * z + double(d); }

  /// Sign-normalized copy: c > 0, or c == 0 and d > 0.
  Mat2 normalized() const {
    if (c < 0 || (c == 0 && d < 0)) return -*this;
    return *this;
  }

  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
            x.c * y.b + x.d * y.d};
  }
  /// Equality in PSL2.
  friend bool operator==(const Mat2& x, const Mat2& y) {
    return (x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d) ||
           (x.a == -y.a && x.b == -y.b && x.c == -y.c && x.d == -y.d);
  }
  bool is_identity() const { return *this == Mat2{}; }
};

inline const Mat2 mat_T{1, 1, 0, 1};
inline const Mat2 mat_S{0, -1, 1, 0};

inline Mat2 translation(std::int64_t n) { return {1, n, 0, 1}; }

std::string to_string(const Mat2& m);
Mat2 parse_mat2(const std::string& text);

std::int64_t gcd64(std::int64_t a, std::int64_t b);
std::int64_t euler_phi(std::int64_t n);
std::vector<std::int64_t> divisors(std::int64_t n);
std::vector<std::int64_t> prime_factors(std::int64_t n);

/// Extended gcd: returns g and sets x, y with a*x + b*y = g.
std::int64_t ext_gcd(std::int64_t a, std::int64_t b, std::int64_t& x, std::int64_t& y);

/// Completes a coprime bottom row (c, d) to a matrix of determinant one.
Mat2 complete_row(std::int64_t c, std::int64_t d);

bool is_parabolic(const Mat2& m);

}  // namespace somf
