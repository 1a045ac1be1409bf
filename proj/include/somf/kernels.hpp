#pragma once

#include <cstddef>
#include <string>

#include "somf/core.hpp"

// Inner loops shared by q-series evaluation and coset sums. Each kernel has a
// scalar reference and, on x86-64, an AVX2+FMA variant chosen at runtime.

namespace somf::kernels {

enum class Isa { scalar, avx2 };

std::string to_string(Isa isa);

bool avx2_supported();
/// Kernel set used by the dispatching entry points.
Isa active();
/// Select a kernel set; requesting avx2 on a machine without it falls back to scalar.
void select(Isa isa);

/// sum_{j<n} c[j] w^j
cplx horner(const cplx* c, std::size_t n, cplx w);
/// Compensated sum of x[0..n).
cplx compensated_sum(const cplx* x, std::size_t n);

namespace scalar {
cplx horner(const cplx* c, std::size_t n, cplx w);
cplx compensated_sum(const cplx* x, std::size_t n);
}  // namespace scalar

namespace avx2 {
cplx horner(const cplx* c, std::size_t n, cplx w);
cplx compensated_sum(const cplx* x, std::size_t n);
}  // namespace avx2

/// Neumaier's variant of Kahan summation.
struct Compensated {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      carry += (sum - t) + x;
    else
      carry += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

struct ComplexCompensated {
  Compensated re, im;
  void add(cplx z) {
    re.add(z.real());
    im.add(z.imag());
  }
  ComplexCompensated& operator+=(cplx z) {
    add(z);
    return *this;
  }
  cplx value() const { return {re.value(), im.value()}; }
};

}  // namespace somf::kernels
