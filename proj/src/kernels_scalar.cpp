#include "somf/kernels.hpp"

namespace somf::kernels::scalar {

cplx horner(const cplx* c, std::size_t n, cplx w) {
  double ar = 0.0, ai = 0.0;
  const double wr = w.real(), wi = w.imag();
  for (std::size_t j = n; j-- > 0;) {
    double tr = ar * wr - ai * wi + c[j].real();
    double ti = ar * wi + ai * wr + c[j].imag();
    ar = tr;
    ai = ti;
  }
  return {ar, ai};
}

cplx compensated_sum(const cplx* x, std::size_t n) {
  ComplexCompensated acc;
  for (std::size_t j = 0; j < n; ++j) acc.add(x[j]);
  return acc.value();
}

}  // namespace somf::kernels::scalar
