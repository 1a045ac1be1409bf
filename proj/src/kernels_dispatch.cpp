#include <atomic>

#include "somf/kernels.hpp"

namespace somf::kernels {

#ifndef SOMF_HAVE_AVX2
namespace avx2 {
cplx horner(const cplx* c, std::size_t n, cplx w) { return scalar::horner(c, n, w); }
cplx compensated_sum(const cplx* x, std::size_t n) { return scalar::compensated_sum(x, n); }
}  // namespace avx2
#endif

namespace {
std::atomic<Isa> current{Isa::scalar};
}

std::string to_string(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool avx2_supported() {
#if defined(SOMF_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok;
#else
  return false;
#endif
}

Isa active() { return current.load(std::memory_order_relaxed); }

void select(Isa isa) {
  if (isa == Isa::avx2 && !avx2_supported()) isa = Isa::scalar;
  current.store(isa, std::memory_order_relaxed);
}

cplx horner(const cplx* c, std::size_t n, cplx w) {
  return active() == Isa::avx2 ? avx2::horner(c, n, w) : scalar::horner(c, n, w);
}

cplx compensated_sum(const cplx* x, std::size_t n) {
  return active() == Isa::avx2 ? avx2::compensated_sum(x, n) : scalar::compensated_sum(x, n);
}

}  // namespace somf::kernels
