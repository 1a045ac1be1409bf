#include <immintrin.h>

#include "somf/kernels.hpp"

namespace somf::kernels::avx2 {

// Four interleaved Horner recurrences in u = w^4, one per residue class of the
// coefficient index mod 4. After unpacking, lanes hold residues 0, 2, 1, 3.
cplx horner(const cplx* c, std::size_t n, cplx w) {
  if (n < 16) return scalar::horner(c, n, w);
  const cplx u = (w * w) * (w * w);
  const __m256d ur = _mm256_set1_pd(u.real());
  const __m256d ui = _mm256_set1_pd(u.imag());
  __m256d ar = _mm256_setzero_pd();
  __m256d ai = _mm256_setzero_pd();

  const double* base = reinterpret_cast<const double*>(c);
  std::size_t blocks = n / 4;
  std::size_t rem = n % 4;

  auto step = [&](const double* p) {
    __m256d lo = _mm256_loadu_pd(p);
    __m256d hi = _mm256_loadu_pd(p + 4);
    __m256d cr = _mm256_unpacklo_pd(lo, hi);
    __m256d ci = _mm256_unpackhi_pd(lo, hi);
    __m256d nr = _mm256_fmadd_pd(ar, ur, _mm256_fnmadd_pd(ai, ui, cr));
    __m256d ni = _mm256_fmadd_pd(ar, ui, _mm256_fmadd_pd(ai, ur, ci));
    ar = nr;
    ai = ni;
  };

  if (rem != 0) {
    alignas(32) double pad[8] = {0, 0, 0, 0, 0, 0, 0, 0};
    for (std::size_t r = 0; r < rem; ++r) {
      pad[2 * r] = c[4 * blocks + r].real();
      pad[2 * r + 1] = c[4 * blocks + r].imag();
    }
    step(pad);
  }
  for (std::size_t b = blocks; b-- > 0;) step(base + 8 * b);

  alignas(32) double lr[4], li[4];
  _mm256_store_pd(lr, ar);
  _mm256_store_pd(li, ai);
  const cplx acc0{lr[0], li[0]}, acc2{lr[1], li[1]}, acc1{lr[2], li[2]}, acc3{lr[3], li[3]};
  return ((acc3 * w + acc2) * w + acc1) * w + acc0;
}

cplx compensated_sum(const cplx* x, std::size_t n) {
  const double* p = reinterpret_cast<const double*>(x);
  const std::size_t len = 2 * n;
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d s = _mm256_setzero_pd();
  __m256d carry = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    __m256d v = _mm256_loadu_pd(p + i);
    __m256d t = _mm256_add_pd(s, v);
    __m256d big = _mm256_cmp_pd(_mm256_andnot_pd(sign, s), _mm256_andnot_pd(sign, v), _CMP_GE_OQ);
    __m256d c_s = _mm256_add_pd(_mm256_sub_pd(s, t), v);
    __m256d c_v = _mm256_add_pd(_mm256_sub_pd(v, t), s);
    carry = _mm256_add_pd(carry, _mm256_blendv_pd(c_v, c_s, big));
    s = t;
  }
  alignas(32) double ls[4], lc[4];
  _mm256_store_pd(ls, s);
  _mm256_store_pd(lc, carry);
  Compensated re, im;
  re.add(ls[0]);
  re.add(ls[2]);
  im.add(ls[1]);
  im.add(ls[3]);
  re.add(lc[0]);
  re.add(lc[2]);
  im.add(lc[1]);
  im.add(lc[3]);
  for (; i < len; i += 2) {
    re.add(p[i]);
    im.add(p[i + 1]);
  }
  return {re.value(), im.value()};
}

}  // namespace somf::kernels::avx2
