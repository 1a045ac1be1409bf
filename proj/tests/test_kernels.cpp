#include <random>

#include "doctest.h"
#include "somf/kernels.hpp"

using namespace somf;
namespace k = somf::kernels;

namespace {

std::vector<cplx> random_vector(std::size_t n, std::mt19937_64& rng, double spread) {
  std::uniform_real_distribution<double> u(-1.0, 1.0), e(-spread, spread);
  std::vector<cplx> v(n);
  for (auto& x : v) x = cplx(u(rng), u(rng)) * std::pow(10.0, e(rng));
  return v;
}

}  // namespace

TEST_CASE("horner variants agree") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> r(0.0, 0.95), th(0.0, 6.283);
  for (std::size_t n : {0, 1, 3, 15, 16, 17, 18, 19, 20, 64, 333, 1024}) {
    auto c = random_vector(n, rng, 3.0);
    cplx w = std::polar(r(rng), th(rng));
    cplx a = k::scalar::horner(c.data(), n, w);
    cplx b = k::avx2::horner(c.data(), n, w);
    double scale = 0.0;
    for (std::size_t j = 0; j < n; ++j) scale += std::abs(c[j]) * std::pow(std::abs(w), double(j));
    CAPTURE(n);
    CHECK(std::abs(a - b) <= 1e-13 * (scale + 1e-300));
    cplx direct = 0.0, p = 1.0;
    for (std::size_t j = 0; j < n; ++j, p *= w) direct += c[j] * p;
    CHECK(std::abs(a - direct) <= 1e-12 * (scale + 1e-300));
  }
}

TEST_CASE("compensated sums agree and beat naive summation") {
  std::mt19937_64 rng(2);
  for (std::size_t n : {0, 1, 2, 3, 5, 8, 100, 1001}) {
    auto x = random_vector(n, rng, 8.0);
    cplx a = k::scalar::compensated_sum(x.data(), n);
    cplx b = k::avx2::compensated_sum(x.data(), n);
    double mag = 0.0;
    for (auto v : x) mag += std::abs(v);
    CAPTURE(n);
    CHECK(std::abs(a - b) <= 1e-15 * (mag + 1e-300));
  }
  std::vector<cplx> hard{1e16, 1.0, -1e16, 1.0};
  CHECK(k::scalar::compensated_sum(hard.data(), hard.size()) == cplx(2.0));
  CHECK(k::avx2::compensated_sum(hard.data(), hard.size()) == cplx(2.0));
}

TEST_CASE("dispatch selection") {
  k::select(k::Isa::scalar);
  CHECK(k::active() == k::Isa::scalar);
  k::select(k::Isa::avx2);
  CHECK(k::active() == (k::avx2_supported() ? k::Isa::avx2 : k::Isa::scalar));
  k::select(k::Isa::scalar);
}
