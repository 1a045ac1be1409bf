#include "somf/reference.hpp"

#include <cmath>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

namespace somf::reference {

PermutationInvariants gamma0_by_permutation(std::int64_t N) {
  using Point = std::pair<std::int64_t, std::int64_t>;
  auto md = [N](std::int64_t x) { return ((x % N) + N) % N; };
  std::vector<std::int64_t> units;
  for (std::int64_t u = 1; u <= N; ++u)
    if (std::gcd(u, N) == 1) units.push_back(u % N);
  // smallest representative of (c : d) under scaling by units
  auto canon = [&](std::int64_t c, std::int64_t d) {
    Point best{N, N};
    for (auto u : units) best = std::min(best, Point{md(u * c), md(u * d)});
    return best;
  };
  std::map<Point, int> id;
  std::vector<Point> pts;
  for (std::int64_t c = 0; c < N; ++c)
    for (std::int64_t d = 0; d < N; ++d) {
      if (N != 1 && std::gcd(std::gcd(c, d), N) != 1) continue;
      const Point p = canon(c, d);
      if (id.emplace(p, int(pts.size())).second) pts.push_back(p);
    }
  const int n = int(pts.size());
  auto act = [&](std::int64_t a, std::int64_t b, std::int64_t c2, std::int64_t d2) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const auto [c, d] = pts[std::size_t(i)];
      perm[std::size_t(i)] = id.at(canon(c * a + d * c2, c * b + d * d2));
    }
    return perm;
  };
  auto cycles = [n](const std::vector<int>& perm) {
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    long count = 0;
    for (int i = 0; i < n; ++i) {
      if (seen[std::size_t(i)]) continue;
      ++count;
      for (int j = i; !seen[std::size_t(j)]; j = perm[std::size_t(j)]) seen[std::size_t(j)] = true;
    }
    return count;
  };
  auto fixed = [n](const std::vector<int>& perm) {
    long count = 0;
    for (int i = 0; i < n; ++i) count += perm[std::size_t(i)] == i;
    return count;
  };
  const auto S = act(0, -1, 1, 0), T = act(1, 1, 0, 1), ST = act(0, -1, 1, 1);
  PermutationInvariants out;
  out.index = n;
  out.nu2 = fixed(S);
  out.nu3 = fixed(ST);
  out.cusps = cycles(T);
  // 2g - 2 = -2n + (n - nu2)/2 + 2(n - nu3)/3 + (n - cusps)
  const long twice_g = 2 - 2 * n + (n - out.nu2) / 2 + 2 * (n - out.nu3) / 3 + (n - out.cusps);
  out.genus = twice_g / 2;
  return out;
}

long dim_cusp_forms(const PermutationInvariants& inv, int k) {
  if (k < 2) return 0;
  if (k == 2) return inv.genus;
  return (k - 1) * (inv.genus - 1) + (k / 2 - 1) * inv.cusps + inv.nu2 * (k / 4) + inv.nu3 * ((2 * k) / 6);
}

long dim_modular_forms(const PermutationInvariants& inv, int k) {
  if (k < 0) return 0;
  if (k == 0) return 1;
  if (k == 2) return inv.genus + inv.cusps - 1;
  return dim_cusp_forms(inv, k) + inv.cusps;
}

double eisenstein_fourier(double x, double y, double s) {
  const double pi = 3.14159265358979323846;
  auto xi = [pi](double t) { return std::pow(pi, -t / 2) * std::tgamma(t / 2) * std::riemann_zeta(t); };
  double acc = 0.0;
  for (int n = 1; 2 * pi * n * y < 80.0; ++n) {
    double sigma = 0.0;
    for (int d = 1; d <= n; ++d)
      if (n % d == 0) sigma += std::pow(double(d), 1 - 2 * s);
    acc += std::pow(double(n), s - 0.5) * sigma * std::sqrt(y) * std::cyl_bessel_k(s - 0.5, 2 * pi * n * y) *
           std::cos(2 * pi * n * x);
  }
  return std::pow(y, s) + xi(2 * s - 1) / xi(2 * s) * std::pow(y, 1 - s) + 4.0 / xi(2 * s) * acc;
}

}  // namespace somf::reference
