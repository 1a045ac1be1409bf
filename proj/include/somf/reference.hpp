#pragma once

#include <cstdint>

namespace somf::reference {

/// Index, elliptic counts, cusps and genus of Gamma0(N) read off the action of S, T and ST on P^1(Z/N),
/// with Riemann-Hurwitz for the genus.
struct PermutationInvariants {
  long index = 0;
  long nu2 = 0;
  long nu3 = 0;
  long cusps = 0;
  long genus = 0;
};

PermutationInvariants gamma0_by_permutation(std::int64_t N);

/// Cusp form dimension from the invariants above, with the elliptic floors written out per order.
long dim_cusp_forms(const PermutationInvariants& inv, int k);
long dim_modular_forms(const PermutationInvariants& inv, int k);

/// E(z, s) on the full modular group from its Fourier expansion with divisor sums.
double eisenstein_fourier(double x, double y, double s);

}  // namespace somf::reference
