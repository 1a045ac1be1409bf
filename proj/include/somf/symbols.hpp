#pragma once

#include <functional>
#include <vector>

#include "somf/eval.hpp"
#include "somf/report.hpp"

namespace somf {

enum class SymbolMethod { qseries, quadrature };

/// <gamma, f> = F(gamma z0) - F(z0) for a weight-2 cusp form f with Eichler integral F.
/// The q-series route uses z0 = (-d+i)/c so both endpoints sit at height 1/c.
cplx modular_symbol(const Form& f, const Mat2& g, SymbolMethod method = SymbolMethod::qseries);

/// Quadrature of f from base to gamma(base) along the straight segment.
cplx modular_symbol_at(const Form& f, const Mat2& g, cplx base);

struct Hom0Term {
  cplx coef = 1.0;
  Form form;
  bool conjugated = false;
};

/// Element of Hom_0 as sum of c_i <gamma, l_i> or its conjugate.
struct Hom0Spec {
  std::vector<Hom0Term> terms;
  int weight() const { return 2; }
};

/// Validates weight 2, cuspidality and a shared group.
void validate(const Hom0Spec& L);
cplx hom0_eval(const Hom0Spec& L, const Mat2& g, SymbolMethod method = SymbolMethod::qseries);

/// Polynomial in X of degree at most k-2, coefficients in increasing degree.
struct PeriodPolynomial {
  int k = 2;
  std::vector<cplx> c;

  PeriodPolynomial() : c(1, 0.0) {}
  explicit PeriodPolynomial(int weight) : k(weight), c(std::size_t(weight - 1), 0.0) {}
  PeriodPolynomial(int weight, std::vector<cplx> coeffs);

  std::size_t size() const { return c.size(); }
  cplx operator()(cplx X) const;
  double max_abs() const;
  PeriodPolynomial conj() const;

  PeriodPolynomial& operator+=(const PeriodPolynomial& o);
  PeriodPolynomial& operator-=(const PeriodPolynomial& o);
  PeriodPolynomial& operator*=(cplx s);
};

PeriodPolynomial operator+(PeriodPolynomial a, const PeriodPolynomial& b);
PeriodPolynomial operator-(PeriodPolynomial a, const PeriodPolynomial& b);
PeriodPolynomial operator*(cplx s, PeriodPolynomial a);
/// Coefficient-wise max |a - b|.
double max_diff(const PeriodPolynomial& a, const PeriodPolynomial& b);

/// (P|_{2-k} g)(X) = P(gX) (cX+d)^{k-2}, expanded exactly.
PeriodPolynomial slash_poly(const PeriodPolynomial& P, const Mat2& g);

enum class PeriodBase { interior_i, cusp_infinity };

struct PeriodOptions {
  double tol = 1e-10;
  std::size_t max_panels = 2048;
};

/// phi(gamma) = int_i^{gamma^{-1} i} F(z) (z-X)^{k-2} dz. The cusp base replaces i by i inf and is
/// only valid for cusp forms invariant under slash_k (first order).
PeriodPolynomial period_polynomial(const Evaluator& F, const Mat2& g, PeriodBase base = PeriodBase::interior_i,
                                   const PeriodOptions& opt = {});

/// int_i^{gamma^{-1} i} conj(G(z)) (conj z - X)^{k-2} d conj z for an antiholomorphic input conj(G).
/// G is the holomorphic evaluator of weight k.
PeriodPolynomial period_polynomial_antiholo(const Evaluator& G, const Mat2& g, const PeriodOptions& opt = {});

/// Moment polynomial int_a^b F(z) (z-X)^{k-2} dz along a segment, adaptive in the panel count.
PeriodPolynomial polynomial_integral(const std::function<cplx(cplx)>& F, int k, cplx a, cplx b,
                                     const PeriodOptions& opt = {});

using Cochain1 = std::function<PeriodPolynomial(const Mat2&)>;
using Cochain2 = std::function<PeriodPolynomial(const Mat2&, const Mat2&)>;

enum class CochainAction { trivial, slash };

/// (d psi)(g1, g2) = psi(g2).g1 - psi(g2 g1) + psi(g1).
PeriodPolynomial coboundary1(const Cochain1& psi, const Mat2& g1, const Mat2& g2, CochainAction action);
/// (d psi)(g1, g2, g3) = psi(g2,g3).g1 - psi(g2 g1, g3) + psi(g1, g3 g2) - psi(g1, g2).
PeriodPolynomial coboundary2(const Cochain2& psi, const Mat2& g1, const Mat2& g2, const Mat2& g3,
                             CochainAction action);

/// Cochain that caches values by matrix.
Cochain1 memoize(Cochain1 psi);

struct Triple {
  Mat2 g1, g2, g3;
};

/// Six-term identity for f(g3 g2 g1) and the parabolic condition f(d p) = f(d)|p + f(p).
/// Residual is the larger of the two maxima.
VerificationReport z1_shriek_residual(const Cochain1& f, const std::vector<Triple>& triples,
                                      const std::vector<std::pair<Mat2, Mat2>>& parabolic_pairs, int k,
                                      double tol = 1e-6);

/// a^2 + c^2; the path from i to g^{-1} i stays above height 1/reach.
std::int64_t path_reach(const Mat2& g);

/// Seeded triples of group elements with every product needed by the six-term identity of reach <= bound.
std::vector<Triple> bounded_triples(const GroupContext& ctx, std::size_t count, std::uint64_t seed,
                                    std::int64_t bound);

/// Deterministic pseudo-random polynomial keyed by the matrix, for non-cocycle counterexamples.
PeriodPolynomial matrix_keyed_polynomial(const Mat2& g, int k);

/// max over pairs of |phi(d g) - phi(d)|g - phi(g)| for a first-order form.
VerificationReport cocycle_residual(const Evaluator& F, const std::vector<std::pair<Mat2, Mat2>>& pairs,
                                    const PeriodOptions& opt = {}, double tol = 1e-8);

/// Six-term residual alone for one triple.
double six_term_residual(const Cochain1& f, const Triple& t);

/// phi(dg) - phi(d)|g - phi(g) against [int_i^{d^{-1} i} F|_k(g^{-1}-1)(w) (w-X)^{k-2} dw]|g.
VerificationReport dphi_identity_residual(const Evaluator& F, const Mat2& g, const Mat2& d,
                                          const PeriodOptions& opt = {}, double tol = 1e-5);

struct TwistedL {
  cplx value;
  double tail = 0.0;     // crude bound on the omitted terms
  bool certified = false;
  double fitted_c = 0.0;  // C in |a_n| <= C n^{k/2+1/4}
};

/// sum_{n <= N} a_n e(m n) n^{-s} over integral exponents of f.
TwistedL twisted_L_partial(const FracQSeries& f, Rational m, cplx s, std::size_t N);

}  // namespace somf
