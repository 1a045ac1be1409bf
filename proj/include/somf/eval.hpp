#pragma once

#include <functional>

#include "somf/forms.hpp"
#include "somf/group.hpp"
#include "somf/qseries.hpp"

namespace somf {

inline constexpr double default_qtol = 1e-15;

struct QEval {
  cplx value;
  double tail = 0.0;      // bound on the discarded terms
  std::size_t terms = 0;  // terms actually summed
};

/// Checks y > 0.
void require_upper(cplx z);

/// Sum of the expansion at z, stopping once the modelled tail is below tol times the peak term.
/// Throws InsufficientOrder naming the order the tail model needs.
QEval eval_qexp(const FracQSeries& f, cplx z, double tol = default_qtol);

/// Evaluates a form (or its n-th antiderivative, n > 0, or derivative, n < 0), growing the expansion as needed.
QEval eval_form(const Form& f, cplx z, int n = 0, double tol = default_qtol);

/// F(z) = int_{i inf}^z f(w) dw for a cusp form with expansion at infinity.
cplx eichler_integral(const Form& f, cplx z);

/// Function on the upper half-plane with a declared weight.
struct Evaluator {
  std::function<cplx(cplx)> fn;
  int weight = 0;
  std::function<double(cplx)> error;  // optional truncation error estimate

  cplx operator()(cplx z) const { return fn(z); }
  double error_at(cplx z) const { return error ? error(z) : 0.0; }
};

Evaluator form_evaluator(const Form& f, int n = 0);

/// j^{-k} for even k as an integer power, so no branch is involved.
cplx automorphy_factor(const Mat2& g, cplx z, int k);

/// (f|_k g)(z) = f(g z) j(g, z)^{-k}
Evaluator slash(const Evaluator& f, int k, const Mat2& g);

/// Whittaker function W_s(m z) = 2 (|m| y)^{1/2} K_{s-1/2}(2 pi |m| y) e(m x).
cplx whittaker(cplx s, std::int64_t m, cplx z);

struct BesselResult {
  cplx value;
  bool converged = false;
};

/// K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt, composite Gauss-Legendre.
BesselResult bessel_k(cplx nu, double x, std::size_t panels = 16);

/// max over cusps of Im(sigma_a^{-1} z).
double y_fundamental(const GroupContext& ctx, cplx z);

}  // namespace somf
