#pragma once

#include <functional>
#include <vector>

#include "somf/autoseries.hpp"
#include "somf/eval.hpp"
#include "somf/report.hpp"

namespace somf {

/// Function transforming with eps(gamma, z)^k, eps = j/|j|.
struct WeightedFunction {
  Evaluator f;
  int k = 0;

  WeightedFunction() = default;
  WeightedFunction(Evaluator fn, int weight);
  cplx operator()(cplx z) const { return f(z); }
};

enum class Direction { raise, lower };

struct NumericValue {
  cplx value;
  double error = 0.0;  // difference between the last two extrapolation levels
};

/// R_k = i y d/dx + y d/dy + k/2, L_k = -i y d/dx + y d/dy - k/2, by central differences
/// with two Richardson levels. h <= 0 selects 1e-5 y.
NumericValue raise_lower_num(const WeightedFunction& psi, Direction dir, cplx z, double h = 0.0);

/// R_k psi or L_k psi as a function of weight k +- 2, each value computed numerically.
WeightedFunction apply_numeric(const WeightedFunction& psi, Direction dir, double h = 0.0);

/// d/dz = (d/dx - i d/dy)/2 and d/dzbar = (d/dx + i d/dy)/2 by central differences with Richardson.
/// h <= 0 selects 1e-3 y.
NumericValue dz_num(const std::function<cplx(cplx)>& fn, cplx z, double h = 0.0);
NumericValue dzbar_num(const std::function<cplx(cplx)>& fn, cplx z, double h = 0.0);

/// -y^2 (psi_xx + psi_yy) by second differences with Richardson. h <= 0 selects 1e-3 y.
NumericValue laplacian_num(const WeightedFunction& psi, cplx z, double h = 0.0);

/// omega(n, m, i, j) exactly as used in the Whittaker ladder expansion.
cplx omega(int n, std::int64_t m, int i, int j);

struct ExpansionTerm {
  cplx coef;
  int i = 0;  // power of y
  int j = 0;  // shift of s
};

/// sum coef y^i W_{s+j}(m z) with |j| <= i <= n.
struct OperatorExpansion {
  int n = 0;
  std::int64_t m = 0;
  std::vector<ExpansionTerm> terms;

  cplx operator()(cplx s, cplx z) const;
};

enum class LadderScale {
  printed,   // omega as stated
  corrected  // omega / 4^n, which matches repeated single steps
};

OperatorExpansion ladder_expansion(int n, Direction dir, std::int64_t m, LadderScale scale = LadderScale::printed);

/// R^n or L^n applied to W_s(m z); for m = 0 the y^s branch s(s+1)...(s+n-1) y^s.
cplx whittaker_ladder(int n, Direction dir, cplx s, std::int64_t m, cplx z,
                      LadderScale scale = LadderScale::printed);

/// Relative gap between the order-n expansion and one numeric step applied to the order n-1 expansion.
VerificationReport ladder_residual(int n, Direction dir, cplx s, std::int64_t m, cplx z, LadderScale scale,
                                   double tol = 1e-5);

/// Both factorizations -L_2 R_0 and -R_{-2} L_0 against the direct Laplacian.
VerificationReport laplacian_residual(const WeightedFunction& psi, cplx z, double tol = 1e-6, double h = 0.0);

/// Raising and lowering recurrences of U(z, s, k) on one frozen coset set.
VerificationReport u_recurrence_residual(const GroupContext& ctx, const std::string& cusp, std::int64_t m, cplx z,
                                         cplx s, int k, std::int64_t c_max = 40, double tol = 1e-4);

/// theta_{tau,k} psi(z) = psi(tau z) / eps(tau, z)^k.
WeightedFunction theta(const Mat2& tau, const WeightedFunction& psi);

/// max of |theta L - L theta| and |theta R - R theta| at z.
VerificationReport theta_commutation_residual(const Mat2& tau, const WeightedFunction& psi, cplx z,
                                              double tol = 1e-6);

/// Term c y^j conj(f^{(p)}(z)) of an iterated lowering of y conj(f).
struct LoweredTerm {
  cplx coef;
  int ypow = 0;
  int deriv = 0;
};

/// L^r (y conj f) for f of weight 2, as an exact combination of y-powers and conjugated derivatives.
std::vector<LoweredTerm> lowered_y_conj(int r);

/// Value of the combination at z.
cplx eval_lowered(const std::vector<LoweredTerm>& terms, const Form& f, cplx z);

/// Q(z, s, -n; conj f) against its expansion in U(z, s-n-1, 2r+2) over the same coset set.
VerificationReport q_via_u_residual(const GroupContext& ctx, const std::string& cusp, std::int64_t m,
                                    const Form& f, int n, cplx s, cplx z, std::int64_t c_max = 40,
                                    double tol = 1e-4);

/// d/dzbar Z(z, s) against (i s / 2y^2)(Q(z, s+1, 1; conj f) - conj F(z) U(z, s+1, 0)) on one coset set.
VerificationReport z_dbar_residual(const SeriesRequest& req, double tol = 1e-4);

/// G(z, s) - (4 pi m/(s+1)) G(z, s+1) - (2i/(s+1)) Q'(z, s+1, 1), with Q' = d/dz of Q on one coset set.
VerificationReport g_recurrence_residual(const SeriesRequest& req, double tol = 1e-4);

}  // namespace somf
