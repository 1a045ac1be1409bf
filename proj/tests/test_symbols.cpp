#include <random>

#include "doctest.h"
#include "somf/autoseries.hpp"
#include "somf/symbols.hpp"

using namespace somf;

namespace {

const Mat2 hyp{4, -1, 33, -8};

}  // namespace

TEST_CASE("modular symbols") {
  auto f11 = builtin_form("f11");
  CHECK(modular_symbol(f11, mat_T) == cplx(0.0));
  CHECK(std::abs(modular_symbol(f11, Mat2{1, 0, 11, 1})) < 1e-12);
  CHECK(std::abs(modular_symbol(f11, Mat2{1, 0, 11, 1}, SymbolMethod::quadrature)) < 1e-10);
  cplx a = modular_symbol(f11, hyp), b = modular_symbol(f11, hyp, SymbolMethod::quadrature);
  CHECK(std::abs(a) > 1e-3);
  CHECK(std::abs(a - b) < 1e-8);
  // Another base point.
  CHECK(std::abs(modular_symbol_at(f11, hyp, {0.1, 0.4}) - a) < 1e-8);
  CHECK_THROWS_AS(modular_symbol(f11, mat_S), DomainError);
  CHECK_THROWS_AS(modular_symbol(builtin_form("delta"), mat_S), UnsupportedWeight);
}

TEST_CASE("symbol methods agree on seeded elements") {
  auto f11 = builtin_form("f11");
  auto ctx = gamma0_context(11);
  auto els = random_elements(ctx, 10, 2024, 60);
  for (const auto& g : els) {
    CAPTURE(to_string(g));
    CHECK(std::abs(modular_symbol(f11, g) - modular_symbol(f11, g, SymbolMethod::quadrature)) < 1e-8);
  }
  for (std::size_t i = 0; i + 1 < els.size(); ++i) {
    const Mat2 &g = els[i], &h = els[i + 1];
    CHECK(std::abs(modular_symbol(f11, g * h) - modular_symbol(f11, g) - modular_symbol(f11, h)) < 1e-8);
  }
}

TEST_CASE("Hom0 evaluation") {
  auto f11 = builtin_form("f11");
  Hom0Spec L{{{cplx(0.3, -1.2), f11, false}, {cplx(2.0, 0.5), f11, true}}};
  Hom0Spec plain{{{1.0, f11, false}}}, conjugated{{{1.0, f11, true}}};
  auto ctx = gamma0_context(11);
  auto els = random_elements(ctx, 6, 9, 50);
  for (const auto& g : els) {
    CHECK(std::abs(hom0_eval(conjugated, g) - std::conj(hom0_eval(plain, g))) < 1e-14);
    for (const auto& h : els) CHECK(std::abs(hom0_eval(L, g * h) - hom0_eval(L, g) - hom0_eval(L, h)) < 1e-8);
  }
  // Parabolics with |c| <= 50: conjugates of the cusp stabilizers.
  for (const auto& g : els) {
    for (const auto& cu : ctx.cusps) {
      Mat2 p = g * cusp_stabilizer(cu) * g.inverse();
      if (std::abs(p.c) > 50) continue;
      CAPTURE(to_string(p));
      CHECK(std::abs(hom0_eval(L, p)) < 1e-8);
    }
  }
  for (std::int64_t c = 11; c <= 44; c += 11) CHECK(std::abs(hom0_eval(L, Mat2{1, 0, c, 1})) < 1e-8);
  CHECK_THROWS_AS(validate(Hom0Spec{}), DomainError);
  CHECK_THROWS_AS(validate(Hom0Spec{{{1.0, builtin_form("delta"), false}}}), UnsupportedWeight);
}

TEST_CASE("polynomial slash action") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto els = random_elements(gamma0_context(1), 8, 17, 12);
  PeriodPolynomial P(8);
  for (auto& c : P.c) c = cplx(u(rng), u(rng));
  CHECK(max_diff(slash_poly(P, Mat2{}), P) == 0.0);
  for (std::size_t i = 0; i + 1 < els.size(); ++i) {
    const Mat2 &g = els[i], &h = els[i + 1];
    PeriodPolynomial two = slash_poly(slash_poly(P, g), h), one = slash_poly(P, g * h);
    CHECK(max_diff(two, one) <= 1e-10 * std::max(1.0, one.max_abs()));
    cplx w{u(rng), 0.5 + u(rng) * u(rng)}, X{u(rng), u(rng)};
    cplx lhs = (w - g.apply(X)) * g.j(X), rhs = (g.inverse().apply(w) - X) * g.inverse().j(w);
    CHECK(std::abs(lhs - rhs) < 1e-12 * std::max(1.0, std::abs(lhs)));
    // Direct evaluation of P(gX) j(g, X)^{k-2}.
    cplx direct = P(g.apply(X)) * std::pow(g.j(X), 6);
    CHECK(std::abs(slash_poly(P, g)(X) - direct) < 1e-9 * std::max(1.0, std::abs(direct)));
  }
}

TEST_CASE("period polynomials of Delta") {
  auto delta = form_evaluator(builtin_form("delta"));
  CHECK(period_polynomial(delta, Mat2{}).max_abs() == 0.0);
  CHECK(period_polynomial(delta, mat_T, PeriodBase::cusp_infinity).max_abs() == 0.0);
  auto r = period_polynomial(delta, mat_S, PeriodBase::cusp_infinity);
  CHECK(r.size() == 11);
  CHECK(r.max_abs() > 1e-4);
  CHECK(max_diff(r + slash_poly(r, mat_S), PeriodPolynomial(12)) < 1e-8);
  // Cocycle relation with the cusp base.
  auto U = mat_T * mat_S;
  auto rTS = period_polynomial(delta, U, PeriodBase::cusp_infinity);
  CHECK(max_diff(rTS, slash_poly(period_polynomial(delta, mat_T, PeriodBase::cusp_infinity), mat_S) + r) < 1e-8);
}

TEST_CASE("antiholomorphic period polynomials") {
  auto f = form_evaluator(builtin_form("f11sq"));
  auto ctx = gamma0_context(11);
  CHECK(period_polynomial_antiholo(f, Mat2{}).max_abs() == 0.0);
  for (const auto& g : random_elements(ctx, 3, 5, 30)) {
    auto tilde = period_polynomial_antiholo(f, g);
    auto phi = period_polynomial(f, g);
    CHECK(tilde.size() == 3);
    CHECK(max_diff(tilde, phi.conj()) < 1e-8);
  }
}

TEST_CASE("cocycle relation for a first-order form") {
  auto f = form_evaluator(builtin_form("f11sq"));
  auto ctx = gamma0_context(11);
  auto els = random_elements(ctx, 12, 77, 25);
  int checked = 0;
  for (std::size_t i = 0; i + 1 < els.size(); ++i) {
    const Mat2 &g = els[i], &d = els[i + 1];
    if (path_reach(d * g) > 20000) continue;
    ++checked;
    auto lhs = period_polynomial(f, d * g);
    auto rhs = slash_poly(period_polynomial(f, d), g) + period_polynomial(f, g);
    CHECK(max_diff(lhs, rhs) < 1e-8);
  }
  CHECK(checked >= 3);
}

TEST_CASE("coboundaries") {
  auto f11 = builtin_form("f11");
  // A homomorphism into C with trivial action is a cocycle.
  Cochain1 hom = [&](const Mat2& g) { return PeriodPolynomial(2, {modular_symbol(f11, g)}); };
  auto els = random_elements(gamma0_context(11), 4, 1, 40);
  for (const auto& g : els)
    for (const auto& h : els) CHECK(coboundary1(hom, g, h, CochainAction::trivial).max_abs() < 1e-8);

  // Hand-expanded values for the constant cochain X in weight 4.
  PeriodPolynomial X(4, {0.0, 1.0, 0.0});
  Cochain1 constX = [&](const Mat2&) { return X; };
  auto v = coboundary1(constX, mat_T, mat_S, CochainAction::slash);  // X|T = X + 1
  CHECK(max_diff(v, PeriodPolynomial(4, {1.0, 1.0, 0.0})) == 0.0);
  auto w = coboundary1(constX, mat_S, mat_T, CochainAction::slash);  // X|S = -X in weight 4
  CHECK(max_diff(w, PeriodPolynomial(4, {0.0, -1.0, 0.0})) == 0.0);
  CHECK(max_diff(coboundary1(constX, mat_S, mat_T, CochainAction::trivial), X) == 0.0);

  // d d psi = 0 for a random tabulated cochain, both actions.
  Cochain1 psi = [](const Mat2& g) { return matrix_keyed_polynomial(g, 6); };
  Cochain2 dpsi_slash = [&](const Mat2& a, const Mat2& b) { return coboundary1(psi, a, b, CochainAction::slash); };
  Cochain2 dpsi_triv = [&](const Mat2& a, const Mat2& b) { return coboundary1(psi, a, b, CochainAction::trivial); };
  auto g1 = random_elements(gamma0_context(1), 9, 4, 20);
  for (std::size_t i = 0; i + 2 < g1.size(); i += 3) {
    CHECK(coboundary2(dpsi_slash, g1[i], g1[i + 1], g1[i + 2], CochainAction::slash).max_abs() < 1e-9);
    CHECK(coboundary2(dpsi_triv, g1[i], g1[i + 1], g1[i + 2], CochainAction::trivial).max_abs() < 1e-12);
    // A nonzero 1-cochain has a nonzero coboundary in general.
    CHECK(coboundary1(psi, g1[i], g1[i + 1], CochainAction::slash).max_abs() > 1e-3);
  }
}

TEST_CASE("cocycle membership residuals") {
  auto ctx = gamma0_context(11);
  auto triples = bounded_triples(ctx, 3, 8, 6000);
  REQUIRE(triples.size() == 3);
  std::vector<std::pair<Mat2, Mat2>> pairs{{hyp, mat_T}, {hyp, Mat2{1, 0, 11, 1}}};

  auto f4 = form_evaluator(builtin_form("f11sq"));
  Cochain1 phi = memoize([&](const Mat2& g) { return period_polynomial(f4, g); });
  auto first = z1_shriek_residual(phi, triples, pairs, 4, 1e-8);
  CHECK(first.pass);

  auto F = product_form(builtin_form("f11sq"), builtin_form("f11"));
  Cochain1 phi2 = memoize([&](const Mat2& g) { return period_polynomial(F, g); });
  auto second = z1_shriek_residual(phi2, triples, pairs, 4, 1e-6);
  CAPTURE(second.residual);
  CHECK(second.pass);

  Cochain1 bumped = [&](const Mat2& g) { return phi(g) + matrix_keyed_polynomial(g, 4); };
  auto bad = z1_shriek_residual(bumped, triples, pairs, 4, 1e-6);
  CHECK(bad.residual > 1e-2);
  CHECK_FALSE(bad.pass);
}

TEST_CASE("period coboundary identity") {
  auto f4 = form_evaluator(builtin_form("f11sq"));
  auto r1 = dphi_identity_residual(f4, hyp, Mat2{1, 0, 11, 1});
  CHECK(r1.pass);
  CHECK(r1.residual < 1e-8);
  auto F = product_form(builtin_form("f11sq"), builtin_form("f11"));
  auto r2 = dphi_identity_residual(F, hyp, hyp);
  CAPTURE(r2.residual);
  CHECK(r2.residual < 1e-5);
  auto r3 = dphi_identity_residual(F, mat_T, hyp, {}, 1e-6);
  CHECK(r3.pass);
  // The right side vanishes for parabolic gamma, so the left side does too.
  auto phi = [&](const Mat2& g) { return period_polynomial(F, g); };
  CHECK(max_diff(phi(hyp * mat_T), slash_poly(phi(hyp), mat_T) + phi(mat_T)) < 1e-6);
}

TEST_CASE("twisted L partial sums") {
  auto delta = eta_quotient({{1, 24}}, 20001);
  delta.weight = 12;
  auto a = twisted_L_partial(delta, Rational(0), 8.0, 10000);
  auto b = twisted_L_partial(delta, Rational(0), 8.0, 20000);
  CHECK(a.certified);
  CHECK(std::abs(a.value - b.value) < 1e-6);
  CHECK(std::abs(a.value - b.value) <= a.tail);
  auto one = twisted_L_partial(delta, Rational(1), 8.0, 10000);
  CHECK(std::abs(one.value - a.value) < 1e-15);
  auto low = twisted_L_partial(delta, Rational(0), 6.5, 10000);
  CHECK_FALSE(low.certified);
  auto half = twisted_L_partial(delta, Rational(1, 2), 8.0, 100);
  // e(n/2) alternates the sign of each coefficient.
  cplx ref = 0.0;
  for (int n = 1; n <= 100; ++n) ref += (n % 2 ? -1.0 : 1.0) * delta.coefficient_at(n) * std::pow(double(n), -8.0);
  CHECK(std::abs(half.value - ref) < 1e-14);
  CHECK_THROWS_AS(twisted_L_partial(delta, Rational(0), 8.0, 30000), InsufficientOrder);
}
