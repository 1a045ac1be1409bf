// One line per acceptance criterion. Tolerances and runtime limits are pinned here.
// Criteria listed in kKnownFindings print FAIL; the exit status is 0 only when the
// failing set equals that list exactly, so a new failure or an unexpected pass both break ctest.

#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "somf/autoseries.hpp"
#include "somf/crossing.hpp"
#include "somf/dims.hpp"
#include "somf/operators.hpp"
#include "somf/symbols.hpp"

using namespace somf;

namespace {

const Mat2 hyp{4, -1, 33, -8};
const Mat2 lower11{1, 0, 11, 1};

// criterion -> why it is expected to fail
const std::map<int, std::string> kKnownFindings{
    {9, "printed ladder coefficients are 4^n times the finite-difference values"},
    {11, "K(ir) is proportional to the exclusive crossing derivative, not Cardy's"}};

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [fail: " << what << "]";
    }
  }
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

// ---- 1-3: dimensions ----

void dimension_reproduction(Outcome& o) {
  long cases = 0, bad = 0, group_bad = 0;
  for (std::int64_t N = 1; N <= 60; ++N) {
    const auto ctx = gamma0_context(N);
    const auto inv = oracle::gamma0_by_permutation(N);
    group_bad += ctx.index.value_or(-1) != inv.index || ctx.nu2 != inv.nu2 || ctx.nu3 != inv.nu3 ||
                 ctx.cusp_count() != inv.cusps || ctx.genus != inv.genus;
    const long g = inv.genus;
    auto s_dim = [&](int k) -> long {
      if (k < 2) return 0;
      if (k == 2) return g;
      return (k - 1) * (g - 1) + (k / 2 - 1) * inv.cusps + inv.nu2 * (k / 4) + inv.nu3 * (k / 3);
    };
    auto m_dim = [&](int k) -> long {
      if (k < 0) return 0;
      if (k == 0) return 1;
      if (k == 2) return g + inv.cusps - 1;
      return s_dim(k) + inv.cusps;
    };
    for (int k = -4; k <= 24; k += 2) {
      ++cases;
      long s2 = 0, m2 = 0;
      if (k == 2) s2 = s_dim(2) == 0 ? 0 : (2 * g + 1) * s_dim(2) - 1;
      if (k >= 4) s2 = (2 * g + 1) * s_dim(k);
      if (k == 0) m2 = g + 1;
      if (k >= 2) m2 = (2 * g + 1) * m_dim(k);
      bad += dim_second_order(ctx, k, SpaceKind::S2) != s2;
      bad += dim_second_order(ctx, k, SpaceKind::M2) != m2;
    }
  }
  o.check(group_bad == 0, std::to_string(group_bad) + " levels disagree with the permutation action");
  o.check(bad == 0, std::to_string(bad) + " dimension mismatches");
  o.detail << " N=1..60, k=-4..24, " << cases << " cases, mismatches " << bad;
}

void weight_two_defect(Outcome& o) {
  long bad = 0, positive = 0;
  for (std::int64_t N = 1; N <= 60; ++N) {
    const auto ctx = gamma0_context(N);
    const long g = ctx.genus, d = dim_second_order(ctx, 2, SpaceKind::S2);
    const long upper = bounds_report(ctx, 2, SpaceKind::S2).upper;
    if (g > 0) {
      ++positive;
      bad += d != (2 * g + 1) * g - 1 || d != upper - 1;
    } else {
      bad += d != 0;
    }
  }
  o.check(bad == 0, std::to_string(bad) + " levels");
  o.detail << " " << positive << " levels with g>0, mismatches " << bad;
}

void cohomology_count(Outcome& o) {
  long bad = 0, cases = 0;
  for (std::int64_t N = 1; N <= 60; ++N) {
    const auto ctx = gamma0_context(N);
    for (int k = 4; k <= 24; k += 2, ++cases) bad += dim_cohomology(ctx, k) != dim_cohomology_direct(ctx, k);
  }
  o.check(bad == 0, std::to_string(bad) + " cases");
  o.detail << " " << cases << " cases, mismatches " << bad;
}

// ---- 4-6: series ----

void eisenstein_check(Outcome& o) {
  struct P {
    double x, y, s;
    std::int64_t c_max;
  };
  double worst = 0.0;
  for (const P& p : {P{0.0, 1.0, 2.0, 1500}, P{0.3, 1.7, 2.5, 600}}) {
    SeriesRequest r;
    r.z = {p.x, p.y};
    r.s = p.s;
    r.c_max = p.c_max;
    worst = std::max(worst, std::abs(eisenstein_streamed(r).value - oracle::eisenstein_fourier(p.x, p.y, p.s)));
  }
  o.check(worst < 1e-6, "absolute error " + sci(worst));
  o.detail << " max |E - Fourier| " << sci(worst) << " (tol 1e-6)";
}

void poincare_sanity(Outcome& o) {
  SeriesRequest r;
  r.k = 12;
  r.m = 1;
  r.c_max = 30;
  const Form delta = builtin_form("delta");
  std::vector<cplx> q;
  for (cplx z : {cplx(0, 1), cplx(0.5, 1), cplx(0, 2)}) {
    r.z = z;
    q.push_back(p_classical(r).value / eval_form(delta, z).value);
  }
  double spread = 0.0;
  for (auto v : q) spread = std::max(spread, std::abs(v / q[0] - 1.0));
  r.k = 4;
  r.z = {0.0, 1.0};
  r.c_max = 200;
  const double p4 = std::abs(p_classical(r).value);
  o.check(spread < 1e-6, "P12/Delta spread " + sci(spread));
  o.check(p4 < 1e-4, "|P4| " + sci(p4));
  o.detail << " P12/Delta spread " << sci(spread) << " (tol 1e-6), |P4| " << sci(p4) << " (tol 1e-4)";
}

void second_order_automorphy(Outcome& o) {
  SeriesRequest r;
  r.ctx = gamma0_context(11);
  r.z = {0.0, 1.0};
  r.k = 4;
  r.m = 1;
  r.c_max = 60;
  r.L = Hom0Spec{{{1.0, builtin_form("f11"), false}}};
  const auto set = CosetSum::build(r.ctx, "inf", r.z, r.c_max);
  const cplx P = p_second(r, set).value, P0 = p_classical(r, set).value;
  double worst = 0.0;
  const auto els = random_elements(r.ctx, 3, 2024, 50, true);
  for (const Mat2& g : els) {
    const cplx lhs = p_second(r, set.transported(g)).value * automorphy_factor(g, r.z, 4);
    worst = std::max(worst, std::abs(lhs - P - hom0_eval(*r.L, g.inverse()) * P0));
  }
  o.check(els.size() == 3, "fewer than three elements");
  o.check(worst < 1e-4, "residual " + sci(worst));
  o.detail << " Gamma0(11), k=4, 3 elements |c|<=50, residual " << sci(worst) << " (tol 1e-4)";
}

// ---- 7-8: symbols and periods ----

void symbol_equivalence(Outcome& o) {
  const auto ctx = gamma0_context(11);
  const Form f11 = builtin_form("f11");
  const auto els = random_elements(ctx, 10, 2024, 60);
  double methods = 0.0, additive = 0.0, parabolic = 0.0;
  for (const auto& g : els)
    methods = std::max(methods, std::abs(modular_symbol(f11, g) - modular_symbol(f11, g, SymbolMethod::quadrature)));
  for (std::size_t i = 0; i + 1 < els.size(); ++i)
    additive = std::max(additive, std::abs(modular_symbol(f11, els[i] * els[i + 1]) - modular_symbol(f11, els[i]) -
                                           modular_symbol(f11, els[i + 1])));
  for (const auto& g : els)
    for (const auto& cu : ctx.cusps) {
      const Mat2 p = g * cusp_stabilizer(cu) * g.inverse();
      if (p.c != 0 && std::abs(p.c) <= 50) parabolic = std::max(parabolic, std::abs(modular_symbol(f11, p)));
    }
  for (std::int64_t c = 11; c <= 44; c += 11)
    parabolic = std::max(parabolic, std::abs(modular_symbol(f11, Mat2{1, 0, c, 1})));
  o.check(methods < 1e-8, "methods " + sci(methods));
  o.check(additive < 1e-8, "additivity " + sci(additive));
  o.check(parabolic < 1e-8, "parabolic " + sci(parabolic));
  o.detail << " methods " << sci(methods) << ", additivity " << sci(additive) << ", parabolic " << sci(parabolic)
           << " (tol 1e-8)";
}

void period_machinery(Outcome& o) {
  const auto ctx = gamma0_context(11);
  const Evaluator f4 = form_evaluator(builtin_form("f11sq"));
  const Evaluator F = product_form(builtin_form("f11sq"), builtin_form("f11"));
  std::vector<std::pair<Mat2, Mat2>> pairs{{hyp, mat_T}, {hyp, lower11}};
  const auto pool = random_elements(ctx, 12, 77, 25);
  for (std::size_t i = 0; i + 1 < pool.size(); ++i)
    if (path_reach(pool[i + 1] * pool[i]) <= 20000) pairs.push_back({pool[i + 1], pool[i]});
  const double cocycle = cocycle_residual(f4, pairs).residual;
  const double dphi = std::max(dphi_identity_residual(F, hyp, hyp).residual, dphi_identity_residual(F, mat_T, hyp).residual);

  const auto triples = bounded_triples(ctx, 3, 8, 6000);
  const std::vector<std::pair<Mat2, Mat2>> par{{hyp, mat_T}, {hyp, lower11}};
  Cochain1 phi = memoize([&](const Mat2& g) { return period_polynomial(f4, g); });
  Cochain1 phi2 = memoize([&](const Mat2& g) { return period_polynomial(F, g); });
  const double six = std::max(z1_shriek_residual(phi, triples, par, 4).residual,
                              z1_shriek_residual(phi2, triples, par, 4).residual);
  Cochain1 bumped = [&](const Mat2& g) { return phi(g) + matrix_keyed_polynomial(g, 4); };
  const double perturbed = z1_shriek_residual(bumped, triples, par, 4).residual;
  o.check(cocycle < 1e-5, "cocycle " + sci(cocycle));
  o.check(dphi < 1e-5, "dphi " + sci(dphi));
  o.check(triples.size() == 3, "fewer than three triples");
  o.check(six < 1e-6, "six-term " + sci(six));
  o.check(perturbed > 1e-2, "perturbed " + sci(perturbed));
  o.detail << " cocycle " << sci(cocycle) << ", dphi " << sci(dphi) << " (tol 1e-5); six-term " << sci(six)
           << " (tol 1e-6); perturbed " << sci(perturbed) << " (> 1e-2)";
}

// ---- 9-10: operators and Z/Q/G ----

WeightedFunction fn0(std::function<cplx(cplx)> f) { return WeightedFunction(Evaluator{std::move(f), 0, {}}, 0); }

void operator_suite(Outcome& o) {
  double lap = 0.0, urec = 0.0, theta_res = 0.0, quu = 0.0, printed = 0.0, corrected = 0.0;
  const cplx z{0.3, 1.2};
  lap = std::max(lap, laplacian_residual(fn0([](cplx w) { return std::pow(cplx(w.imag()), 1.3); }), z).residual);
  lap = std::max(lap, laplacian_residual(fn0([](cplx w) { return whittaker(1.3, 1, w); }), z).residual);
  const auto ctx1 = gamma0_context(1), ctx11 = gamma0_context(11);
  urec = std::max({u_recurrence_residual(ctx1, "inf", 0, {0.1, 1.1}, 1.5, 0).residual,
                   u_recurrence_residual(ctx1, "inf", 1, {0.0, 1.0}, 1.5, 0).residual,
                   u_recurrence_residual(ctx1, "inf", 1, {0.2, 0.9}, 1.5, 4).residual,
                   u_recurrence_residual(ctx11, "inf", 1, {0.1, 0.6}, 1.5, 2).residual,
                   u_recurrence_residual(ctx11, "0", 1, {0.1, 0.6}, 1.5, -2).residual});
  for (Direction dir : {Direction::raise, Direction::lower})
    for (int n = 1; n <= 3; ++n)
      for (std::int64_t m : {0, 1}) {
        printed = std::max(printed, ladder_residual(n, dir, 1.3, m, {0.3, 0.8}, LadderScale::printed).residual);
        corrected = std::max(corrected, ladder_residual(n, dir, 1.3, m, {0.3, 0.8}, LadderScale::corrected).residual);
      }
  auto W = fn0([](cplx w) { return whittaker(1.3, 1, w); });
  theta_res = theta_commutation_residual(mat_S, W, {0.2, 1.1}).residual;
  for (const auto& g : random_elements(ctx1, 6, 7, 6)) {
    const Mat2 tau = g * translation(2) * g.inverse();
    theta_res = std::max(theta_res, theta_commutation_residual(tau, W, {0.1, 1.2}).residual);
  }
  const Form f11 = builtin_form("f11");
  for (int n = 0; n <= 2; ++n)
    quu = std::max(quu, q_via_u_residual(ctx11, "inf", 1, f11, n, double(n) + 2.5, {0.05, 0.9}).residual);
  o.check(lap < 1e-5, "factorizations " + sci(lap));
  o.check(urec < 1e-5, "U recurrences " + sci(urec));
  o.check(printed < 1e-5, "printed ladder " + sci(printed));
  o.check(theta_res < 1e-5, "theta " + sci(theta_res));
  o.check(quu < 1e-4, "Q via U " + sci(quu));
  o.detail << " factorizations " << sci(lap) << ", U recurrences " << sci(urec) << ", ladder printed " << sci(printed)
           << " / rescaled by 4^-n " << sci(corrected) << " (tol 1e-5), theta " << sci(theta_res) << ", Q via U "
           << sci(quu) << " (tol 1e-4)";
}

void zqg_suite(Outcome& o) {
  const Form f11 = builtin_form("f11");
  const auto ctx = gamma0_context(11);
  double decomposition = 0.0, law = 0.0, dbar = 0.0, grec = 0.0;
  for (std::int64_t m : {0, 1}) {
    SeriesRequest r;
    r.ctx = ctx;
    r.f = f11;
    r.m = m;
    r.s = 1.5;
    r.z = {0.0, 1.0};
    r.c_max = 40;
    const auto set = CosetSum::build(ctx, "inf", r.z, r.c_max);
    const auto Z = z_series(r, set);
    decomposition = std::max(decomposition, std::abs(Z.direct.value - Z.decomposed.value));
    SeriesRequest u = r;
    u.s = 2.5;
    u.k = 2;
    const cplx U = u_series(u, set).value;
    for (const Mat2& g : {hyp, lower11}) {
      const cplx lhs = z_series(r, set.transported(g)).direct.value * automorphy_factor(g, r.z, 2);
      law = std::max(law, std::abs(lhs - Z.direct.value + std::conj(modular_symbol(f11, g)) / r.z.imag() * U));
    }
    r.z = {0.05, 0.9};
    r.c_max = 20;
    dbar = std::max(dbar, z_dbar_residual(r).residual);
    grec = std::max(grec, g_recurrence_residual(r).residual);
  }
  for (auto [v, name] : {std::pair{decomposition, "decomposition"}, std::pair{law, "transformation law"},
                         std::pair{dbar, "dbar formula"}, std::pair{grec, "G recurrence"}})
    o.check(v < 1e-4, std::string(name) + " " + sci(v));
  o.detail << " s=1.5, m in {0,1}: decomposition " << sci(decomposition) << ", law " << sci(law) << ", dbar "
           << sci(dbar) << ", G recurrence " << sci(grec) << " (tol 1e-4)";
}

// ---- 11: crossing ----

void crossing_check(Outcome& o) {
  const auto zs = crossing_samples(5, 2024);
  double rho = 0.0;
  for (const Mat2& g : {translation(2), mat_S, mat_S * translation(2) * mat_S})
    rho = std::max(rho, kz_automorphy_residual(g, zs).residual);
  const auto cardy = crossing_curve(0.5, 2.0, 31, CrossingOracle::cardy);
  const auto exclusive = crossing_curve(0.5, 2.0, 31, CrossingOracle::exclusive);
  double at_one = 1.0;
  for (std::size_t j = 0; j < cardy.r.size(); ++j)
    if (cardy.r[j] == 1.0) at_one = cardy.P[j];
  o.check(rho < 1e-5, "rho spread " + sci(rho));
  o.check(cardy.max_deviation < 1e-4, "Cardy deviation " + sci(cardy.max_deviation));
  o.check(at_one == 0.5, "P(1) != 1/2");
  o.detail << " rho spread " << sci(rho) << " (tol 1e-5); Cardy max |P - oracle| " << sci(cardy.max_deviation)
           << " (tol 1e-4), fitted constant " << cardy.fitted_constant.real() << ", P(1) = " << at_one
           << "; exclusive crossing oracle: constant " << exclusive.fitted_constant.real() << ", max dev "
           << sci(exclusive.max_deviation);
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;  // 0: no runtime limit
  void (*run)(Outcome&);
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "dimension reproduction", 10, dimension_reproduction},
      {2, "weight 2 defect", 0, weight_two_defect},
      {3, "cohomology count", 0, cohomology_count},
      {4, "Eisenstein cross-check", 5, eisenstein_check},
      {5, "Poincare sanity", 10, poincare_sanity},
      {6, "second-order automorphy", 60, second_order_automorphy},
      {7, "modular symbol equivalence", 0, symbol_equivalence},
      {8, "period machinery", 0, period_machinery},
      {9, "operator suite", 60, operator_suite},
      {10, "convergent-regime Z/Q/G suite", 0, zqg_suite},
      {11, "crossing probability", 30, crossing_check},
  };
  std::set<int> failed;
  for (const auto& c : criteria) {
    Outcome o;
    Stopwatch sw;
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    const double t = sw.seconds();
    if (c.limit_s > 0) o.check(t < c.limit_s, "runtime " + sci(t) + " s over " + sci(c.limit_s) + " s");
    if (!o.pass) failed.insert(c.id);
    std::printf("criterion %2d %s  %s:%s (%.2f s)", c.id, o.pass ? "PASS" : "FAIL", c.name, o.detail.str().c_str(), t);
    const auto known = kKnownFindings.find(c.id);
    if (known != kKnownFindings.end()) std::printf(" {known finding: %s}", known->second.c_str());
    std::printf("\n");
  }
  std::set<int> expected;
  for (const auto& [id, why] : kKnownFindings) expected.insert(id);
  const bool as_expected = failed == expected;
  std::printf("%zu of %zu criteria pass; failures %s the known-findings list\n", criteria.size() - failed.size(),
              criteria.size(), as_expected ? "match" : "DO NOT match");
  std::fflush(stdout);
  return as_expected ? 0 : 1;
}
