#include "somf/verify.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "somf/crossing.hpp"
#include "somf/dims.hpp"
#include "somf/kernels.hpp"
#include "somf/operators.hpp"
#include "somf/reference.hpp"
#include "somf/symbols.hpp"

namespace somf {

namespace {

const Mat2 hyp{4, -1, 33, -8};
const Mat2 lower11{1, 0, 11, 1};

using Reports = std::vector<VerificationReport>;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_positive(const std::string& key, const std::string& v) {
  double x = 0.0;
  try {
    std::size_t used = 0;
    x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
  } catch (const std::exception&) {
    throw ConfigError(key + ": not a number: " + v);
  }
  if (!(x > 0.0)) throw ConfigError(key + ": must be positive");
  return x;
}

long long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    long long x = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(key + ": not an integer: " + v);
  }
}

std::int64_t cmax_or(const RunConfig& cfg, std::int64_t fallback) { return cfg.c_max > 0 ? cfg.c_max : fallback; }

PeriodOptions period_options(const RunConfig& cfg) {
  PeriodOptions o;
  o.max_panels = cfg.panels;
  return o;
}

VerificationReport timed(VerificationReport r, const Stopwatch& sw) {
  r.seconds = sw.seconds();
  return r;
}

// ---- dims ----

Reports dims_suite(const RunConfig& cfg) {
  Reports out;
  const std::string levels = "1.." + std::to_string(cfg.max_level);
  const std::string weights = std::to_string(cfg.k_min) + ".." + std::to_string(cfg.k_max);
  {
    Stopwatch sw;
    long bad = 0;
    for (std::int64_t N = 1; N <= cfg.max_level; ++N) {
      const auto ctx = gamma0_context(N);
      const auto inv = reference::gamma0_by_permutation(N);
      bad += ctx.index.value_or(-1) != inv.index;
      bad += ctx.nu2 != inv.nu2;
      bad += ctx.nu3 != inv.nu3;
      bad += ctx.cusp_count() != inv.cusps;
      bad += ctx.genus != inv.genus;
    }
    out.push_back(timed(make_report("group invariants agree with the permutation action", double(bad), 0.0,
                                    {{"levels", levels}}),
                        sw));
  }
  long first_bad = 0, second_bad = 0, bound_bad = 0, defect_bad = 0, h1_bad = 0, cases = 0;
  Stopwatch sw;
  for (std::int64_t N = 1; N <= cfg.max_level; ++N) {
    const auto ctx = gamma0_context(N);
    const auto inv = reference::gamma0_by_permutation(N);
    const long g = inv.genus;
    for (int k = cfg.k_min + (cfg.k_min & 1); k <= cfg.k_max; k += 2) {
      ++cases;
      const long s = reference::dim_cusp_forms(inv, k), m = reference::dim_modular_forms(inv, k);
      first_bad += dim_first_order(ctx, k, SpaceKind::S) != s;
      first_bad += dim_first_order(ctx, k, SpaceKind::M) != m;
      long s2 = 0, m2 = 0;
      if (k == 2)
        s2 = s == 0 ? 0 : (2 * g + 1) * s - 1;
      else if (k > 2)
        s2 = (2 * g + 1) * s;
      if (k == 0)
        m2 = g + 1;
      else if (k >= 2)
        m2 = (2 * g + 1) * m;
      const long ds2 = dim_second_order(ctx, k, SpaceKind::S2), dm2 = dim_second_order(ctx, k, SpaceKind::M2);
      second_bad += (ds2 != s2) + (dm2 != m2);
      const auto b = bounds_report(ctx, k, SpaceKind::S2);
      if (ds2 < b.lower || ds2 > b.upper || (k >= 4 && ds2 != b.upper)) ++bound_bad;
      if (k == 2) defect_bad += g > 0 ? ds2 != (2 * g + 1) * g - 1 || ds2 != b.upper - 1 : ds2 != 0;
      if (k >= 4) h1_bad += dim_cohomology(ctx, k) != dim_cohomology_direct(ctx, k);
    }
  }
  const std::map<std::string, std::string> p{{"levels", levels}, {"weights", weights},
                                             {"cases", std::to_string(cases)}};
  out.push_back(timed(make_report("first-order dimensions from the permutation invariants", double(first_bad), 0.0, p), sw));
  out.push_back(timed(make_report("second-order dimensions equal the closed formulas", double(second_bad), 0.0, p), sw));
  out.push_back(timed(make_report("second-order cusp dimension within its bounds, at the upper bound for k >= 4",
                                  double(bound_bad), 0.0, p),
                      sw));
  out.push_back(timed(make_report("weight 2 second-order cusp dimension one below the upper bound",
                                  double(defect_bad), 0.0, {{"levels", levels}}),
                      sw));
  out.push_back(timed(make_report("cohomology dimension by quotient sum equals 2g(dim M + dim S)", double(h1_bad),
                                  0.0, {{"levels", levels}, {"weights", "4.." + std::to_string(cfg.k_max)}}),
                      sw));
  return out;
}

// ---- series ----

SeriesRequest level11(const RunConfig& cfg, cplx z, cplx s, std::int64_t c_max) {
  SeriesRequest r;
  r.ctx = gamma0_context(11);
  r.z = z;
  r.s = s;
  r.c_max = c_max;
  r.f = builtin_form("f11");
  r.mode = cfg.mode;
  return r;
}

Reports series_suite(const RunConfig& cfg) {
  Reports out;
  const double tol_e = cfg.tol("series.eisenstein");
  for (auto [x, y, s, C] : {std::tuple{0.0, 1.0, 2.0, 1500L}, std::tuple{0.3, 1.7, 2.5, 600L}}) {
    Stopwatch sw;
    SeriesRequest r;
    r.z = {x, y};
    r.s = s;
    r.c_max = cmax_or(cfg, C);
    r.mode = cfg.mode;
    const auto v = eisenstein_streamed(r);
    const double ref = reference::eisenstein_fourier(x, y, s);
    out.push_back(timed(make_report("Eisenstein series against its Fourier expansion", std::abs(v.value - ref), tol_e,
                                    {{"z", format_param(r.z)},
                                     {"s", format_param(s)},
                                     {"c_max", std::to_string(r.c_max)},
                                     {"tail_estimate", format_param(v.tail_estimate)}}),
                        sw));
  }
  {
    Stopwatch sw;
    SeriesRequest r;
    r.k = 12;
    r.m = 1;
    r.c_max = cmax_or(cfg, 30);
    r.mode = cfg.mode;
    const Form delta = builtin_form("delta");
    std::vector<cplx> ratios;
    for (cplx z : {cplx(0, 1), cplx(0.5, 1), cplx(0, 2)}) {
      r.z = z;
      ratios.push_back(p_classical(r).value / eval_form(delta, z).value);
    }
    double worst = 0.0;
    for (auto q : ratios) worst = std::max(worst, std::abs(q / ratios[0] - 1.0));
    out.push_back(timed(make_report("weight 12 Poincare series is a multiple of Delta", worst,
                                    cfg.tol("series.poincare_ratio"),
                                    {{"c_max", std::to_string(r.c_max)}, {"ratio", format_param(ratios[0])}}),
                        sw));
  }
  {
    Stopwatch sw;
    SeriesRequest r;
    r.k = 4;
    r.m = 1;
    r.z = {0.0, 1.0};
    r.c_max = cmax_or(cfg, 200);
    r.mode = cfg.mode;
    const auto v = p_classical(r);
    out.push_back(timed(make_report("weight 4 Poincare series vanishes on the full modular group", std::abs(v.value),
                                    cfg.tol("series.poincare_zero"),
                                    {{"c_max", std::to_string(r.c_max)}, {"tail_estimate", format_param(v.tail_estimate)}}),
                        sw));
  }
  {
    Stopwatch sw;
    const Form f11 = builtin_form("f11");
    SeriesRequest r = level11(cfg, {0.0, 1.0}, 0.0, cmax_or(cfg, 60));
    r.k = 4;
    r.m = 1;
    r.L = Hom0Spec{{{1.0, f11, false}}};
    const auto set = CosetSum::build(r.ctx, "inf", r.z, r.c_max);
    const cplx P = p_second(r, set).value, P0 = p_classical(r, set).value;
    for (const Mat2& g : random_elements(r.ctx, 3, cfg.seed, 50, true)) {
      const cplx lhs = p_second(r, set.transported(g)).value * automorphy_factor(g, r.z, 4);
      const cplx rhs = P + hom0_eval(*r.L, g.inverse()) * P0;
      out.push_back(timed(make_report("second-order Poincare series transforms with L(gamma) P",
                                      std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)), cfg.tol("series.second_order"),
                                      {{"gamma", to_string(g)}, {"k", "4"}, {"c_max", std::to_string(r.c_max)}}),
                          sw));
    }
  }
  const Form f11 = builtin_form("f11");
  const auto law_elements = random_elements(gamma0_context(11), 2, cfg.seed + 1, 40, true);
  for (std::int64_t m : {0, 1}) {
    Stopwatch sw;
    const cplx z{0.0, 1.0};
    SeriesRequest r = level11(cfg, z, 1.5, cmax_or(cfg, 40));
    r.m = m;
    const auto set = CosetSum::build(r.ctx, "inf", z, r.c_max);
    const auto Z = z_series(r, set);
    const std::map<std::string, std::string> p{
        {"m", std::to_string(m)}, {"s", "1.5"}, {"c_max", std::to_string(r.c_max)}};
    out.push_back(timed(make_report("Z series equals G minus conj F times U",
                                    std::abs(Z.direct.value - Z.decomposed.value) / std::max(1.0, std::abs(Z.direct.value)),
                                    cfg.tol("series.z_laws"), p),
                        sw));
    SeriesRequest u = r;
    u.s = r.s + 1.0;
    u.k = 2;
    const cplx U = u_series(u, set).value;
    for (const Mat2& g : law_elements) {
      const cplx lhs = z_series(r, set.transported(g)).direct.value * automorphy_factor(g, z, 2);
      const cplx rhs = Z.direct.value - std::conj(modular_symbol(f11, g)) / z.imag() * U;
      auto q = p;
      q["gamma"] = to_string(g);
      out.push_back(timed(make_report("Z series transformation law", std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)),
                                      cfg.tol("series.z_laws"), q),
                          sw));
    }
    SeriesRequest d = level11(cfg, {0.05, 0.9}, 1.5, cmax_or(cfg, 20));
    d.m = m;
    auto a = z_dbar_residual(d, cfg.tol("series.z_laws"));
    auto b = g_recurrence_residual(d, cfg.tol("series.z_laws"));
    out.push_back(a);
    out.push_back(b);
  }
  return out;
}

// ---- symbols ----

Reports symbols_suite(const RunConfig& cfg) {
  Reports out;
  const auto ctx = gamma0_context(11);
  const Form f11 = builtin_form("f11");
  const auto els = random_elements(ctx, 10, cfg.seed, 60);
  {
    Stopwatch sw;
    double worst = 0.0;
    for (const auto& g : els)
      worst = std::max(worst, std::abs(modular_symbol(f11, g) - modular_symbol(f11, g, SymbolMethod::quadrature)));
    out.push_back(timed(make_report("modular symbol by Eichler integral equals quadrature", worst,
                                    cfg.tol("symbols.methods"), {{"elements", "10"}, {"max_entry", "60"}}),
                        sw));
  }
  {
    Stopwatch sw;
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < els.size(); ++i)
      worst = std::max(worst, std::abs(modular_symbol(f11, els[i] * els[i + 1]) - modular_symbol(f11, els[i]) -
                                       modular_symbol(f11, els[i + 1])));
    out.push_back(timed(make_report("modular symbol is additive", worst, cfg.tol("symbols.methods"),
                                    {{"pairs", std::to_string(els.size() - 1)}}),
                        sw));
  }
  {
    Stopwatch sw;
    double worst = 0.0;
    std::size_t count = 0;
    for (std::int64_t c = 11; c <= 44; c += 11, ++count)
      worst = std::max(worst, std::abs(modular_symbol(f11, Mat2{1, 0, c, 1})));
    for (const auto& g : els)
      for (const auto& cu : ctx.cusps) {
        const Mat2 p = g * cusp_stabilizer(cu) * g.inverse();
        if (std::abs(p.c) > 50 || p.c == 0) continue;
        worst = std::max(worst, std::abs(modular_symbol(f11, p)));
        ++count;
      }
    out.push_back(timed(make_report("modular symbol vanishes on parabolic elements", worst, cfg.tol("symbols.methods"),
                                    {{"elements", std::to_string(count)}}),
                        sw));
  }
  const PeriodOptions opt = period_options(cfg);
  const Evaluator f4 = form_evaluator(builtin_form("f11sq"));
  const Evaluator F = product_form(builtin_form("f11sq"), f11);
  {
    std::vector<std::pair<Mat2, Mat2>> pairs{{hyp, mat_T}, {hyp, lower11}};
    const auto pool = random_elements(ctx, 12, cfg.seed + 1, 25);
    for (std::size_t i = 0; i + 1 < pool.size(); ++i)
      if (path_reach(pool[i + 1] * pool[i]) <= 20000) pairs.push_back({pool[i + 1], pool[i]});
    out.push_back(cocycle_residual(f4, pairs, opt, cfg.tol("symbols.periods")));
  }
  out.push_back(dphi_identity_residual(f4, hyp, lower11, opt, cfg.tol("symbols.periods")));
  out.push_back(dphi_identity_residual(F, hyp, hyp, opt, cfg.tol("symbols.periods")));
  out.push_back(dphi_identity_residual(F, mat_T, hyp, opt, cfg.tol("symbols.periods")));
  {
    const auto triples = bounded_triples(ctx, 3, cfg.seed, 6000);
    const std::vector<std::pair<Mat2, Mat2>> pairs{{hyp, mat_T}, {hyp, lower11}};
    Cochain1 phi = memoize([&](const Mat2& g) { return period_polynomial(f4, g, PeriodBase::interior_i, opt); });
    auto first = z1_shriek_residual(phi, triples, pairs, 4, cfg.tol("symbols.six_term"));
    first.params["cochain"] = "periods of f11^2";
    out.push_back(first);
    Cochain1 phi2 = memoize([&](const Mat2& g) { return period_polynomial(F, g, PeriodBase::interior_i, opt); });
    auto second = z1_shriek_residual(phi2, triples, pairs, 4, cfg.tol("symbols.six_term"));
    second.params["cochain"] = "periods of f11^2 int f11";
    out.push_back(second);
    Stopwatch sw;
    Cochain1 bumped = [&](const Mat2& g) { return phi(g) + matrix_keyed_polynomial(g, 4); };
    const auto bad = z1_shriek_residual(bumped, triples, pairs, 4, cfg.tol("symbols.six_term"));
    // passes when the observed residual clears the detection threshold
    const double threshold = cfg.tol("symbols.perturbed_min");
    out.push_back(timed(make_report("six-term residual detects a perturbed cochain", threshold / bad.residual, 1.0,
                                    {{"six_term_residual", format_param(bad.residual)},
                                     {"threshold", format_param(threshold)},
                                     {"triples", std::to_string(triples.size())}},
                                    "residual is threshold / observed"),
                        sw));
  }
  return out;
}

// ---- operators ----

WeightedFunction power_y(double s) {
  return WeightedFunction(Evaluator{[s](cplx z) { return std::pow(cplx(z.imag()), s); }, 0, {}}, 0);
}

WeightedFunction whittaker_fn(double s, std::int64_t m) {
  return WeightedFunction(Evaluator{[s, m](cplx z) { return whittaker(s, m, z); }, 0, {}}, 0);
}

Reports operators_suite(const RunConfig& cfg) {
  Reports out;
  const double tol = cfg.tol("operators.identities");
  out.push_back(laplacian_residual(power_y(1.3), {0.3, 1.2}, tol));
  out.back().params["psi"] = "y^1.3";
  out.push_back(laplacian_residual(whittaker_fn(1.3, 1), {0.3, 1.2}, tol));
  out.back().params["psi"] = "W_1.3(z)";
  {
    const cplx z0{0.15, 1.1};
    const CosetSum set = CosetSum::build(gamma0_context(1), "inf", z0, cmax_or(cfg, 30));
    SeriesRequest req;
    req.s = 2.5;
    req.mode = cfg.mode;
    WeightedFunction E(Evaluator{[&](cplx w) { return eisenstein(req, set.moved_to(w)).value; }, 0, {}}, 0);
    out.push_back(laplacian_residual(E, z0, tol));
    out.back().params["psi"] = "E(z, 2.5) truncated";
  }
  const auto ctx1 = gamma0_context(1), ctx11 = gamma0_context(11);
  struct UCase {
    const GroupContext* ctx;
    const char* cusp;
    std::int64_t m;
    int k;
    cplx z;
  };
  for (const UCase& c : {UCase{&ctx1, "inf", 0, 0, {0.1, 1.1}}, UCase{&ctx1, "inf", 1, 0, {0.0, 1.0}},
                         UCase{&ctx1, "inf", 1, 4, {0.2, 0.9}}, UCase{&ctx11, "inf", 1, 2, {0.1, 0.6}},
                         UCase{&ctx11, "0", 1, -2, {0.1, 0.6}}})
    out.push_back(u_recurrence_residual(*c.ctx, c.cusp, c.m, c.z, 1.5, c.k, cmax_or(cfg, 40), tol));
  const cplx zl{0.3, 0.8};
  for (LadderScale scale : {LadderScale::printed, LadderScale::corrected})
    for (Direction dir : {Direction::raise, Direction::lower})
      for (int n = 1; n <= 3; ++n) {
        VerificationReport worst;
        for (std::int64_t m : {0, 1}) {
          auto r = ladder_residual(n, dir, 1.3, m, zl, scale, cfg.tol("operators.ladder"));
          if (m == 0 || r.residual > worst.residual) worst = r;
        }
        worst.params.erase("m");
        worst.params["m"] = "0,1";
        // the printed coefficients are 4^n times what the operators produce
        if (scale == LadderScale::printed) worst.known_finding = true;
        out.push_back(worst);
      }
  {
    out.push_back(theta_commutation_residual(mat_S, whittaker_fn(1.3, 1), {0.2, 1.1}, tol));
    const auto els = random_elements(ctx1, 8, cfg.seed, 6);
    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<int> shift(1, 4);
    for (const auto& g : els) {
      const Mat2 tau = g * translation(shift(rng)) * g.inverse();
      out.push_back(theta_commutation_residual(tau, power_y(1.3), {0.1, 1.2}, tol));
    }
    WeightedFunction yW(Evaluator{[](cplx z) { return z.imag() * whittaker(1.3, 1, z); }, 2, {}}, 2);
    out.push_back(theta_commutation_residual(Mat2{2, 1, 5, 3}, yW, {0.2, 1.1}, tol));
  }
  const Form f11 = builtin_form("f11");
  for (int n = 0; n <= 2; ++n)
    out.push_back(q_via_u_residual(ctx11, "inf", 1, f11, n, double(n) + 2.5, {0.05, 0.9}, cmax_or(cfg, 40),
                                   cfg.tol("operators.q_via_u")));
  return out;
}

// ---- crossing ----

Reports crossing_suite(const RunConfig& cfg) {
  Reports out;
  const auto zs = crossing_samples(5, cfg.seed);
  for (const Mat2& g : {translation(2), mat_S, mat_S * translation(2) * mat_S})
    out.push_back(kz_automorphy_residual(g, zs, cfg.tol("crossing.automorphy"), cfg.q_order));
  for (CrossingOracle o : {CrossingOracle::cardy, CrossingOracle::exclusive}) {
    Stopwatch sw;
    const auto c = crossing_curve(0.5, 2.0, 31, o, cfg.q_order);
    const bool cardy = o == CrossingOracle::cardy;
    auto r = make_report(cardy ? "crossing curve reconstructed from K matches the Cardy probability"
                               : "crossing curve reconstructed from K matches the exclusive crossing probability",
                         c.max_deviation, cfg.tol("crossing.curve"),
                         {{"r", "0.5..2"},
                          {"steps", "31"},
                          {"fitted_constant", format_param(c.fitted_constant)},
                          {"proportionality", format_param(c.proportionality)},
                          {"monotone", c.monotone ? "true" : "false"}});
    // K(ir) is not a multiple of the Cardy derivative
    r.known_finding = cardy;
    out.push_back(timed(r, sw));
    if (cardy) {
      double at_one = 1.0;
      for (std::size_t j = 0; j < c.r.size(); ++j)
        if (c.r[j] == 1.0) at_one = std::abs(c.P[j] - 0.5);
      out.push_back(make_report("reconstructed crossing probability at r = 1 is one half", at_one, 0.0,
                                {{"steps", "31"}}));
    }
  }
  return out;
}

std::string params_string(const std::map<std::string, std::string>& p) {
  std::string s;
  for (const auto& [k, v] : p) {
    if (k == "suite") continue;
    if (!s.empty()) s += ";";
    s += k + "=" + v;
  }
  return s;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

}  // namespace

std::map<std::string, double> default_tolerances() {
  return {{"series.eisenstein", 1e-6},     {"series.poincare_ratio", 1e-6}, {"series.poincare_zero", 1e-4},
          {"series.second_order", 1e-4},   {"series.z_laws", 1e-4},         {"symbols.methods", 1e-8},
          {"symbols.periods", 1e-5},       {"symbols.six_term", 1e-6},      {"symbols.perturbed_min", 1e-2},
          {"operators.identities", 1e-5},  {"operators.ladder", 1e-5},      {"operators.q_via_u", 1e-4},
          {"crossing.automorphy", 1e-5},   {"crossing.curve", 1e-4}};
}

RunConfig::RunConfig() : tolerances(default_tolerances()) {}

double RunConfig::tol(const std::string& key) const {
  const auto it = tolerances.find(key);
  if (it == tolerances.end()) throw ConfigError("unknown tolerance key: " + key);
  return it->second;
}

void RunConfig::set(const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key), value = trim(raw_value);
  if (key.rfind("tol.", 0) == 0) {
    const std::string t = key.substr(4);
    if (!tolerances.count(t)) throw ConfigError("unknown tolerance key: " + t);
    tolerances[t] = parse_positive(key, value);
  } else if (key == "q_order") {
    const auto v = parse_int(key, value);
    if (v < 0) throw ConfigError("q_order must be >= 0");
    q_order = std::size_t(v);
  } else if (key == "c_max") {
    const auto v = parse_int(key, value);
    if (v < 0) throw ConfigError("c_max must be >= 0");
    c_max = v;
  } else if (key == "panels") {
    const auto v = parse_int(key, value);
    if (v < 1) throw ConfigError("panels must be >= 1");
    panels = std::size_t(v);
  } else if (key == "mode") {
    if (value == "repro")
      mode = Reduction::repro;
    else if (value == "fast")
      mode = Reduction::fast;
    else
      throw ConfigError("mode must be repro or fast");
  } else if (key == "seed") {
    const auto v = parse_int(key, value);
    if (v < 0) throw ConfigError("seed must be >= 0");
    seed = std::uint64_t(v);
  } else if (key == "format") {
    if (value == "json")
      format = OutputFormat::json;
    else if (value == "csv")
      format = OutputFormat::csv;
    else if (value == "text")
      format = OutputFormat::text;
    else
      throw ConfigError("format must be json, csv or text");
  } else if (key == "max_level") {
    const auto v = parse_int(key, value);
    if (v < 1 || v > 10000) throw ConfigError("max_level must be in 1..10000");
    max_level = v;
  } else if (key == "k_min" || key == "k_max") {
    const auto v = parse_int(key, value);
    if (v % 2 != 0) throw ConfigError(key + ": even weight only");
    (key == "k_min" ? k_min : k_max) = int(v);
    if (k_min > k_max) throw ConfigError("k_min exceeds k_max");
  } else {
    throw ConfigError("unknown config key: " + key);
  }
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  j["tolerances"] = tolerances;
  j["q_order"] = q_order;
  j["c_max"] = c_max;
  j["panels"] = panels;
  j["mode"] = mode == Reduction::repro ? "repro" : "fast";
  j["seed"] = seed;
  j["max_level"] = max_level;
  j["k_min"] = k_min;
  j["k_max"] = k_max;
  return j;
}

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    out.push_back({trim(line.substr(0, eq)), value});
  }
  return out;
}

std::vector<std::string> suite_names() { return {"dims", "series", "symbols", "operators", "crossing"}; }

std::vector<VerificationReport> run_suite(const std::string& name, const RunConfig& cfg) {
  if (name == "all") {
    Reports all;
    for (const auto& s : suite_names()) {
      auto part = run_suite(s, cfg);
      all.insert(all.end(), part.begin(), part.end());
    }
    return all;
  }
  kernels::select(cfg.mode == Reduction::fast ? kernels::Isa::avx2 : kernels::Isa::scalar);
  Reports out;
  if (name == "dims")
    out = dims_suite(cfg);
  else if (name == "series")
    out = series_suite(cfg);
  else if (name == "symbols" || name == "cohomology")
    out = symbols_suite(cfg);
  else if (name == "operators")
    out = operators_suite(cfg);
  else if (name == "crossing")
    out = crossing_suite(cfg);
  else
    throw ConfigError("unknown suite: " + name);
  std::stable_sort(out.begin(), out.end(), [](const VerificationReport& a, const VerificationReport& b) {
    return std::tie(a.identity, a.params) < std::tie(b.identity, b.params);
  });
  const std::string tag = name == "cohomology" ? "symbols" : name;
  for (auto& r : out) r.params["suite"] = tag;
  return out;
}

std::vector<const VerificationReport*> failures(const std::vector<VerificationReport>& reports, bool strict) {
  std::vector<const VerificationReport*> out;
  for (const auto& r : reports)
    if (!r.pass && (strict || !r.known_finding)) out.push_back(&r);
  return out;
}

std::string library_version() { return "0.1.0"; }

std::string render(const std::string& suite, const std::vector<VerificationReport>& reports, const RunConfig& cfg) {
  const bool timing = cfg.mode == Reduction::fast;
  std::ostringstream os;
  switch (cfg.format) {
    case OutputFormat::json: {
      nlohmann::json j;
      j["suite"] = suite;
      j["reports"] = nlohmann::json::array();
      for (const auto& r : reports) j["reports"].push_back(to_json(r, timing));
      j["config"] = cfg.to_json();
      j["version"] = library_version();
      os << j.dump(2) << "\n";
      break;
    }
    case OutputFormat::csv:
      os << "suite,identity,params,residual,tolerance,pass,known_finding" << (timing ? ",seconds" : "") << "\n";
      for (const auto& r : reports) {
        const auto it = r.params.find("suite");
        os << (it == r.params.end() ? suite : it->second) << "," << csv_field(r.identity) << ","
           << csv_field(params_string(r.params)) << "," << format_param(r.residual) << ","
           << format_param(r.tolerance) << "," << (r.pass ? "true" : "false") << ","
           << (r.known_finding ? "true" : "false");
        if (timing) os << "," << format_param(r.seconds);
        os << "\n";
      }
      break;
    case OutputFormat::text:
      for (const auto& r : reports) {
        os << (r.pass ? "PASS " : r.known_finding ? "KNOWN" : "FAIL ") << "  " << r.identity
           << "  residual=" << format_param(r.residual) << " tol=" << format_param(r.tolerance);
        const std::string p = params_string(r.params);
        if (!p.empty()) os << "  [" << p << "]";
        if (timing) os << "  " << format_param(r.seconds) << "s";
        os << "\n";
      }
      break;
  }
  return os.str();
}

}  // namespace somf
