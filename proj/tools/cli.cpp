#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "somf/autoseries.hpp"
#include "somf/crossing.hpp"
#include "somf/dims.hpp"
#include "somf/eval.hpp"
#include "somf/kernels.hpp"
#include "somf/symbols.hpp"
#include "somf/verify.hpp"

namespace somf::cli {

namespace {

using nlohmann::json;

// Thrown for bad arguments detected after parsing; exits 2 with usage.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

cplx parse_complex(const std::string& text) {
  const auto comma = text.find(',');
  try {
    std::size_t used = 0;
    if (comma == std::string::npos) {
      const double re = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return {re, 0.0};
    }
    const std::string a = text.substr(0, comma), b = text.substr(comma + 1);
    const double re = std::stod(a, &used);
    if (used != a.size()) throw std::invalid_argument(text);
    const double im = std::stod(b, &used);
    if (used != b.size()) throw std::invalid_argument(text);
    return {re, im};
  } catch (const std::logic_error&) {
    throw UsageError("expected x or x,y: " + text);
  }
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

json series_value_json(const SeriesValue& v) {
  return {{"value", complex_json(v.value)}, {"tail_estimate", v.tail_estimate}, {"terms_used", v.terms_used}};
}

Reduction parse_mode(const std::string& m) {
  if (m == "repro") return Reduction::repro;
  if (m == "fast") return Reduction::fast;
  throw UsageError("mode must be repro or fast");
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path);
  f << text;
}

// ---- dims ----

struct DimsArgs {
  std::int64_t level = 1;
  std::optional<int> k, kmin, kmax;
  std::string format = "json";
};

int cmd_dims(const DimsArgs& a, std::ostream& out) {
  int lo = 2, hi = 12;
  if (a.k) lo = hi = *a.k;
  if (a.kmin) lo = *a.kmin;
  if (a.kmax) hi = *a.kmax;
  for (int k : {lo, hi})
    if (k % 2 != 0) throw UsageError("even weight only (got k=" + std::to_string(k) + ")");
  if (lo > hi) throw UsageError("--kmin exceeds --kmax");
  if (a.level < 1) throw UsageError("--level must be positive");
  const auto ctx = gamma0_context(a.level);
  json rows = json::array();
  for (int k = lo; k <= hi; k += 2) {
    const auto b = bounds_report(ctx, k, SpaceKind::S2);
    json row{{"N", a.level},
             {"k", k},
             {"S", dim_first_order(ctx, k, SpaceKind::S)},
             {"M", dim_first_order(ctx, k, SpaceKind::M)},
             {"E", dim_first_order(ctx, k, SpaceKind::E)},
             {"S2", dim_second_order(ctx, k, SpaceKind::S2)},
             {"M2", dim_second_order(ctx, k, SpaceKind::M2)},
             {"H1", k >= 2 ? json(dim_cohomology(ctx, k)) : json(nullptr)},
             {"lower", b.lower},
             {"upper", b.upper},
             {"path", dim_report(ctx, k, SpaceKind::S2).path}};
    rows.push_back(row);
  }
  if (a.format == "csv") {
    out << "N,k,S,M,E,S2,M2,H1,lower,upper\n";
    for (const auto& r : rows) {
      out << r["N"] << "," << r["k"] << "," << r["S"] << "," << r["M"] << "," << r["E"] << "," << r["S2"] << ","
          << r["M2"] << "," << (r["H1"].is_null() ? std::string() : r["H1"].dump()) << "," << r["lower"] << ","
          << r["upper"] << "\n";
    }
  } else {
    json j{{"group", ctx.name()}, {"genus", ctx.genus}, {"cusps", ctx.cusp_count()}, {"rows", rows}};
    out << j.dump(2) << "\n";
  }
  return 0;
}

// ---- series ----

struct SeriesArgs {
  std::string series = "E";
  std::int64_t level = 1;
  std::string cusp = "inf";
  std::int64_t m = 0;
  int k = 0;
  std::string s = "2";
  std::string z = "0,1";
  std::int64_t cmax = 50;
  std::string mode = "repro";
  std::string form = "f11";
  int n = 1;
};

int cmd_series(const SeriesArgs& a, std::ostream& out) {
  SeriesRequest r;
  r.ctx = gamma0_context(a.level);
  r.cusp = a.cusp;
  r.m = a.m;
  r.k = a.k;
  r.s = parse_complex(a.s);
  r.z = parse_complex(a.z);
  r.c_max = a.cmax;
  r.mode = parse_mode(a.mode);
  r.n = a.n;
  kernels::select(r.mode == Reduction::fast ? kernels::Isa::avx2 : kernels::Isa::scalar);
  const bool needs_form = a.series == "P2" || a.series == "Q" || a.series == "G" || a.series == "Z";
  if (needs_form) {
    const Form f = resolve_form(a.form);
    if (a.series == "P2")
      r.L = Hom0Spec{{{1.0, f, false}}};
    else
      r.f = f;
  }
  json j{{"series", a.series},
         {"group", r.ctx.name()},
         {"cusp", r.cusp},
         {"m", r.m},
         {"k", r.k},
         {"s", complex_json(r.s)},
         {"z", complex_json(r.z)},
         {"c_max", r.c_max}};
  if (needs_form) j["form"] = a.form;
  if (a.series == "E")
    j["result"] = series_value_json(eisenstein(r));
  else if (a.series == "U")
    j["result"] = series_value_json(u_series(r));
  else if (a.series == "P")
    j["result"] = series_value_json(p_classical(r));
  else if (a.series == "P2")
    j["result"] = series_value_json(p_second(r));
  else if (a.series == "Q")
    j["result"] = series_value_json(q_series(r));
  else if (a.series == "G")
    j["result"] = series_value_json(g_series(r));
  else if (a.series == "Z") {
    const auto v = z_series(r);
    j["result"] = series_value_json(v.direct);
    j["decomposed"] = series_value_json(v.decomposed);
  } else {
    throw UsageError("--series must be one of E, U, P, P2, Q, G, Z");
  }
  out << j.dump(2) << "\n";
  return 0;
}

// ---- eval ----

struct EvalArgs {
  std::string form = "delta";
  std::string z = "0,1";
  std::size_t order = 0;
  double tol = default_qtol;
  int n = 0;
};

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  const Form f = resolve_form(a.form);
  const cplx z = parse_complex(a.z);
  if (!(a.tol > 0.0)) throw UsageError("--tol must be positive");
  QEval v;
  if (a.order > 0) {
    const auto series = a.n == 0 ? f.series(a.order) : f.integrated(a.n, a.order);
    v = eval_qexp(*series, z, a.tol);
  } else {
    v = eval_form(f, z, a.n, a.tol);
  }
  json j{{"form", a.form}, {"weight", f.weight()}, {"z", complex_json(z)}, {"n", a.n},
         {"value", complex_json(v.value)}, {"tail", v.tail}, {"terms", v.terms}};
  out << j.dump(2) << "\n";
  return 0;
}

// ---- periods ----

struct PeriodsArgs {
  std::string form = "delta";
  std::string gamma = "0,-1,1,0";
  std::optional<int> k;
  std::string base = "i";
  std::size_t panels = 2048;
};

int cmd_periods(const PeriodsArgs& a, std::ostream& out) {
  const Form f = resolve_form(a.form);
  if (a.k && *a.k != f.weight())
    throw UsageError("--k " + std::to_string(*a.k) + " does not match the weight " + std::to_string(f.weight()) +
                     " of " + a.form);
  Mat2 g;
  try {
    g = parse_mat2(a.gamma);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  PeriodBase base;
  if (a.base == "inf")
    base = PeriodBase::cusp_infinity;
  else if (a.base == "i")
    base = PeriodBase::interior_i;
  else
    throw UsageError("--base must be i or inf");
  PeriodOptions opt;
  opt.max_panels = a.panels;
  const auto P = period_polynomial(form_evaluator(f), g, base, opt);
  json coeffs = json::array();
  for (cplx c : P.c) coeffs.push_back(complex_json(c));
  json j{{"form", a.form}, {"k", P.k}, {"gamma", to_string(g)}, {"base", a.base}, {"coefficients", coeffs}};
  out << j.dump(2) << "\n";
  return 0;
}

// ---- crossing ----

struct CrossingArgs {
  double rmin = 0.5, rmax = 2.0;
  std::size_t steps = 31;
  std::size_t order = 0;
  std::string oracle = "cardy";
  std::string output;
};

int cmd_crossing(const CrossingArgs& a, std::ostream& out) {
  CrossingOracle o;
  if (a.oracle == "cardy")
    o = CrossingOracle::cardy;
  else if (a.oracle == "exclusive")
    o = CrossingOracle::exclusive;
  else
    throw UsageError("--oracle must be cardy or exclusive");
  const auto c = crossing_curve(a.rmin, a.rmax, a.steps, o, a.order);
  std::ostringstream csv;
  csv << "r,re_K,im_K,P_reconstructed,P_oracle,abs_dev\n";
  for (std::size_t j = 0; j < c.r.size(); ++j)
    csv << format_param(c.r[j]) << "," << format_param(c.K[j].real()) << "," << format_param(c.K[j].imag()) << ","
        << format_param(c.P[j]) << "," << format_param(c.P_oracle[j]) << "," << format_param(c.deviation[j]) << "\n";
  write_output(a.output, csv.str(), out);
  if (!a.output.empty() && a.output != "-") {
    json j{{"oracle", a.oracle},
           {"rows", c.r.size()},
           {"fitted_constant", complex_json(c.fitted_constant)},
           {"proportionality", c.proportionality},
           {"max_deviation", c.max_deviation},
           {"monotone", c.monotone},
           {"file", a.output}};
    out << j.dump(2) << "\n";
  }
  return 0;
}

// ---- verify ----

struct VerifyArgs {
  std::string suite = "all";
  std::string config;
  std::vector<std::string> tol;
  std::string output;
  bool strict = false;
};

int cmd_verify(const VerifyArgs& a, const std::vector<std::pair<std::string, std::string>>& flags, std::ostream& out,
               std::ostream& err) {
  RunConfig cfg;
  if (!a.config.empty())
    for (const auto& [k, v] : read_config_file(a.config)) cfg.set(k, v);
  for (const auto& [k, v] : flags) cfg.set(k, v);
  for (const auto& t : a.tol) {
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError("--tol expects key=value: " + t);
    cfg.set("tol." + t.substr(0, eq), t.substr(eq + 1));
  }
  const auto names = suite_names();
  if (a.suite != "all" && a.suite != "cohomology" && std::find(names.begin(), names.end(), a.suite) == names.end())
    throw ConfigError("unknown suite: " + a.suite);
  const auto reports = run_suite(a.suite, cfg);
  write_output(a.output, render(a.suite, reports, cfg), out);
  const auto bad = failures(reports, a.strict);
  std::set<std::string> known;
  for (const auto& r : reports)
    if (!r.pass && r.known_finding && !a.strict && known.insert(r.identity).second)
      err << "known finding: " << r.identity << "\n";
  for (const auto* r : bad) err << "FAILED: " << r->identity << " residual " << format_param(r->residual) << "\n";
  return bad.empty() ? 0 : 1;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Second-order modular forms: dimensions, series, periods, operators and crossing checks"};
  app.require_subcommand(1);

  DimsArgs dims;
  auto* d = app.add_subcommand("dims", "Dimension table for Gamma0(N)");
  d->add_option("--level", dims.level, "Level N")->required();
  d->add_option("--k", dims.k, "Single even weight");
  d->add_option("--kmin", dims.kmin, "Smallest even weight (default 2)");
  d->add_option("--kmax", dims.kmax, "Largest even weight (default 12)");
  d->add_option("--format", dims.format)->check(CLI::IsMember({"json", "csv"}));

  SeriesArgs ser;
  auto* s = app.add_subcommand("series", "Evaluate a truncated automorphic series");
  s->add_option("--series", ser.series)->check(CLI::IsMember({"E", "U", "P", "P2", "Q", "G", "Z"}));
  s->add_option("--level", ser.level);
  s->add_option("--cusp", ser.cusp);
  s->add_option("--m", ser.m);
  s->add_option("--k", ser.k);
  s->add_option("--s", ser.s, "s as re or re,im");
  s->add_option("--z", ser.z, "z as x,y");
  s->add_option("--cmax", ser.cmax);
  s->add_option("--mode", ser.mode)->check(CLI::IsMember({"repro", "fast"}));
  s->add_option("--form", ser.form, "Form for P2 (its modular symbol) and Q, G, Z");
  s->add_option("--n", ser.n, "Antiderivative index for Q");

  EvalArgs ev;
  auto* e = app.add_subcommand("eval", "Evaluate a form from its q-expansion");
  e->add_option("--form", ev.form, "Builtin label or q-expansion file");
  e->add_option("--z", ev.z);
  e->add_option("--order", ev.order, "Fixed expansion order (0 grows as needed)");
  e->add_option("--tol", ev.tol);
  e->add_option("--n", ev.n, "Antiderivative (>0) or derivative (<0) index");

  PeriodsArgs per;
  auto* p = app.add_subcommand("periods", "Period polynomial of a form");
  p->add_option("--form", per.form);
  p->add_option("--gamma", per.gamma, "a,b,c,d");
  p->add_option("--k", per.k);
  p->add_option("--base", per.base)->check(CLI::IsMember({"i", "inf"}));
  p->add_option("--panels", per.panels);

  CrossingArgs cr;
  auto* c = app.add_subcommand("crossing", "Crossing probability curve from K(ir)");
  c->add_option("--rmin", cr.rmin);
  c->add_option("--rmax", cr.rmax);
  c->add_option("--steps", cr.steps);
  c->add_option("--order", cr.order, "Fixed q-expansion order (0 grows as needed)");
  c->add_option("--oracle", cr.oracle)->check(CLI::IsMember({"cardy", "exclusive"}));
  c->add_option("-o,--output", cr.output, "CSV file (stdout if absent)");

  VerifyArgs ver;
  std::string seed, mode, format, cmax, q_order, panels;
  auto* v = app.add_subcommand("verify", "Run identity checks and emit reports");
  v->add_option("--suite", ver.suite)
      ->check(CLI::IsMember({"dims", "series", "symbols", "cohomology", "operators", "crossing", "all"}));
  v->add_option("--config", ver.config, "key = value file; flags win");
  auto* o_seed = v->add_option("--seed", seed, "Seed for sampled group elements and points");
  auto* o_mode = v->add_option("--mode", mode, "repro (scalar kernels, no timing) or fast");
  auto* o_format = v->add_option("--format", format, "json, csv or text");
  auto* o_cmax = v->add_option("--cmax", cmax, "Override every coset truncation radius");
  auto* o_order = v->add_option("--q-order", q_order, "Fixed q-expansion order for K (0 grows)");
  auto* o_panels = v->add_option("--panels", panels, "Quadrature panel cap for periods");
  v->add_option("--tol", ver.tol, "suite.check=value, repeatable");
  v->add_option("-o,--output", ver.output);
  v->add_flag("--strict", ver.strict, "Known findings also fail");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    if (ex.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << ex.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (*d) return cmd_dims(dims, out);
    if (*s) return cmd_series(ser, out);
    if (*e) return cmd_eval(ev, out);
    if (*p) return cmd_periods(per, out);
    if (*c) return cmd_crossing(cr, out);
    if (*v) {
      std::vector<std::pair<std::string, std::string>> flags;
      auto push = [&](CLI::Option* o, const char* key, const std::string& val) {
        if (o->count()) flags.push_back({key, val});
      };
      push(o_seed, "seed", seed);
      push(o_mode, "mode", mode);
      push(o_format, "format", format);
      push(o_cmax, "c_max", cmax);
      push(o_order, "q_order", q_order);
      push(o_panels, "panels", panels);
      return cmd_verify(ver, flags, out, err);
    }
  } catch (const UsageError& ex) {
    err << "error: " << ex.what() << "\n" << app.get_subcommands().front()->help();
    return 2;
  } catch (const ConfigError& ex) {
    err << "config error: " << ex.what() << "\n";
    return 2;
  } catch (const UnsupportedWeight& ex) {
    err << "error: " << ex.what() << "\n";
    return 2;
  } catch (const Error& ex) {
    err << "error: " << ex.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace somf::cli
