#include "somf/operators.hpp"

#include <cmath>
#include <map>
#include <utility>

namespace somf {

namespace {

constexpr cplx I{0.0, 1.0};
constexpr double kPi = 3.14159265358979323846;

cplx ipow(cplx b, int e) {
  cplx r = 1.0;
  bool inv = e < 0;
  for (unsigned u = unsigned(inv ? -e : e); u; u >>= 1, b *= b)
    if (u & 1u) r *= b;
  return inv ? 1.0 / r : r;
}

double factorial(int n) {
  double r = 1.0;
  for (int j = 2; j <= n; ++j) r *= double(j);
  return r;
}

double step_for(cplx z, double h, double rel) {
  const double y = z.imag();
  if (h <= 0.0) h = rel * y;
  if (!(h > 1e-13 * std::max(1.0, std::abs(z))) || h >= 0.5 * y) throw DomainError("step underflow");
  return h;
}

// Two Richardson levels for an O(h^2) estimate sampled at h, h/2, h/4.
NumericValue richardson(const cplx a0, const cplx a1, const cplx a2) {
  const cplx b1 = (4.0 * a1 - a0) / 3.0, b2 = (4.0 * a2 - a1) / 3.0;
  const cplx c = (16.0 * b2 - b1) / 15.0;
  return {c, std::abs(c - b2)};
}

cplx op_at_step(const WeightedFunction& psi, Direction dir, cplx z, double h, cplx center) {
  const double y = z.imag();
  const cplx dx = (psi(z + h) - psi(z - h)) / (2.0 * h);
  const cplx dy = (psi(z + I * h) - psi(z - I * h)) / (2.0 * h);
  const double half_k = 0.5 * psi.k;
  if (dir == Direction::raise) return I * y * dx + y * dy + half_k * center;
  return -I * y * dx + y * dy - half_k * center;
}

NumericValue op_num(const WeightedFunction& psi, Direction dir, cplx z, double h) {
  require_upper(z);
  const cplx center = psi(z);
  return richardson(op_at_step(psi, dir, z, h, center), op_at_step(psi, dir, z, h / 2, center),
                    op_at_step(psi, dir, z, h / 4, center));
}

double scaled(double residual, cplx reference) { return residual / std::max(1.0, std::abs(reference)); }

}  // namespace

WeightedFunction::WeightedFunction(Evaluator fn, int weight) : f(std::move(fn)), k(weight) {
  if (k % 2) throw UnsupportedWeight("weighted functions need even weight");
  f.weight = k;
}

NumericValue raise_lower_num(const WeightedFunction& psi, Direction dir, cplx z, double h) {
  require_upper(z);
  return op_num(psi, dir, z, step_for(z, h, 1e-5));
}

WeightedFunction apply_numeric(const WeightedFunction& psi, Direction dir, double h) {
  const int k = psi.k + (dir == Direction::raise ? 2 : -2);
  Evaluator e{[psi, dir, h](cplx z) { return raise_lower_num(psi, dir, z, h).value; }, k, {}};
  return WeightedFunction(std::move(e), k);
}

namespace {

NumericValue wirtinger(const std::function<cplx(cplx)>& fn, cplx z, double h, double sign) {
  require_upper(z);
  h = step_for(z, h, 1e-3);
  auto d = [&](double t) {
    const cplx dx = (fn(z + t) - fn(z - t)) / (2.0 * t);
    const cplx dy = (fn(z + I * t) - fn(z - I * t)) / (2.0 * t);
    return 0.5 * (dx + sign * I * dy);
  };
  return richardson(d(h), d(h / 2), d(h / 4));
}

SeriesRequest with(SeriesRequest r, cplx s, int k, int n) {
  r.s = s;
  r.k = k;
  r.n = n;
  return r;
}

}  // namespace

NumericValue dz_num(const std::function<cplx(cplx)>& fn, cplx z, double h) { return wirtinger(fn, z, h, -1.0); }
NumericValue dzbar_num(const std::function<cplx(cplx)>& fn, cplx z, double h) { return wirtinger(fn, z, h, 1.0); }

NumericValue laplacian_num(const WeightedFunction& psi, cplx z, double h) {
  require_upper(z);
  h = step_for(z, h, 1e-3);
  const cplx c = psi(z);
  auto second = [&](double t) {
    return (psi(z + t) + psi(z - t) + psi(z + I * t) + psi(z - I * t) - 4.0 * c) / (t * t);
  };
  NumericValue r = richardson(second(h), second(h / 2), second(h / 4));
  const double y2 = z.imag() * z.imag();
  return {-y2 * r.value, y2 * r.error};
}

cplx omega(int n, std::int64_t m, int i, int j) {
  if (m == 0) throw DomainError("omega needs m != 0");
  if (n < 0 || i < 0 || i > n || j < -i || j > i) throw DomainError("omega index out of range");
  const double sgn = m > 0 ? 1.0 : -1.0;
  return std::pow(-4.0 * kPi * double(m), i) * std::pow(sgn, j) * factorial(2 * n) /
         (factorial(i + j) * factorial(i - j) * factorial(n - i));
}

cplx OperatorExpansion::operator()(cplx s, cplx z) const {
  require_upper(z);
  cplx acc = 0.0;
  for (const auto& t : terms) acc += t.coef * std::pow(z.imag(), t.i) * whittaker(s + double(t.j), m, z);
  return acc;
}

OperatorExpansion ladder_expansion(int n, Direction dir, std::int64_t m, LadderScale scale) {
  if (n < 0) throw DomainError("ladder order must be non-negative");
  const std::int64_t mm = dir == Direction::raise ? m : -m;
  const double norm = scale == LadderScale::corrected ? std::pow(4.0, -n) : 1.0;
  OperatorExpansion e;
  e.n = n;
  e.m = m;
  for (int i = 0; i <= n; ++i)
    for (int j = -i; j <= i; ++j) e.terms.push_back({norm * omega(n, mm, i, j), i, j});
  return e;
}

cplx whittaker_ladder(int n, Direction dir, cplx s, std::int64_t m, cplx z, LadderScale scale) {
  require_upper(z);
  if (n < 0) throw DomainError("ladder order must be non-negative");
  if (m == 0) {
    cplx p = 1.0;
    for (int j = 0; j < n; ++j) p *= s + double(j);
    return p * std::pow(cplx(z.imag()), s);
  }
  return ladder_expansion(n, dir, m, scale)(s, z);
}

VerificationReport ladder_residual(int n, Direction dir, cplx s, std::int64_t m, cplx z, LadderScale scale,
                                   double tol) {
  Stopwatch sw;
  if (n < 1) throw DomainError("ladder check needs n >= 1");
  // One numeric step applied to the order n-1 expansion, so differences are never nested.
  const int sign = dir == Direction::raise ? 1 : -1;
  WeightedFunction prev(Evaluator{[=](cplx w) { return whittaker_ladder(n - 1, dir, s, m, w, scale); }, 0, {}},
                        sign * 2 * (n - 1));
  const cplx numeric = raise_lower_num(prev, dir, z, 1e-3 * z.imag()).value;
  const cplx expansion = whittaker_ladder(n, dir, s, m, z, scale);
  const double rel = std::abs(expansion - numeric) / std::max(std::abs(numeric), 1e-300);
  auto r = make_report(scale == LadderScale::printed ? "Whittaker ladder expansion"
                                                     : "Whittaker ladder expansion, rescaled by 4^-n",
                       rel, tol,
                       {{"n", std::to_string(n)},
                        {"direction", dir == Direction::raise ? "R" : "L"},
                        {"s", format_param(s)},
                        {"m", std::to_string(m)},
                        {"z", format_param(z)},
                        {"ratio", format_param(expansion / numeric)}});
  r.seconds = sw.seconds();
  return r;
}

VerificationReport laplacian_residual(const WeightedFunction& psi, cplx z, double tol, double h) {
  Stopwatch sw;
  if (psi.k != 0) throw UnsupportedWeight("the Laplacian factorizations act on weight 0");
  h = step_for(z, h, 1e-3);
  const double rel = h / z.imag();
  const cplx direct = laplacian_num(psi, z, h).value;
  auto inner = [&](Direction d) {
    Evaluator e{[&psi, d, rel](cplx w) { return op_num(psi, d, w, rel * w.imag()).value; },
                d == Direction::raise ? 2 : -2, {}};
    return WeightedFunction(std::move(e), e.weight);
  };
  const cplx lr = -op_num(inner(Direction::raise), Direction::lower, z, h).value;
  const cplx rl = -op_num(inner(Direction::lower), Direction::raise, z, h).value;
  const double e1 = std::abs(lr - direct), e2 = std::abs(rl - direct);
  auto r = make_report("Laplacian as lowering after raising", scaled(std::max(e1, e2), direct), tol,
                       {{"z", format_param(z)},
                        {"direct", format_param(direct)},
                        {"lower_raise", format_param(lr)},
                        {"raise_lower", format_param(rl)}});
  r.seconds = sw.seconds();
  return r;
}

VerificationReport u_recurrence_residual(const GroupContext& ctx, const std::string& cusp, std::int64_t m, cplx z,
                                         cplx s, int k, std::int64_t c_max, double tol) {
  Stopwatch sw;
  if (s.real() <= 1.0) throw DivergentSeries("U recurrences need Re(s) > 1");
  const CosetSum set = CosetSum::build(ctx, cusp, z, c_max);
  SeriesRequest req;
  req.ctx = ctx;
  req.cusp = cusp;
  req.m = m;
  req.z = z;
  req.c_max = c_max;
  auto U = [&](cplx sv, int kv, cplx at) {
    SeriesRequest q = req;
    q.s = sv;
    q.k = kv;
    return u_series(q, set.moved_to(at)).value;
  };
  WeightedFunction Uk(Evaluator{[&](cplx w) { return U(s, k, w); }, k, {}}, k);
  const double h = 1e-3 * z.imag();
  const cplx base = U(s, k, z);
  const cplx raised = op_num(Uk, Direction::raise, z, h).value;
  const cplx raised_rhs = (s + 0.5 * k) * U(s, k + 2, z) - 4.0 * kPi * double(m) * U(s + 1.0, k + 2, z);
  const cplx lowered = op_num(Uk, Direction::lower, z, h).value;
  const cplx lowered_rhs = (s - 0.5 * k) * U(s, k - 2, z);
  const double er = scaled(std::abs(raised - raised_rhs), base);
  const double el = scaled(std::abs(lowered - lowered_rhs), base);
  auto r = make_report("raising and lowering recurrences of U", std::max(er, el), tol,
                       {{"m", std::to_string(m)},
                        {"z", format_param(z)},
                        {"s", format_param(s)},
                        {"k", std::to_string(k)},
                        {"c_max", std::to_string(c_max)},
                        {"terms", std::to_string(set.size())},
                        {"raising", format_param(er)},
                        {"lowering", format_param(el)}});
  r.seconds = sw.seconds();
  return r;
}

WeightedFunction theta(const Mat2& tau, const WeightedFunction& psi) {
  const int k = psi.k;
  Evaluator e{[tau, psi, k](cplx z) {
                const cplx j = double(tau.c) * z + double(tau.d);
                return psi(tau.apply(z)) * ipow(std::conj(j) / std::abs(j), k);
              },
              k, {}};
  return WeightedFunction(std::move(e), k);
}

VerificationReport theta_commutation_residual(const Mat2& tau, const WeightedFunction& psi, cplx z, double tol) {
  Stopwatch sw;
  require_upper(z);
  const cplx tz = tau.apply(z);
  const cplx j = double(tau.c) * z + double(tau.d);
  const cplx eps_conj = std::conj(j) / std::abs(j);
  const WeightedFunction th = theta(tau, psi);
  double worst = 0.0;
  std::map<std::string, std::string> params{{"tau", to_string(tau)}, {"z", format_param(z)},
                                            {"k", std::to_string(psi.k)}};
  for (Direction d : {Direction::lower, Direction::raise}) {
    const int k2 = psi.k + (d == Direction::raise ? 2 : -2);
    const cplx lhs = raise_lower_num(psi, d, tz).value * ipow(eps_conj, k2);
    const cplx rhs = raise_lower_num(th, d, z).value;
    const double e = scaled(std::abs(lhs - rhs), rhs);
    params[d == Direction::raise ? "raising" : "lowering"] = format_param(e);
    worst = std::max(worst, e);
  }
  auto r = make_report("theta operator commutes with raising and lowering", worst, tol, std::move(params));
  r.seconds = sw.seconds();
  return r;
}

std::vector<LoweredTerm> lowered_y_conj(int r) {
  if (r < 0) throw DomainError("lowering order must be non-negative");
  // key (y power, derivative order)
  std::map<std::pair<int, int>, cplx> cur{{{1, 0}, 1.0}};
  int k = -2;
  for (int step = 0; step < r; ++step) {
    std::map<std::pair<int, int>, cplx> next;
    for (const auto& [key, c] : cur) {
      const auto [j, p] = key;
      next[{j, p}] += c * (double(j) - 0.5 * k);
      next[{j + 1, p + 1}] += -2.0 * I * c;
    }
    cur = std::move(next);
    k -= 2;
  }
  std::vector<LoweredTerm> out;
  for (const auto& [key, c] : cur)
    if (c != 0.0) out.push_back({c, key.first, key.second});
  return out;
}

cplx eval_lowered(const std::vector<LoweredTerm>& terms, const Form& f, cplx z) {
  require_upper(z);
  cplx acc = 0.0;
  for (const auto& t : terms)
    acc += t.coef * std::pow(z.imag(), t.ypow) * std::conj(eval_form(f, z, -t.deriv).value);
  return acc;
}

VerificationReport q_via_u_residual(const GroupContext& ctx, const std::string& cusp, std::int64_t m,
                                    const Form& f, int n, cplx s, cplx z, std::int64_t c_max, double tol) {
  Stopwatch sw;
  if (f.weight() != 2) throw UnsupportedWeight("the Q-via-U expansion needs a weight-2 form");
  if (n < 0) throw DomainError("derivative order must be non-negative");
  if ((s - double(n) - 1.0).real() <= 1.0) throw DivergentSeries("Q-via-U expansion needs Re(s - n - 1) > 1");
  const CosetSum set = CosetSum::build(ctx, cusp, z, c_max);
  SeriesRequest req;
  req.ctx = ctx;
  req.cusp = cusp;
  req.m = m;
  req.z = z;
  req.c_max = c_max;
  req.f = f;
  req.s = s;
  req.n = -n;
  const cplx lhs = q_series(req, set).value;
  cplx rhs = 0.0;
  for (int r = 0; r <= n; ++r) {
    SeriesRequest u = req;
    u.f.reset();
    u.s = s - double(n) - 1.0;
    u.k = 2 * r + 2;
    const double coef = ((n - r) % 2 ? -1.0 : 1.0) * factorial(n) / (factorial(r) * factorial(n - r)) *
                        factorial(n + 1) / factorial(r + 1);
    rhs += coef * eval_lowered(lowered_y_conj(r), f, z) * u_series(u, set).value;
  }
  rhs *= ipow(-2.0 * I, -n);
  const double rel = std::abs(lhs - rhs) / std::max(std::abs(lhs), 1e-300);
  auto rep = make_report("Q series as a combination of U series", rel, tol,
                         {{"form", f.label()},
                          {"n", std::to_string(n)},
                          {"m", std::to_string(m)},
                          {"s", format_param(s)},
                          {"z", format_param(z)},
                          {"c_max", std::to_string(c_max)},
                          {"terms", std::to_string(set.size())},
                          {"lhs", format_param(lhs)},
                          {"rhs", format_param(rhs)}});
  rep.seconds = sw.seconds();
  return rep;
}

VerificationReport z_dbar_residual(const SeriesRequest& req, double tol) {
  Stopwatch sw;
  if (!req.f) throw DomainError("the Z derivative law needs a form");
  const cplx z = req.z, s = req.s;
  const CosetSum set = CosetSum::build(req.ctx, req.cusp, z, req.c_max);
  const cplx lhs = dzbar_num([&](cplx w) { return z_series(req, set.moved_to(w)).direct.value; }, z).value;
  const cplx Q = q_series(with(req, s + 1.0, 0, 1), set).value;
  const cplx U = u_series(with(req, s + 1.0, 0, 1), set).value;
  const double y = z.imag();
  const cplx rhs = I * s / (2.0 * y * y) * (Q - std::conj(eichler_integral(*req.f, z)) * U);
  const double rel = std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300);
  auto r = make_report("antiholomorphic derivative of Z", rel, tol,
                       {{"form", req.f->label()},
                        {"m", std::to_string(req.m)},
                        {"s", format_param(s)},
                        {"z", format_param(z)},
                        {"c_max", std::to_string(req.c_max)},
                        {"terms", std::to_string(set.size())},
                        {"lhs", format_param(lhs)},
                        {"rhs", format_param(rhs)}});
  r.seconds = sw.seconds();
  return r;
}

VerificationReport g_recurrence_residual(const SeriesRequest& req, double tol) {
  Stopwatch sw;
  if (!req.f) throw DomainError("the G recurrence needs a form");
  const cplx z = req.z, s = req.s;
  const CosetSum set = CosetSum::build(req.ctx, req.cusp, z, req.c_max);
  const cplx G0 = g_series(with(req, s, 0, 1), set).value;
  const cplx G1 = g_series(with(req, s + 1.0, 0, 1), set).value;
  const SeriesRequest qreq = with(req, s + 1.0, 0, 1);
  const cplx dQ = dz_num([&](cplx w) { return q_series(qreq, set.moved_to(w)).value; }, z).value;
  const cplx rhs = 4.0 * kPi * double(req.m) / (s + 1.0) * G1 + 2.0 * I / (s + 1.0) * dQ;
  const double rel = std::abs(G0 - rhs) / std::max(std::abs(G0), 1e-300);
  auto r = make_report("G series recurrence in s", rel, tol,
                       {{"form", req.f->label()},
                        {"m", std::to_string(req.m)},
                        {"s", format_param(s)},
                        {"z", format_param(z)},
                        {"c_max", std::to_string(req.c_max)},
                        {"terms", std::to_string(set.size())},
                        {"G", format_param(G0)},
                        {"rhs", format_param(rhs)}});
  r.seconds = sw.seconds();
  return r;
}

}  // namespace somf
