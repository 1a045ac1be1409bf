#include "somf/symbols.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <random>

#include "somf/kernels.hpp"
#include "somf/quadrature.hpp"

namespace somf {

namespace {

constexpr cplx I{0.0, 1.0};

void require_symbol_form(const Form& f) {
  if (f.weight() != 2) throw UnsupportedWeight("modular symbols need a weight-2 form: " + f.label());
  if (!f.cuspidal()) throw DomainError("modular symbols need a cusp form: " + f.label());
}

std::vector<double> binomials(int n) {
  std::vector<double> b(std::size_t(n) + 1, 1.0);
  for (int j = 1; j <= n; ++j) b[std::size_t(j)] = b[std::size_t(j - 1)] * double(n - j + 1) / double(j);
  return b;
}

// Moments int F(z) z^p dz, p = 0..deg, over one pass of panels; conj_kernel swaps in conj(F) and d conj z.
std::vector<cplx> moments(const std::function<cplx(cplx)>& F, int deg, cplx a, cplx b, std::size_t panels,
                          bool conj_kernel) {
  const GaussRule& rule = gauss_rule(64);
  const auto t = graded_breakpoints(a, b, panels);
  std::vector<kernels::ComplexCompensated> acc(std::size_t(deg) + 1);
  for (std::size_t j = 0; j < panels; ++j) {
    const cplx u = a + (b - a) * t[j], v = a + (b - a) * t[j + 1];
    const cplx mid = 0.5 * (u + v), half = 0.5 * (v - u);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const cplx z = mid + half * rule.nodes[i];
      cplx w = rule.weights[i] * half * F(z);
      cplx zp = z;
      if (conj_kernel) {
        w = std::conj(rule.weights[i] * half) * std::conj(F(z));
        zp = std::conj(z);
      }
      cplx pw = 1.0;
      for (int p = 0; p <= deg; ++p) {
        acc[std::size_t(p)] += w * pw;
        pw *= zp;
      }
    }
  }
  std::vector<cplx> m(acc.size());
  for (std::size_t p = 0; p < acc.size(); ++p) m[p] = acc[p].value();
  return m;
}

// (z - X)^{k-2} expanded: coefficient of X^j is (-1)^j C(k-2, j) times the (k-2-j)-th moment.
PeriodPolynomial from_moments(const std::vector<cplx>& m, int k) {
  const int n = k - 2;
  const auto bin = binomials(n);
  PeriodPolynomial P(k);
  for (int j = 0; j <= n; ++j) P.c[std::size_t(j)] = (j % 2 ? -1.0 : 1.0) * bin[std::size_t(j)] * m[std::size_t(n - j)];
  return P;
}

PeriodPolynomial adaptive_polynomial(const std::function<cplx(cplx)>& F, int k, cplx a, cplx b,
                                     const PeriodOptions& opt, bool conj_kernel) {
  if (k < 2 || k % 2) throw UnsupportedWeight("period polynomials need even weight k >= 2");
  if (a == b) return PeriodPolynomial(k);
  std::size_t panels = 2;
  PeriodPolynomial prev = from_moments(moments(F, k - 2, a, b, panels, conj_kernel), k);
  while (panels < opt.max_panels) {
    panels *= 2;
    PeriodPolynomial cur = from_moments(moments(F, k - 2, a, b, panels, conj_kernel), k);
    if (max_diff(cur, prev) < opt.tol * std::max(1.0, cur.max_abs())) return cur;
    prev = std::move(cur);
  }
  throw Error("period quadrature did not converge");
}

std::vector<cplx> poly_mul(const std::vector<cplx>& x, const std::vector<cplx>& y) {
  std::vector<cplx> r(x.size() + y.size() - 1, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) r[i + j] += x[i] * y[j];
  return r;
}

PeriodPolynomial act(const PeriodPolynomial& P, const Mat2& g, CochainAction action) {
  return action == CochainAction::slash ? slash_poly(P, g) : P;
}

// Integral from i up the imaginary axis to i inf; F must decay there.
PeriodPolynomial ray_to_infinity(const Evaluator& F, int k, const PeriodOptions& opt) {
  PeriodPolynomial total(k);
  double y = 1.0, len = 1.0;
  for (int seg = 0; seg < 400; ++seg) {
    PeriodPolynomial piece = adaptive_polynomial(F.fn, k, {0.0, y}, {0.0, y + len}, opt, false);
    total += piece;
    y += len;
    len = std::min(len * 1.5, 8.0);
    if (piece.max_abs() <= 1e-18 * std::max(1.0, total.max_abs()) && y > 4.0) return total;
  }
  throw DomainError("integrand does not decay toward the cusp at infinity");
}

}  // namespace

cplx modular_symbol_at(const Form& f, const Mat2& g, cplx base) {
  require_symbol_form(f);
  require_upper(base);
  auto fn = [&f](cplx z) { return eval_form(f, z).value; };
  auto r = integrate_adaptive(fn, base, g.apply(base), 1e-12, 8192);
  if (!r.converged) throw Error("modular symbol quadrature did not converge for " + to_string(g));
  return r.value;
}

cplx modular_symbol(const Form& f, const Mat2& g0, SymbolMethod method) {
  require_symbol_form(f);
  if (!is_member(form_context(f), g0)) throw DomainError(to_string(g0) + " is not in the group of " + f.label());
  const Mat2 g = g0.normalized();
  if (g.c == 0) {
    // Translation z -> z + b: zero when every exponent times b is integral.
    auto s = f.series();
    if ((g.b * s->lead()) % s->den() == 0 && (g.b * s->step()) % s->den() == 0) return 0.0;
    if (method == SymbolMethod::qseries) return eichler_integral(f, I + double(g.b)) - eichler_integral(f, I);
    return modular_symbol_at(f, g, I);
  }
  const double c = double(g.c);
  if (method == SymbolMethod::qseries)
    return eichler_integral(f, (double(g.a) + I) / c) - eichler_integral(f, (double(-g.d) + I) / c);
  return modular_symbol_at(f, g, (double(-g.d) + 2.0 * I) / c);
}

void validate(const Hom0Spec& L) {
  if (L.terms.empty()) throw DomainError("empty Hom0 specification");
  const auto& f0 = L.terms.front().form;
  for (const auto& t : L.terms) {
    require_symbol_form(t.form);
    if (t.form.group() != f0.group() || t.form.level() != f0.level())
      throw DomainError("Hom0 terms must share one group");
  }
}

cplx hom0_eval(const Hom0Spec& L, const Mat2& g, SymbolMethod method) {
  validate(L);
  cplx acc = 0.0;
  for (const auto& t : L.terms) {
    cplx v = modular_symbol(t.form, g, method);
    acc += t.coef * (t.conjugated ? std::conj(v) : v);
  }
  return acc;
}

PeriodPolynomial::PeriodPolynomial(int weight, std::vector<cplx> coeffs) : k(weight), c(std::move(coeffs)) {
  if (c.size() != std::size_t(weight - 1)) throw DomainError("period polynomial needs k-1 coefficients");
}

cplx PeriodPolynomial::operator()(cplx X) const {
  cplx r = 0.0;
  for (std::size_t j = c.size(); j-- > 0;) r = r * X + c[j];
  return r;
}

double PeriodPolynomial::max_abs() const {
  double m = 0.0;
  for (auto v : c) m = std::max(m, std::abs(v));
  return m;
}

PeriodPolynomial PeriodPolynomial::conj() const {
  PeriodPolynomial r = *this;
  for (auto& v : r.c) v = std::conj(v);
  return r;
}

PeriodPolynomial& PeriodPolynomial::operator+=(const PeriodPolynomial& o) {
  if (o.c.size() != c.size()) throw DomainError("period polynomial weights differ");
  for (std::size_t j = 0; j < c.size(); ++j) c[j] += o.c[j];
  return *this;
}

PeriodPolynomial& PeriodPolynomial::operator-=(const PeriodPolynomial& o) {
  if (o.c.size() != c.size()) throw DomainError("period polynomial weights differ");
  for (std::size_t j = 0; j < c.size(); ++j) c[j] -= o.c[j];
  return *this;
}

PeriodPolynomial& PeriodPolynomial::operator*=(cplx s) {
  for (auto& v : c) v *= s;
  return *this;
}

PeriodPolynomial operator+(PeriodPolynomial a, const PeriodPolynomial& b) { return a += b; }
PeriodPolynomial operator-(PeriodPolynomial a, const PeriodPolynomial& b) { return a -= b; }
PeriodPolynomial operator*(cplx s, PeriodPolynomial a) { return a *= s; }

double max_diff(const PeriodPolynomial& a, const PeriodPolynomial& b) { return (a - b).max_abs(); }

PeriodPolynomial slash_poly(const PeriodPolynomial& P, const Mat2& g) {
  const int n = P.k - 2;
  const std::vector<cplx> num{double(g.b), double(g.a)}, den{double(g.d), double(g.c)};
  // Powers of (aX+b) and (cX+d).
  std::vector<std::vector<cplx>> pn(std::size_t(n) + 1), pd(std::size_t(n) + 1);
  pn[0] = pd[0] = {1.0};
  for (int j = 1; j <= n; ++j) {
    pn[std::size_t(j)] = poly_mul(pn[std::size_t(j - 1)], num);
    pd[std::size_t(j)] = poly_mul(pd[std::size_t(j - 1)], den);
  }
  PeriodPolynomial r(P.k);
  for (int j = 0; j <= n; ++j) {
    if (P.c[std::size_t(j)] == 0.0) continue;
    auto term = poly_mul(pn[std::size_t(j)], pd[std::size_t(n - j)]);
    for (std::size_t i = 0; i < term.size(); ++i) r.c[i] += P.c[std::size_t(j)] * term[i];
  }
  return r;
}

PeriodPolynomial polynomial_integral(const std::function<cplx(cplx)>& F, int k, cplx a, cplx b,
                                     const PeriodOptions& opt) {
  return adaptive_polynomial(F, k, a, b, opt, false);
}

PeriodPolynomial period_polynomial(const Evaluator& F, const Mat2& g, PeriodBase base, const PeriodOptions& opt) {
  const int k = F.weight;
  const PeriodPolynomial phi_i = adaptive_polynomial(F.fn, k, I, g.inverse().apply(I), opt, false);
  if (base == PeriodBase::interior_i) return phi_i;
  if (g.normalized().c == 0) return PeriodPolynomial(k);
  // i inf -> i -> g^{-1} i -> g^{-1} i inf; the last leg is the first one slashed by g.
  const PeriodPolynomial r = -1.0 * ray_to_infinity(F, k, opt);
  return r + phi_i - slash_poly(r, g);
}

PeriodPolynomial period_polynomial_antiholo(const Evaluator& G, const Mat2& g, const PeriodOptions& opt) {
  return adaptive_polynomial(G.fn, G.weight, I, g.inverse().apply(I), opt, true);
}

PeriodPolynomial coboundary1(const Cochain1& psi, const Mat2& g1, const Mat2& g2, CochainAction action) {
  return act(psi(g2), g1, action) - psi(g2 * g1) + psi(g1);
}

PeriodPolynomial coboundary2(const Cochain2& psi, const Mat2& g1, const Mat2& g2, const Mat2& g3,
                             CochainAction action) {
  return act(psi(g2, g3), g1, action) - psi(g2 * g1, g3) + psi(g1, g3 * g2) - psi(g1, g2);
}

Cochain1 memoize(Cochain1 psi) {
  struct Cache {
    std::mutex mu;
    std::map<std::array<std::int64_t, 4>, PeriodPolynomial> values;
  };
  auto cache = std::make_shared<Cache>();
  return [psi = std::move(psi), cache](const Mat2& g0) {
    const Mat2 g = g0.normalized();
    const std::array<std::int64_t, 4> key{g.a, g.b, g.c, g.d};
    {
      std::lock_guard<std::mutex> lock(cache->mu);
      auto it = cache->values.find(key);
      if (it != cache->values.end()) return it->second;
    }
    PeriodPolynomial v = psi(g);
    std::lock_guard<std::mutex> lock(cache->mu);
    cache->values.emplace(key, v);
    return v;
  };
}

std::int64_t path_reach(const Mat2& g) { return g.a * g.a + g.c * g.c; }

std::vector<Triple> bounded_triples(const GroupContext& ctx, std::size_t count, std::uint64_t seed,
                                    std::int64_t bound) {
  auto els = random_elements(ctx, 60, seed, 40);
  els.push_back(mat_T);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, els.size() - 1);
  std::vector<Triple> out;
  for (int attempt = 0; attempt < 200000 && out.size() < count; ++attempt) {
    Triple t{els[pick(rng)], els[pick(rng)], els[pick(rng)]};
    const Mat2 all[] = {t.g1, t.g2, t.g3, t.g3 * t.g2, t.g2 * t.g1, t.g3 * t.g1, t.g3 * t.g2 * t.g1};
    bool ok = true;
    for (const auto& m : all) ok = ok && path_reach(m) <= bound;
    if (ok && std::abs(t.g1.c) + std::abs(t.g2.c) + std::abs(t.g3.c) > 0) out.push_back(t);
  }
  return out;
}

PeriodPolynomial matrix_keyed_polynomial(const Mat2& g, int k) {
  const Mat2 n = g.normalized();
  std::seed_seq seq{n.a, n.b, n.c, n.d};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> u(0.5, 1.0);
  PeriodPolynomial P(k);
  for (auto& c : P.c) c = u(rng);
  return P;
}

VerificationReport cocycle_residual(const Evaluator& F, const std::vector<std::pair<Mat2, Mat2>>& pairs,
                                    const PeriodOptions& opt, double tol) {
  Stopwatch sw;
  double worst = 0.0;
  for (const auto& [d, g] : pairs) {
    auto phi = [&](const Mat2& m) { return period_polynomial(F, m, PeriodBase::interior_i, opt); };
    worst = std::max(worst, max_diff(phi(d * g), slash_poly(phi(d), g) + phi(g)));
  }
  auto r = make_report("period cocycle relation", worst, tol,
                       {{"pairs", std::to_string(pairs.size())}, {"k", std::to_string(F.weight)}});
  r.seconds = sw.seconds();
  return r;
}

double six_term_residual(const Cochain1& f, const Triple& t) {
  const Mat2 &g1 = t.g1, &g2 = t.g2, &g3 = t.g3;
  const Mat2 conj21 = g1.inverse() * g2 * g1;
  PeriodPolynomial lhs = f(g3 * g2 * g1);
  PeriodPolynomial rhs = slash_poly(f(g3 * g2), g1) + f(g2 * g1) + slash_poly(f(g3 * g1), conj21) -
                         slash_poly(f(g3), g2 * g1) - slash_poly(f(g2), g1) - slash_poly(f(g1), conj21);
  return max_diff(lhs, rhs);
}

VerificationReport z1_shriek_residual(const Cochain1& f, const std::vector<Triple>& triples,
                                      const std::vector<std::pair<Mat2, Mat2>>& parabolic_pairs, int k,
                                      double tol) {
  Stopwatch sw;
  double six = 0.0, par = 0.0;
  for (const auto& t : triples) six = std::max(six, six_term_residual(f, t));
  for (const auto& [d, p] : parabolic_pairs) {
    if (!is_parabolic(p)) throw DomainError(to_string(p) + " is not parabolic");
    par = std::max(par, max_diff(f(d * p), slash_poly(f(d), p) + f(p)));
  }
  auto r = make_report("cocycle six-term and parabolic conditions", std::max(six, par), tol,
                       {{"k", std::to_string(k)},
                        {"triples", std::to_string(triples.size())},
                        {"parabolic_pairs", std::to_string(parabolic_pairs.size())},
                        {"six_term", format_param(six)},
                        {"parabolic", format_param(par)}});
  r.seconds = sw.seconds();
  return r;
}

VerificationReport dphi_identity_residual(const Evaluator& F, const Mat2& g, const Mat2& d,
                                          const PeriodOptions& opt, double tol) {
  Stopwatch sw;
  const int k = F.weight;
  auto phi = [&](const Mat2& m) { return period_polynomial(F, m, PeriodBase::interior_i, opt); };
  PeriodPolynomial lhs = phi(d * g) - slash_poly(phi(d), g) - phi(g);
  const Mat2 gi = g.inverse();
  auto defect = [&](cplx w) { return F(gi.apply(w)) * automorphy_factor(gi, w, k) - F(w); };
  PeriodPolynomial rhs = slash_poly(polynomial_integral(defect, k, I, d.inverse().apply(I), opt), g);
  auto r = make_report("period coboundary of a second-order form", max_diff(lhs, rhs), tol,
                       {{"gamma", to_string(g)}, {"delta", to_string(d)}, {"k", std::to_string(k)},
                        {"lhs_size", format_param(lhs.max_abs())}});
  r.seconds = sw.seconds();
  return r;
}

TwistedL twisted_L_partial(const FracQSeries& f, Rational m, cplx s, std::size_t N) {
  if (f.lead() % f.den() != 0 || f.step() % f.den() != 0)
    throw DomainError("twisted L-sums need integral exponents");
  if (f.weight <= 0) throw UnsupportedWeight("twisted L-sums need the weight of the form");
  if (f.order() == 0 || f.exponent(f.order() - 1) < double(N)) throw InsufficientOrder(f.order(), N);
  const double beta = 0.5 * f.weight + 0.25;
  const std::int64_t p = m.numerator(), q = m.denominator();
  kernels::ComplexCompensated acc;
  double C = 0.0;
  for (std::size_t j = 0; j < f.order(); ++j) {
    const std::int64_t n = (f.lead() + std::int64_t(j) * f.step()) / f.den();
    if (n > std::int64_t(N)) break;
    if (n <= 0) continue;
    const cplx a = f.coeffs()[j];
    if (a == 0.0) continue;
    C = std::max(C, std::abs(a) / std::pow(double(n), beta));
    std::int64_t r = ((p % q) * (n % q)) % q;
    if (r < 0) r += q;
    acc += a * expi(double(r) / double(q)) * std::exp(-s * std::log(double(n)));
  }
  TwistedL out;
  out.value = acc.value();
  out.fitted_c = C;
  const double sigma = s.real();
  out.tail = sigma > beta + 1.0 ? C * std::pow(double(N), beta + 1.0 - sigma) / (sigma - beta - 1.0)
                                 : std::numeric_limits<double>::infinity();
  out.certified = sigma > 0.5 * f.weight + 1.0 && std::isfinite(out.tail);
  return out;
}

}  // namespace somf
