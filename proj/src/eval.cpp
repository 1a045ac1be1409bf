#include "somf/eval.hpp"

#include <cmath>
#include <limits>

#include "somf/kernels.hpp"
#include "somf/quadrature.hpp"

namespace somf {

namespace {

constexpr std::size_t max_auto_order = std::size_t(1) << 20;

cplx ipow(cplx x, int n) {
  if (n < 0) return 1.0 / ipow(x, -n);
  cplx r = 1.0;
  while (n > 0) {
    if (n & 1) r *= x;
    x *= x;
    n >>= 1;
  }
  return r;
}

// log of A (n+1)^beta r^n / (1 - rho_n): the tail bound after n terms.
double log_tail(double logA, double beta, double logr, double n) {
  double rho = std::exp(logr + beta * std::log1p(1.0 / (n + 1.0)));
  if (rho >= 1.0) return std::numeric_limits<double>::infinity();
  return logA + beta * std::log(n + 1.0) + n * logr - std::log1p(-rho);
}

}  // namespace

void require_upper(cplx z) {
  if (!(z.imag() > 0.0)) throw DomainError("point must lie in the upper half-plane (y > 0)");
}

QEval eval_qexp(const FracQSeries& f, cplx z, double tol) {
  require_upper(z);
  QEval out;
  if (f.is_zero()) return out;
  const double y = z.imag();
  const double logr = -2.0 * pi * y * double(f.step()) / double(f.den());
  const cplx w = expi(z * (double(f.step()) / double(f.den())));
  const cplx pre = expi(z * (double(f.lead()) / double(f.den())));
  const double logA = std::log(f.growth_scale());
  const double beta = f.growth_power();
  const auto& c = f.coeffs();
  const std::size_t order = c.size();

  double peak = 0.0;
  std::size_t n = 0;
  bool ok = false;
  for (n = 1; n <= order; ++n) {
    peak = std::max(peak, std::abs(c[n - 1]) * std::exp(double(n - 1) * logr));
    if (peak > 0.0 && log_tail(logA, beta, logr, double(n)) <= std::log(tol * peak)) {
      ok = true;
      break;
    }
  }
  if (!ok) {
    // Extrapolate the envelope to name the order that would suffice.
    double need = double(order);
    const double target = std::log(tol * std::max(peak, std::numeric_limits<double>::min()));
    while (need < 1e12 && log_tail(logA, beta, logr, need) > target) need *= 2.0;
    throw InsufficientOrder(order, std::size_t(std::min(need, 1e12)));
  }
  out.terms = n;
  out.value = pre * kernels::horner(c.data(), n, w);
  out.tail = std::abs(pre) * std::exp(log_tail(logA, beta, logr, double(n)));
  return out;
}

QEval eval_form(const Form& f, cplx z, int n, double tol) {
  std::size_t want = 0;
  for (;;) {
    auto s = f.integrated(n, want);
    try {
      return eval_qexp(*s, z, tol);
    } catch (const InsufficientOrder& e) {
      if (!f.growable() || e.required() > max_auto_order || e.required() <= s->order()) throw;
      want = e.required();
    }
  }
}

cplx eichler_integral(const Form& f, cplx z) {
  if (!f.cuspidal()) throw DomainError("Eichler integral needs a cusp form: " + f.label());
  return eval_form(f, z, 1).value;
}

Evaluator form_evaluator(const Form& f, int n) {
  Evaluator e;
  e.weight = f.weight() - 2 * n;
  e.fn = [f, n](cplx z) { return eval_form(f, z, n).value; };
  e.error = [f, n](cplx z) { return eval_form(f, z, n).tail; };
  return e;
}

cplx automorphy_factor(const Mat2& g, cplx z, int k) { return ipow(g.j(z), -k); }

Evaluator slash(const Evaluator& f, int k, const Mat2& g) {
  Evaluator out;
  out.weight = f.weight;
  out.fn = [f, k, g](cplx z) { return f(g.apply(z)) * automorphy_factor(g, z, k); };
  if (f.error) out.error = [f, k, g](cplx z) { return f.error_at(g.apply(z)) * std::abs(automorphy_factor(g, z, k)); };
  return out;
}

BesselResult bessel_k(cplx nu, double x, std::size_t panels) {
  if (!(x > 0.0)) throw DomainError("Bessel K needs a positive argument");
  // Integrand scaled by e^{x}: exp(-x (cosh t - 1)) cosh(nu t).
  const double anu = std::abs(nu.real());
  double T = 0.5;
  while (x * (std::cosh(T) - 1.0) - anu * T < 46.0 + std::log1p(std::abs(nu)) && T < 60.0) T += 0.25;
  auto run = [&](std::size_t p) {
    const GaussRule& rule = gauss_rule(32);
    const double w = T / double(p);
    cplx acc = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      const double mid = (double(j) + 0.5) * w, half = 0.5 * w;
      cplx s = 0.0;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double t = mid + half * rule.nodes[i];
        s += rule.weights[i] * std::exp(-x * (std::cosh(t) - 1.0)) * std::cosh(nu * t);
      }
      acc += s * half;
    }
    return acc;
  };
  BesselResult r;
  cplx a = run(panels);
  for (int level = 0; level < 4; ++level) {
    panels *= 2;
    cplx b = run(panels);
    double scale = std::max(std::abs(b), 1e-300);
    if (std::abs(a - b) <= 1e-13 * scale + 1e-300) {
      r.converged = true;
      a = b;
      break;
    }
    a = b;
  }
  r.value = a * std::exp(-x);
  return r;
}

cplx whittaker(cplx s, std::int64_t m, cplx z) {
  require_upper(z);
  if (m == 0) throw DomainError("Whittaker function needs m != 0");
  const double am = std::abs(double(m)), y = z.imag();
  auto k = bessel_k(s - 0.5, 2.0 * pi * am * y);
  if (!k.converged) throw DomainError("Bessel-K quadrature did not converge");
  return 2.0 * std::sqrt(am * y) * k.value * expi(double(m) * z.real());
}

double y_fundamental(const GroupContext& ctx, cplx z) {
  require_upper(z);
  double best = 0.0;
  for (const auto& c : ctx.cusps) best = std::max(best, c.to_frame(z).imag());
  return best;
}

}  // namespace somf
