#include "somf/quadrature.hpp"

#include <gsl/gsl_integration.h>

#include <map>
#include <memory>
#include <mutex>

namespace somf {

const GaussRule& gauss_rule(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, std::unique_ptr<GaussRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (!slot) {
    slot = std::make_unique<GaussRule>();
    gsl_integration_glfixed_table* t = gsl_integration_glfixed_table_alloc(n);
    if (!t) throw Error("cannot build Gauss-Legendre table");
    slot->nodes.resize(n);
    slot->weights.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      gsl_integration_glfixed_point(-1.0, 1.0, i, &slot->nodes[i], &slot->weights[i], t);
    gsl_integration_glfixed_table_free(t);
  }
  return *slot;
}

namespace {

cplx panel(const PathIntegrand& f, cplx a, cplx b, const GaussRule& rule) {
  const cplx mid = 0.5 * (a + b), half = 0.5 * (b - a);
  cplx acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return acc * half;
}

}  // namespace

cplx integrate_segment(const PathIntegrand& f, cplx a, cplx b, std::size_t panels, std::size_t nodes) {
  const GaussRule& rule = gauss_rule(nodes);
  cplx acc = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    cplx u = a + (b - a) * (double(p) / double(panels));
    cplx v = a + (b - a) * (double(p + 1) / double(panels));
    acc += panel(f, u, v, rule);
  }
  return acc;
}

std::vector<double> graded_breakpoints(cplx a, cplx b, std::size_t panels) {
  std::vector<double> t(panels + 1);
  for (std::size_t j = 0; j <= panels; ++j) t[j] = double(j) / double(panels);
  const double ya = a.imag(), yb = b.imag();
  const double lo = std::min(ya, yb), hi = std::max(ya, yb);
  if (lo <= 0.0 || hi < 4.0 * lo || panels < 2) return t;
  // Geometric spacing in height toward the low end of the segment.
  const bool low_at_a = ya < yb;
  const double ratio = std::pow(lo / hi, 1.0 / double(panels));
  for (std::size_t j = 0; j <= panels; ++j) {
    double h = lo * std::pow(ratio, -double(j));  // ascending from lo to hi
    double s = (h - lo) / (hi - lo);
    if (low_at_a)
      t[j] = s;
    else
      t[panels - j] = 1.0 - s;
  }
  t.front() = 0.0;
  t.back() = 1.0;
  return t;
}

cplx integrate_graded(const PathIntegrand& f, cplx a, cplx b, std::size_t panels, std::size_t nodes) {
  const auto t = graded_breakpoints(a, b, panels);
  const GaussRule& rule = gauss_rule(nodes);
  cplx acc = 0.0;
  for (std::size_t j = 0; j < panels; ++j) acc += panel(f, a + (b - a) * t[j], a + (b - a) * t[j + 1], rule);
  return acc;
}

QuadResult integrate_adaptive(const PathIntegrand& f, cplx a, cplx b, double tol, std::size_t max_panels,
                              std::size_t nodes) {
  QuadResult r;
  std::size_t panels = 2;
  cplx prev = integrate_graded(f, a, b, panels, nodes);
  while (panels < max_panels) {
    panels *= 2;
    cplx cur = integrate_graded(f, a, b, panels, nodes);
    r.change = std::abs(cur - prev);
    r.value = cur;
    r.panels = panels;
    if (r.change < tol * std::max(1.0, std::abs(cur))) {
      r.converged = true;
      return r;
    }
    prev = cur;
  }
  return r;
}

double integrate_real(const std::function<double(double)>& f, double a, double b, std::size_t panels,
                      std::size_t nodes) {
  const GaussRule& rule = gauss_rule(nodes);
  double acc = 0.0;
  const double w = (b - a) / double(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = a + (double(p) + 0.5) * w, half = 0.5 * w;
    double s = 0.0;
    for (std::size_t i = 0; i < nodes; ++i) s += rule.weights[i] * f(mid + half * rule.nodes[i]);
    acc += s * half;
  }
  return acc;
}

}  // namespace somf
