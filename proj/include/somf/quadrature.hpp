#pragma once

#include <functional>
#include <vector>

#include "somf/core.hpp"

namespace somf {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached n-point rule.
const GaussRule& gauss_rule(std::size_t n);

using PathIntegrand = std::function<cplx(cplx)>;

/// int_a^b f(w) dw along the straight segment, split into equal panels.
cplx integrate_segment(const PathIntegrand& f, cplx a, cplx b, std::size_t panels, std::size_t nodes = 64);

/// Increasing parameters 0 = t_0 < ... < t_panels = 1 along a -> b, graded toward the lower endpoint
/// when the heights differ by a factor of four or more.
std::vector<double> graded_breakpoints(cplx a, cplx b, std::size_t panels);

/// Same, with panel sizes growing geometrically away from whichever endpoint is lower.
cplx integrate_graded(const PathIntegrand& f, cplx a, cplx b, std::size_t panels, std::size_t nodes = 64);

struct QuadResult {
  cplx value;
  double change = 0.0;  // difference between the last two refinements
  std::size_t panels = 0;
  bool converged = false;
};

/// Doubles the panel count until successive values differ by less than tol.
QuadResult integrate_adaptive(const PathIntegrand& f, cplx a, cplx b, double tol = 1e-10,
                              std::size_t max_panels = 4096, std::size_t nodes = 64);

/// Real integral on [a, b] with a composite rule.
double integrate_real(const std::function<double(double)>& f, double a, double b, std::size_t panels,
                      std::size_t nodes = 32);

}  // namespace somf
