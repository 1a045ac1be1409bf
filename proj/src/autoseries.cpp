#include "somf/autoseries.hpp"

#include <cmath>
#include <map>

#include "somf/kernels.hpp"

namespace somf {

namespace {

constexpr std::size_t block_size = 1024;

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

cplx im_pow(double im, cplx s) {
  if (s.imag() == 0.0) return std::pow(im, s.real());
  return std::exp(s * std::log(im));
}

std::int64_t floor_div(double x) { return std::int64_t(std::floor(x)); }

// Visits G T^{hn} for every coset rep G with |cz + d| <= C_max y, in the documented order.
void enumerate(const GroupContext& ctx, const std::string& label, cplx z, std::int64_t c_max,
               const std::function<void(const Mat2&)>& visit) {
  if (ctx.kind == GroupKind::custom) throw DomainError("coset sums need a concrete group");
  if (c_max < 1) throw DomainError("C_max must be positive");
  require_upper(z);
  const Cusp& cusp = ctx.cusp(label);
  if (ctx.kind == GroupKind::theta && cusp.label != "inf")
    throw DomainError("unsupported cusp label for Gamma_theta series: " + label);
  const std::int64_t h = ctx.right_period();
  const double x = z.real(), y = z.imag();
  const double R2 = double(c_max) * double(c_max) * y * y;
  if (auto g = frame_completion(ctx, cusp, 0, 1)) visit(*g);
  for (std::int64_t c = 1; c <= c_max; ++c) {
    const double T2 = R2 - double(c) * double(c) * y * y;
    if (T2 < 0.0) break;
    const double T = std::sqrt(T2);
    const double hc = double(h * c);
    for (std::int64_t d0 = 0; d0 < h * c; ++d0) {
      auto g0 = frame_completion(ctx, cusp, c, d0);
      if (!g0) continue;
      const double t0 = double(c) * x + double(d0);
      const std::int64_t lo = -floor_div((T + t0) / hc), hi = floor_div((T - t0) / hc);
      for (std::int64_t n = lo; n <= hi; ++n) {
        const double t = t0 + double(n) * hc;
        if (t * t > T2) continue;
        visit(*g0 * translation(h * n));
      }
    }
  }
}

struct BlockSum {
  Reduction mode;
  std::vector<cplx> block;
  kernels::ComplexCompensated total;
  std::size_t count = 0;

  explicit BlockSum(Reduction m) : mode(m) { block.reserve(block_size); }
  void add(cplx v) {
    block.push_back(v);
    ++count;
    if (block.size() == block_size) flush();
  }
  void flush() {
    if (block.empty()) return;
    total += mode == Reduction::fast ? kernels::compensated_sum(block.data(), block.size())
                                     : kernels::scalar::compensated_sum(block.data(), block.size());
    block.clear();
  }
  cplx value() {
    flush();
    return total.value();
  }
};

TermGeom geom_at(const Mat2& G, cplx z, double w) {
  TermGeom t;
  t.G = G;
  const double a = double(G.a), b = double(G.b), c = double(G.c), d = double(G.d);
  const cplx j = c * z + d;
  cplx Gz;
  if (G.c == 0)
    Gz = (a * z + b) / d;
  else
    Gz = a / c - 1.0 / (c * j);
  t.Mz = Gz / w;
  t.jM = std::sqrt(w) * j;
  t.im = z.imag() / (w * std::norm(j));
  return t;
}

void require_convergent(bool ok, const std::string& what) {
  if (!ok) throw DivergentSeries(what + " (analytic continuation is out of scope)");
}

// Shared symbol-type caches keyed by the bottom row (c, d mod hc) of the normalized matrix.
using RowKey = std::pair<std::int64_t, std::int64_t>;

RowKey row_key(const Mat2& g0, std::int64_t h) {
  const Mat2 g = g0.normalized();
  if (g.c == 0) return {0, 0};
  const std::int64_t m = h * g.c;
  return {g.c, ((g.d % m) + m) % m};
}

double carrier_scale(const CosetSum& set, int k) {
  if (k == 0) return 1.0;
  return std::pow(std::abs(set.carrier().j(set.origin())), double(k));
}

const Cusp& infinity_frame(const SeriesRequest& req) {
  const Cusp& cu = req.ctx.cusp(req.cusp);
  if (!cu.frame.is_identity())
    throw DomainError("form-dependent series are evaluated at the cusp at infinity only");
  return cu;
}

const Form& require_form(const SeriesRequest& req) {
  if (!req.f) throw DomainError("series needs a cusp form f");
  if (req.f->weight() != 2 || !req.f->cuspidal()) throw DomainError("series needs a weight-2 cusp form");
  return *req.f;
}

class SymbolCache {
 public:
  SymbolCache(Form f, std::int64_t h) : f_(std::move(f)), h_(h) {}
  cplx operator()(const Mat2& g) {
    auto key = row_key(g, h_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    cplx v = modular_symbol(f_, g);
    cache_.emplace(key, v);
    return v;
  }

 private:
  Form f_;
  std::int64_t h_;
  std::map<RowKey, cplx> cache_;
};

// Eichler integral F at G z for the frozen term, by q-series or by F(z) + <G, f>.
class EichlerAt {
 public:
  EichlerAt(const Form& f, const SeriesRequest& req, cplx z)
      : f_(f), route_(req.route), symbols_(f, req.ctx.right_period()) {
    if (route_ == EichlerRoute::symbol) Fz_ = eichler_integral(f, z);
  }
  cplx operator()(const TermGeom& t, double w) {
    if (route_ == EichlerRoute::symbol) return Fz_ + symbols_(t.G);
    return eichler_integral(f_, t.Mz * w);
  }

 private:
  Form f_;
  EichlerRoute route_;
  SymbolCache symbols_;
  cplx Fz_;
};

// Sampled constant A with |value| <= A (1 + |log Im|) over the visited terms.
struct LogEnvelope {
  double A = 0.0;
  void see(cplx v, double im) { A = std::max(A, std::abs(v) / (1.0 + std::abs(std::log(im)))); }
  // A (1 + 1/(e eps)) bounds |value| Im^{eps} for Im <= 1.
  double factor(double eps) const { return A * (1.0 + 1.0 / (std::exp(1.0) * eps)); }
};

double log_eps(double sigma) { return std::min(0.25, 0.5 * (sigma - 1.0)); }

}  // namespace

CosetSum CosetSum::build(const GroupContext& ctx, const std::string& cusp, cplx z, std::int64_t c_max) {
  CosetSum s;
  s.z_ = s.origin_ = z;
  s.c_max_ = c_max;
  s.width_ = double(ctx.cusp(cusp).width);
  s.period_ = ctx.right_period();
  s.cusp_ = ctx.cusp(cusp).label;
  enumerate(ctx, cusp, z, c_max, [&s](const Mat2& g) { s.terms_.push_back(g); });
  return s;
}

CosetSum CosetSum::transported(const Mat2& g) const {
  CosetSum s = *this;
  const Mat2 gi = g.inverse();
  for (auto& t : s.terms_) t = t * gi;
  s.z_ = g.apply(z_);
  s.carrier_ = g * carrier_;
  return s;
}

CosetSum CosetSum::moved_to(cplx z) const {
  require_upper(z);
  CosetSum s = *this;
  s.z_ = z;
  return s;
}

TermGeom CosetSum::geom(const Mat2& G) const { return geom_at(G, z_, width_); }

cplx CosetSum::sum(const std::function<cplx(const TermGeom&)>& fn, Reduction mode) const {
  BlockSum acc(mode);
  for (const auto& G : terms_) acc.add(fn(geom_at(G, z_, width_)));
  return acc.value();
}

cplx CosetSum::stream(const GroupContext& ctx, const std::string& cusp, cplx z, std::int64_t c_max,
                      const std::function<cplx(const TermGeom&)>& fn, std::size_t* count, Reduction mode) {
  const double w = double(ctx.cusp(cusp).width);
  BlockSum acc(mode);
  enumerate(ctx, cusp, z, c_max, [&](const Mat2& g) { acc.add(fn(geom_at(g, z, w))); });
  if (count) *count = acc.count;
  return acc.value();
}

double tail_estimate(const GroupContext& ctx, cplx z, double sigma, std::int64_t c_max, const std::string& cusp) {
  require_upper(z);
  if (!(sigma > 1.0)) throw DivergentSeries("tail bound needs sigma > 1");
  if (c_max < 1) throw DomainError("C_max must be positive");
  const double y = z.imag(), w = double(ctx.cusp(cusp).width);
  const double B = std::sqrt(pi) * std::tgamma(sigma - 0.5) / std::tgamma(sigma);
  const double C = double(c_max), R2 = C * C * y * y;
  kernels::Compensated total;
  for (std::int64_t ci = 1; ci <= c_max; ++ci) {
    const double c = double(ci);
    const double T = std::sqrt(std::max(0.0, R2 - c * c * y * y));
    const double half = 0.5 * B * std::pow(y, 1.0 - sigma) * std::pow(c, 1.0 - 2.0 * sigma);
    const double integral = T > 0.0 ? std::min(std::pow(y, sigma) * std::pow(T, 1.0 - 2.0 * sigma) / (2.0 * sigma - 1.0), half) : half;
    const double first = std::pow(y / (c * c * y * y + T * T), sigma);
    total.add(2.0 * (first + integral));
  }
  total.add(std::pow(y, -sigma) * std::pow(C, 1.0 - 2.0 * sigma) / (2.0 * sigma - 1.0));
  total.add(B * std::pow(y, 1.0 - sigma) * std::pow(C, 2.0 - 2.0 * sigma) / (2.0 * sigma - 2.0));
  return total.value() * std::pow(w, -sigma);
}

namespace {

double base_tail(const SeriesRequest& req, const CosetSum& set, double sigma) {
  return tail_estimate(req.ctx, set.origin(), sigma, set.c_max(), set.cusp());
}

}  // namespace

SeriesValue eisenstein(const SeriesRequest& req) {
  return eisenstein(req, CosetSum::build(req.ctx, req.cusp, req.z, req.c_max));
}

SeriesValue eisenstein(const SeriesRequest& req, const CosetSum& set) {
  require_convergent(req.s.real() > 1.0, "Eisenstein series needs Re(s) > 1");
  const cplx s = req.s;
  SeriesValue out;
  out.value = set.sum([s](const TermGeom& t) { return im_pow(t.im, s); }, req.mode);
  out.terms_used = set.size();
  out.tail_estimate = base_tail(req, set, s.real());
  return out;
}

SeriesValue eisenstein_streamed(const SeriesRequest& req) {
  require_convergent(req.s.real() > 1.0, "Eisenstein series needs Re(s) > 1");
  const cplx s = req.s;
  SeriesValue out;
  out.value = CosetSum::stream(
      req.ctx, req.cusp, req.z, req.c_max, [s](const TermGeom& t) { return im_pow(t.im, s); }, &out.terms_used,
      req.mode);
  out.tail_estimate = tail_estimate(req.ctx, req.z, s.real(), req.c_max, req.cusp);
  return out;
}

SeriesValue u_series(const SeriesRequest& req) {
  return u_series(req, CosetSum::build(req.ctx, req.cusp, req.z, req.c_max));
}

SeriesValue u_series(const SeriesRequest& req, const CosetSum& set) {
  require_convergent(req.s.real() > 1.0, "U series needs Re(s) > 1");
  if (req.k % 2) throw UnsupportedWeight("U series needs even weight");
  if (req.m < 0) throw DomainError("m must be non-negative");
  const cplx s = req.s;
  const double m = double(req.m);
  const int k = req.k;
  SeriesValue out;
  out.value = set.sum(
      [=](const TermGeom& t) {
        cplx v = im_pow(t.im, s);
        if (m != 0.0) v *= expi(m * t.Mz);
        if (k != 0) v *= ipow(std::conj(t.jM / std::abs(t.jM)), k);
        return v;
      },
      req.mode);
  out.terms_used = set.size();
  out.tail_estimate = base_tail(req, set, s.real());
  return out;
}

SeriesValue p_classical(const SeriesRequest& req) {
  return p_classical(req, CosetSum::build(req.ctx, req.cusp, req.z, req.c_max));
}

SeriesValue p_classical(const SeriesRequest& req, const CosetSum& set) {
  require_convergent(req.k >= 4 && req.k % 2 == 0, "holomorphic Poincare series need even k >= 4");
  if (req.m < 0) throw DomainError("m must be non-negative");
  const double m = double(req.m);
  const int k = req.k;
  SeriesValue out;
  out.value = set.sum([=](const TermGeom& t) { return ipow(t.jM, -k) * expi(m * t.Mz); }, req.mode);
  out.terms_used = set.size();
  const double y0 = set.origin().imag();
  out.tail_estimate = std::pow(y0, -0.5 * k) * base_tail(req, set, 0.5 * k) * carrier_scale(set, k);
  return out;
}

SeriesValue p_second(const SeriesRequest& req) {
  return p_second(req, CosetSum::build(req.ctx, req.cusp, req.z, req.c_max));
}

SeriesValue p_second(const SeriesRequest& req, const CosetSum& set) {
  require_convergent(req.k >= 4 && req.k % 2 == 0, "second-order Poincare series need even k >= 4");
  if (!req.L) throw DomainError("second-order Poincare series need L");
  validate(*req.L);
  if (req.m < 0) throw DomainError("m must be non-negative");
  const Mat2 A = req.ctx.cusp(req.cusp).frame;
  const std::int64_t h = req.ctx.right_period();
  const double m = double(req.m);
  const int k = req.k;
  std::map<RowKey, cplx> cache;
  LogEnvelope env;
  SeriesValue out;
  out.value = set.sum(
      [&](const TermGeom& t) {
        auto key = row_key(t.G, h);
        auto it = cache.find(key);
        if (it == cache.end()) it = cache.emplace(key, hom0_eval(*req.L, A * t.G)).first;
        env.see(it->second, t.im);
        if (it->second == 0.0) return cplx(0.0);
        return it->second * ipow(t.jM, -k) * expi(m * t.Mz);
      },
      req.mode);
  out.terms_used = set.size();
  const double eps = log_eps(0.5 * k);
  const double y0 = set.origin().imag();
  out.tail_estimate =
      env.factor(eps) * std::pow(y0, -0.5 * k) * base_tail(req, set, 0.5 * k - eps) * carrier_scale(set, k);
  return out;
}

cplx form_integral_at(const Form& f, int n, cplx w, double width) {
  if (n > 1) throw DomainError("only n <= 1 is supported");
  return std::pow(width, double(1 - n)) * eval_form(f, w * width, n).value;
}

SeriesValue q_series(const SeriesRequest& req) {
  return q_series(req, CosetSum::build(req.ctx, req.cusp, req.z, req.c_max));
}

SeriesValue q_series(const SeriesRequest& req, const CosetSum& set) {
  const Form& f = require_form(req);
  infinity_frame(req);
  if (req.n > 1) throw DomainError("Q series need n <= 1");
  const double sigma = req.s.real();
  const double sigma_eff = req.n == 1 ? sigma : sigma - 1.0 + req.n;
  require_convergent(sigma_eff > 1.0, req.n == 1 ? "Q series need Re(s) > 1" : "Q series need Re(s) > 2 - n");
  const cplx s = req.s;
  const double m = double(req.m), w = set.width();
  const int n = req.n;
  const cplx z = set.point();
  std::optional<EichlerAt> F;
  if (n == 1) F.emplace(f, req, z);
  cplx fz = 0.0;
  if (n == 0 && req.route == EichlerRoute::symbol) fz = eval_form(f, z).value;
  LogEnvelope env;
  double B = 0.0;
  SeriesValue out;
  out.value = set.sum(
      [&](const TermGeom& t) {
        cplx I;
        if (n == 1)
          I = (*F)(t, w);
        else if (n == 0 && req.route == EichlerRoute::symbol)
          I = w * fz * ipow(t.G.j(z), 2);
        else
          I = form_integral_at(f, n, t.Mz, w);
        if (n == 1)
          env.see(I, t.im);
        else
          B = std::max(B, std::abs(I) * std::pow(t.im, double(1 - n)));
        cplx v = std::conj(I) * im_pow(t.im, s);
        if (m != 0.0) v *= expi(m * t.Mz);
        return v;
      },
      req.mode);
  out.terms_used = set.size();
  if (n == 1) {
    const double eps = log_eps(sigma);
    out.tail_estimate = env.factor(eps) * base_tail(req, set, sigma - eps);
  } else {
    out.tail_estimate = B * base_tail(req, set, sigma_eff);
  }
  return out;
}

SeriesValue g_series(const SeriesRequest& req) {
  return g_series(req, CosetSum::build(req.ctx, req.cusp, req.z, req.c_max));
}

SeriesValue g_series(const SeriesRequest& req, const CosetSum& set) {
  const Form& f = require_form(req);
  infinity_frame(req);
  const double sigma = req.s.real();
  require_convergent(sigma > 0.0, "G series need Re(s) > 0");
  const cplx s = req.s;
  const double m = double(req.m), w = set.width();
  EichlerAt F(f, req, set.point());
  LogEnvelope env;
  SeriesValue out;
  out.value = set.sum(
      [&](const TermGeom& t) {
        cplx Fv = F(t, w);
        env.see(Fv, t.im);
        cplx v = std::conj(Fv) * ipow(t.jM, -2) * im_pow(t.im, s);
        if (m != 0.0) v *= expi(m * t.Mz);
        return v;
      },
      req.mode);
  out.terms_used = set.size();
  const double eps = log_eps(sigma + 1.0);
  out.tail_estimate =
      env.factor(eps) / set.origin().imag() * base_tail(req, set, sigma + 1.0 - eps) * carrier_scale(set, 2);
  return out;
}

ZValue z_series(const SeriesRequest& req) {
  return z_series(req, CosetSum::build(req.ctx, req.cusp, req.z, req.c_max));
}

ZValue z_series(const SeriesRequest& req, const CosetSum& set) {
  const Form& f = require_form(req);
  infinity_frame(req);
  const double sigma = req.s.real();
  require_convergent(sigma >= 0.25, "Z series are evaluated for Re(s) >= 0.25 only");
  const cplx s = req.s;
  const double m = double(req.m);
  SymbolCache symbols(f, req.ctx.right_period());
  LogEnvelope env;
  ZValue out;
  out.direct.value = set.sum(
      [&](const TermGeom& t) {
        cplx sym = symbols(t.G);
        env.see(sym, t.im);
        cplx v = std::conj(sym) * im_pow(t.im, s) * ipow(t.jM, -2);
        if (m != 0.0) v *= expi(m * t.Mz);
        return v;
      },
      req.mode);
  out.direct.terms_used = set.size();
  const double eps = log_eps(sigma + 1.0);
  out.direct.tail_estimate =
      env.factor(eps) / set.origin().imag() * base_tail(req, set, sigma + 1.0 - eps) * carrier_scale(set, 2);

  SeriesValue G = g_series(req, set);
  SeriesRequest ureq = req;
  ureq.s = req.s + 1.0;
  ureq.k = 2;
  SeriesValue U = u_series(ureq, set);
  const cplx z = set.point();
  const cplx Fz = eichler_integral(f, z);
  out.decomposed.value = G.value - std::conj(Fz) / z.imag() * U.value;
  out.decomposed.terms_used = set.size();
  out.decomposed.tail_estimate = G.tail_estimate + std::abs(Fz) / z.imag() * U.tail_estimate;
  return out;
}

Evaluator product_form(const Form& f, const Form& h) {
  if (h.weight() != 2 || !h.cuspidal()) throw DomainError("product form needs a weight-2 cusp form h");
  if (f.group() != h.group() || f.level() != h.level()) throw DomainError("product form needs forms on one group");
  Evaluator e;
  e.weight = f.weight();
  e.fn = [f, h](cplx z) { return eval_form(f, z).value * eichler_integral(h, z); };
  return e;
}

}  // namespace somf
