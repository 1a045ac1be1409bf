#include "somf/group.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace somf {

std::string to_string(const Mat2& m) {
  std::ostringstream os;
  os << "(" << m.a << "," << m.b << ";" << m.c << "," << m.d << ")";
  return os.str();
}

Mat2 parse_mat2(const std::string& text) {
  std::string t = text;
  for (char& ch : t)
    if (ch == ',' || ch == ';' || ch == '(' || ch == ')') ch = ' ';
  std::istringstream is(t);
  Mat2 m;
  if (!(is >> m.a >> m.b >> m.c >> m.d)) throw DomainError("expected four integers a,b,c,d: " + text);
  if (m.det() != 1) throw DomainError("matrix determinant is not 1: " + text);
  return m;
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b != 0) {
    std::int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::vector<std::int64_t> prime_factors(std::int64_t n) {
  std::vector<std::int64_t> out;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::int64_t euler_phi(std::int64_t n) {
  std::int64_t r = n;
  for (auto p : prime_factors(n)) r = r / p * (p - 1);
  return r;
}

std::vector<std::int64_t> divisors(std::int64_t n) {
  std::vector<std::int64_t> out;
  for (std::int64_t d = 1; d <= n; ++d)
    if (n % d == 0) out.push_back(d);
  return out;
}

std::int64_t ext_gcd(std::int64_t a, std::int64_t b, std::int64_t& x, std::int64_t& y) {
  std::int64_t x0 = 1, y0 = 0, x1 = 0, y1 = 1;
  while (b != 0) {
    std::int64_t q = a / b;
    std::int64_t t = a - q * b;
    a = b;
    b = t;
    t = x0 - q * x1;
    x0 = x1;
    x1 = t;
    t = y0 - q * y1;
    y0 = y1;
    y1 = t;
  }
  if (a < 0) {
    a = -a;
    x0 = -x0;
    y0 = -y0;
  }
  x = x0;
  y = y0;
  return a;
}

Mat2 complete_row(std::int64_t c, std::int64_t d) {
  // a d - b c = 1
  std::int64_t x, y;
  std::int64_t g = ext_gcd(d, c, x, y);
  if (g != 1) throw DomainError("bottom row is not coprime");
  // d x + c y = 1  ->  a = x, b = -y
  return {x, -y, c, d};
}

bool is_parabolic(const Mat2& m) {
  return (m.trace() == 2 || m.trace() == -2) && !m.is_identity();
}

cplx Cusp::sigma_j(cplx z) const {
  // sigma = A diag(sqrt w, 1/sqrt w): bottom row (c sqrt w, d / sqrt w)
  double sw = std::sqrt(double(width));
  return double(frame.c) * sw * z + double(frame.d) / sw;
}

Mat2 cusp_stabilizer(const Cusp& cusp) {
  const Mat2& A = cusp.frame;
  return (A * translation(cusp.width) * A.inverse()).normalized();
}

namespace {

int legendre_minus1(std::int64_t p) {
  if (p == 2) return 0;
  return (p % 4 == 1) ? 1 : -1;
}

int legendre_minus3(std::int64_t p) {
  if (p == 3) return 0;
  return (p % 3 == 1) ? 1 : -1;
}

}  // namespace

GroupContext gamma0_context(std::int64_t N) {
  if (N < 1) throw DomainError("level must be positive");
  GroupContext ctx;
  ctx.kind = GroupKind::gamma0;
  ctx.level = N;
  auto primes = prime_factors(N);
  std::int64_t mu = N;
  for (auto p : primes) mu = mu / p * (p + 1);
  ctx.index = mu;
  int nu2 = 0, nu3 = 0;
  if (N % 4 != 0) {
    nu2 = 1;
    for (auto p : primes) nu2 *= 1 + legendre_minus1(p);
  }
  if (N % 9 != 0) {
    nu3 = 1;
    for (auto p : primes) nu3 *= 1 + legendre_minus3(p);
  }
  ctx.nu2 = nu2;
  ctx.nu3 = nu3;
  for (int i = 0; i < nu2; ++i) ctx.elliptic_orders.push_back(2);
  for (int i = 0; i < nu3; ++i) ctx.elliptic_orders.push_back(3);

  // Cusps a/d with d | N and a mod gcd(d, N/d) a unit.
  for (auto d : divisors(N)) {
    std::int64_t g = gcd64(d, N / d);
    std::int64_t width = N / gcd64(d * d, N);
    for (std::int64_t r = 0; r < std::max<std::int64_t>(g, 1); ++r) {
      if (gcd64(r, g) != 1) continue;
      // lift r to a with gcd(a, d) = 1
      std::int64_t a = r;
      while (gcd64(a, d) != 1) a += g;
      Cusp cusp;
      cusp.width = width;
      if (d == N) {
        cusp.label = "inf";
        cusp.frame = Mat2{};
      } else {
        cusp.label = (a == 0 && d == 1) ? "0" : std::to_string(a) + "/" + std::to_string(d);
        // frame (a, -y; d, x) with a x + d y = 1
        std::int64_t x, y;
        ext_gcd(a, d, x, y);  // a x + d y = 1
        cusp.frame = Mat2{a, -y, d, x};
      }
      ctx.cusps.push_back(cusp);
    }
  }
  std::stable_sort(ctx.cusps.begin(), ctx.cusps.end(), [](const Cusp& l, const Cusp& r) {
    return (l.label == "inf") > (r.label == "inf");
  });
  int p = int(ctx.cusps.size());
  // 12 g = 12 + mu - 3 nu2 - 4 nu3 - 6 p
  ctx.genus = int((12 + mu - 3 * nu2 - 4 * nu3 - 6 * p) / 12);
  return ctx;
}

GroupContext theta_context() {
  GroupContext ctx;
  ctx.kind = GroupKind::theta;
  ctx.level = 2;
  ctx.index = 3;
  ctx.genus = 0;
  ctx.nu2 = 1;
  ctx.nu3 = 0;
  ctx.elliptic_orders = {2};
  ctx.cusps.push_back(Cusp{"inf", Mat2{}, 2});
  ctx.cusps.push_back(Cusp{"1", Mat2{1, -1, 1, 0}, 1});
  return ctx;
}

GroupContext custom_context(int genus, int cusps, std::vector<int> elliptic_orders) {
  if (cusps < 1) throw DomainError("compact quotients are not supported (need at least one cusp)");
  double chi = 2.0 * genus - 2.0 + cusps;
  for (int e : elliptic_orders) {
    if (e < 2) throw DomainError("elliptic orders must be at least 2");
    chi += 1.0 - 1.0 / e;
  }
  if (chi <= 0) throw DomainError("presentation data has non-positive Euler characteristic");
  GroupContext ctx;
  ctx.kind = GroupKind::custom;
  ctx.level = 0;
  ctx.genus = genus;
  ctx.elliptic_orders = std::move(elliptic_orders);
  for (int e : ctx.elliptic_orders) {
    if (e == 2) ++ctx.nu2;
    if (e == 3) ++ctx.nu3;
  }
  double mu = 6.0 * chi;
  if (std::abs(mu - std::round(mu)) < 1e-9) ctx.index = std::int64_t(std::llround(mu));
  for (int i = 0; i < cusps; ++i) ctx.cusps.push_back(Cusp{"c" + std::to_string(i), Mat2{}, 1});
  return ctx;
}

bool GroupContext::contains(const Mat2& m) const {
  if (m.det() != 1) return false;
  switch (kind) {
    case GroupKind::gamma0:
      return m.c % level == 0;
    case GroupKind::theta: {
      auto odd = [](std::int64_t v) { return (v % 2 + 2) % 2 == 1; };
      bool ident = odd(m.a) && !odd(m.b) && !odd(m.c) && odd(m.d);
      bool anti = !odd(m.a) && odd(m.b) && odd(m.c) && !odd(m.d);
      return ident || anti;
    }
    case GroupKind::custom:
      throw DomainError("membership is undefined for presentation-only contexts");
  }
  return false;
}

bool is_member(const GroupContext& ctx, const Mat2& m) { return ctx.contains(m); }

const Cusp& GroupContext::cusp(const std::string& label) const {
  for (const auto& c : cusps)
    if (c.label == label) return c;
  if (label == "infinity" || label == "oo" || label == "i*inf") return cusp("inf");
  throw DomainError("unsupported cusp label: " + label);
}

std::string GroupContext::name() const {
  switch (kind) {
    case GroupKind::gamma0:
      return "Gamma0(" + std::to_string(level) + ")";
    case GroupKind::theta:
      return "Gamma_theta";
    case GroupKind::custom:
      return "custom(g=" + std::to_string(genus) + ",p=" + std::to_string(cusps.size()) + ")";
  }
  return "";
}

Mat2 theta_word(const std::vector<ThetaLetter>& letters) {
  if (letters.empty()) throw DomainError("empty theta word");
  Mat2 m;
  for (auto l : letters) {
    switch (l) {
      case ThetaLetter::T2: m = m * translation(2); break;
      case ThetaLetter::T2inv: m = m * translation(-2); break;
      case ThetaLetter::S: m = m * mat_S; break;
      case ThetaLetter::Sinv: m = m * mat_S.inverse(); break;
    }
  }
  return m;
}

std::optional<Mat2> frame_completion(const GroupContext& ctx, const Cusp& cusp, std::int64_t c,
                                     std::int64_t d) {
  if (gcd64(c, d) != 1) return std::nullopt;
  Mat2 base = complete_row(c, d);
  std::int64_t search = ctx.kind == GroupKind::theta ? 2 : std::max<std::int64_t>(ctx.level, 1);
  for (std::int64_t t = 0; t < search; ++t) {
    Mat2 g = translation(t) * base;
    if (ctx.contains(cusp.frame * g)) return g;
  }
  return std::nullopt;
}

CosetEnumeration coset_reps(const GroupContext& ctx, const std::string& label, std::int64_t c_max) {
  if (ctx.kind == GroupKind::custom) throw DomainError("coset enumeration needs a concrete group");
  if (c_max < 1) throw DomainError("C_max must be positive");
  const Cusp& cusp = ctx.cusp(label);
  if (ctx.kind == GroupKind::theta && cusp.label != "inf")
    throw DomainError("unsupported cusp label for Gamma_theta series: " + label);
  CosetEnumeration out;
  out.cusp = cusp.label;
  out.c_max = c_max;
  out.period = ctx.right_period();
  if (auto g = frame_completion(ctx, cusp, 0, 1)) out.reps.push_back(*g);
  for (std::int64_t c = 1; c <= c_max; ++c) {
    for (std::int64_t d = 0; d < out.period * c; ++d) {
      if (auto g = frame_completion(ctx, cusp, c, d)) out.reps.push_back(*g);
    }
  }
  return out;
}

std::vector<Mat2> random_elements(const GroupContext& ctx, std::size_t count, std::uint64_t seed,
                                  std::int64_t max_entry, bool hyperbolic_only) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> len_dist(2, 14);
  std::uniform_int_distribution<int> letter(0, 3);
  std::vector<Mat2> out;
  std::size_t attempts = 0;
  while (out.size() < count) {
    if (++attempts > 2000000) throw Error("random_elements: too many rejected words");
    Mat2 m;
    int len = len_dist(rng);
    bool bad = false;
    for (int i = 0; i < len && !bad; ++i) {
      switch (letter(rng)) {
        case 0: m = m * mat_T; break;
        case 1: m = m * mat_T.inverse(); break;
        default: m = m * mat_S; break;
      }
      bad = std::max({std::abs(m.a), std::abs(m.b), std::abs(m.c), std::abs(m.d)}) > max_entry;
    }
    if (bad || !ctx.contains(m)) continue;
    m = m.normalized();
    if (m.is_identity()) continue;
    if (hyperbolic_only && std::abs(m.trace()) <= 2) continue;
    if (std::find(out.begin(), out.end(), m) != out.end()) continue;
    out.push_back(m);
  }
  return out;
}

}  // namespace somf
