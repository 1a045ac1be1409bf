#include "somf/dims.hpp"

namespace somf {

std::string to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::S: return "S";
    case SpaceKind::M: return "M";
    case SpaceKind::E: return "E";
    case SpaceKind::S2: return "S2";
    case SpaceKind::M2: return "M2";
    case SpaceKind::H1shriek: return "H1";
  }
  return "?";
}

namespace {

void check_weight(const GroupContext& ctx, int k) {
  if (k % 2 != 0) throw UnsupportedWeight("even weight only (got k=" + std::to_string(k) + ")");
  if (ctx.cusp_count() < 1) throw DomainError("compact quotient: no cusps");
}

long dim_s(const GroupContext& ctx, int k) {
  const long g = ctx.genus;
  const long p = ctx.cusp_count();
  if (k < 2) return 0;
  if (k == 2) return g;
  long v = (k - 1) * (g - 1) + (k / 2 - 1) * p;
  for (int e : ctx.elliptic_orders) v += (long(k) * (e - 1)) / (2L * e);
  return v;
}

}  // namespace

long dim_first_order(const GroupContext& ctx, int k, SpaceKind kind) {
  check_weight(ctx, k);
  const long g = ctx.genus;
  const long p = ctx.cusp_count();
  switch (kind) {
    case SpaceKind::S:
      return dim_s(ctx, k);
    case SpaceKind::M:
      if (k < 0) return 0;
      if (k == 0) return 1;
      if (k == 2) return g + p - 1;
      return dim_s(ctx, k) + p;
    case SpaceKind::E:
      if (k <= 0) return 0;
      if (k == 2) return p - 1;
      return p;
    default:
      throw DomainError("dim_first_order: kind must be S, M or E");
  }
}

long dim_second_order(const GroupContext& ctx, int k, SpaceKind kind) {
  check_weight(ctx, k);
  const long g = ctx.genus;
  switch (kind) {
    case SpaceKind::S2: {
      if (k <= 0) return 0;
      long s = dim_s(ctx, k);
      if (k == 2) return s == 0 ? 0 : (2 * g + 1) * s - 1;
      return (2 * g + 1) * s;
    }
    case SpaceKind::M2:
      if (k <= -2) return 0;
      if (k == 0) return g + 1;
      return (2 * g + 1) * dim_first_order(ctx, k, SpaceKind::M);
    default:
      throw DomainError("dim_second_order: kind must be S2 or M2");
  }
}

long dim_cohomology(const GroupContext& ctx, int k) {
  check_weight(ctx, k);
  if (k < 2) throw UnsupportedWeight("cohomology dimension needs k >= 2");
  long v = (dim_second_order(ctx, k, SpaceKind::M2) - dim_first_order(ctx, k, SpaceKind::M)) +
           (dim_second_order(ctx, k, SpaceKind::S2) - dim_first_order(ctx, k, SpaceKind::S));
  if (k == 2) v += 1;
  return v;
}

long dim_cohomology_direct(const GroupContext& ctx, int k) {
  check_weight(ctx, k);
  return 2L * ctx.genus *
         (dim_first_order(ctx, k, SpaceKind::M) + dim_first_order(ctx, k, SpaceKind::S));
}

DimBounds bounds_report(const GroupContext& ctx, int k, SpaceKind kind) {
  check_weight(ctx, k);
  SpaceKind base = (kind == SpaceKind::M2 || kind == SpaceKind::M) ? SpaceKind::M : SpaceKind::S;
  long d = dim_first_order(ctx, k, base);
  long g = ctx.genus;
  DimBounds b;
  b.upper = (2 * g + 1) * d;
  b.lower = k >= 0 ? (g + 1) * d : 0;
  return b;
}

DimReport dim_report(const GroupContext& ctx, int k, SpaceKind kind) {
  DimReport r{kind, k, 0, "", std::nullopt};
  switch (kind) {
    case SpaceKind::S:
    case SpaceKind::M:
    case SpaceKind::E:
      r.value = dim_first_order(ctx, k, kind);
      r.path = k >= 4 ? "first-order k>=4" : "first-order k<=2 list";
      break;
    case SpaceKind::S2:
    case SpaceKind::M2:
      r.value = dim_second_order(ctx, k, kind);
      r.bounds = bounds_report(ctx, k, kind);
      if (kind == SpaceKind::S2 && k == 2)
        r.path = r.value == 0 ? "S2 k=2 zero cusp-form space" : "S2 k=2 upper bound minus one";
      else if (kind == SpaceKind::M2 && k == 0)
        r.path = "M2 k=0 g+1";
      else
        r.path = "(2g+1) times first-order";
      break;
    case SpaceKind::H1shriek:
      r.value = dim_cohomology(ctx, k);
      r.path = k == 2 ? "quotient sum plus constant summand" : "quotient sum";
      if (k == 2 && ctx.genus == 0) r.path += " (g=0: constant summand only)";
      break;
  }
  return r;
}

}  // namespace somf
