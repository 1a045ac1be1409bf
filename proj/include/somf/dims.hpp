#pragma once

#include <optional>
#include <string>

#include "somf/group.hpp"

namespace somf {

enum class SpaceKind { S, M, E, S2, M2, H1shriek };

std::string to_string(SpaceKind kind);

struct DimBounds {
  long lower = 0;
  long upper = 0;
};

struct DimReport {
  SpaceKind kind;
  int weight;
  long value;
  std::string path;                 // which branch of the formula fired
  std::optional<DimBounds> bounds;  // second-order kinds only
};

long dim_first_order(const GroupContext& ctx, int k, SpaceKind kind);
long dim_second_order(const GroupContext& ctx, int k, SpaceKind kind);
/// Quotient-dimension sum; k = 2 includes the extra constant summand.
long dim_cohomology(const GroupContext& ctx, int k);
/// 2g(dim M_k + dim S_k), the count the quotient sum must reproduce for k >= 4.
long dim_cohomology_direct(const GroupContext& ctx, int k);

/// (g+1) dim and (2g+1) dim of the first-order space underlying S2 or M2.
DimBounds bounds_report(const GroupContext& ctx, int k, SpaceKind kind);

DimReport dim_report(const GroupContext& ctx, int k, SpaceKind kind);

}  // namespace somf
