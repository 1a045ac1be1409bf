#pragma once

#include <optional>
#include <string>
#include <vector>

#include "somf/core.hpp"

namespace somf {

enum class GroupKind { gamma0, theta, custom };

/// A cusp a with representative A(inf) and scaling sigma_a = A * diag(sqrt w, 1/sqrt w).
struct Cusp {
  std::string label;
  Mat2 frame;            // integer matrix A sending inf to the cusp
  std::int64_t width = 1;

  /// sigma_a^{-1} z
  cplx to_frame(cplx z) const { return frame.inverse().apply(z) / double(width); }
  /// sigma_a z
  cplx from_frame(cplx z) const { return frame.apply(z * double(width)); }
  /// j(sigma_a, z)
  cplx sigma_j(cplx z) const;
};

struct GroupContext {
  GroupKind kind = GroupKind::gamma0;
  std::int64_t level = 1;
  std::optional<std::int64_t> index;  // in PSL2(Z); absent for custom data that is not a subgroup
  int genus = 0;
  int nu2 = 0;
  int nu3 = 0;
  std::vector<int> elliptic_orders;
  std::vector<Cusp> cusps;

  int cusp_count() const { return int(cusps.size()); }
  int hyperbolic_generators() const { return 2 * genus; }

  bool contains(const Mat2& m) const;
  const Cusp& cusp(const std::string& label) const;
  /// Translation length h with T^h the right stabilizer used to fold coset sums.
  std::int64_t right_period() const { return kind == GroupKind::theta ? 2 : 1; }
  std::string name() const;
};

GroupContext gamma0_context(std::int64_t N);
GroupContext theta_context();
/// Presentation data only: genus, cusp count, elliptic orders.
GroupContext custom_context(int genus, int cusps, std::vector<int> elliptic_orders);

bool is_member(const GroupContext& ctx, const Mat2& m);

enum class ThetaLetter { T2, T2inv, S, Sinv };
Mat2 theta_word(const std::vector<ThetaLetter>& letters);

/// Double-coset representatives Gamma_a \ Gamma / <T^h> expressed in the cusp frame:
/// each rep is the integer matrix G = A^{-1} gamma with bottom row (c, d), 0 <= d < h c.
struct CosetEnumeration {
  std::string cusp;
  std::int64_t c_max = 0;
  std::int64_t period = 1;
  std::vector<Mat2> reps;
  bool exact = true;
};

CosetEnumeration coset_reps(const GroupContext& ctx, const std::string& cusp, std::int64_t c_max);

/// Finds a matrix G with bottom row (c, d) such that A G lies in the group, if any.
std::optional<Mat2> frame_completion(const GroupContext& ctx, const Cusp& cusp, std::int64_t c,
                                     std::int64_t d);

/// Seeded group elements from random words in S and T, kept when they lie in the group.
std::vector<Mat2> random_elements(const GroupContext& ctx, std::size_t count, std::uint64_t seed,
                                  std::int64_t max_entry = 100, bool hyperbolic_only = false);

/// Generator of the stabilizer of the cusp, i.e. sigma_a (1 w; 0 1) sigma_a^{-1} as an integer matrix.
Mat2 cusp_stabilizer(const Cusp& cusp);

}  // namespace somf
