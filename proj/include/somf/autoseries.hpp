#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "somf/eval.hpp"
#include "somf/group.hpp"
#include "somf/symbols.hpp"

namespace somf {

/// Geometry of one coset term M = sigma_a^{-1} gamma at the evaluation point.
struct TermGeom {
  Mat2 G;       // A^{-1} gamma, an integer matrix
  cplx Mz;      // sigma_a^{-1} gamma z
  cplx jM;      // j(sigma_a^{-1} gamma, z)
  double im;    // Im(Mz)
};

enum class Reduction { repro, fast };

/// Coset terms {G T^{hn}} with |cz + d| <= C_max y, in a fixed order
/// (row c ascending, residue d mod hc ascending, shift ascending).
class CosetSum {
 public:
  static CosetSum build(const GroupContext& ctx, const std::string& cusp, cplx z, std::int64_t c_max);

  /// Same terms re-indexed for the point g z: each G becomes G g^{-1}, so G g^{-1} (g z) = G z.
  CosetSum transported(const Mat2& g) const;
  /// Same terms evaluated at another point (used for finite differences).
  CosetSum moved_to(cplx z) const;

  cplx point() const { return z_; }
  /// Point and carrier g of the disk the terms were chosen from (g = identity unless transported).
  cplx origin() const { return origin_; }
  const Mat2& carrier() const { return carrier_; }
  std::int64_t c_max() const { return c_max_; }
  double width() const { return width_; }
  std::int64_t period() const { return period_; }
  const std::string& cusp() const { return cusp_; }
  const std::vector<Mat2>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  TermGeom geom(const Mat2& G) const;

  /// Compensated sum of fn over all terms, reduced in blocks.
  cplx sum(const std::function<cplx(const TermGeom&)>& fn, Reduction mode = Reduction::repro) const;

  /// Sum over the same disk without storing the term list.
  static cplx stream(const GroupContext& ctx, const std::string& cusp, cplx z, std::int64_t c_max,
                     const std::function<cplx(const TermGeom&)>& fn, std::size_t* count = nullptr,
                     Reduction mode = Reduction::repro);

 private:
  cplx z_, origin_;
  Mat2 carrier_;
  std::int64_t c_max_ = 0;
  double width_ = 1.0;
  std::int64_t period_ = 1;
  std::string cusp_;
  std::vector<Mat2> terms_;
};

/// Upper bound on sum of Im(sigma_a^{-1} gamma z)^sigma over terms outside the disk |cz+d| <= C_max y.
double tail_estimate(const GroupContext& ctx, cplx z, double sigma, std::int64_t c_max, const std::string& cusp = "inf");

/// How the Eichler integral is evaluated at gamma z.
enum class EichlerRoute { direct, symbol };

struct SeriesRequest {
  GroupContext ctx = gamma0_context(1);
  std::string cusp = "inf";
  std::int64_t m = 0;
  cplx z{0.0, 1.0};
  cplx s{2.0, 0.0};
  int k = 0;
  std::int64_t c_max = 50;
  std::optional<Hom0Spec> L;
  std::optional<Form> f;
  int n = 1;  // antiderivative index for Q, n <= 1
  EichlerRoute route = EichlerRoute::direct;
  Reduction mode = Reduction::repro;
};

struct SeriesValue {
  cplx value;
  double tail_estimate = 0.0;
  std::size_t terms_used = 0;
};

/// E_a(z, s) = sum Im(sigma_a^{-1} gamma z)^s.
SeriesValue eisenstein(const SeriesRequest& req);
SeriesValue eisenstein(const SeriesRequest& req, const CosetSum& set);
/// Same sum without storing the coset list.
SeriesValue eisenstein_streamed(const SeriesRequest& req);

/// U_am(z, s, k) = sum Im^s e(m M z) eps(M, z)^{-k}, eps = j/|j|.
SeriesValue u_series(const SeriesRequest& req);
SeriesValue u_series(const SeriesRequest& req, const CosetSum& set);

/// P_am(z)_k = sum j(M, z)^{-k} e(m M z).
SeriesValue p_classical(const SeriesRequest& req);
SeriesValue p_classical(const SeriesRequest& req, const CosetSum& set);

/// P_am(z, L)_k = sum L(gamma) j(M, z)^{-k} e(m M z).
SeriesValue p_second(const SeriesRequest& req);
SeriesValue p_second(const SeriesRequest& req, const CosetSum& set);

/// Q_am(z, s, n; conj f) = sum conj(I_n(M z)) Im^s e(m M z) for n <= 1.
SeriesValue q_series(const SeriesRequest& req);
SeriesValue q_series(const SeriesRequest& req, const CosetSum& set);

/// G_am(z, s; conj F) = sum conj(F(gamma z)) j(M, z)^{-2} Im^s e(m M z).
SeriesValue g_series(const SeriesRequest& req);
SeriesValue g_series(const SeriesRequest& req, const CosetSum& set);

struct ZValue {
  SeriesValue direct;      // sum conj<gamma, f> Im^s j^{-2} e(m M z)
  SeriesValue decomposed;  // G - conj F(z) y^{-1} U(z, s+1, 2)
};

ZValue z_series(const SeriesRequest& req);
ZValue z_series(const SeriesRequest& req, const CosetSum& set);

/// z -> f(z) int_{i inf}^z h for f of weight k and h a weight-2 cusp form on the same group.
Evaluator product_form(const Form& f, const Form& h);

/// I_n(w) for the cusp at infinity: n-th antiderivative (n = 1), the form (n = 0) or derivatives (n < 0).
cplx form_integral_at(const Form& f, int n, cplx w, double width = 1.0);

}  // namespace somf
