#pragma once

#include <span>
#include <vector>

#include "gausshardy/chaos.hpp"

namespace gh {

/// Query for the operator (t^2 L)^N e^{(t^2/alpha) L}.
/// heat(s) configures the plain semigroup e^{sL}.
struct SemigroupQuery {
  double t = 1.0;
  int N = 0;
  double alpha = 1.0;

  static SemigroupQuery heat(double s) { return SemigroupQuery{s, 0, s}; }
  double inner_time() const { return t * t / alpha; }
  /// spectral multiplier (-t^2 k)^N e^{-(t^2/alpha) k}
  double multiplier(int order) const;
};

/// spectral path: diagonal multiplier on the chaos coefficients
ChaosExpansion apply_semigroup(const ChaosExpansion& u, const SemigroupQuery& q);

/// kernel path: Mehler quadrature against Lebesgue dy, evaluated through the
/// substitution z = (y - e^{-s}x)/sqrt(1-e^{-2s}) so one Gauss-Hermite rule
/// serves every (t,x). Positivity-preserving for N = 0.
GridFunction apply_semigroup_kernel(const RealFunction& u, const SemigroupQuery& q, int dim,
                                    const std::vector<double>& points_flat, int gh_order = 32);

struct DualPathResult {
  GridFunction spectral;
  GridFunction kernel;
  double l2_gamma_discrepancy = 0.0;
};
/// both paths on the same grid (grid must carry gamma weights for the
/// discrepancy to be an L^2(gamma) norm)
DualPathResult apply_semigroup_both(const ChaosExpansion& u, const SemigroupQuery& q,
                                    const GridFunction& grid, int gh_order = 32);

/// components t d_j e^{t^2 L} u, spectrally
std::vector<ChaosExpansion> apply_gradient_semigroup(const ChaosExpansion& u, double t);
/// same component by differentiating the Mehler kernel under the integral
GridFunction gradient_semigroup_kernel(const RealFunction& u, double t, int axis, int dim,
                                       const std::vector<double>& points_flat, int gh_order = 32);

/// The constant C with u = C int_0^inf (t^2 L)^{N+1} e^{((1+a^2)t^2/alpha)L} u dt/t
/// + int u dgamma, from the Gamma-integral reduction on an eigenfunction:
/// C = 2 (-1)^{N+1} ((1+a^2)/alpha)^{N+1} / N!.
double reproducing_constant(int N, double a, double alpha);

/// Constant for u = C int_0^inf (t^2 L)^{N+3/2} e^{(5 t^2/alpha)L} u dt/t
/// (mean-zero u): C = 2 (-1)^{N+1} (5/alpha)^{N+3/2} / Gamma(N+3/2).
double riesz_reproducing_constant(int N, double alpha);

/// regularized upper incomplete gamma Q(m,x) for integer m >= 1
double upper_gamma_regularized(int m, double x);

struct ReproduceResult {
  ChaosExpansion reconstruction;
  double tail_bound = 0.0;  // L^2 bound on the truncated part beyond t_max
};
/// truncated reproducing integral (log-spaced Gauss-Legendre panels in t)
/// plus the mean term
ReproduceResult reproduce(const ChaosExpansion& u, int N, double a, double alpha, double t_max);

/// J_inf u(x) = int_{m(x)/b}^{t_max} (t^2 L)^{N+1} e^{((1+a^2)t^2/alpha)L} u(x) dt/t,
/// lower limit honored exactly per evaluation point
GridFunction apply_J_infty(const ChaosExpansion& u, int N, double a, double alpha, double b,
                           double t_max, const GridFunction& grid);

enum class RegionMask { None, D, DComplement };

/// (t^2 L)^N e^{(t^2/alpha)L} t d*_axis [ 1_mask(t,.) t d_axis e^{(a^2 t^2/alpha)L} u ](x)
/// for fixed t; the inner gradient is spectral, the mask is applied on the
/// outer kernel-quadrature nodes.
double factored_term_value(const ChaosExpansion& u, int N, double a, double alpha, int axis,
                           RegionMask mask, double t, std::span<const double> x,
                           int gh_order = 32);

struct DcRemainderParams {
  int N = 1;
  double a = 2.0;
  double alpha = 36.0;
  double b = 6.0;
  int axis = 0;
  int gh_order = 32;
  int t_points_per_decade = 16;
  double t_lo_fraction = 1e-3;
};
/// int_0^{m(x)/b} (t^2 L)^N e^{(t^2/alpha)L} t d*_j (1_{D^c}(t,.) t d_j
/// e^{(a^2 t^2/alpha)L}) u (x) dt/t
GridFunction apply_J_remainder_Dc(const ChaosExpansion& u, const DcRemainderParams& p,
                                  const GridFunction& grid);

}  // namespace gh
