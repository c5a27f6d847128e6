#pragma once

#include <string>
#include <vector>

#include "gausshardy/chaos.hpp"
#include "gausshardy/functionals.hpp"
#include "gausshardy/geometry.hpp"

namespace gh {

/// multiplier |beta|^{-1/2} on the chaos coefficients; kills the constant
ChaosExpansion apply_M(const ChaosExpansion& u);

enum class RieszVariant { R, S };  // R_k = d_k M, S_k = d*_k M
enum class RieszPath { Spectral, Integral };

struct RieszQuery {
  int axis = 0;
  RieszVariant variant = RieszVariant::R;
  RieszPath path = RieszPath::Spectral;
  // integral-path parameters
  int N = 1;
  double alpha = 36.0;
  double t_max = 20.0;
};

/// Spectral path composes the multiplier with the (adjoint) derivative;
/// the integral path evaluates C int_0^{t_max} t d (t^2 L)^{N+1}
/// e^{(5 t^2/alpha)L} u dt/t with the derived constant.
ChaosExpansion riesz_apply(const ChaosExpansion& u, const RieszQuery& q);

/// The L^2(gamma) adjoint of R_k, which is M d*_k (composition order matters:
/// S_k = d*_k M is a different operator since M does not commute with d*).
ChaosExpansion riesz_R_adjoint(const ChaosExpansion& u, int axis);

struct RieszL2Row {
  std::string id;
  double r_ratio = 0.0;
  double s_ratio = 0.0;
};
struct RieszL2Report {
  std::vector<RieszL2Row> rows;
  double sup_r = 0.0;
  double sup_s = 0.0;
};
RieszL2Report riesz_l2_norm_experiment(const std::vector<FamilyMember>& family, int axis);

struct RieszH1Row {
  std::string id;
  double l1_r = 0.0;
  double l1_s = 0.0;
  double h1_quad = 0.0;
  double r_ratio = 0.0;
  double s_ratio = 0.0;
};
struct RieszH1Report {
  std::vector<RieszH1Row> rows;
  double sup_r = 0.0;
  double sup_s = 0.0;
};
/// measured |R_k u|_1 / |u|_{h1_quad,2}; the admissibility is fixed at 2
RieszH1Report riesz_h1_experiment(const std::vector<FamilyMember>& family, int axis,
                                  const ConeSpec& spec, const GridFunction& grid);

/// int_0^{min(m(x)/b, support)} t d_k (t^2 L)^N e^{(t^2/alpha)L} t d*_j F(t,.) dt/t
/// in log scale (the derivative dual-kernel machinery)
SignedLog riesz_atom_term_value(const TentAtom& atom, int N, double alpha, int j, int k,
                                double b, std::span<const double> x,
                                const MoleculeQuadrature& mq = {});

/// same operator sandwich as the D-complement remainder with the extra
/// outer derivative: t d_k (t^2 L)^N e^{(t^2/alpha)L} t d*_j
/// (1_{D^c} t d_j e^{(a^2 t^2/alpha)L}) u at fixed t
double riesz_dc_term_value(const ChaosExpansion& u, int N, double a, double alpha, int j, int k,
                           double t, std::span<const double> x, int gh_order = 32);

struct RieszRemainderReport {
  double atom_term_l1 = 0.0;   // dominator 1
  double dc_term_l1 = 0.0;     // dominator |u|_1
  double dc_ratio = 0.0;
  double tail_term_l1 = 0.0;   // dominator |u|_1
  double tail_ratio = 0.0;
};
/// the three derivative remainder operators; atom term over the given atom,
/// the other two over u
RieszRemainderReport riesz_remainder_bounds(const ChaosExpansion& u, const TentAtom& atom,
                                            int axis_k, int axis_j, int N, double alpha,
                                            double b, const GridFunction& grid,
                                            double t_max = 20.0);

}  // namespace gh
