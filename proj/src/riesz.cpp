#include "gausshardy/riesz.hpp"

#include <cmath>
#include <stdexcept>

#include "gausshardy/kernels.hpp"
#include "gausshardy/quadrature.hpp"
#include "gausshardy/semigroup.hpp"

namespace gh {

ChaosExpansion apply_M(const ChaosExpansion& u) {
  return apply_order_multiplier(u, [](int k) { return k == 0 ? 0.0 : 1.0 / std::sqrt(double(k)); });
}

ChaosExpansion riesz_apply(const ChaosExpansion& u, const RieszQuery& q) {
  if (q.axis < 0 || q.axis >= u.dimension) throw std::invalid_argument("riesz_apply: bad axis");
  ChaosExpansion mid;
  if (q.path == RieszPath::Spectral) {
    mid = apply_M(u);
  } else {
    // C int_0^{t_max} t (t^2 L)^{N+1} e^{(5 t^2/alpha)L} dt/t as an order
    // multiplier, then the derivative outside the integral
    double C = riesz_reproducing_constant(q.N, q.alpha);
    PanelRule panels = log_panels(1e-6, q.t_max, 24, 12);
    std::map<int, double> cache;
    mid = apply_order_multiplier(u, [&](int k) {
      if (k == 0) return 0.0;
      auto it = cache.find(k);
      if (it == cache.end()) {
        double I = 0.0;
        for (std::size_t i = 0; i < panels.t.size(); ++i) {
          double t = panels.t[i];
          I += panels.w[i] * std::pow(-t * t * k, q.N + 1) *
               std::exp(-5.0 * k * t * t / q.alpha);
        }
        it = cache.emplace(k, C * I).first;
      }
      return it->second;
    });
  }
  return q.variant == RieszVariant::R ? apply_derivative(mid, q.axis)
                                      : apply_adjoint_derivative(mid, q.axis);
}

ChaosExpansion riesz_R_adjoint(const ChaosExpansion& u, int axis) {
  return apply_M(apply_adjoint_derivative(u, axis));
}

RieszL2Report riesz_l2_norm_experiment(const std::vector<FamilyMember>& family, int axis) {
  RieszL2Report rep;
  for (const auto& m : family) {
    RieszL2Row row;
    row.id = m.id;
    double base = m.u.l2_norm();
    if (base > 0.0) {
      row.r_ratio =
          riesz_apply(m.u, RieszQuery{axis, RieszVariant::R, RieszPath::Spectral}).l2_norm() / base;
      row.s_ratio =
          riesz_apply(m.u, RieszQuery{axis, RieszVariant::S, RieszPath::Spectral}).l2_norm() / base;
    }
    rep.sup_r = std::max(rep.sup_r, row.r_ratio);
    rep.sup_s = std::max(rep.sup_s, row.s_ratio);
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

RieszH1Report riesz_h1_experiment(const std::vector<FamilyMember>& family, int axis,
                                  const ConeSpec& spec, const GridFunction& grid) {
  RieszH1Report rep;
  BallMeasureCache cache;
  for (const auto& m : family) {
    RieszH1Row row;
    row.id = m.id;
    H1Norms norms = h1_norms(m.u, 2.0, 2.0, spec, grid, &cache);
    row.h1_quad = norms.quad;
    row.l1_r = synthesize_on(riesz_apply(m.u, RieszQuery{axis, RieszVariant::R}), grid).l1_gamma();
    row.l1_s = synthesize_on(riesz_apply(m.u, RieszQuery{axis, RieszVariant::S}), grid).l1_gamma();
    if (norms.quad > 0.0) {
      row.r_ratio = row.l1_r / norms.quad;
      row.s_ratio = row.l1_s / norms.quad;
    }
    rep.sup_r = std::max(rep.sup_r, row.r_ratio);
    rep.sup_s = std::max(rep.sup_s, row.s_ratio);
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

SignedLog riesz_atom_term_value(const TentAtom& atom, int N, double alpha, int j, int k,
                                double b, std::span<const double> x,
                                const MoleculeQuadrature& mq) {
  int dim = atom.ball.dim();
  const KernelPoly& qq = KernelPoly::Q(N, dim, j);
  const KernelPoly& dq = KernelPoly::dQ(N, dim, j, k);
  double r = atom.ball.radius;
  double t_hi = std::min(atom.lambda * r / 2.0, admissibility(x) / b);
  if (!(t_hi > 0.0)) return SignedLog::zero();
  PanelRule panels = log_panels(t_hi * mq.t_lo_fraction, t_hi, mq.t_points_per_decade);

  SignedLog total = SignedLog::zero();
  std::vector<double> U(dim), V(dim), y(dim);
  for (std::size_t pi = 0; pi < panels.t.size(); ++pi) {
    double t = panels.t[pi];
    double rho2 = r * r - 2.0 * r * t / atom.lambda;
    if (rho2 <= 0.0) continue;
    double s = t * t / alpha;
    double E = std::exp(-s);
    double D = one_minus_exp_m2(s);
    double sq = std::sqrt(D);
    std::vector<double> zc(dim);
    for (int d = 0; d < dim; ++d) zc[d] = (atom.ball.center[d] - E * x[d]) / sq;
    double R = std::sqrt(rho2) / sq;
    auto g = [&](std::span<const double> z) {
      for (int d = 0; d < dim; ++d) {
        y[d] = E * x[d] + sq * z[d];
        U[d] = E * z[d] - sq * x[d];
        V[d] = E * sq * x[d] + D * z[d];
      }
      double F = atom.eval(t, y);
      if (F == 0.0) return 0.0;
      return (dq.eval(E, U, V) / sq + 2.0 * x[k] * qq.eval(E, U, V)) * F;
    };
    SignedLog I = gaussian_window_integral(zc, R, g);
    if (I.is_zero()) continue;
    double lg = (2.0 * N + 2.0) * std::log(t) - (N + 0.5) * std::log(D) -
                0.5 * dim * std::log(M_PI);
    total += I.scaled_log(lg) * (panels.w[pi] / t);
  }
  return total;
}

double riesz_dc_term_value(const ChaosExpansion& u, int N, double a, double alpha, int j, int k,
                           double t, std::span<const double> x, int gh_order) {
  int dim = u.dimension;
  ChaosExpansion inner = apply_semigroup(u, SemigroupQuery::heat(a * a * t * t / alpha));
  inner = apply_derivative(inner, j);
  if (inner.coefficients.empty()) return 0.0;
  inner *= t;

  double s = t * t / alpha;
  double E = std::exp(-s);
  double D = one_minus_exp_m2(s);
  double sq = std::sqrt(D);
  const KernelPoly& qq = KernelPoly::Q(N, dim, j);
  const KernelPoly& dq = KernelPoly::dQ(N, dim, j, k);
  TensorGrid z = gamma_tensor_grid(dim, gh_order);

  std::vector<double> y(dim), U(dim), V(dim);
  double acc = 0.0;
  for (std::size_t qi = 0; qi < z.count(); ++qi) {
    auto zq = z.point(qi);
    for (int d = 0; d < dim; ++d) {
      y[d] = E * x[d] + sq * zq[d];
      U[d] = E * zq[d] - sq * x[d];
      V[d] = E * sq * x[d] + D * zq[d];
    }
    if (t < admissibility(y)) continue;  // keep only the D-complement
    acc += z.weights[qi] * (dq.eval(E, U, V) / sq + 2.0 * x[k] * qq.eval(E, U, V)) *
           eval_expansion(inner, y);
  }
  return std::pow(t, 2 * N + 2) * std::pow(D, -(N + 0.5)) * acc;
}

RieszRemainderReport riesz_remainder_bounds(const ChaosExpansion& u, const TentAtom& atom,
                                            int axis_k, int axis_j, int N, double alpha,
                                            double b, const GridFunction& grid, double t_max) {
  RieszRemainderReport rep;
  double u_l1 = synthesize_on(u, grid).l1_gamma();

  // atom term: L^1 over a grid localized near the atom's ball plus the
  // global grid (the field decays off the ball)
  {
    double acc = 0.0;
    for (std::size_t i = 0; i < grid.count(); ++i) {
      SignedLog v = riesz_atom_term_value(atom, N, alpha, axis_j, axis_k, b, grid.point(i));
      acc += grid.weights[i] * std::abs(v.value());
    }
    rep.atom_term_l1 = acc;
  }

  // D-complement term with the outer derivative
  {
    double acc = 0.0;
    for (std::size_t i = 0; i < grid.count(); ++i) {
      auto x = grid.point(i);
      double t_hi = admissibility(x) / b;
      PanelRule panels = log_panels(t_hi * 1e-3, t_hi, 16);
      double val = 0.0;
      for (std::size_t pi = 0; pi < panels.t.size(); ++pi)
        val += panels.w[pi] / panels.t[pi] *
               riesz_dc_term_value(u, N, 2.0, alpha, axis_j, axis_k, panels.t[pi], x);
      acc += grid.weights[i] * std::abs(val);
    }
    rep.dc_term_l1 = acc;
    rep.dc_ratio = u_l1 > 0.0 ? acc / u_l1 : 0.0;
  }

  // tail term: spectral, pointwise lower limit m(x)/b
  {
    double acc = 0.0;
    for (std::size_t i = 0; i < grid.count(); ++i) {
      auto x = grid.point(i);
      double t_lo = admissibility(x) / b;
      double val = 0.0;
      if (t_lo < t_max) {
        PanelRule panels = log_panels(t_lo, t_max, 16);
        std::map<int, double> g;
        for (const auto& [beta, c] : u.coefficients) {
          int ord = beta.order();
          if (ord == 0 || beta[axis_k] == 0) continue;
          auto it = g.find(ord);
          if (it == g.end()) {
            double I = 0.0;
            for (std::size_t p = 0; p < panels.t.size(); ++p) {
              double t = panels.t[p];
              I += panels.w[p] * std::pow(-t * t * ord, N + 1) *
                   std::exp(-5.0 * ord * t * t / alpha);
            }
            it = g.emplace(ord, I).first;
          }
          val += c * it->second * std::sqrt(2.0 * beta[axis_k]) *
                 hermite_eval(beta.lowered(axis_k), x);
        }
      }
      acc += grid.weights[i] * std::abs(val);
    }
    rep.tail_term_l1 = acc;
    rep.tail_ratio = u_l1 > 0.0 ? acc / u_l1 : 0.0;
  }
  return rep;
}

}  // namespace gh
