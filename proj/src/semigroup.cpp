#include "gausshardy/semigroup.hpp"

#include <cmath>
#include <stdexcept>

#include "gausshardy/geometry.hpp"
#include "gausshardy/kernels.hpp"
#include "gausshardy/util.hpp"

namespace gh {

double SemigroupQuery::multiplier(int order) const {
  if (!(t > 0.0) || !(alpha > 0.0)) throw std::invalid_argument("SemigroupQuery: t, alpha > 0");
  double heat = std::exp(-inner_time() * order);
  if (N == 0) return heat;
  return std::pow(-t * t * order, N) * heat;
}

ChaosExpansion apply_semigroup(const ChaosExpansion& u, const SemigroupQuery& q) {
  return apply_order_multiplier(u, [&](int k) { return q.multiplier(k); });
}

GridFunction apply_semigroup_kernel(const RealFunction& u, const SemigroupQuery& q, int dim,
                                    const std::vector<double>& points_flat, int gh_order) {
  if (!(q.t >= 1e-6)) throw std::invalid_argument("apply_semigroup_kernel: t below 1e-6 rejected");
  double s = q.inner_time();
  double E = std::exp(-s);
  double D = one_minus_exp_m2(s);
  double sq = std::sqrt(D);
  TensorGrid z = gamma_tensor_grid(dim, gh_order);
  const KernelPoly& poly = KernelPoly::P(q.N, dim);
  double prefactor = (q.N == 0) ? 1.0 : std::pow(q.t * q.t / D, q.N);

  GridFunction out;
  out.dimension = dim;
  out.points = points_flat;
  std::size_t count = points_flat.size() / dim;
  out.values.resize(count);

  std::vector<double> y(dim), U(dim), V(dim);
  for (std::size_t i = 0; i < count; ++i) {
    std::span<const double> x(points_flat.data() + i * dim, dim);
    for (int d = 0; d < dim; ++d) V[d] = sq * x[d];
    double acc = 0.0;
    for (std::size_t qi = 0; qi < z.count(); ++qi) {
      auto zq = z.point(qi);
      for (int d = 0; d < dim; ++d) {
        y[d] = E * x[d] + sq * zq[d];
        U[d] = -zq[d];
      }
      double pval = (q.N == 0) ? 1.0 : poly.eval(E, U, V);
      acc += z.weights[qi] * pval * u(y);
    }
    out.values[i] = prefactor * acc;
  }
  return out;
}

DualPathResult apply_semigroup_both(const ChaosExpansion& u, const SemigroupQuery& q,
                                    const GridFunction& grid, int gh_order) {
  DualPathResult res;
  res.spectral = synthesize_on(apply_semigroup(u, q), grid);
  res.kernel = apply_semigroup_kernel(expansion_function(u), q, grid.dimension, grid.points, gh_order);
  res.kernel.weights = grid.weights;
  res.kernel.rule_order = grid.rule_order;
  if (grid.has_rule()) {
    double s = 0.0;
    for (std::size_t i = 0; i < grid.count(); ++i) {
      double d = res.spectral.values[i] - res.kernel.values[i];
      s += grid.weights[i] * d * d;
    }
    res.l2_gamma_discrepancy = std::sqrt(s);
  }
  return res;
}

std::vector<ChaosExpansion> apply_gradient_semigroup(const ChaosExpansion& u, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("apply_gradient_semigroup: t must be positive");
  ChaosExpansion heat = apply_semigroup(u, SemigroupQuery::heat(t * t));
  std::vector<ChaosExpansion> out;
  out.reserve(u.dimension);
  for (int j = 0; j < u.dimension; ++j) {
    ChaosExpansion g = apply_derivative(heat, j);
    g *= t;
    out.push_back(std::move(g));
  }
  return out;
}

GridFunction gradient_semigroup_kernel(const RealFunction& u, double t, int axis, int dim,
                                       const std::vector<double>& points_flat, int gh_order) {
  if (!(t >= 1e-3)) throw std::invalid_argument("gradient_semigroup_kernel: t too small");
  double s = t * t;
  double E = std::exp(-s);
  double D = one_minus_exp_m2(s);
  double sq = std::sqrt(D);
  TensorGrid z = gamma_tensor_grid(dim, gh_order);

  GridFunction out;
  out.dimension = dim;
  out.points = points_flat;
  std::size_t count = points_flat.size() / dim;
  out.values.resize(count);
  std::vector<double> y(dim);
  for (std::size_t i = 0; i < count; ++i) {
    std::span<const double> x(points_flat.data() + i * dim, dim);
    double acc = 0.0;
    for (std::size_t qi = 0; qi < z.count(); ++qi) {
      auto zq = z.point(qi);
      for (int d = 0; d < dim; ++d) y[d] = E * x[d] + sq * zq[d];
      acc += z.weights[qi] * (2.0 * E * zq[axis] / sq) * u(y);
    }
    out.values[i] = t * acc;
  }
  return out;
}

double reproducing_constant(int N, double a, double alpha) {
  if (N < 0 || !(alpha > 0.0)) throw std::invalid_argument("reproducing_constant: bad parameters");
  double bt = (1.0 + a * a) / alpha;
  double sign = (N % 2 == 0) ? -1.0 : 1.0;  // (-1)^{N+1}
  return 2.0 * sign * std::pow(bt, N + 1) / std::tgamma(N + 1.0);
}

double riesz_reproducing_constant(int N, double alpha) {
  if (N < 0 || !(alpha > 0.0)) throw std::invalid_argument("riesz_reproducing_constant: bad parameters");
  double sign = (N % 2 == 0) ? -1.0 : 1.0;
  return 2.0 * sign * std::pow(5.0 / alpha, N + 1.5) / std::tgamma(N + 1.5);
}

double upper_gamma_regularized(int m, double x) {
  if (m < 1) throw std::invalid_argument("upper_gamma_regularized: m >= 1");
  if (x <= 0.0) return 1.0;
  double term = 1.0, sum = 1.0;
  for (int i = 1; i < m; ++i) {
    term *= x / i;
    sum += term;
  }
  return std::exp(-x + std::log(sum));
}

ReproduceResult reproduce(const ChaosExpansion& u, int N, double a, double alpha, double t_max) {
  if (!(t_max > 0.0)) throw std::invalid_argument("reproduce: t_max must be positive");
  double C = reproducing_constant(N, a, alpha);
  double bt = (1.0 + a * a) / alpha;
  PanelRule panels = log_panels(1e-6, t_max, 24, 12);

  ReproduceResult res;
  res.reconstruction.dimension = u.dimension;

  // one t-integral per distinct eigenvalue
  std::map<int, double> factor;
  double tail_sq = 0.0;
  for (const auto& [beta, c] : u.coefficients) {
    int k = beta.order();
    if (k == 0) {
      res.reconstruction.add(beta, c);
      continue;
    }
    auto it = factor.find(k);
    if (it == factor.end()) {
      double I = 0.0;
      for (std::size_t i = 0; i < panels.t.size(); ++i) {
        double t = panels.t[i];
        double t2k = t * t * k;
        I += panels.w[i] / t * std::pow(-t2k, N + 1) * std::exp(-bt * k * t * t);
      }
      it = factor.emplace(k, C * I).first;
    }
    res.reconstruction.add(beta, c * it->second);
    double q = upper_gamma_regularized(N + 1, bt * k * t_max * t_max);
    tail_sq += c * c * q * q;
  }
  res.tail_bound = std::sqrt(tail_sq);
  return res;
}

GridFunction apply_J_infty(const ChaosExpansion& u, int N, double a, double alpha, double b,
                           double t_max, const GridFunction& grid) {
  if (!(b > 0.0)) throw std::invalid_argument("apply_J_infty: b must be positive");
  double bt = (1.0 + a * a) / alpha;
  GridFunction out = grid;
  for (std::size_t i = 0; i < grid.count(); ++i) {
    auto x = grid.point(i);
    double t_lo = admissibility(x) / b;
    double val = 0.0;
    if (t_lo < t_max) {
      PanelRule panels = log_panels(t_lo, t_max, 24, 12);
      std::map<int, double> g;  // eigenvalue integrals at this point
      for (const auto& [beta, c] : u.coefficients) {
        int k = beta.order();
        if (k == 0) continue;
        auto it = g.find(k);
        if (it == g.end()) {
          double I = 0.0;
          for (std::size_t p = 0; p < panels.t.size(); ++p) {
            double t = panels.t[p];
            I += panels.w[p] / t * std::pow(-t * t * k, N + 1) * std::exp(-bt * k * t * t);
          }
          it = g.emplace(k, I).first;
        }
        val += c * it->second * hermite_eval(beta, x);
      }
    }
    out.values[i] = val;
  }
  return out;
}

double factored_term_value(const ChaosExpansion& u, int N, double a, double alpha, int axis,
                           RegionMask mask, double t, std::span<const double> x, int gh_order) {
  int dim = u.dimension;
  // inner gradient t d_axis e^{(a^2 t^2 / alpha) L} u, spectral
  ChaosExpansion inner = apply_semigroup(u, SemigroupQuery::heat(a * a * t * t / alpha));
  inner = apply_derivative(inner, axis);
  if (inner.coefficients.empty()) return 0.0;
  inner *= t;

  double s = t * t / alpha;
  double E = std::exp(-s);
  double D = one_minus_exp_m2(s);
  double sq = std::sqrt(D);
  const KernelPoly& q = KernelPoly::Q(N, dim, axis);
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
    if (mask != RegionMask::None) {
      bool in_D = t < admissibility(y);
      if (mask == RegionMask::D && !in_D) continue;
      if (mask == RegionMask::DComplement && in_D) continue;
    }
    acc += z.weights[qi] * q.eval(E, U, V) * eval_expansion(inner, y);
  }
  return std::pow(t, 2 * N + 1) * std::pow(D, -(N + 0.5)) * acc;
}

GridFunction apply_J_remainder_Dc(const ChaosExpansion& u, const DcRemainderParams& p,
                                  const GridFunction& grid) {
  GridFunction out = grid;
  for (std::size_t i = 0; i < grid.count(); ++i) {
    auto x = grid.point(i);
    double t_hi = admissibility(x) / p.b;
    PanelRule panels = log_panels(t_hi * p.t_lo_fraction, t_hi, p.t_points_per_decade);
    double val = 0.0;
    for (std::size_t pi = 0; pi < panels.t.size(); ++pi) {
      double t = panels.t[pi];
      val += panels.w[pi] / t *
             factored_term_value(u, p.N, p.a, p.alpha, p.axis, RegionMask::DComplement, t, x,
                                 p.gh_order);
    }
    out.values[i] = val;
  }
  return out;
}

}  // namespace gh
