#pragma once

#include <functional>
#include <span>
#include <vector>

#include "gausshardy/util.hpp"

namespace gh {

/// One-dimensional Gauss rule data; tensorized on demand.
/// For the Hermite rule the weight function is exp(-x^2) on R, so the
/// weights sum to sqrt(pi) and dividing by pi^{n/2} gives unit gamma mass.
struct QuadratureRule {
  int order_per_axis = 0;
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Golub-Welsch nodes/weights for weight exp(-x^2)dx, symmetry enforced.
const QuadratureRule& gauss_hermite_rule(int order);

/// Gauss-Legendre on [-1,1].
const QuadratureRule& gauss_legendre_rule(int order);

/// Gauss-Legendre mapped onto [a,b].
QuadratureRule gauss_legendre_on(double a, double b, int order);

/// Composite Gauss-Legendre over log-spaced panels of [lo,hi]; weights are
/// plain dt weights (not dt/t).
struct PanelRule {
  std::vector<double> t;
  std::vector<double> w;
};
PanelRule log_panels(double lo, double hi, int points_per_decade, int points_per_panel = 8);

/// Tensor grid of a 1-d rule in dimension n with gamma-normalized weights
/// (weight product divided by pi^{n/2}).
struct TensorGrid {
  int dim = 0;
  int order = 0;
  std::vector<double> points;   // flattened, size count*dim
  std::vector<double> weights;  // size count
  std::size_t count() const { return weights.size(); }
  std::span<const double> point(std::size_t i) const {
    return {points.data() + i * dim, static_cast<std::size_t>(dim)};
  }
};
TensorGrid gamma_tensor_grid(int dim, int order);

/// SignedLog of int_{|z-zc|<=R} e^{-|z|^2} g(z) dz in dimension 1 or 2.
/// Far windows are handled by the exponent substitution v = z^2 - p^2, so
/// the dominant e-folding is resolved at any distance from the origin.
SignedLog gaussian_window_integral(std::span<const double> zc, double R,
                                   const std::function<double(std::span<const double>)>& g);

}  // namespace gh
