#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "gausshardy/quadrature.hpp"

namespace gh {

/// Hermite multi-index beta with order() = sum of entries.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries);
  static MultiIndex zeros(int dim) { return MultiIndex(std::vector<int>(dim, 0)); }

  int size() const { return static_cast<int>(e_.size()); }
  int operator[](int i) const { return e_[i]; }
  int order() const;
  const std::vector<int>& entries() const { return e_; }

  /// beta + e_j (returns copy)
  MultiIndex raised(int j) const;
  /// beta - e_j; requires beta[j] > 0
  MultiIndex lowered(int j) const;

  bool operator==(const MultiIndex& o) const { return e_ == o.e_; }
  bool operator<(const MultiIndex& o) const { return e_ < o.e_; }

 private:
  std::vector<int> e_;
};

/// Calls fn for every index of the given dimension with order <= max_degree,
/// in (order, lexicographic) order.
void for_each_index(int dim, int max_degree, const std::function<void(const MultiIndex&)>& fn);

/// Orthonormal Hermite values h_0..h_kmax at a scalar point (physicists'
/// polynomials divided by sqrt(2^k k!); L h_k = -k h_k).
void hermite_axis_values(int kmax, double x, std::vector<double>& out);

/// h_beta(x) = prod_j h_{beta_j}(x_j)
double hermite_eval(const MultiIndex& beta, std::span<const double> x);

/// Finite chaos expansion: sparse coefficient map in the orthonormal basis.
struct ChaosExpansion {
  int dimension = 1;
  int max_degree = 0;
  std::map<MultiIndex, double> coefficients;

  static ChaosExpansion unit(const MultiIndex& beta);
  static ChaosExpansion constant(int dim, double value);

  void add(const MultiIndex& beta, double c);
  double get(const MultiIndex& beta) const;
  double l2_norm() const;  // sqrt(sum c^2), Parseval
  ChaosExpansion& operator*=(double s);
  ChaosExpansion operator-(const ChaosExpansion& o) const;
  void prune(double eps = 0.0);
};

/// Point samples with optional attached quadrature (gamma-normalized
/// weights present exactly when the points are the rule's tensor nodes).
struct GridFunction {
  int dimension = 1;
  std::vector<double> points;   // flattened count*dim
  std::vector<double> values;   // count
  std::vector<double> weights;  // gamma weights; empty if no rule attached
  int rule_order = 0;           // order per axis when weights present

  std::size_t count() const { return values.size(); }
  std::span<const double> point(std::size_t i) const {
    return {points.data() + i * dimension, static_cast<std::size_t>(dimension)};
  }
  bool has_rule() const { return !weights.empty(); }

  double integral_gamma() const;  // sum w*v
  double l1_gamma() const;        // sum w*|v|
  double l2_gamma() const;        // sqrt(sum w*v^2)
};

/// Empty-valued grid on the tensor Gauss-Hermite nodes.
GridFunction tensor_grid_function(int dim, int order);

using RealFunction = std::function<double(std::span<const double>)>;

/// c_beta = <f, h_beta>_gamma by the attached rule; requires
/// rule order >= max_degree + 1 per axis.
ChaosExpansion analyze(const GridFunction& f, int max_degree);

/// Same inner products on any weighted grid; the caller owns the accuracy
/// of the weights (used for localized fields the tensor rule undersamples).
ChaosExpansion analyze_weighted(const GridFunction& f, int max_degree);

double eval_expansion(const ChaosExpansion& c, std::span<const double> x);
GridFunction synthesize(const ChaosExpansion& c, const std::vector<double>& points_flat);
/// synthesize onto an existing grid skeleton (keeps its weights)
GridFunction synthesize_on(const ChaosExpansion& c, const GridFunction& grid);
RealFunction expansion_function(const ChaosExpansion& c);

/// coefficient rule c'_{beta-e_j} += sqrt(2 beta_j) c_beta
ChaosExpansion apply_derivative(const ChaosExpansion& c, int axis);
/// coefficient rule c'_{beta+e_j} += sqrt(2 (beta_j+1)) c_beta;
/// equals (2 x_j - d/dx_j) in physical space
ChaosExpansion apply_adjoint_derivative(const ChaosExpansion& c, int axis);
/// c'_beta = phi(|beta|) c_beta
ChaosExpansion apply_order_multiplier(const ChaosExpansion& c, const std::function<double(int)>& phi);

/// Random expansion with entries uniform in [-1,1], all orders <= degree.
ChaosExpansion random_expansion(int dim, int degree, std::uint64_t seed);

}  // namespace gh
