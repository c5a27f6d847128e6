#include "gausshardy/chaos.hpp"

#include <cmath>
#include <stdexcept>

#include "gausshardy/util.hpp"

namespace gh {

MultiIndex::MultiIndex(std::vector<int> entries) : e_(std::move(entries)) {
  for (int v : e_)
    if (v < 0) throw std::invalid_argument("MultiIndex: entries must be non-negative");
}

int MultiIndex::order() const {
  int s = 0;
  for (int v : e_) s += v;
  return s;
}

MultiIndex MultiIndex::raised(int j) const {
  std::vector<int> e = e_;
  e.at(j) += 1;
  return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::lowered(int j) const {
  std::vector<int> e = e_;
  if (e.at(j) <= 0) throw std::invalid_argument("MultiIndex::lowered: entry already zero");
  e[j] -= 1;
  return MultiIndex(std::move(e));
}

namespace {
void enumerate_rec(std::vector<int>& e, int pos, int remaining,
                   const std::function<void(const MultiIndex&)>& fn) {
  if (pos == static_cast<int>(e.size()) - 1) {
    e[pos] = remaining;
    fn(MultiIndex(e));
    return;
  }
  for (int v = 0; v <= remaining; ++v) {
    e[pos] = v;
    enumerate_rec(e, pos + 1, remaining - v, fn);
  }
}
}  // namespace

void for_each_index(int dim, int max_degree, const std::function<void(const MultiIndex&)>& fn) {
  std::vector<int> e(dim, 0);
  for (int total = 0; total <= max_degree; ++total) enumerate_rec(e, 0, total, fn);
}

void hermite_axis_values(int kmax, double x, std::vector<double>& out) {
  out.resize(kmax + 1);
  out[0] = 1.0;
  if (kmax == 0) return;
  out[1] = std::sqrt(2.0) * x;
  for (int k = 1; k < kmax; ++k)
    out[k + 1] = x * std::sqrt(2.0 / (k + 1)) * out[k] - std::sqrt(k / (k + 1.0)) * out[k - 1];
}

double hermite_eval(const MultiIndex& beta, std::span<const double> x) {
  if (beta.size() != static_cast<int>(x.size()))
    throw std::invalid_argument("hermite_eval: dimension mismatch");
  double prod = 1.0;
  std::vector<double> vals;
  for (int j = 0; j < beta.size(); ++j) {
    hermite_axis_values(beta[j], x[j], vals);
    prod *= vals[beta[j]];
  }
  return prod;
}

ChaosExpansion ChaosExpansion::unit(const MultiIndex& beta) {
  ChaosExpansion c;
  c.dimension = beta.size();
  c.max_degree = beta.order();
  c.coefficients[beta] = 1.0;
  return c;
}

ChaosExpansion ChaosExpansion::constant(int dim, double value) {
  ChaosExpansion c;
  c.dimension = dim;
  c.max_degree = 0;
  if (value != 0.0) c.coefficients[MultiIndex::zeros(dim)] = value;
  return c;
}

void ChaosExpansion::add(const MultiIndex& beta, double c) {
  if (beta.size() != dimension) throw std::invalid_argument("ChaosExpansion::add: dimension mismatch");
  coefficients[beta] += c;
  max_degree = std::max(max_degree, beta.order());
}

double ChaosExpansion::get(const MultiIndex& beta) const {
  auto it = coefficients.find(beta);
  return it == coefficients.end() ? 0.0 : it->second;
}

double ChaosExpansion::l2_norm() const {
  double s = 0.0;
  for (const auto& [beta, c] : coefficients) s += c * c;
  return std::sqrt(s);
}

ChaosExpansion& ChaosExpansion::operator*=(double s) {
  for (auto& [beta, c] : coefficients) c *= s;
  return *this;
}

ChaosExpansion ChaosExpansion::operator-(const ChaosExpansion& o) const {
  ChaosExpansion out = *this;
  for (const auto& [beta, c] : o.coefficients) out.add(beta, -c);
  return out;
}

void ChaosExpansion::prune(double eps) {
  for (auto it = coefficients.begin(); it != coefficients.end();) {
    if (std::abs(it->second) <= eps)
      it = coefficients.erase(it);
    else
      ++it;
  }
  max_degree = 0;
  for (const auto& [beta, c] : coefficients) max_degree = std::max(max_degree, beta.order());
}

double GridFunction::integral_gamma() const {
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += weights[i] * values[i];
  return s;
}

double GridFunction::l1_gamma() const {
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += weights[i] * std::abs(values[i]);
  return s;
}

double GridFunction::l2_gamma() const {
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += weights[i] * values[i] * values[i];
  return std::sqrt(s);
}

GridFunction tensor_grid_function(int dim, int order) {
  TensorGrid tg = gamma_tensor_grid(dim, order);
  GridFunction g;
  g.dimension = dim;
  g.points = std::move(tg.points);
  g.weights = std::move(tg.weights);
  g.values.assign(g.weights.size(), 0.0);
  g.rule_order = order;
  return g;
}

ChaosExpansion analyze(const GridFunction& f, int max_degree) {
  if (!f.has_rule() || f.rule_order == 0)
    throw std::domain_error("analyze: grid has no attached quadrature rule");
  if (f.rule_order < max_degree + 1)
    throw std::domain_error("analyze: quadrature order must be at least max_degree + 1");
  return analyze_weighted(f, max_degree);
}

ChaosExpansion analyze_weighted(const GridFunction& f, int max_degree) {
  if (f.weights.empty()) throw std::domain_error("analyze_weighted: grid has no weights");
  ChaosExpansion c;
  c.dimension = f.dimension;
  c.max_degree = max_degree;

  std::vector<std::vector<double>> axis(f.dimension);
  std::vector<MultiIndex> betas;
  for_each_index(f.dimension, max_degree, [&](const MultiIndex& b) { betas.push_back(b); });
  std::vector<double> acc(betas.size(), 0.0);

  for (std::size_t i = 0; i < f.count(); ++i) {
    auto x = f.point(i);
    for (int d = 0; d < f.dimension; ++d) hermite_axis_values(max_degree, x[d], axis[d]);
    double wv = f.weights[i] * f.values[i];
    for (std::size_t bi = 0; bi < betas.size(); ++bi) {
      double h = 1.0;
      for (int d = 0; d < f.dimension; ++d) h *= axis[d][betas[bi][d]];
      acc[bi] += wv * h;
    }
  }
  for (std::size_t bi = 0; bi < betas.size(); ++bi)
    if (acc[bi] != 0.0) c.coefficients[betas[bi]] = acc[bi];
  return c;
}

double eval_expansion(const ChaosExpansion& c, std::span<const double> x) {
  if (static_cast<int>(x.size()) != c.dimension)
    throw std::invalid_argument("eval_expansion: dimension mismatch");
  thread_local std::vector<std::vector<double>> axis;
  axis.resize(c.dimension);
  for (int d = 0; d < c.dimension; ++d) hermite_axis_values(c.max_degree, x[d], axis[d]);
  double s = 0.0;
  for (const auto& [beta, coef] : c.coefficients) {
    double h = 1.0;
    for (int d = 0; d < c.dimension; ++d) h *= axis[d][beta[d]];
    s += coef * h;
  }
  return s;
}

GridFunction synthesize(const ChaosExpansion& c, const std::vector<double>& points_flat) {
  GridFunction g;
  g.dimension = c.dimension;
  g.points = points_flat;
  std::size_t count = points_flat.size() / c.dimension;
  g.values.resize(count);
  for (std::size_t i = 0; i < count; ++i) g.values[i] = eval_expansion(c, g.point(i));
  return g;
}

GridFunction synthesize_on(const ChaosExpansion& c, const GridFunction& grid) {
  GridFunction g = grid;
  for (std::size_t i = 0; i < g.count(); ++i) g.values[i] = eval_expansion(c, g.point(i));
  return g;
}

RealFunction expansion_function(const ChaosExpansion& c) {
  return [c](std::span<const double> x) { return eval_expansion(c, x); };
}

ChaosExpansion apply_derivative(const ChaosExpansion& c, int axis) {
  if (axis < 0 || axis >= c.dimension) throw std::invalid_argument("apply_derivative: bad axis");
  ChaosExpansion out;
  out.dimension = c.dimension;
  for (const auto& [beta, coef] : c.coefficients) {
    if (beta[axis] == 0) continue;
    out.add(beta.lowered(axis), std::sqrt(2.0 * beta[axis]) * coef);
  }
  return out;
}

ChaosExpansion apply_adjoint_derivative(const ChaosExpansion& c, int axis) {
  if (axis < 0 || axis >= c.dimension) throw std::invalid_argument("apply_adjoint_derivative: bad axis");
  ChaosExpansion out;
  out.dimension = c.dimension;
  for (const auto& [beta, coef] : c.coefficients)
    out.add(beta.raised(axis), std::sqrt(2.0 * (beta[axis] + 1)) * coef);
  return out;
}

ChaosExpansion apply_order_multiplier(const ChaosExpansion& c, const std::function<double(int)>& phi) {
  ChaosExpansion out;
  out.dimension = c.dimension;
  out.max_degree = c.max_degree;
  for (const auto& [beta, coef] : c.coefficients) {
    double v = phi(beta.order()) * coef;
    if (v != 0.0) out.coefficients[beta] = v;
  }
  return out;
}

ChaosExpansion random_expansion(int dim, int degree, std::uint64_t seed) {
  Rng rng(seed);
  ChaosExpansion c;
  c.dimension = dim;
  c.max_degree = degree;
  for_each_index(dim, degree, [&](const MultiIndex& b) {
    c.coefficients[b] = rng.uniform(-1.0, 1.0);
  });
  return c;
}

}  // namespace gh
