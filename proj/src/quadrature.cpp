#include "gausshardy/quadrature.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace gh {

namespace {

// Nodes are the eigenvalues of the Jacobi matrix of the three-term
// recurrence; weights are mu0 times the squared first eigenvector entries.
QuadratureRule golub_welsch(const std::vector<double>& offdiag, double mu0) {
  int n = static_cast<int>(offdiag.size()) + 1;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    J(i, i + 1) = offdiag[i];
    J(i + 1, i) = offdiag[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  QuadratureRule rule;
  rule.order_per_axis = n;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = es.eigenvalues()(i);
    double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v0 * v0;
  }
  return rule;
}

void symmetrize(QuadratureRule& rule) {
  int n = rule.order_per_axis;
  for (int i = 0; i < n / 2; ++i) {
    int j = n - 1 - i;
    double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
    rule.nodes[i] = -x;
    rule.nodes[j] = x;
    double w = 0.5 * (rule.weights[i] + rule.weights[j]);
    rule.weights[i] = w;
    rule.weights[j] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
}

}  // namespace

const QuadratureRule& gauss_hermite_rule(int order) {
  if (order < 1 || order > 512) throw std::invalid_argument("gauss_hermite_rule: order out of range");
  static std::map<int, QuadratureRule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;
  // monic Hermite recurrence: b_k = k/2, mu0 = sqrt(pi)
  std::vector<double> off(order - 1);
  for (int k = 1; k < order; ++k) off[k - 1] = std::sqrt(k / 2.0);
  QuadratureRule rule = golub_welsch(off, std::sqrt(M_PI));
  symmetrize(rule);
  return cache.emplace(order, std::move(rule)).first->second;
}

const QuadratureRule& gauss_legendre_rule(int order) {
  if (order < 1 || order > 512) throw std::invalid_argument("gauss_legendre_rule: order out of range");
  static std::map<int, QuadratureRule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;
  // monic Legendre recurrence: b_k^2 = k^2/(4k^2-1), mu0 = 2
  std::vector<double> off(order - 1);
  for (int k = 1; k < order; ++k) off[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
  QuadratureRule rule = golub_welsch(off, 2.0);
  symmetrize(rule);
  return cache.emplace(order, std::move(rule)).first->second;
}

QuadratureRule gauss_legendre_on(double a, double b, int order) {
  const QuadratureRule& base = gauss_legendre_rule(order);
  QuadratureRule out;
  out.order_per_axis = order;
  out.nodes.resize(order);
  out.weights.resize(order);
  double mid = 0.5 * (a + b);
  double half = 0.5 * (b - a);
  for (int i = 0; i < order; ++i) {
    out.nodes[i] = mid + half * base.nodes[i];
    out.weights[i] = half * base.weights[i];
  }
  return out;
}

PanelRule log_panels(double lo, double hi, int points_per_decade, int points_per_panel) {
  if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("log_panels: need 0 < lo < hi");
  double decades = std::log10(hi / lo);
  int panels = std::max(1, static_cast<int>(std::ceil(decades * points_per_decade / points_per_panel)));
  PanelRule out;
  double step = std::log(hi / lo) / panels;
  for (int p = 0; p < panels; ++p) {
    double a = lo * std::exp(step * p);
    double b = lo * std::exp(step * (p + 1));
    QuadratureRule gl = gauss_legendre_on(a, b, points_per_panel);
    out.t.insert(out.t.end(), gl.nodes.begin(), gl.nodes.end());
    out.w.insert(out.w.end(), gl.weights.begin(), gl.weights.end());
  }
  return out;
}

TensorGrid gamma_tensor_grid(int dim, int order) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("gamma_tensor_grid: dim must be 1..3");
  const QuadratureRule& rule = gauss_hermite_rule(order);
  TensorGrid grid;
  grid.dim = dim;
  grid.order = order;
  std::size_t count = 1;
  for (int d = 0; d < dim; ++d) count *= order;
  grid.points.resize(count * dim);
  grid.weights.resize(count);
  double norm = std::pow(M_PI, -0.5 * dim);
  std::vector<int> idx(dim, 0);
  for (std::size_t i = 0; i < count; ++i) {
    double w = norm;
    for (int d = 0; d < dim; ++d) {
      grid.points[i * dim + d] = rule.nodes[idx[d]];
      w *= rule.weights[idx[d]];
    }
    grid.weights[i] = w;
    for (int d = dim - 1; d >= 0; --d) {
      if (++idx[d] < order) break;
      idx[d] = 0;
    }
  }
  return grid;
}

// SignedLog of int_p^q e^{-z^2} g(z) dz for 0 <= p < q. Beyond z = 2 the
// exponent substitution v = z^2 - p^2 resolves the e-folding scale at any
// distance; e^{-v} is truncated at v = 46.
static SignedLog half_axis_integral(double p, double q, const std::function<double(double)>& g) {
  SignedLog total = SignedLog::zero();
  double near_hi = std::min(q, 2.0);
  if (p < near_hi) {
    QuadratureRule gl = gauss_legendre_on(p, near_hi, 24);
    for (int i = 0; i < 24; ++i) {
      double z = gl.nodes[i];
      total += SignedLog::of(gl.weights[i] * g(z)).scaled_log(-z * z);
    }
  }
  double pp = std::max(p, near_hi);
  if (q > pp) {
    double V = std::min(q * q - pp * pp, 46.0);
    const double edges[6] = {0.0, 2.0, 6.0, 14.0, 30.0, 46.0};
    for (int e = 0; e + 1 < 6 && V > 0.0; ++e) {
      double lo = edges[e], hi = std::min(edges[e + 1], V);
      if (hi <= lo) break;
      QuadratureRule gl = gauss_legendre_on(lo, hi, 12);
      for (int i = 0; i < 12; ++i) {
        double v = gl.nodes[i];
        double z = std::sqrt(pp * pp + v);
        total += SignedLog::of(gl.weights[i] * g(z) / (2.0 * z)).scaled_log(-pp * pp - v);
      }
    }
  }
  return total;
}

static SignedLog window_integral_1d_any(double z1, double z2, const std::function<double(double)>& g) {
  SignedLog total = SignedLog::zero();
  if (z2 > 0.0) total += half_axis_integral(std::max(z1, 0.0), z2, g);
  if (z1 < 0.0)
    total += half_axis_integral(std::max(-z2, 0.0), -z1, [&](double z) { return g(-z); });
  return total;
}

SignedLog gaussian_window_integral(std::span<const double> zc, double R,
                                   const std::function<double(std::span<const double>)>& g) {
  int dim = static_cast<int>(zc.size());
  if (dim == 1) {
    return window_integral_1d_any(zc[0] - R, zc[0] + R, [&](double z) {
      double zz[1] = {z};
      return g(std::span<const double>(zz, 1));
    });
  }
  // rotate so the center sits on the first axis
  double c = norm2(zc);
  double e1[2] = {1.0, 0.0}, e2[2] = {0.0, 1.0};
  if (c > 1e-14) {
    e1[0] = zc[0] / c;
    e1[1] = zc[1] / c;
    e2[0] = -e1[1];
    e2[1] = e1[0];
  }
  double zb_cap = std::min(R, 7.5);
  QuadratureRule gl = gauss_legendre_on(-zb_cap, zb_cap, 32);
  SignedLog total = SignedLog::zero();
  for (int i = 0; i < 32; ++i) {
    double zb = gl.nodes[i];
    double w2 = R * R - zb * zb;
    if (w2 <= 0.0) continue;
    double w = std::sqrt(w2);
    SignedLog line = window_integral_1d_any(c - w, c + w, [&](double za) {
      double zz[2] = {za * e1[0] + zb * e2[0], za * e1[1] + zb * e2[1]};
      return g(std::span<const double>(zz, 2));
    });
    total += line.scaled_log(-zb * zb) * gl.weights[i];
  }
  return total;
}


}  // namespace gh
